"""Forced simulation of the append candidate on append([1,2],[3],[1,2,3]).

Prints every trace step, so the literals deleted at each recursion level
can be followed by hand.
"""

from forcelearn.bottom import bottom_star
from forcelearn.forcesim import force_sim
from forcelearn.interpreter import ProofBudget
from forcelearn.logic import Literal, Var
from forcelearn.syntax import format_clause
from forcelearn.transform import augment_instance_equality
from forcelearn.worlds import APPEND_DEC, append_db, walkthrough_append_instance

inst = augment_instance_equality(walkthrough_append_instance())
db = append_db()
bottom = bottom_star(1, APPEND_DEC)
# append(Xs1,Ys,Zs1) expressed in bottom-clause variables
recursive = Literal("append", (Var("V1_2"), Var("X2"), Var("V1_6")))
start = bottom.with_literals([recursive])

print("instance:", inst.fact)
for f in sorted(inst.description, key=str):
    print("   ", f)
print("starting clause:")
print(format_clause(start, multiline=True))

out = force_sim(start, inst.fact, APPEND_DEC, inst.context(db), ProofBudget(10))
print()
for step in out.trace:
    gone = ", ".join(map(str, step.deleted_literals)) or "-"
    print(f"level {step.level} {step.goal} [{step.note}] deleted: {gone}")
print()
print("result:")
print(format_clause(out.clause, multiline=True))
