"""Build the family bottom clause, then learn "brother" from a teacher.

Run with ``python3 demos/family_bottom_and_learning.py``.
"""

from forcelearn.bottom import bottom_star
from forcelearn.learner import force1_nr
from forcelearn.syntax import format_clause
from forcelearn.teacher import Teacher
from forcelearn.worlds import family_world, pool_agrees

world = family_world()
bottom = bottom_star(1, world.dec)
print(f"bottom clause of depth 1: {len(bottom)} body literals")
print(format_clause(bottom.clause, multiline=True))

teacher = Teacher(world.spec())
res = force1_nr(1, world.dec, world.db, teacher)
print()
print(res.summary())
print("hypothesis:", format_clause(res.hypothesis))
print("agrees with the pool:", pool_agrees(res.hypothesis, world))
for n, cex in enumerate(res.counterexamples, 1):
    print(f"  counterexample {n}: {cex.sign} {cex.instance.fact}")
