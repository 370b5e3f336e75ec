"""Proof effort with and without goal memoization on a doubly recursive clause.

The clause p(X) :- prev(X,Y), prev2(X,Z), p(Y), p(Z) behaves like the
Fibonacci recursion, so plain depth-bounded search revisits the same
subgoals exponentially often while the memoized prover expands each once.
"""

from forcelearn.interpreter import DEPTH_ONLY, VISITED_MEMO, ProofBudget, explain
from forcelearn.worlds import FIB_RECURSIVE, fib_db, fib_instance

TOP = 16
db = fib_db(TOP)
print(f"{'n':>3} {'memo nodes':>11} {'depth-only nodes':>17}")
for n in range(2, TOP + 1, 2):
    inst = fib_instance(n)
    memo = explain(FIB_RECURSIVE, db, inst, ProofBudget(n + 1, VISITED_MEMO))
    plain = explain(FIB_RECURSIVE, db, inst, ProofBudget(n + 1, DEPTH_ONLY))
    assert memo.proved and plain.proved
    print(f"{n:>3} {memo.nodes:>11} {plain.nodes:>17}")
