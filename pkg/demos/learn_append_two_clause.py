"""Learn the two-clause append program.

The base-case question is answered by a rule instead of the teacher:
an instance is a base case when its first argument is the empty list.
"""

from forcelearn.learner import NullListRule, force2_with_rules
from forcelearn.syntax import format_program
from forcelearn.teacher import Teacher
from forcelearn.worlds import append_world, pool_agrees

world = append_world(two_clause=True)
print(f"pool: {len(world.positives)} positive, {len(world.negatives)} negative instances")
res = force2_with_rules(1, world.dec, world.db, Teacher(world.spec()), [NullListRule((0,))])
print(res.summary())
print(format_program(res.hypothesis))
print("agrees with the pool:", pool_agrees(res.hypothesis, world))
