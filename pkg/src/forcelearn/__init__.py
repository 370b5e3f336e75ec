"""Function-free logic programs, bottom clauses and forced-simulation learners."""

from .bottom import BottomClause, bottom_star, constrain, deepen, embed_subclause, enumerate_recursive_literals
from .database import Database, ExtendedInstance, lookup_mgs
from .errors import (
    BasecaseOracleError,
    BudgetExceeded,
    DeterminacyViolation,
    EmbeddingFailure,
    ForceLearnError,
    InvariantBreach,
    NoBaseClause,
    NonListFunctor,
    ParseError,
    PoolLabelMismatch,
    PredicateCollision,
    TeacherError,
)
from .flatten import TermExample, flatten
from .forcesim import SimOutcome, force_sim, force_sim2, force_sim_nr
from .interpreter import ProofBudget, covers, explain
from .learner import (
    LearnResult,
    NullListRule,
    force1,
    force1_nr,
    force2,
    force2_with_rules,
    s_set,
)
from .logic import Clause, Literal, Var, fact, is_subclause
from .modes import (
    Declaration,
    Mode,
    is_determinate_mode,
    literal_mode,
    satisfies_declaration,
    support_closure,
    variable_depths,
)
from .teacher import Counterexample, RemoteTeacher, TargetSpec, Teacher, TeacherPolicy
from .transform import Transformation, augment_equality, split_modes, unsplit_clause

__version__ = "0.1.0"
