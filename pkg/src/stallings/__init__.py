"""Stallings core graphs for subgroups of free groups."""

__version__ = "0.1.0"

from .words import (
    Word,
    WordSyntaxError,
    RankError,
    parse_word,
    free_reduce,
    iter_reduced_words,
    enumerate_words,
)
from .core import (
    CoreGraph,
    SchreierLocus,
    fold,
    balls_isomorphic,
    balls_isomorphic_between,
)
from .growth import (
    ConvergenceError,
    GrowthEstimate,
    KwonParkResult,
    coornaert_constant,
    cr_estimate_rhs,
    critical_exponent,
    cycle_counts,
    kwon_park,
)
from .gluing import (
    ConnectorDecomposition,
    NotAdmissibleError,
    connector_decompose,
    glue,
)
from .tower import (
    ConstructionError,
    ConstructionState,
    StageRecord,
    construct,
    construct_stage,
    has_finite_power_orbit,
    initial_state,
    verify_certificates,
)

__all__ = [
    "Word",
    "WordSyntaxError",
    "RankError",
    "parse_word",
    "free_reduce",
    "iter_reduced_words",
    "enumerate_words",
    "CoreGraph",
    "SchreierLocus",
    "fold",
    "balls_isomorphic",
    "balls_isomorphic_between",
    "ConvergenceError",
    "GrowthEstimate",
    "KwonParkResult",
    "coornaert_constant",
    "cr_estimate_rhs",
    "critical_exponent",
    "cycle_counts",
    "kwon_park",
    "ConnectorDecomposition",
    "NotAdmissibleError",
    "connector_decompose",
    "glue",
    "ConstructionError",
    "ConstructionState",
    "StageRecord",
    "construct",
    "construct_stage",
    "has_finite_power_orbit",
    "initial_state",
    "verify_certificates",
    "__version__",
]
