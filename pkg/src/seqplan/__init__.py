"""Sequential collision-free motion planning for k point robots in R^d
avoiding r >= 2 point obstacles."""

from .configuration import (
    Configuration,
    DimensionMismatchError,
    InvalidConfigurationError,
    ProblemSpec,
    StratumInfo,
    UnsupportedRegimeError,
    Verdict,
    project,
    random_configuration,
    stratum,
    validate_configuration,
)
from .deform import Homotopy, StratumError, concat_homotopy, desingularize, phi
from .planner import (
    InvalidWaypointError,
    PlanReport,
    PlanRequest,
    ValidationStats,
    plan,
    region_index,
    sample_path,
    validate_path,
)
from .sections import PiecewisePath, concat_paths, gamma, gamma_n, glue, glue_path

__version__ = "0.1.0"
