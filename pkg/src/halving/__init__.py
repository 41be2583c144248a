"""Sequential halving and fixed-size-batch variants for best-arm identification."""

__version__ = "0.1.0"

from .algorithms import (
    BatchConfig,
    run_ash,
    run_bsh,
    run_jun16,
    run_sh,
    simple_regret,
)
from .core import ArmStats, Pull, RewardSource, RunTrace, select_candidate
from .errors import (
    AlphaOutOfRange,
    BudgetTooSmall,
    DegenerateFit,
    EmptyCandidateSet,
    HalvingError,
    IndexOutOfRange,
    InsufficientBatches,
    InvalidArmCount,
    InvalidRange,
    MatrixExhausted,
    ScheduleExhausted,
)
from .experiments import (
    EquivalenceReport,
    ProblemInstance,
    SlopeFit,
    SweepRecord,
    equivalence_sweep,
    fit_slope,
    make_instance,
    regret_sweep,
    slope_points,
)
from .schedule import (
    HalvingSchedule,
    RoundSpec,
    TargetPulls,
    advance_first_targets,
    breadth_first_targets,
    build_schedule,
    num_rounds,
)
from .theory import (
    ConditionReport,
    check_conditions,
    check_promotion_margin,
    check_promotion_safety,
    find_behavioral_divergence,
    find_tightness_counterexample,
)

__all__ = [
    "__version__",
    "ArmStats",
    "AlphaOutOfRange",
    "BatchConfig",
    "BudgetTooSmall",
    "ConditionReport",
    "DegenerateFit",
    "EmptyCandidateSet",
    "EquivalenceReport",
    "HalvingError",
    "HalvingSchedule",
    "IndexOutOfRange",
    "InsufficientBatches",
    "InvalidArmCount",
    "InvalidRange",
    "MatrixExhausted",
    "ProblemInstance",
    "Pull",
    "RewardSource",
    "RoundSpec",
    "RunTrace",
    "ScheduleExhausted",
    "SlopeFit",
    "SweepRecord",
    "TargetPulls",
    "advance_first_targets",
    "breadth_first_targets",
    "build_schedule",
    "check_conditions",
    "check_promotion_margin",
    "check_promotion_safety",
    "equivalence_sweep",
    "find_behavioral_divergence",
    "find_tightness_counterexample",
    "fit_slope",
    "make_instance",
    "num_rounds",
    "regret_sweep",
    "run_ash",
    "run_bsh",
    "run_jun16",
    "run_sh",
    "select_candidate",
    "simple_regret",
    "slope_points",
]
