"""Numerical laboratory for radial harmonic-map profiles between punctured
rotationally symmetric model spaces: equation forms, a self-contained
adaptive integrator with events, shooting sweeps, and hypothesis checkers.
"""

from .analysis import (
    AdjudicationResult,
    ConditionReport,
    GridSpec,
    LemmaReport,
    MonotonicityReport,
    WBoundReport,
    adjudicate_sign,
    check_conditions,
    condition3_threshold,
    lemma_quantity_monitor,
    wbound_monitor,
    z_monotonicity_monitor,
)
from .equations import (
    AbelState,
    DirectState,
    SignVariant,
    WState,
    abel_rhs,
    direct_rhs,
    residual_abel,
    residual_direct,
    transform_direct_to_abel,
    w_rhs,
    z_to_w,
)
from .errors import (
    AdjudicationInconclusiveError,
    ConfigError,
    MonotonicityError,
    SeriesStartError,
    SweepError,
)
from .integrate import (
    IntegrationConfig,
    fixed_step_solve,
    integrate_abel,
    integrate_direct,
    series_start,
)
from .profiles import (
    MetricProfile,
    ModelPair,
    eval_gg,
    eval_gg_prime,
    make_builtin,
)
from .sweep import (
    CGrid,
    Regime,
    SweepReport,
    SweepRow,
    SweepSpec,
    bisect_boundary,
    run_sweep,
)
from .trajectory import AbelTrajectory, Trajectory, Verdict, VerdictTag

__version__ = "0.1.0"
