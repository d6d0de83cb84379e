"""Hypothesis checkers, trajectory invariant monitors, and the sign oracle.

The nonexistence theorem asks three things of the target profile:

    (1) g(0) g'(0) >= 0,
    (2) (g g')'(r) >= 0 for all r >= 0,
    (3) sup_{r>0} g(r) g'(r) / r  >  (n-2)^2 / (n-1).

Condition (2) is verified on a finite grid with an explicit tolerance and
reported as "verified on grid", never proved; condition (3) uses a grid sup
estimate plus a boundary-divergence flag.  The monitors evaluate, along
sampled z(y) trajectories, the inequalities that any admissible solution
would have to obey; a violation is evidence that the sampled trajectory is
not admissible, which for the theorem's profiles is exactly the expected
desk-scale outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import AdjudicationInconclusiveError, SeriesStartError
from .equations import SignVariant, residual_abel
from .integrate import IntegrationConfig, integrate_direct, series_start
from .profiles import MetricProfile, ModelPair, eval_gg, eval_gg_prime, make_builtin
from .trajectory import AbelTrajectory, Trajectory

__all__ = [
    "GridSpec",
    "ConditionReport",
    "check_conditions",
    "condition3_threshold",
    "lemma_quantity_monitor",
    "z_monotonicity_monitor",
    "wbound_monitor",
    "adjudicate_sign",
    "LemmaReport",
    "MonotonicityReport",
    "WBoundReport",
    "AdjudicationResult",
]

C2_TOL = -1e-9        # slack for grid-verified nonnegativity of (g g')'
C3_STRICT_MARGIN = 1e-12  # sup must beat the threshold by this margin to count


@dataclass(frozen=True)
class GridSpec:
    r_min: float = 1e-4
    r_max: float = 50.0
    count: int = 2000

    def __post_init__(self):
        if not (0.0 < self.r_min < self.r_max and self.count >= 2):
            raise ValueError(f"invalid grid ({self.r_min}, {self.r_max}, {self.count})")

    def values(self) -> np.ndarray:
        return np.logspace(math.log10(self.r_min), math.log10(self.r_max), self.count)


def condition3_threshold(n: int) -> float:
    """(n-2)^2 / (n-1): 0, 1/2, 4/3, 9/4 for n = 2, 3, 4, 5."""
    return (n - 2) ** 2 / (n - 1)


@dataclass
class ConditionReport:
    c1_value: float
    c1_pass: bool
    c2_min: float
    c2_pass: bool
    c3_sup: float
    c3_threshold: float
    c3_pass: bool
    c3_margin: float
    c3_sup_at_boundary: bool
    overall: bool
    grid: Tuple[float, float, int]
    remark_mode: bool = False
    gg_positive_min: Optional[float] = None
    gg_positive_pass: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)


def check_conditions(pair: ModelPair, grid: GridSpec = GridSpec(), remark_mode: bool = False) -> ConditionReport:
    """Evaluate the theorem's profile hypotheses on a log-spaced grid.

    ``remark_mode`` swaps condition (2) for strict positivity of g g' on the
    grid, the combination used by the homeomorphism remark.
    """
    p = pair.target
    rs = grid.values()
    c1_value = eval_gg(p, 0.0)
    c1_pass = c1_value >= C2_TOL

    gg_prime_vals = np.array([eval_gg_prime(p, float(r)) for r in rs])
    c2_min = float(np.min(gg_prime_vals))
    c2_pass = c2_min >= C2_TOL

    gg_vals = np.array([eval_gg(p, float(r)) for r in rs])
    ratio = gg_vals / rs
    sup_idx = int(np.argmax(ratio))
    c3_sup = float(ratio[sup_idx])
    threshold = condition3_threshold(pair.n)
    c3_margin = c3_sup - threshold
    c3_pass = c3_sup > threshold + C3_STRICT_MARGIN
    at_boundary = sup_idx in (0, grid.count - 1)

    gg_positive_min = None
    gg_positive_pass = None
    if remark_mode:
        gg_positive_min = float(np.min(gg_vals))
        gg_positive_pass = gg_positive_min > 0.0
        overall = c1_pass and c3_pass and gg_positive_pass
    else:
        overall = c1_pass and c2_pass and c3_pass

    return ConditionReport(
        c1_value=float(c1_value), c1_pass=bool(c1_pass),
        c2_min=c2_min, c2_pass=bool(c2_pass),
        c3_sup=c3_sup, c3_threshold=threshold, c3_pass=bool(c3_pass),
        c3_margin=float(c3_margin), c3_sup_at_boundary=bool(at_boundary),
        overall=bool(overall),
        grid=(grid.r_min, grid.r_max, grid.count),
        remark_mode=remark_mode,
        gg_positive_min=gg_positive_min, gg_positive_pass=gg_positive_pass,
    )


# ---------------------------------------------------------------------------
# Trajectory invariant monitors
# ---------------------------------------------------------------------------

LEMMA_TOL = -1e-9
MONO_SLACK = 1e-12


@dataclass
class LemmaReport:
    """Minimum of (n-2) + (n-1) z g(y) g'(y) over the sampled trajectory."""

    min_value: float
    min_y: float
    first_violation_y: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def lemma_quantity_monitor(n: int, p: MetricProfile, a: AbelTrajectory) -> LemmaReport:
    if a.y.size == 0:
        raise ValueError("empty trajectory")
    gg = np.array([eval_gg(p, float(v)) for v in a.y])
    q = (n - 2) + (n - 1) * a.z * gg
    i = int(np.argmin(q))
    viol = np.nonzero(q < LEMMA_TOL)[0]
    return LemmaReport(
        min_value=float(q[i]),
        min_y=float(a.y[i]),
        first_violation_y=float(a.y[viol[0]]) if viol.size else None,
        passed=bool(q[i] >= LEMMA_TOL),
    )


@dataclass
class MonotonicityReport:
    """Checks z nondecreasing in y and divergence toward -inf at small y."""

    z_monotone_nondecreasing: bool
    first_violation_y: Optional[float]
    z_at_min_y: float
    heading_to_minus_infinity: bool

    def to_dict(self) -> dict:
        return asdict(self)


def z_monotonicity_monitor(a: AbelTrajectory) -> MonotonicityReport:
    y = a.y
    z = a.z
    if y.size < 2:
        raise ValueError("need at least 2 samples")
    order = np.argsort(y, kind="stable")
    y = y[order]
    z = z[order]
    slack = MONO_SLACK * np.maximum(1.0, np.abs(z[:-1]))
    bad = np.nonzero(np.diff(z) < -slack)[0]
    z0 = float(z[0])
    # divergence heuristic: |z| already huge at the smallest sampled y and
    # still growing by >= 10x over the last sampled decade of y
    heading = False
    if abs(z0) > 1e6 and z0 < 0.0:
        decade = y <= 10.0 * y[0]
        zd = z[decade]
        if zd.size >= 2 and abs(z0) >= 10.0 * abs(float(zd[-1])):
            heading = True
    return MonotonicityReport(
        z_monotone_nondecreasing=bool(bad.size == 0),
        first_violation_y=float(y[bad[0]]) if bad.size else None,
        z_at_min_y=z0,
        heading_to_minus_infinity=heading,
    )


@dataclass
class WBoundReport:
    """Max of sqrt(w) - (n-2) y over the samples; degenerate for n = 2."""

    max_excess: float
    passed: bool
    degenerate: bool

    def to_dict(self) -> dict:
        return asdict(self)


WBOUND_TOL = 1e-9


def wbound_monitor(n: int, y: Sequence[float], w: Sequence[float]) -> WBoundReport:
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("w must be nonnegative")
    excess = np.sqrt(w) - (n - 2) * y
    mx = float(np.max(excess))
    return WBoundReport(max_excess=mx, passed=bool(mx <= WBOUND_TOL), degenerate=(n == 2))


# ---------------------------------------------------------------------------
# Sign-variant adjudication
# ---------------------------------------------------------------------------

@dataclass
class AdjudicationResult:
    variant: SignVariant
    evidence: dict  # per-variant list of (grid_count, sup_residual)
    source: str     # which trajectory backed the decision

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "evidence": self.evidence,
            "source": self.source,
        }


def _monotone_window(t: Trajectory) -> Tuple[float, float]:
    """An interior resampling window of the trajectory, trimmed 2% per side."""
    r0, r1 = float(t.r[0]), float(t.r[-1])
    pad = 0.02 * (r1 - r0)
    return r0 + pad, r1 - pad


def _sup_residuals(n, p, t, counts):
    """Sup |residual| of both variants on nested uniform resamplings.

    The sup is taken over the coarsest grid's interior points, which all
    finer (nested, power-of-two refined) grids share, so refinement ratios
    are not polluted by the sup location drifting toward a boundary.
    """
    a, b = _monotone_window(t)
    base = min(counts)
    out = {v: [] for v in SignVariant}
    for count in counts:
        rr = np.linspace(a, b, count + 1)
        ys, yps = t.sample_at(rr)
        z = 1.0 / (yps * rr)
        order = np.argsort(ys, kind="stable")
        ys, z = ys[order], z[order]
        stride = (count // base)
        common = slice(stride, count, stride)  # interior points of the base grid
        for v in SignVariant:
            res = residual_abel(n, p, v, ys, z)
            full = np.empty(count + 1)
            full[0] = full[-1] = 0.0
            full[1:-1] = res
            out[v].append((count + 1, float(np.max(np.abs(full[common])))))
    return out


def adjudicate_sign(pair: ModelPair, cfg: Optional[IntegrationConfig] = None,
                    counts: Tuple[int, ...] = (1024, 2048, 4096)) -> AdjudicationResult:
    """Decide which sign variant of the z-equation matches the direct one.

    Integrates a strictly monotone direct trajectory for the pair, transforms
    it to z(y), and measures both variants' residuals under grid refinement.
    The variant whose sup-residual keeps shrinking wins; if the pair admits
    no regular series seed the euclidean identity trajectory stands in.
    """
    cfg = cfg or IntegrationConfig(r_start=0.1, r_end=10.0)
    source = f"{pair.target.name}, n={pair.n}, series c=1"
    try:
        init = series_start(pair.n, pair.target, 1.0, cfg.r_start)
        traj = integrate_direct(pair.n, pair.target, cfg, init, dense=True)
        p_used = pair.target
    except SeriesStartError:
        traj = None
        p_used = None
    if traj is None or traj.r.size < 16:
        eu = make_builtin("euclidean")
        init = series_start(pair.n, eu, 1.0, cfg.r_start)
        traj = integrate_direct(pair.n, eu, cfg, init, dense=True)
        p_used = eu
        source = f"euclidean fallback, n={pair.n}, series c=1"

    sups = _sup_residuals(pair.n, p_used, traj, counts)
    evidence = {v.value: sups[v] for v in SignVariant}

    shrinking = []
    for v in SignVariant:
        first = sups[v][0][1]
        last = sups[v][-1][1]
        # a variant qualifies if refinement cut its sup-residual substantially
        if last < 0.5 * first or last < 1e-12:
            shrinking.append(v)
    if len(shrinking) == 1:
        return AdjudicationResult(variant=shrinking[0], evidence=evidence, source=source)
    if len(shrinking) == 2:
        l0 = sups[SignVariant.AS_PRINTED][-1][1]
        l1 = sups[SignVariant.CORRECTED][-1][1]
        if l0 < 1e-2 * l1:
            return AdjudicationResult(variant=SignVariant.AS_PRINTED, evidence=evidence, source=source)
        if l1 < 1e-2 * l0:
            return AdjudicationResult(variant=SignVariant.CORRECTED, evidence=evidence, source=source)
    raise AdjudicationInconclusiveError(
        f"neither variant's residual vanishes cleanly under refinement: {evidence}"
    )
