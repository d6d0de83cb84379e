"""Shooting-parameter sweeps over the two admissible boundary regimes.

A sweep probes, at desk scale, whether any shooting parameter c produces a
trajectory compatible with one of the boundary regimes: the origin-regular
regime (y(0) = 0, y increasing) seeded on the regular series branch and
integrated outward, or the infinity-decay regime (y -> 0 at large r,
y' < 0) seeded at r_end with the one-parameter ansatz y = c, y' = -c/r_end
and integrated backward.  A report is evidence, not proof: rows carry
verdicts and the summary flags `any_diffeo_candidate`, never `exists`.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import SweepError
from .integrate import IntegrationConfig, integrate_direct, series_start
from .profiles import ModelPair, rebuild
from .trajectory import Trajectory, VerdictTag

__all__ = ["Regime", "CGrid", "SweepSpec", "SweepRow", "SweepReport", "run_sweep", "bisect_boundary"]


class Regime(str, enum.Enum):
    ORIGIN_REGULAR = "origin_regular"
    INFINITY_DECAY = "infinity_decay"


@dataclass(frozen=True)
class CGrid:
    count: int
    c_min: float
    c_max: float

    def __post_init__(self):
        if not (self.c_min > 0.0 and self.c_max > self.c_min and self.count >= 2):
            raise ValueError(
                f"c grid needs c_min > 0, c_max > c_min, count >= 2; got ({self.count}, {self.c_min}, {self.c_max})"
            )

    def values(self) -> np.ndarray:
        return np.logspace(math.log10(self.c_min), math.log10(self.c_max), self.count)


@dataclass(frozen=True)
class SweepSpec:
    pair: ModelPair
    regime: Regime
    c_grid: CGrid
    cfg: IntegrationConfig


@dataclass(frozen=True)
class SweepRow:
    c: float
    verdict: VerdictTag
    r_event: Optional[float]
    final_y: float
    final_yp: float


@dataclass
class SweepReport:
    rows: List[SweepRow]
    summary: dict
    any_diffeo_candidate: bool
    trajectories: Optional[List[Trajectory]] = field(default=None, repr=False)


def _shoot_once(pair: ModelPair, regime: Regime, cfg: IntegrationConfig, c: float, dense: bool = False) -> Trajectory:
    if regime is Regime.ORIGIN_REGULAR:
        init = series_start(pair.n, pair.target, c, cfg.r_start)
        return integrate_direct(pair.n, pair.target, cfg, init, direction="forward", dense=dense)
    init = (c, -c / cfg.r_end)
    return integrate_direct(pair.n, pair.target, cfg, init, direction="backward", dense=dense)


def _row_from(c: float, t: Trajectory) -> SweepRow:
    return SweepRow(
        c=c,
        verdict=t.verdict.tag,
        r_event=t.verdict.r_event,
        final_y=float(t.y[-1]),
        final_yp=float(t.yp[-1]),
    )


def _worker(args) -> SweepRow:
    n, family_spec, regime, cfg, c = args
    pair = ModelPair(n=n, target=rebuild(family_spec))
    return _row_from(c, _shoot_once(pair, Regime(regime), cfg, c))


def run_sweep(spec: SweepSpec, keep_trajectories: bool = False, workers: int = 1) -> SweepReport:
    """Run every shot on the c grid and assemble the verdict table.

    Per-c jobs are independent; with ``workers > 1`` built-in profiles are
    farmed out to a process pool (rows are reassembled in c order, so the
    report never depends on execution order).
    """
    cs = spec.c_grid.values()
    if spec.regime is Regime.ORIGIN_REGULAR:
        try:
            series_start(spec.pair.n, spec.pair.target, float(cs[0]), spec.cfg.r_start)
        except Exception as exc:
            raise SweepError(f"series seeding failed for origin_regular sweep: {exc}") from exc

    trajectories: Optional[List[Trajectory]] = [] if keep_trajectories else None
    if workers > 1 and spec.pair.target.family_spec is not None and not keep_trajectories:
        jobs = [
            (spec.pair.n, spec.pair.target.family_spec, spec.regime.value, spec.cfg, float(c))
            for c in cs
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_worker, jobs))
    else:
        rows = []
        for c in cs:
            t = _shoot_once(spec.pair, spec.regime, spec.cfg, float(c), dense=keep_trajectories)
            rows.append(_row_from(float(c), t))
            if trajectories is not None:
                trajectories.append(t)

    counts = Counter(row.verdict.value for row in rows)
    summary = {tag.value: counts.get(tag.value, 0) for tag in VerdictTag}
    return SweepReport(
        rows=rows,
        summary=summary,
        any_diffeo_candidate=counts.get(VerdictTag.DIFFEO_CANDIDATE.value, 0) > 0,
        trajectories=trajectories,
    )


def bisect_boundary(spec: SweepSpec, lo: float, hi: float, rel_tol: float = 1e-10) -> Tuple[float, VerdictTag, VerdictTag]:
    """Locate a verdict transition between two shooting parameters.

    Returns (c*, verdict just below, verdict just above), with c* within
    ``rel_tol`` relative of a transition.  Both endpoints must classify
    differently.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    tag_lo = _shoot_once(spec.pair, spec.regime, spec.cfg, lo).verdict.tag
    tag_hi = _shoot_once(spec.pair, spec.regime, spec.cfg, hi).verdict.tag
    if tag_lo == tag_hi:
        raise ValueError(f"both endpoints classify as {tag_lo.value}; nothing to bisect")
    while hi - lo > rel_tol * hi:
        mid = math.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        tag_mid = _shoot_once(spec.pair, spec.regime, spec.cfg, mid).verdict.tag
        if tag_mid == tag_lo:
            lo = mid
        else:
            hi = mid
            tag_hi = tag_mid
    return math.sqrt(lo * hi), tag_lo, tag_hi
