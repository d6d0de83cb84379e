"""Trajectory containers and verdict taxonomy for integrated solutions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

__all__ = ["VerdictTag", "Verdict", "Trajectory", "AbelTrajectory"]


class VerdictTag(str, enum.Enum):
    """Classified outcome of a shooting run."""

    DIFFEO_CANDIDATE = "diffeo_candidate"
    DERIVATIVE_VANISHED = "derivative_vanished"
    FINITE_BLOWUP = "finite_blowup"
    DOMAIN_EXHAUSTED = "domain_exhausted"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class Verdict:
    tag: VerdictTag
    r_event: Optional[float] = None
    detail: str = ""


@dataclass
class Trajectory:
    """Sampled numerical solution (r, y, y') of the radial second-order ODE.

    ``r`` is strictly increasing for forward runs and strictly decreasing for
    backward runs.  ``segments`` holds per-step dense-output coefficients
    (r0, h, state0, Q) allowing the solution to be resampled anywhere inside
    the integrated span.
    """

    r: np.ndarray
    y: np.ndarray
    yp: np.ndarray
    verdict: Verdict
    steps: int
    rejected: int
    segments: List[Tuple[float, float, tuple, np.ndarray]] = field(default_factory=list, repr=False)

    @property
    def final_r(self) -> float:
        return float(self.r[-1])

    def sample_at(self, r_points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate the dense output at the given radii (must lie in the span)."""
        if not self.segments:
            raise ValueError("trajectory carries no dense-output segments")
        starts = np.array([s[0] for s in self.segments])
        forward = self.r[-1] >= self.r[0]
        r_points = np.asarray(r_points, dtype=float)
        lo, hi = (self.r[0], self.r[-1]) if forward else (self.r[-1], self.r[0])
        if np.any(r_points < lo - 1e-12 * max(1.0, abs(lo))) or np.any(
            r_points > hi + 1e-12 * max(1.0, abs(hi))
        ):
            raise ValueError("sample point outside the integrated span")
        if forward:
            idx = np.searchsorted(starts, r_points, side="right") - 1
        else:
            idx = np.searchsorted(-starts, -r_points, side="right") - 1
        idx = np.clip(idx, 0, len(self.segments) - 1)
        ys = np.empty_like(r_points)
        yps = np.empty_like(r_points)
        for out_i, (ri, si) in enumerate(zip(r_points, idx)):
            r0, h, u0, q = self.segments[si]
            theta = (ri - r0) / h
            # clamp tiny excursions from rounding at segment joints
            theta = min(max(theta, 0.0), 1.0)
            pvec = np.array([theta, theta**2, theta**3, theta**4])
            vals = np.asarray(u0) + h * (q @ pvec)
            ys[out_i] = vals[0]
            yps[out_i] = vals[1]
        return ys, yps


@dataclass
class AbelTrajectory:
    """Sampled solution z(y) of the first-order transformed equation.

    ``variant`` tags which sign variant produced it when it came from direct
    integration of the z-equation; transforms of direct trajectories leave it
    None (the data itself is variant-free).
    """

    y: np.ndarray
    z: np.ndarray
    variant: Optional[str] = None
    verdict: Optional[Verdict] = None
    steps: int = 0
    rejected: int = 0
