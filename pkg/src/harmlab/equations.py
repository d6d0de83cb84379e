"""Every equation form of the radial reduction chain.

The second-order equation for the radial map y(r),

    y'' + (n-1) y'/r - (n-1) g(y) g'(y) / r^2 = 0,

is singular at r = 0.  Regarding r as a function of y, substituting
x = ln r and z = x'(y), the chain yields a first-order cubic (Abel-type)
equation in z.  Two candidate signs of the cubic term are in circulation
(see SignVariant); both are implemented and the residual evaluators below
let an oracle decide which one is consistent with the direct equation.
A reciprocal substitution Z = 1/z, w = Z^2 gives one more first-order form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import MonotonicityError
from .profiles import MetricProfile, eval_gg
from .trajectory import AbelTrajectory, Trajectory

__all__ = [
    "SignVariant",
    "DirectState",
    "AbelState",
    "WState",
    "direct_rhs",
    "abel_rhs",
    "w_rhs",
    "z_to_w",
    "residual_direct",
    "residual_abel",
    "transform_direct_to_abel",
]


class SignVariant(str, enum.Enum):
    """Sign of the cubic term in the z-equation.

    AS_PRINTED:  z' = (n-2) z^2 + (n-1) z^3 g(y)g'(y)
    CORRECTED:   z' = (n-2) z^2 - (n-1) z^3 g(y)g'(y)
    """

    AS_PRINTED = "as_printed"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class DirectState:
    r: float
    y: float
    yp: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"direct state requires r > 0 (singular at 0), got r={self.r}")


@dataclass(frozen=True)
class AbelState:
    y: float
    z: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise ValueError(f"abel state requires y > 0, got y={self.y}")


@dataclass(frozen=True)
class WState:
    y: float
    w: float

    def __post_init__(self):
        if self.w < 0.0:
            raise ValueError(f"w must be >= 0, got {self.w}")


def direct_rhs(n: int, p: MetricProfile, s: DirectState) -> Tuple[float, float]:
    """(dy/dr, dy'/dr) of the direct second-order equation."""
    gg = eval_gg(p, s.y)
    return s.yp, -(n - 1) * s.yp / s.r + (n - 1) * gg / (s.r * s.r)


def abel_rhs(n: int, p: MetricProfile, variant: SignVariant, a: AbelState) -> float:
    """dz/dy under the chosen sign variant."""
    gg = eval_gg(p, a.y)
    cubic = (n - 1) * a.z**3 * gg
    quad = (n - 2) * a.z**2
    if variant is SignVariant.AS_PRINTED:
        return quad + cubic
    return quad - cubic


def w_rhs(n: int, p: MetricProfile, ws: WState, printed: bool = True) -> float:
    """dw/dy of the reciprocal-square reduction.

    ``printed=True`` gives 2(n-2) sqrt(w) - 2(n-1) g g'; the alternative
    flips the sign of the metric term, mirroring the z-equation variants.
    """
    gg = eval_gg(p, ws.y)
    term = 2.0 * (n - 1) * gg
    base = 2.0 * (n - 2) * (ws.w ** 0.5)
    return base - term if printed else base + term


def z_to_w(a: AbelState) -> WState:
    if a.z == 0.0:
        raise ValueError("z = 0 has no reciprocal w-state")
    return WState(y=a.y, w=1.0 / (a.z * a.z))


def _gg_array(p: MetricProfile, y: np.ndarray) -> np.ndarray:
    return np.array([eval_gg(p, float(v)) for v in y])


def residual_direct(n: int, p: MetricProfile, r: np.ndarray, y: np.ndarray, yp: np.ndarray) -> np.ndarray:
    """LHS of the direct equation on interior samples.

    y'' comes from central differences of the stored y' samples, never from
    re-invoking the right-hand side, so a small residual is an independent
    certificate that the samples solve the equation.
    """
    r = np.asarray(r, dtype=float)
    y = np.asarray(y, dtype=float)
    yp = np.asarray(yp, dtype=float)
    if r.size < 3:
        raise ValueError("residual_direct needs at least 3 samples")
    ypp = np.gradient(yp, r)
    res = ypp + (n - 1) * yp / r - (n - 1) * _gg_array(p, y) / r**2
    return res[1:-1]


def residual_abel(n: int, p: MetricProfile, variant: SignVariant, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Residual of the chosen z-equation variant at interior samples."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if y.size < 3:
        raise ValueError("residual_abel needs at least 3 samples")
    if np.any(y <= 0.0):
        raise ValueError("residual_abel requires y > 0 at every sample")
    dz = np.gradient(z, y)
    gg = _gg_array(p, y)
    cubic = (n - 1) * z**3 * gg
    quad = (n - 2) * z**2
    rhs = quad + cubic if variant is SignVariant.AS_PRINTED else quad - cubic
    return (dz - rhs)[1:-1]


def transform_direct_to_abel(t: Trajectory) -> AbelTrajectory:
    """z(y) = r'(y)/r(y) = 1/(y'(r) r) along a strictly monotone trajectory."""
    if np.any(t.yp == 0.0):
        raise MonotonicityError("trajectory has a sample with y' = 0; y is not monotone")
    dy = np.diff(t.y)
    if not (np.all(dy > 0.0) or np.all(dy < 0.0)):
        raise MonotonicityError("y is not strictly monotone along the trajectory")
    z = 1.0 / (t.yp * t.r)
    order = np.argsort(t.y, kind="stable")
    return AbelTrajectory(y=t.y[order], z=z[order], variant=None)
