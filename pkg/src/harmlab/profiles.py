"""Warped-metric profiles g(r) for rotationally symmetric target spaces.

A target metric G = g(r)^2 dtheta^2 + dr^2 is represented by its profile
function g together with optional closed forms for g', g*g' and (g*g')'.
The product g*g' drives every equation in the radial reduction, so it gets
first-class treatment here, with finite-difference fallbacks when a closed
form is missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

__all__ = [
    "MetricProfile",
    "ModelPair",
    "make_builtin",
    "eval_gg",
    "eval_gg_prime",
    "fd_step",
]

# Probe range used when validating custom polynomial profiles.
POLY_PROBE_MAX = 50.0
_POLY_PROBE_COUNT = 512


@dataclass(frozen=True)
class MetricProfile:
    """Profile function g(r) >= 0 of a rotationally symmetric metric.

    ``family_spec`` records how a built-in profile was constructed so that
    it can be rebuilt in a worker process; custom profiles may leave it None.
    """

    name: str
    g: Callable[[float], float]
    g_prime: Optional[Callable[[float], float]] = None
    gg: Optional[Callable[[float], float]] = None
    gg_prime: Optional[Callable[[float], float]] = None
    family_spec: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class ModelPair:
    """Dimension n plus the target profile; the source is always g(r) = r."""

    n: int
    target: MetricProfile

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"dimension n must be an integer >= 2, got {self.n!r}")


def fd_step(r: float) -> float:
    """Finite-difference step balancing truncation and rounding over scales."""
    return max(1e-5, 1e-8 * r)


def _central_diff(f: Callable[[float], float], r: float, h: float) -> float:
    """Second-order derivative estimate, one-sided where r - h would be < 0."""
    if r - h < 0.0:
        return (-3.0 * f(r) + 4.0 * f(r + h) - f(r + 2.0 * h)) / (2.0 * h)
    return (f(r + h) - f(r - h)) / (2.0 * h)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------

def _euclidean() -> MetricProfile:
    return MetricProfile(
        name="euclidean",
        g=lambda r: r,
        g_prime=lambda r: 1.0,
        gg=lambda r: r,
        gg_prime=lambda r: 1.0,
        family_spec=("euclidean",),
    )


def _hyperbolic() -> MetricProfile:
    return MetricProfile(
        name="hyperbolic",
        g=math.sinh,
        g_prime=math.cosh,
        gg=lambda r: math.sinh(r) * math.cosh(r),
        gg_prime=lambda r: math.cosh(2.0 * r),
        family_spec=("hyperbolic",),
    )


def _scaled_hyperbolic(a: float) -> MetricProfile:
    if not (a > 0):
        raise ValueError(f"scaled_hyperbolic parameter a must be > 0, got {a}")
    return MetricProfile(
        name=f"scaled_hyperbolic(a={a:g})",
        g=lambda r: math.sinh(a * r) / a,
        g_prime=lambda r: math.cosh(a * r),
        gg=lambda r: math.sinh(2.0 * a * r) / (2.0 * a),
        gg_prime=lambda r: math.cosh(2.0 * a * r),
        family_spec=("scaled_hyperbolic", a),
    )


def _power(k: float) -> MetricProfile:
    if not (k > 0):
        raise ValueError(f"power parameter k must be > 0, got {k}")
    return MetricProfile(
        name=f"power(k={k:g})",
        g=lambda r: r ** k,
        g_prime=lambda r: k * r ** (k - 1.0) if r > 0 else (1.0 if k == 1.0 else (0.0 if k > 1.0 else math.inf)),
        gg=lambda r: k * r ** (2.0 * k - 1.0) if r > 0 else (k if k == 0.5 else (0.0 if k > 0.5 else math.inf)),
        gg_prime=lambda r: k * (2.0 * k - 1.0) * r ** (2.0 * k - 2.0) if r > 0 else (k * (2.0 * k - 1.0) if k == 1.0 else (0.0 if k > 1.0 else math.inf)),
        family_spec=("power", k),
    )


def _polyval(coeffs: Tuple[float, ...], r: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def _polyder(coeffs: Tuple[float, ...]) -> Tuple[float, ...]:
    return tuple(i * c for i, c in enumerate(coeffs))[1:] or (0.0,)


def _polynomial(coefficients: Sequence[float]) -> MetricProfile:
    coeffs = tuple(float(c) for c in coefficients)
    if not coeffs:
        raise ValueError("polynomial profile needs at least one coefficient")
    probe = [POLY_PROBE_MAX * i / (_POLY_PROBE_COUNT - 1) for i in range(_POLY_PROBE_COUNT)]
    if any(_polyval(coeffs, r) < 0.0 for r in probe):
        raise ValueError(
            f"polynomial profile must be nonnegative on [0, {POLY_PROBE_MAX:g}]"
        )
    d1 = _polyder(coeffs)
    d2 = _polyder(d1)
    return MetricProfile(
        name="polynomial",
        g=lambda r: _polyval(coeffs, r),
        g_prime=lambda r: _polyval(d1, r),
        gg=lambda r: _polyval(coeffs, r) * _polyval(d1, r),
        gg_prime=lambda r: _polyval(d1, r) ** 2 + _polyval(coeffs, r) * _polyval(d2, r),
        family_spec=("polynomial", coeffs),
    )


_FAMILIES = {
    "euclidean": (0, _euclidean),
    "hyperbolic": (0, _hyperbolic),
    "scaled_hyperbolic": (1, _scaled_hyperbolic),
    "power": (1, _power),
}


def make_builtin(family: str, params: Sequence[float] = (), coefficients: Sequence[float] = ()) -> MetricProfile:
    """Construct a built-in profile.

    ``family`` is one of euclidean, hyperbolic, scaled_hyperbolic, power,
    polynomial.  Scalar family parameters travel in ``params``; polynomial
    coefficients (constant term first) in ``coefficients``.
    """
    if family == "polynomial":
        if params:
            raise ValueError("polynomial profile takes coefficients, not params")
        return _polynomial(coefficients)
    try:
        nparams, ctor = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown profile family {family!r}") from None
    if coefficients:
        raise ValueError(f"family {family!r} does not take coefficients")
    if len(params) != nparams:
        raise ValueError(f"family {family!r} takes {nparams} parameter(s), got {len(params)}")
    return ctor(*[float(p) for p in params])


def rebuild(family_spec: tuple) -> MetricProfile:
    """Reconstruct a built-in profile from its pickled family spec."""
    family = family_spec[0]
    if family == "polynomial":
        return make_builtin(family, coefficients=family_spec[1])
    return make_builtin(family, params=family_spec[1:])


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

def eval_gg(p: MetricProfile, r: float) -> float:
    """g(r) * g'(r), preferring closed forms over finite differences."""
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    if p.gg is not None:
        return p.gg(r)
    if p.g_prime is not None:
        return p.g(r) * p.g_prime(r)
    return p.g(r) * _central_diff(p.g, r, fd_step(r))


def eval_gg_prime(p: MetricProfile, r: float) -> float:
    """(g(r) * g'(r))', closed form if available, else differentiate eval_gg."""
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    if p.gg_prime is not None:
        return p.gg_prime(r)
    return _central_diff(lambda s: eval_gg(p, s), r, fd_step(r))
