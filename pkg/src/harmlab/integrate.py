"""Self-contained adaptive Runge-Kutta 5(4) integrator with events.

Uses the Dormand-Prince embedded pair (the ode45 coefficients) with a
quartic continuous extension for dense output.  Event localization runs
bisection on the dense output inside the step where a sign change was
detected.  The stepper is specialized here for the singular direct equation
(series seeding near r = 0, derivative-vanish / blow-up / puncture events)
and for the first-order transformed z-equation.

Non-finite right-hand sides never raise: the step is rejected and shrunk,
and hitting the step-size floor is reported as a StepUnderflow verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import SeriesStartError
from .profiles import MetricProfile, eval_gg
from .equations import SignVariant
from .trajectory import AbelTrajectory, Trajectory, Verdict, VerdictTag

__all__ = [
    "IntegrationConfig",
    "integrate_direct",
    "integrate_abel",
    "series_start",
    "fixed_step_solve",
]

# Dormand-Prince 5(4) tableau.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# Difference between the 5th- and the embedded 4th-order weights.
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# Quartic dense-output coefficients (rows follow the stages).
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_FLOOR_FRAC = 1e-14  # step-size floor as a fraction of the interval length


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    r_start: float = 0.01
    r_end: float = 50.0
    y_cap: float = 1e8
    yp_zero_tol: float = 1e-14

    def __post_init__(self):
        if not (0.0 < self.r_start < self.r_end):
            raise ValueError(f"need 0 < r_start < r_end, got [{self.r_start}, {self.r_end}]")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.y_cap <= 0.0:
            raise ValueError("y_cap must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


def _guarded(f):
    """Wrap an RHS so overflow and domain errors surface as None."""

    def g(t, u):
        try:
            out = f(t, u)
        except (OverflowError, ValueError, ZeroDivisionError):
            return None
        for v in out:
            if not math.isfinite(v):
                return None
        return out

    return g


def _try_step(f, t, u, h, rtol, atol):
    """One trial step.  Returns (u_new, err_norm, K) or None if a stage blew up."""
    k = [None] * 7
    k[0] = f(t, u)
    if k[0] is None:
        return None
    dim = len(u)
    for i in range(1, 7):
        a = _A[i]
        ui = tuple(
            u[m] + h * sum(a[j] * k[j][m] for j in range(i)) for m in range(dim)
        )
        k[i] = f(t + _C[i] * h, ui)
        if k[i] is None:
            return None
    u_new = tuple(u[m] + h * sum(_B[j] * k[j][m] for j in range(7)) for m in range(dim))
    for v in u_new:
        if not math.isfinite(v):
            return None
    acc = 0.0
    for m in range(dim):
        e = h * sum(_E[j] * k[j][m] for j in range(7))
        scale = atol + rtol * max(abs(u[m]), abs(u_new[m]))
        acc += (e / scale) ** 2
    return u_new, math.sqrt(acc / dim), k


def _dense_q(k, dim):
    """Dense-output matrix Q (dim x 4): u(theta) = u0 + h * Q @ [th, th^2, th^3, th^4]."""
    q = np.empty((dim, 4))
    for m in range(dim):
        for col in range(4):
            q[m, col] = sum(k[j][m] * _P[j][col] for j in range(7))
    return q


def _dense_eval(u0, h, q, theta):
    p1 = theta
    p2 = theta * theta
    p3 = p2 * theta
    p4 = p3 * theta
    return tuple(
        u0[m] + h * (q[m, 0] * p1 + q[m, 1] * p2 + q[m, 2] * p3 + q[m, 3] * p4)
        for m in range(len(u0))
    )


def _bisect_event(u0, h, q, comp, target, theta_tol=1e-14):
    """Locate theta in (0, 1] where component ``comp`` crosses ``target``.

    The crossing is bracketed between theta = 0 and the step endpoint; if the
    endpoint only touches the target within tolerance (no sign change) the
    endpoint itself is returned.
    """
    lo, hi = 0.0, 1.0
    f_lo = u0[comp] - target
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        f_mid = _dense_eval(u0, h, q, mid)[comp] - target
        if f_lo * f_mid <= 0.0:
            hi = mid
        else:
            lo = mid
            f_lo = f_mid
        if hi - lo < theta_tol:
            break
    theta = hi
    return theta, _dense_eval(u0, h, q, theta)


def _initial_step(f, t0, u0, rtol, atol, span):
    """Cheap variant of the classic starting-step heuristic."""
    f0 = f(t0, u0)
    if f0 is None:
        return 1e-6 * span
    dim = len(u0)
    scale = [atol + rtol * abs(v) for v in u0]
    d0 = math.sqrt(sum((u0[m] / scale[m]) ** 2 for m in range(dim)) / dim)
    d1 = math.sqrt(sum((f0[m] / scale[m]) ** 2 for m in range(dim)) / dim)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    return min(h0, 0.1 * span)


def series_start(n: int, p: MetricProfile, c: float, r_start: float) -> Tuple[float, float]:
    """Seed (y0, y0') on the regular power-law branch y ~ c r^alpha near r = 0.

    The linearization g(y)g'(y) ~ mu * y gives the indicial equation
    alpha^2 + (n-2) alpha - (n-1) mu = 0; the positive root is the regular
    exponent.  mu is taken from a finite difference of g g' at 0.
    """
    if not c > 0.0:
        raise SeriesStartError(f"shooting parameter c must be > 0, got {c}")
    if not r_start > 0.0:
        raise SeriesStartError(f"r_start must be > 0, got {r_start}")
    h = 1e-6
    mu = (eval_gg(p, h) - eval_gg(p, 0.0)) / h
    if mu < 0.0:
        raise SeriesStartError(f"g g' slope at 0 is negative (mu={mu:g}); no regular branch")
    disc = (n - 2) ** 2 + 4.0 * (n - 1) * mu
    if disc < 0.0:
        raise SeriesStartError("indicial equation has no real roots")
    alpha = 0.5 * (-(n - 2) + math.sqrt(disc))
    if alpha <= 0.0:
        raise SeriesStartError(
            f"indicial equation has no positive root (alpha={alpha:g}); cannot seed a regular shot"
        )
    y0 = c * r_start**alpha
    yp0 = c * alpha * r_start ** (alpha - 1.0)
    return y0, yp0


def _direct_rhs_fn(n: int, p: MetricProfile):
    gg = p.gg
    if gg is None:
        gp = p.g_prime
        if gp is not None:
            g = p.g
            gg = lambda y: g(y) * gp(y)
        else:
            gg = lambda y: eval_gg(p, y)
    nm1 = float(n - 1)

    def f(r, u):
        y, yp = u
        # odd extension of g g' keeps stage evaluations continuous if a
        # trial stage briefly dips below the puncture
        val = gg(y) if y >= 0.0 else -gg(-y)
        return (yp, -nm1 * yp / r + nm1 * val / (r * r))

    return f


def integrate_direct(
    n: int,
    p: MetricProfile,
    cfg: IntegrationConfig,
    init: Tuple[float, float],
    direction: str = "forward",
    dense: bool = True,
) -> Trajectory:
    """Integrate the direct equation until r_end or the first event.

    Events, earliest-in-step wins: y' crossing zero (DerivativeVanished),
    y reaching y_cap (FiniteBlowup), y reaching 0 (DomainExhausted with a
    puncture annotation).  Step-size underflow and non-finite right-hand
    sides yield a StepUnderflow verdict, never an exception.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    y0, yp0 = float(init[0]), float(init[1])
    if not (math.isfinite(y0) and math.isfinite(yp0)):
        raise ValueError("initial state must be finite")
    t0, t1 = (cfg.r_start, cfg.r_end) if direction == "forward" else (cfg.r_end, cfg.r_start)
    sgn = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    floor = _FLOOR_FRAC * span

    rs = [t0]
    ys = [y0]
    yps = [yp0]
    segments = []
    steps = 0
    rejected = 0

    def finish(tag, r_event=None, detail=""):
        return Trajectory(
            r=np.array(rs), y=np.array(ys), yp=np.array(yps),
            verdict=Verdict(tag, r_event=r_event, detail=detail),
            steps=steps, rejected=rejected, segments=segments,
        )

    if abs(yp0) <= cfg.yp_zero_tol:
        return finish(VerdictTag.DERIVATIVE_VANISHED, r_event=t0, detail="y' zero at start")

    f = _guarded(_direct_rhs_fn(n, p))
    rtol, atol = cfg.rel_tol, cfg.abs_tol
    sign_pos = yp0 > 0.0

    t = t0
    u = (y0, yp0)
    h = sgn * _initial_step(f, t0, u, rtol, atol, span)

    while True:
        if steps + rejected >= cfg.max_steps:
            return finish(VerdictTag.DOMAIN_EXHAUSTED, r_event=t, detail="max_steps exceeded")
        if abs(h) < floor:
            return finish(VerdictTag.STEP_UNDERFLOW, r_event=t, detail="step size underflow")
        last = False
        if (sgn > 0 and t + h >= t1) or (sgn < 0 and t + h <= t1):
            h = t1 - t
            last = True
        trial = _try_step(f, t, u, h, rtol, atol)
        if trial is None:
            rejected += 1
            h *= _MIN_FACTOR
            continue
        u_new, err, k = trial
        if err > 1.0:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            continue

        y1, yp1 = u_new
        q = None
        events = []  # (theta, tag, state, detail)
        if (yp1 > 0.0) != sign_pos or abs(yp1) <= cfg.yp_zero_tol:
            q = _dense_q(k, 2)
            theta, vals = _bisect_event(u, h, q, comp=1, target=0.0)
            events.append((theta, VerdictTag.DERIVATIVE_VANISHED, vals, "y' crossed zero"))
        if y1 >= cfg.y_cap:
            q = _dense_q(k, 2) if q is None else q
            theta, vals = _bisect_event(u, h, q, comp=0, target=cfg.y_cap)
            events.append((theta, VerdictTag.FINITE_BLOWUP, vals, "y reached y_cap"))
        if y1 <= 0.0:
            q = _dense_q(k, 2) if q is None else q
            theta, vals = _bisect_event(u, h, q, comp=0, target=0.0)
            events.append((theta, VerdictTag.DOMAIN_EXHAUSTED, vals, "target puncture reached (y -> 0)"))

        if dense or events:
            if q is None:
                q = _dense_q(k, 2)
            segments.append((t, h, u, q))

        steps += 1
        if events:
            theta, tag, vals, detail = min(events, key=lambda e: e[0])
            r_ev = t + theta * h
            rs.append(r_ev)
            ys.append(vals[0])
            yps.append(vals[1])
            return finish(tag, r_event=r_ev, detail=detail)

        t = t1 if last else t + h
        u = u_new
        rs.append(t)
        ys.append(u[0])
        yps.append(u[1])
        if last:
            if (u[1] > 0.0) == sign_pos and u[1] != 0.0 and 0.0 < u[0] < cfg.y_cap:
                return finish(VerdictTag.DIFFEO_CANDIDATE)
            return finish(VerdictTag.DOMAIN_EXHAUSTED, detail="reached r_end without candidate sign history")
        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
        h *= factor


def integrate_abel(
    n: int,
    p: MetricProfile,
    variant: SignVariant,
    cfg: IntegrationConfig,
    z0: float,
    y_span: Tuple[float, float],
    z_cap: float = 1e12,
    z_zero_tol: float = 1e-14,
) -> AbelTrajectory:
    """Integrate the z-equation over y_span (may run downward in y).

    Stops when z reaches 0 within tolerance (DerivativeVanished verdict: the
    z = 0 equilibrium admits no map), |z| reaches z_cap (FiniteBlowup toward
    -inf or +inf), the span is exhausted (DomainExhausted), or the step size
    underflows.
    """
    ya, yb = float(y_span[0]), float(y_span[1])
    if ya <= 0.0 or yb <= 0.0 or ya == yb:
        raise ValueError(f"y_span must lie in (0, inf) with distinct ends, got {y_span}")
    if z0 == 0.0:
        raise ValueError("z0 must be nonzero (z = 0 is an equilibrium)")

    gg_fn = p.gg if p.gg is not None else (lambda y: eval_gg(p, y))
    nm1, nm2 = float(n - 1), float(n - 2)
    s = 1.0 if variant is SignVariant.AS_PRINTED else -1.0

    def rhs(y, u):
        z = u[0]
        return (nm2 * z * z + s * nm1 * z * z * z * gg_fn(y),)

    f = _guarded(rhs)
    rtol, atol = cfg.rel_tol, cfg.abs_tol
    sgn = 1.0 if yb > ya else -1.0
    span = abs(yb - ya)
    floor = _FLOOR_FRAC * span

    t = ya
    u = (float(z0),)
    h = sgn * _initial_step(f, t, u, rtol, atol, span)
    yss, zss = [t], [u[0]]
    steps = 0
    rejected = 0
    verdict = None

    while True:
        if steps + rejected >= cfg.max_steps:
            verdict = Verdict(VerdictTag.DOMAIN_EXHAUSTED, r_event=t, detail="max_steps exceeded")
            break
        if abs(h) < floor:
            verdict = Verdict(VerdictTag.STEP_UNDERFLOW, r_event=t, detail="step size underflow")
            break
        last = False
        if (sgn > 0 and t + h >= yb) or (sgn < 0 and t + h <= yb):
            h = yb - t
            last = True
        trial = _try_step(f, t, u, h, rtol, atol)
        if trial is None:
            rejected += 1
            h *= _MIN_FACTOR
            continue
        u_new, err, k = trial
        if err > 1.0:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            continue
        z1 = u_new[0]
        steps += 1
        if (z1 > 0.0) != (u[0] > 0.0) or abs(z1) <= z_zero_tol:
            q = _dense_q(k, 1)
            theta, vals = _bisect_event(u, h, q, comp=0, target=0.0)
            yss.append(t + theta * h)
            zss.append(vals[0])
            verdict = Verdict(VerdictTag.DERIVATIVE_VANISHED, r_event=t + theta * h, detail="z reached 0")
            break
        if abs(z1) >= z_cap:
            q = _dense_q(k, 1)
            target = z_cap if z1 > 0 else -z_cap
            theta, vals = _bisect_event(u, h, q, comp=0, target=target)
            yss.append(t + theta * h)
            zss.append(vals[0])
            toward = "+inf" if z1 > 0 else "-inf"
            verdict = Verdict(VerdictTag.FINITE_BLOWUP, r_event=t + theta * h, detail=f"z diverging toward {toward}")
            break
        t = yb if last else t + h
        u = u_new
        yss.append(t)
        zss.append(u[0])
        if last:
            verdict = Verdict(VerdictTag.DOMAIN_EXHAUSTED, detail="y span exhausted")
            break
        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
        h *= factor

    return AbelTrajectory(
        y=np.array(yss), z=np.array(zss), variant=variant.value,
        verdict=verdict, steps=steps, rejected=rejected,
    )


def fixed_step_solve(
    f: Callable[[float, tuple], tuple],
    t0: float,
    t1: float,
    u0: Sequence[float],
    n_steps: int,
) -> tuple:
    """Fixed-step driver over the same 5th-order stages, for order studies."""
    h = (t1 - t0) / n_steps
    t = t0
    u = tuple(float(v) for v in u0)
    dim = len(u)
    for _ in range(n_steps):
        k = [f(t, u)]
        for i in range(1, 7):
            a = _A[i]
            ui = tuple(u[m] + h * sum(a[j] * k[j][m] for j in range(i)) for m in range(dim))
            k.append(f(t + _C[i] * h, ui))
        u = tuple(u[m] + h * sum(_B[j] * k[j][m] for j in range(7)) for m in range(dim))
        t += h
    return u
