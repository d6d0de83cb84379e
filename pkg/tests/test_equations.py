import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmlab import (
    AbelState,
    DirectState,
    MonotonicityError,
    SignVariant,
    Trajectory,
    Verdict,
    VerdictTag,
    WState,
    abel_rhs,
    direct_rhs,
    make_builtin,
    residual_abel,
    residual_direct,
    transform_direct_to_abel,
    w_rhs,
    z_to_w,
)

EU = make_builtin("euclidean")
HY = make_builtin("hyperbolic")

# gg(1) for the hyperbolic profile, from a 40-digit arithmetic oracle
SINH1_COSH1 = 1.8134302039235094


def _traj(r, y, yp):
    return Trajectory(
        r=np.asarray(r, float), y=np.asarray(y, float), yp=np.asarray(yp, float),
        verdict=Verdict(VerdictTag.DIFFEO_CANDIDATE), steps=0, rejected=0,
    )


def test_direct_rhs_identity_is_stationary():
    assert direct_rhs(2, EU, DirectState(r=1.0, y=1.0, yp=1.0)) == (1.0, 0.0)


def test_direct_rhs_vanishing_gg_limit():
    _, ypp = direct_rhs(3, HY, DirectState(r=1.0, y=1e-300, yp=0.7))
    assert ypp == pytest.approx(-2.0 * 0.7, rel=1e-12)


def test_direct_rhs_hyperbolic_value():
    _, ypp = direct_rhs(2, HY, DirectState(r=2.0, y=1.0, yp=0.5))
    assert ypp == pytest.approx(-0.25 + SINH1_COSH1 / 4.0, rel=1e-14)
    assert ypp == pytest.approx(0.20335755098087735, rel=1e-14)


def test_direct_state_rejects_singular_radius():
    with pytest.raises(ValueError):
        DirectState(r=0.0, y=1.0, yp=1.0)


def test_abel_rhs_sign_variants_at_identity():
    a = AbelState(y=1.0, z=1.0)
    assert abel_rhs(2, EU, SignVariant.CORRECTED, a) == pytest.approx(-1.0)
    assert abel_rhs(2, EU, SignVariant.AS_PRINTED, a) == pytest.approx(1.0)


@given(st.floats(0.01, 100.0), st.integers(2, 5))
def test_abel_rhs_zero_is_equilibrium(y, n):
    a = AbelState(y=y, z=0.0)
    assert abel_rhs(n, HY, SignVariant.AS_PRINTED, a) == 0.0
    assert abel_rhs(n, HY, SignVariant.CORRECTED, a) == 0.0


@given(st.floats(0.01, 20.0), st.floats(-3.0, 3.0), st.integers(2, 5))
def test_abel_rhs_variant_difference(y, z, n):
    from harmlab import eval_gg

    a = AbelState(y=y, z=z)
    diff = abel_rhs(n, HY, SignVariant.AS_PRINTED, a) - abel_rhs(n, HY, SignVariant.CORRECTED, a)
    assert diff == pytest.approx(2.0 * (n - 1) * z**3 * eval_gg(HY, y), rel=1e-12, abs=1e-12)


def test_w_rhs_values():
    zero = WState(y=1e-12, w=0.0)
    assert w_rhs(3, EU, zero) == pytest.approx(-4e-12, abs=1e-20)
    # n=2 printed form: w' = -2 gg(y) <= 0
    assert w_rhs(2, HY, WState(y=1.0, w=4.0)) == pytest.approx(-2.0 * SINH1_COSH1)
    assert w_rhs(2, HY, WState(y=1.0, w=4.0), printed=False) == pytest.approx(2.0 * SINH1_COSH1)
    with pytest.raises(ValueError):
        WState(y=1.0, w=-0.1)


@given(st.floats(0.01, 50.0), st.floats(-10.0, 10.0).filter(lambda z: abs(z) > 1e-3))
def test_z_to_w_reciprocal_square(y, z):
    ws = z_to_w(AbelState(y=y, z=z))
    assert ws.y == y
    assert ws.w == pytest.approx(1.0 / z**2, rel=1e-12)


def test_z_to_w_rejects_zero():
    with pytest.raises(ValueError):
        z_to_w(AbelState(y=1.0, z=0.0))
    assert z_to_w(AbelState(y=1.0, z=-0.5)).w == pytest.approx(4.0)


def test_residual_direct_identity_and_constant():
    r = np.linspace(0.5, 5.0, 200)
    res = residual_direct(2, EU, r, r, np.ones_like(r))
    assert np.max(np.abs(res)) < 1e-12
    # constant y: first two terms vanish, residual is -(n-1) gg(y)/r^2 < 0
    y = np.full_like(r, 1.0)
    res = residual_direct(3, HY, r, y, np.zeros_like(r))
    expected = -2.0 * SINH1_COSH1 / r[1:-1] ** 2
    assert np.allclose(res, expected, rtol=1e-12)
    with pytest.raises(ValueError):
        residual_direct(2, EU, r[:2], r[:2], np.ones(2))


def test_residual_abel_closed_form():
    y = np.linspace(1.0, 2.0, 200_001)
    z = 1.0 / y
    res_c = residual_abel(2, EU, SignVariant.CORRECTED, y, z)
    assert np.max(np.abs(res_c)) < 1e-10
    res_p = residual_abel(2, EU, SignVariant.AS_PRINTED, y, z)
    assert np.allclose(res_p, -2.0 / y[1:-1] ** 2, atol=1e-10)
    with pytest.raises(ValueError):
        residual_abel(2, EU, SignVariant.CORRECTED, np.array([-1.0, 1.0, 2.0]), np.ones(3))


def test_transform_identity():
    r = np.linspace(0.5, 5.0, 50)
    a = transform_direct_to_abel(_traj(r, r, np.ones_like(r)))
    assert np.allclose(a.z, 1.0 / a.y, rtol=1e-15)
    assert np.all(np.diff(a.y) > 0)
    assert a.variant is None


def test_transform_decreasing_gives_negative_z():
    r = np.linspace(1.0, 2.0, 30)
    y = 3.0 - r
    a = transform_direct_to_abel(_traj(r, y, -np.ones_like(r)))
    assert np.all(a.z < 0)
    assert np.all(np.diff(a.y) > 0)  # reordered by increasing y


def test_transform_rejects_nonmonotone():
    r = np.linspace(1.0, 2.0, 30)
    with pytest.raises(MonotonicityError):
        transform_direct_to_abel(_traj(r, np.sin(8 * r) + 2, np.ones_like(r)))
    yp = np.ones_like(r)
    yp[10] = 0.0
    with pytest.raises(MonotonicityError):
        transform_direct_to_abel(_traj(r, r, yp))
