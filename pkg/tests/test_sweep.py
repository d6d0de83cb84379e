import numpy as np
import pytest

from harmlab import (
    CGrid,
    IntegrationConfig,
    ModelPair,
    Regime,
    SweepError,
    SweepSpec,
    VerdictTag,
    bisect_boundary,
    make_builtin,
    run_sweep,
)

EU = make_builtin("euclidean")
HY = make_builtin("hyperbolic")
DECREASING = make_builtin("polynomial", coefficients=[2.0, 0.0, -0.0008])
CFG = IntegrationConfig(r_start=0.01, r_end=50.0)


def _spec(n, target, regime, grid, cfg=CFG):
    return SweepSpec(pair=ModelPair(n=n, target=target), regime=regime, c_grid=grid, cfg=cfg)


def test_cgrid_validation():
    with pytest.raises(ValueError):
        CGrid(1, 0.1, 1.0)
    with pytest.raises(ValueError):
        CGrid(5, 0.0, 1.0)
    with pytest.raises(ValueError):
        CGrid(5, 1.0, 0.5)
    vals = CGrid(3, 0.01, 1.0).values()
    assert np.allclose(vals, [0.01, 0.1, 1.0])


def test_euclidean_scaling_family_all_candidates():
    # gg(y) = y makes the direct equation linear, so y = c r solves it for
    # every c and every shot is a candidate
    spec = _spec(3, EU, Regime.ORIGIN_REGULAR, CGrid(9, 1e-3, 1e3),
                 IntegrationConfig(r_start=0.1, r_end=10.0))
    rep = run_sweep(spec)
    assert len(rep.rows) == 9
    assert sum(rep.summary.values()) == 9
    assert all(row.verdict is VerdictTag.DIFFEO_CANDIDATE for row in rep.rows)
    assert rep.any_diffeo_candidate
    for row in rep.rows:
        assert row.final_y == pytest.approx(row.c * 10.0, rel=1e-8)


def test_euclidean_scaling_invariance_pointwise():
    cfg = IntegrationConfig(r_start=0.1, r_end=10.0)
    spec = _spec(4, EU, Regime.ORIGIN_REGULAR, CGrid(2, 1.0, 7.0), cfg)
    rep = run_sweep(spec, keep_trajectories=True)
    t1, t7 = rep.trajectories
    rr = np.linspace(0.2, 9.8, 50)
    y1, _ = t1.sample_at(rr)
    y7, _ = t7.sample_at(rr)
    assert np.allclose(y7, 7.0 * y1, rtol=1e-10)


def test_rows_ordered_by_c_and_counts_consistent():
    spec = _spec(2, HY, Regime.INFINITY_DECAY, CGrid(7, 1e-4, 1.0))
    rep = run_sweep(spec)
    cs = [row.c for row in rep.rows]
    assert cs == sorted(cs)
    assert sum(rep.summary.values()) == len(rep.rows) == 7


def test_refinement_preserves_subgrid():
    cfg = IntegrationConfig(r_start=0.1, r_end=10.0)
    coarse = run_sweep(_spec(2, HY, Regime.ORIGIN_REGULAR, CGrid(5, 1e-2, 1e2), cfg))
    fine = run_sweep(_spec(2, HY, Regime.ORIGIN_REGULAR, CGrid(9, 1e-2, 1e2), cfg))
    for i, row in enumerate(coarse.rows):
        twin = fine.rows[2 * i]
        assert twin.c == pytest.approx(row.c, rel=1e-14)
        assert twin.verdict is row.verdict
    assert fine.any_diffeo_candidate == coarse.any_diffeo_candidate


def test_parallel_matches_serial():
    spec = _spec(2, HY, Regime.ORIGIN_REGULAR, CGrid(6, 1e-2, 1e2),
                 IntegrationConfig(r_start=0.1, r_end=10.0))
    serial = run_sweep(spec, workers=1)
    parallel = run_sweep(spec, workers=2)
    assert serial.rows == parallel.rows
    assert serial.summary == parallel.summary


def test_series_failure_aborts_sweep():
    spec = _spec(3, DECREASING, Regime.ORIGIN_REGULAR, CGrid(3, 0.1, 1.0))
    with pytest.raises(SweepError):
        run_sweep(spec)


def test_bisect_requires_distinct_verdicts():
    spec = _spec(3, EU, Regime.ORIGIN_REGULAR, CGrid(2, 1e-3, 1e3),
                 IntegrationConfig(r_start=0.1, r_end=10.0))
    with pytest.raises(ValueError):
        bisect_boundary(spec, 0.5, 2.0)
    with pytest.raises(ValueError):
        bisect_boundary(spec, 2.0, 1.0)


def test_bisect_locates_transition_frozen_regression():
    # regression value recorded from the first oracle run of this build
    spec = _spec(2, HY, Regime.ORIGIN_REGULAR, CGrid(2, 1e-3, 1e3))
    cstar, tag_lo, tag_hi = bisect_boundary(spec, 1e-3, 1.0)
    assert tag_lo is VerdictTag.DIFFEO_CANDIDATE
    assert tag_hi is VerdictTag.STEP_UNDERFLOW
    assert cstar == pytest.approx(0.04000000106888977, rel=1e-6)


def test_hyperbolic_sweep_tallies_frozen_regression():
    # verdict tallies recorded from the first oracle run of this build;
    # the small-c candidate rows are real desk-scale outcomes (see README)
    expected = {
        (Regime.ORIGIN_REGULAR, 2): {"diffeo_candidate": 17, "step_underflow": 44},
        (Regime.ORIGIN_REGULAR, 3): {"diffeo_candidate": 16, "step_underflow": 45},
        (Regime.ORIGIN_REGULAR, 4): {"diffeo_candidate": 15, "step_underflow": 46},
        (Regime.ORIGIN_REGULAR, 5): {"diffeo_candidate": 15, "step_underflow": 46},
        (Regime.INFINITY_DECAY, 2): {"diffeo_candidate": 7, "step_underflow": 34},
        (Regime.INFINITY_DECAY, 3): {"step_underflow": 41},
        (Regime.INFINITY_DECAY, 4): {"step_underflow": 41},
        (Regime.INFINITY_DECAY, 5): {"step_underflow": 41},
    }
    grids = {Regime.ORIGIN_REGULAR: CGrid(61, 1e-3, 1e3),
             Regime.INFINITY_DECAY: CGrid(41, 1e-4, 1.0)}
    for (regime, n), tally in expected.items():
        rep = run_sweep(_spec(n, HY, regime, grids[regime]))
        observed = {k: v for k, v in rep.summary.items() if v}
        assert observed == tally, f"{regime.value} n={n}: {observed} != {tally}"
