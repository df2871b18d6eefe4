import dataclasses

import numpy as np
import pytest

import neucrit as nc
from neucrit.reduction import (
    local_max_min_at_constant,
    make_reduction_context,
    maximize_reduced,
    monotonicity_certificate,
    psi,
    reduced_gradient,
    reduced_value,
)

BIG_ORBIT_J = 6.667327
BIG_ORBIT_NORM = 7.2085
BIG_ORBIT_RANGE = 4.2322


def test_context_constants(ref5_ctx):
    assert ref5_ctx.k == 2
    assert ref5_ctx.m == pytest.approx(0.3, abs=1e-12)
    # certified Lipschitz constant: 1 + max(0, -(1 + min f')) / (1 + lam_min_Y)
    assert ref5_ctx.lam == pytest.approx(1.4, abs=1e-12)


def test_inapplicable_when_gamma_reaches_y(ref5):
    spec, _, _ = ref5
    steep = nc.build_nonlinearity([(0.0, 6.0)], 2.5, 2.5)
    with pytest.raises(nc.ReductionInapplicable):
        make_reduction_context(nc.EnergyFunctional(spec, steep))


def test_requires_split_spectrum():
    spec = nc.build_spectrum(nc.Domain("interval", (np.pi,)), 8)
    f = nc.build_nonlinearity([(0.0, -1.0)], 2.5, 2.5)
    with pytest.raises(ValueError):
        make_reduction_context(nc.EnergyFunctional(spec, f))


def test_psi_vanishes_at_constants(ref5, ref5_ctx):
    spec, _, _ = ref5
    for a in (-2.0, -1.0, 0.0, 1.0, 2.0):
        x = spec.x_projection(spec.constant_field(a))
        y = psi(ref5_ctx, x)
        assert spec.h1_norm(y) == 0.0


def test_psi_vanishes_for_linear_f(ref5):
    spec, _, _ = ref5
    lin = nc.homotopy(nc.build_nonlinearity([(0.0, 2.5)], 2.5, 2.5), 1.0)
    ctx = make_reduction_context(nc.EnergyFunctional(spec, lin))
    rng = np.random.default_rng(31)
    for _ in range(5):
        x = spec.x_projection(rng.standard_normal(spec.n_modes))
        assert spec.h1_norm(psi(ctx, x)) < 1e-9


def test_psi_solves_y_block(ref5, ref5_ctx):
    spec, _, func = ref5
    rng = np.random.default_rng(32)
    x = spec.x_projection(1.5 * rng.standard_normal(spec.n_modes))
    y = psi(ref5_ctx, x)
    assert spec.h1_norm(spec.y_projection(func.gradient(x + y))) <= 1e-9
    assert np.all(spec.x_projection(y) == 0.0)


def test_psi_minimality(ref5, ref5_ctx):
    """psi(x) beats every competitor in the Y block, as strong convexity says."""
    spec, _, func = ref5
    rng = np.random.default_rng(33)
    for _ in range(5):
        x = spec.x_projection(1.5 * rng.standard_normal(spec.n_modes))
        y_star = psi(ref5_ctx, x)
        J_star = func.value(x + y_star)
        for _ in range(20):
            y = spec.y_projection(rng.normal(scale=2.0, size=spec.n_modes))
            dy = spec.h1_dist(y, y_star)
            J_comp = func.value(x + y)
            # quantitative: J(x+y) >= J(x+psi) + m/2 |y - psi|^2
            assert J_comp >= J_star + 0.5 * ref5_ctx.m * dy**2 - 1e-9


def test_psi_warm_start(ref5, ref5_ctx):
    spec, _, _ = ref5
    rng = np.random.default_rng(34)
    x = spec.x_projection(rng.standard_normal(spec.n_modes))
    y1 = psi(ref5_ctx, x)
    y2 = psi(ref5_ctx, x, y0=y1)
    assert spec.h1_dist(y1, y2) < 1e-8


def test_reduced_value_below_full(ref5, ref5_ctx):
    spec, _, func = ref5
    rng = np.random.default_rng(35)
    for _ in range(5):
        u = rng.standard_normal(spec.n_modes)
        assert reduced_value(ref5_ctx, spec.x_projection(u)) <= func.value(u) + 1e-12


def test_reduced_gradient_matches_fd(ref5, ref5_ctx):
    spec, _, _ = ref5
    rng = np.random.default_rng(36)
    x = spec.x_projection(0.8 * rng.standard_normal(spec.n_modes))
    g = reduced_gradient(ref5_ctx, x)
    h = 1e-5
    for i in spec.x_indices:
        e = np.zeros(spec.n_modes)
        e[i] = h
        fd = (reduced_value(ref5_ctx, x + e) - reduced_value(ref5_ctx, x - e)) / (2 * h)
        # fd gives the partial derivative; the metric gradient scales it
        assert abs(fd - (1.0 + spec.eigenvalues[i]) * g[i]) < 1e-5


def test_monotonicity_certificate(ref5_ctx):
    worst = monotonicity_certificate(ref5_ctx, trials=60,
                                     rng=np.random.default_rng(37))
    assert worst >= -1e-10


def test_forged_modulus_trips_probes(ref5, ref5_ctx):
    spec, _, _ = ref5
    bad = dataclasses.replace(ref5_ctx, m=10.0)
    with pytest.raises(nc.ModulusViolated):
        monotonicity_certificate(bad, trials=20, rng=np.random.default_rng(38))
    x = spec.x_projection(2.0 * np.ones(spec.n_modes))
    with pytest.raises(nc.ModulusViolated):
        psi(bad, x)


def test_maximize_reduced_reference(ref5, ref5_ctx, solver_cfg):
    rec = maximize_reduced(ref5_ctx, solver_cfg, R=10.0)
    assert rec.classification == "reduction_max"
    assert rec.energy == pytest.approx(BIG_ORBIT_J, abs=2e-6)
    assert rec.h1_norm == pytest.approx(BIG_ORBIT_NORM, abs=2e-4)
    assert rec.urange[0] == pytest.approx(-BIG_ORBIT_RANGE, abs=2e-4)
    assert rec.urange[1] == pytest.approx(BIG_ORBIT_RANGE, abs=2e-4)
    # the distinguished point has full index k and clean second-order data
    assert rec.morse_index == 2 and not rec.degenerate
    assert rec.residual <= solver_cfg.grad_tol
    assert not any("differs from the block dimension" in n for n in rec.notes)


def test_maximize_reduced_linear(ref5, solver_cfg):
    spec, _, _ = ref5
    lin = nc.homotopy(nc.build_nonlinearity([(0.0, 2.5)], 2.5, 2.5), 1.0)
    ctx = make_reduction_context(nc.EnergyFunctional(spec, lin))
    rec = maximize_reduced(ctx, solver_cfg, R=3.0)
    assert rec.h1_norm < 1e-7
    assert abs(rec.energy) < 1e-12


def test_maximize_reduced_high_k_random_seeding(solver_cfg):
    spec = nc.split_spectrum(
        nc.build_spectrum(nc.Domain("interval", (np.pi,)), 8), 17.0
    )
    assert spec.k == 5
    lin = nc.homotopy(nc.build_nonlinearity([(0.0, 17.0)], 17.0, 17.0), 1.0)
    ctx = make_reduction_context(nc.EnergyFunctional(spec, lin))
    rec = maximize_reduced(ctx, solver_cfg, R=1.0)
    assert rec.h1_norm < 1e-7
    assert any("grid seeding replaced by random seeds" in n for n in rec.notes)


def test_local_max_min_at_reference_well(ref5_ctx):
    rep = local_max_min_at_constant(ref5_ctx, alpha=-1.0, ell=0)
    assert rep.passed
    assert len(rep.directions) == 2
    for row in rep.directions:
        assert row["block"] == "middle"
        assert row["delta_plus"] > 0 and row["delta_minus"] > 0
        assert row["second_difference"] == pytest.approx(
            row["hessian_diagonal"], rel=1e-2
        )
    # frozen diagonal entries lam_j - f'(-1) = lam_j + 3
    assert rep.directions[0]["hessian_diagonal"] == pytest.approx(3.0)
    assert rep.directions[1]["hessian_diagonal"] == pytest.approx(4.0)


def test_local_max_min_split_blocks(ref5):
    # a crossing with slope between the two X eigenvalues exercises ell = 1
    spec, _, _ = ref5
    f = nc.build_nonlinearity([(0.0, 0.5)], 2.5, 2.5)
    ctx = make_reduction_context(nc.EnergyFunctional(spec, f))
    rep = local_max_min_at_constant(ctx, alpha=0.0, ell=1)
    assert rep.passed
    low = [r for r in rep.directions if r["block"] == "low"]
    mid = [r for r in rep.directions if r["block"] == "middle"]
    assert len(low) == 1 and len(mid) == 1
    assert low[0]["delta_plus"] < 0 and low[0]["delta_minus"] < 0
    assert mid[0]["delta_plus"] > 0 and mid[0]["delta_minus"] > 0
    assert low[0]["hessian_diagonal"] == pytest.approx(-0.5)
    assert mid[0]["hessian_diagonal"] == pytest.approx(0.5)
    d = rep.to_dict()
    assert d["ell"] == 1 and d["passed"]


def test_local_max_min_validation(ref5_ctx):
    with pytest.raises(ValueError, match="not a constant solution"):
        local_max_min_at_constant(ref5_ctx, alpha=0.5, ell=0)
    with pytest.raises(ValueError, match="inconsistent"):
        local_max_min_at_constant(ref5_ctx, alpha=-1.0, ell=1)
    with pytest.raises(ValueError, match="must be < k"):
        local_max_min_at_constant(ref5_ctx, alpha=0.0, ell=2)
