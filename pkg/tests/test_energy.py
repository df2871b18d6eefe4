import numpy as np
import pytest

import neucrit as nc


def test_constant_energies(ref5):
    spec, f, func = ref5
    # J(alpha 1) = -measure * F(alpha); the quadratic term drops out
    assert func.value(spec.constant_field(1.0)) == pytest.approx(
        -np.pi * 11.0 / 24.0, abs=1e-12
    )
    for a in (-2.0, 0.0, 2.0):
        assert abs(func.value(spec.constant_field(a))) < 1e-12
    assert func.value(spec.constant_field(-1.0)) == pytest.approx(
        -np.pi * 11.0 / 24.0, abs=1e-12
    )


def test_constants_are_critical(ref5):
    spec, f, func = ref5
    for a in (-2.0, -1.0, 0.0, 1.0, 2.0):
        assert func.residual(spec.constant_field(a)) < 1e-13


def test_linear_f_closed_form():
    # f(t) = a t gives J(u) = 1/2 sum (lam_j - a) c_j^2 exactly
    spec = nc.build_spectrum(nc.Domain("interval", (np.pi,)), 10)
    a = -2.0
    f = nc.homotopy(nc.build_nonlinearity([(0.0, a)], a, a), 1.0)
    func = nc.EnergyFunctional(spec, f)
    rng = np.random.default_rng(8)
    c = rng.standard_normal(10)
    expect = 0.5 * np.sum((spec.eigenvalues - a) * c**2)
    assert func.value(c) == pytest.approx(expect, rel=1e-12)
    assert np.allclose(func.l2_gradient(c), (spec.eigenvalues - a) * c, atol=1e-12)


def test_gradient_matches_fd(ref5):
    spec, f, func = ref5
    rng = np.random.default_rng(11)
    c = 0.8 * rng.standard_normal(spec.n_modes)
    g = func.l2_gradient(c)
    h = 1e-6
    for j in range(spec.n_modes):
        e = np.zeros(spec.n_modes)
        e[j] = h
        fd = (func.value(c + e) - func.value(c - e)) / (2 * h)
        assert abs(fd - g[j]) < 1e-6


def test_sobolev_gradient_representation(ref5):
    """The two gradient forms agree through the metric: <grad, v>_H1 = dJ[v]."""
    spec, f, func = ref5
    rng = np.random.default_rng(12)
    c = rng.standard_normal(spec.n_modes)
    g_h1 = func.gradient(c)
    g_l2 = func.l2_gradient(c)
    assert np.max(np.abs((1.0 + spec.eigenvalues) * g_h1 - g_l2)) < 1e-12
    assert func.residual(c) == pytest.approx(spec.h1_norm(g_h1))


def test_hessian_vector_matches_fd(ref5):
    spec, f, func = ref5
    rng = np.random.default_rng(13)
    c = 0.5 * rng.standard_normal(spec.n_modes)
    v = rng.standard_normal(spec.n_modes)
    A, B = func.hessian_pencil(c)
    h = 1e-5
    fd = (func.l2_gradient(c + h * v) - func.l2_gradient(c - h * v)) / (2 * h)
    assert np.max(np.abs(A @ v - fd)) < 1e-5 * max(1.0, np.max(np.abs(fd)))


def test_pencil_consistent_with_sobolev_hessian(ref5):
    spec, f, func = ref5
    rng = np.random.default_rng(14)
    c = rng.standard_normal(spec.n_modes)
    A, B = func.hessian_pencil(c)
    H = func.hessian(c)
    assert np.max(np.abs(np.diag(1.0 / (1.0 + spec.eigenvalues)) @ A - H)) < 1e-12
    assert np.allclose(A, A.T, atol=1e-12)
    assert np.allclose(B, np.diag(1.0 + spec.eigenvalues))


def test_constant_hessian_diagonal(ref5):
    """At a constant the pencil eigenvalues are (lam_j - f'(alpha))/(1 + lam_j)."""
    spec, f, func = ref5
    for a in (-2.0, -1.0, 0.0, 1.0, 2.0):
        evals, evecs, index, degen = func.morse_data(spec.constant_field(a))
        s = f.deriv(a)
        expect = np.sort((spec.eigenvalues - s) / (1.0 + spec.eigenvalues))
        assert np.max(np.abs(evals - expect)) < 1e-10
        assert not degen
        assert index == int(np.count_nonzero(spec.eigenvalues < s))


def test_morse_indices_at_reference_constants(ref5):
    spec, f, func = ref5
    want = {-2.0: 2, -1.0: 0, 0.0: 2, 1.0: 0, 2.0: 2}
    for a, k in want.items():
        _, _, index, degen = func.morse_data(spec.constant_field(a))
        assert index == k and not degen


def test_morse_eigenfields_sobolev_orthonormal(ref5):
    spec, f, func = ref5
    rng = np.random.default_rng(15)
    c = rng.standard_normal(spec.n_modes)
    evals, evecs, _, _ = func.morse_data(c)
    G = np.array(
        [[spec.h1_inner(evecs[:, i], evecs[:, j]) for j in range(4)] for i in range(4)]
    )
    assert np.max(np.abs(G - np.eye(4))) < 1e-10
    assert np.all(np.diff(evals) >= -1e-12)


def test_degenerate_flag():
    # f(t) = t makes mode 1 on [0, pi] exactly neutral: lam_1 - 1 = 0
    spec = nc.build_spectrum(nc.Domain("interval", (np.pi,)), 6)
    f = nc.homotopy(nc.build_nonlinearity([(0.0, 1.0)], 1.0, 1.0), 1.0)
    func = nc.EnergyFunctional(spec, f)
    evals, _, index, degen = func.morse_data(np.zeros(6))
    assert degen
    assert index == 1  # only mode 0 is strictly negative
    assert np.min(np.abs(evals)) < 1e-12
