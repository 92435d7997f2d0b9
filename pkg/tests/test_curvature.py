"""Curvature tensors, pinching, Berger bound and the twistor form."""

import numpy as np
import pytest

from fatbundles import curvature as cv


def test_constant_curvature_sectional_values():
    for kappa in (1.0, -1.0, 2.5):
        t = cv.constant_curvature(2, kappa)
        t.validate()
        rng = np.random.default_rng(0)
        for _ in range(10):
            x, y = rng.standard_normal(4), rng.standard_normal(4)
            assert cv.sectional_curvature(t.R, x, y) == pytest.approx(kappa)


def test_constant_curvature_pinching_estimate():
    kmin, kmax, eps = cv.pinching_estimate(cv.constant_curvature(2, 1.0), 30, 1)
    assert kmin == pytest.approx(1.0) and kmax == pytest.approx(1.0)
    assert eps == pytest.approx(0.0, abs=1e-12)
    kmin, kmax, eps = cv.pinching_estimate(cv.constant_curvature(2, -1.0), 30, 1)
    assert kmin == pytest.approx(1.0) and eps == pytest.approx(0.0, abs=1e-12)


def test_algebraic_projection_enforces_symmetries():
    rng = np.random.default_rng(2)
    a = cv.algebraic_projection(rng.standard_normal((6, 6, 6, 6)))
    assert np.abs(a + a.transpose(1, 0, 2, 3)).max() < 1e-12
    assert np.abs(a + a.transpose(0, 1, 3, 2)).max() < 1e-12
    assert np.abs(a - a.transpose(2, 3, 0, 1)).max() < 1e-12
    bianchi = a + a.transpose(1, 2, 0, 3) + a.transpose(2, 0, 1, 3)
    assert np.abs(bianchi).max() < 1e-12


def test_random_pinched_contracts():
    for n, eps, sign, seed in ((2, 0.5, "+", 42), (3, 0.4, "-", 7),
                               (2, 0.54, "+", 1)):
        t = cv.random_pinched(n, eps, sign, seed)
        t.validate()
        assert t.achieved_epsilon <= eps + 1e-9
        assert cv.berger_check(t, eps).passed
        kmin, kmax, _ = cv.pinching_estimate(t, 300, seed=seed + 100)
        assert kmax <= 1 + 1e-9
        assert kmin >= 1 - eps - 1e-9
        if sign == "-":
            # all sampled sectional curvatures negative
            rng = np.random.default_rng(3)
            x, y = rng.standard_normal(2 * n), rng.standard_normal(2 * n)
            assert cv.sectional_curvature(t.R, x, y) < 0


def test_random_pinched_zero_epsilon_is_constant():
    t = cv.random_pinched(2, 0.0, "+", 5)
    assert np.abs(t.R - cv.constant_curvature(2, 1.0).R).max() < 1e-12


def test_random_pinched_deterministic_in_seed():
    a = cv.random_pinched(2, 0.5, "+", 11)
    b = cv.random_pinched(2, 0.5, "+", 11)
    assert np.array_equal(a.R, b.R)


def test_random_pinched_validates_epsilon():
    with pytest.raises(ValueError):
        cv.random_pinched(2, 1.0, "+", 0)


def test_berger_constant_curvature_passes_any_epsilon():
    t = cv.constant_curvature(3, 1.0)
    rep = cv.berger_check(t, 0.0)
    assert rep.passed and rep.max_mixed_abs == 0.0


def test_berger_hand_built_violation():
    N = 4
    bad = np.zeros((N,) * 4)
    # R_1234 = 1 with its forced symmetry images.
    for (i, j, k, l), s in (((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1),
                            ((0, 1, 3, 2), -1), ((1, 0, 3, 2), 1),
                            ((2, 3, 0, 1), 1), ((3, 2, 0, 1), -1),
                            ((2, 3, 1, 0), -1), ((3, 2, 1, 0), 1)):
        bad[i, j, k, l] = s
    rep = cv.berger_check(bad, 0.1)
    assert not rep.passed
    assert rep.max_mixed_abs == 1.0
    assert rep.bound == pytest.approx(2 / 3 * 0.1)
    assert rep.violation == pytest.approx(1.0 - 2 / 3 * 0.1)


def test_twistor_form_constant_curvature_closed_form():
    for n in (2, 3):
        for kappa in (1.0, -1.0, 0.5):
            t = cv.constant_curvature(n, kappa)
            oracle = 2 * kappa * cv.symplectic_gram(n)
            assert np.abs(cv.twistor_form(t, cv.identity_frame(n))
                          - oracle).max() < 1e-12
            for fr in cv.random_frames(n, 5, seed=8):
                assert np.abs(cv.twistor_form(t, fr) - oracle).max() < 1e-10


def test_twistor_form_antisymmetric_zero_diagonal():
    t = cv.random_pinched(2, 0.5, "+", 42)
    for fr in cv.random_frames(2, 5, seed=4):
        m = cv.twistor_form(t, fr)
        assert np.abs(m + m.T).max() < 1e-10
        assert np.abs(np.diag(m)).max() < 1e-12


def test_twistor_form_frame_equivariance():
    # u' = u k with k orthogonal and J-commuting: same conjugated complex
    # structure, Gram transforms by k.
    rng = np.random.default_rng(6)
    t = cv.random_pinched(2, 0.5, "+", 42)
    n = 2
    j = cv.standard_complex_structure(n)
    for fr in cv.random_frames(n, 3, seed=5):
        # Build a J-commuting orthogonal k from a random unitary.
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, _ = np.linalg.qr(z)
        k = np.zeros((2 * n, 2 * n))
        for a in range(n):
            for b in range(n):
                k[2 * a, 2 * b] = q[a, b].real
                k[2 * a + 1, 2 * b + 1] = q[a, b].real
                k[2 * a, 2 * b + 1] = -q[a, b].imag
                k[2 * a + 1, 2 * b] = q[a, b].imag
        assert np.abs(k @ k.T - np.eye(2 * n)).max() < 1e-10
        assert np.abs(k @ j - j @ k).max() < 1e-10
        u2 = cv.Frame(fr.matrix @ k)
        m1 = cv.twistor_form(t, fr)
        m2 = cv.twistor_form(t, u2)
        assert np.abs(m2 - k.T @ m1 @ k).max() < 1e-10


def test_twistor_fatness_constant_curvature():
    rep = cv.twistor_fatness(cv.constant_curvature(2, 1.0), num_frames=30,
                             seed=3)
    assert rep.fat
    assert rep.min_diag_margin == pytest.approx(1.0)
    assert rep.bound == pytest.approx(1.0)
    assert rep.min_singular_value == pytest.approx(2.0)


def test_twistor_fatness_under_theorem_hypothesis():
    rep = cv.twistor_fatness(cv.random_pinched(2, 0.54, "+", 1),
                             num_frames=40, seed=1)
    assert rep.fat and rep.bound == pytest.approx(1 - 5 * 0.54 / 3)
    rep_neg = cv.twistor_fatness(cv.random_pinched(3, 0.42, "-", 2),
                                 num_frames=40, seed=2)
    assert rep_neg.fat
    assert rep_neg.bound == pytest.approx(1 - 7 * 0.42 / 3)


def test_twistor_fatness_min_sv_diagonal_dominance_bound():
    t = cv.random_pinched(2, 0.5, "+", 42)
    rep = cv.twistor_fatness(t, num_frames=20, seed=0)
    assert rep.min_singular_value >= 2 * (1 - 5 / 3 * 0.5) - 0.05


def test_tensor_validate_rejects_broken_symmetry():
    t = cv.constant_curvature(2, 1.0)
    broken = t.R.copy()
    broken[0, 1, 2, 3] += 1e-6
    with pytest.raises(ValueError):
        cv.CurvatureTensor(n=2, R=broken).validate()


def test_frame_validation():
    with pytest.raises(ValueError):
        cv.Frame(np.eye(4) * 2)
    fr = cv.identity_frame(3)
    ju = fr.j_u()
    assert np.abs(ju @ ju + np.eye(6)).max() < 1e-12


def test_pinching_estimate_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        cv.pinching_estimate(cv.constant_curvature(2, 1.0), 0, 0)
