from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logistic_oco.core import Domain
from logistic_oco.errors import ParameterError
from logistic_oco.hard_instances import (AtomicDistribution, build_1d, build_2d, excess_loss, expected_loss,
                                         expected_loss_grad, expected_loss_min, hard1d_window, hard2d_p,
                                         hard2d_window, random_atomic, sample, sample_indices, verify_lemma2,
                                         verify_lemma3)
from oracles import grid_min_1d, grid_min_2d

LOG2 = math.log(2.0)


def test_build_1d_examples():
    d = build_1d(0.04, 16.0, +1)
    np.testing.assert_allclose(d.atoms[:, 0], [0.99375, -0.0125], rtol=1e-14)
    assert d.probs[0] == pytest.approx(0.00875, rel=1e-12)
    assert build_1d(0.04, 16.0, -1).probs[0] == pytest.approx(0.00375, rel=1e-12)
    assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)


def test_build_1d_window():
    with pytest.raises(ParameterError, match="outside"):
        build_1d(0.1, 16.0, +1)
    with pytest.raises(ParameterError, match="outside"):
        build_1d(1e-6, 16.0, +1)
    build_1d(0.1, 16.0, +1, strict=False)
    with pytest.raises(ParameterError):
        build_1d(0.04, 16.0, 0)


def test_hard2d_p_at_two():
    ratio = math.sqrt(2) * (1 + math.e ** 0.9) / (1 + math.exp(-0.9 * math.sqrt(2)))
    assert hard2d_p(2.0) == pytest.approx(ratio / (1 + ratio), rel=1e-14)
    assert hard2d_p(2.0) == pytest.approx(0.79263, abs=1e-5)


@pytest.mark.parametrize("D", [2.0, 5.0, 30.0])
def test_hard2d_p_makes_w0_stationary(D):
    base = build_2d(0.0, D, +1, strict=False)
    g = expected_loss_grad(base, np.array([0.0, 0.9 * D]))
    assert np.linalg.norm(g) < 1e-12


def test_build_2d_atoms_and_symmetry():
    D = 30.0
    d = build_2d(0.003, D, +1)
    norms = np.linalg.norm(d.atoms, axis=1)
    np.testing.assert_allclose(norms, [1 / D, 1.0, 1.0], rtol=1e-15)
    a = build_2d(0.0, D, +1, strict=False)
    b = build_2d(0.0, D, -1, strict=False)
    np.testing.assert_array_equal(a.probs, b.probs)
    with pytest.raises(ParameterError):
        build_2d(0.1, D, +1)


D_EPS_GRID = [(D, eps, chi) for D in (16.0, 20.0, 24.0) for eps in np.linspace(*hard1d_window(D), 4)
              for chi in (-1, 1)]


@pytest.mark.parametrize("D, eps, chi", D_EPS_GRID)
def test_1d_distributions_valid(D, eps, chi):
    d = build_1d(float(eps), D, chi)
    assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(d.probs >= 0)
    assert np.all(np.abs(d.atoms) <= 1.0)


@pytest.mark.parametrize("D", [25.0, 30.0, 40.0])
@pytest.mark.parametrize("chi", [-1, 1])
def test_2d_distributions_valid(D, chi):
    lo, hi = hard2d_window(D)
    for eps in np.linspace(lo, hi, 4):
        d = build_2d(float(eps), D, chi)
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.all(d.probs >= 0)
        assert np.all(np.linalg.norm(d.atoms, axis=1) <= 1.0 + 1e-15)


def test_atomic_distribution_validation():
    with pytest.raises(ParameterError):
        AtomicDistribution(np.array([[0.5], [0.2]]), np.array([0.5, 0.6]))
    with pytest.raises(ParameterError):
        AtomicDistribution(np.array([[1.5]]), np.array([1.0]))
    with pytest.raises(ParameterError):
        AtomicDistribution(np.array([[0.1], [0.2]]), np.array([1.2, -0.2]))
    d = AtomicDistribution(np.array([[0.1]]), np.array([1.0]))
    with pytest.raises(ValueError):
        d.atoms[0, 0] = 0.3


def test_sampling_examples(rng):
    point = AtomicDistribution(np.array([[0.4]]), np.array([1.0]))
    assert np.all(sample(point, rng, 100) == 0.4)
    fair = AtomicDistribution(np.array([[1.0], [0.0]]), np.array([0.5, 0.5]))
    freq = np.mean(sample_indices(fair, rng, 1_000_000) == 0)
    assert abs(freq - 0.5) <= 0.002
    d = build_1d(0.04, 16.0, +1)
    a = sample(d, np.random.default_rng(9), 500)
    b = sample(d, np.random.default_rng(9), 500)
    np.testing.assert_array_equal(a, b)


def test_expected_loss_examples():
    d = build_1d(0.04, 16.0, +1)
    assert expected_loss(d, 0.0) == pytest.approx(LOG2)
    mp.mp.dps = 40
    want = sum(mp.mpf(float(p)) * mp.log(1 + mp.e ** (mp.mpf(float(x)) * 16)) for x, p in
               zip(d.atoms[:, 0], d.probs))
    assert expected_loss(d, 16.0) == pytest.approx(float(want), rel=1e-14)
    base = build_2d(0.0, 30.0, +1, strict=False)
    w_star, v_star = expected_loss_min(base, Domain(30.0, 2))
    assert expected_loss(base, np.array([0.0, 27.0])) == pytest.approx(v_star, abs=1e-10)
    assert np.linalg.norm(w_star - np.array([0.0, 27.0])) <= 1e-3 * 30


def test_expected_loss_min_point_mass():
    d = AtomicDistribution(np.array([[0.0]]), np.array([1.0]))
    _, v = expected_loss_min(d, Domain(5.0))
    assert v == pytest.approx(LOG2)


def test_minus_family_minimizer_right_quarter():
    D = 16.0
    w, _ = expected_loss_min(build_1d(0.04, D, -1), Domain(D))
    ws, _ = grid_min_1d(build_1d(0.04, D, -1).atoms, build_1d(0.04, D, -1).probs, D)
    assert 0.75 * D < w[0] <= D
    assert abs(w[0] - ws[0]) < 1e-3


@pytest.mark.parametrize("seed", range(20))
def test_expected_loss_min_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    dim = 1 + seed % 2
    D = float(rng.uniform(1, 10))
    d = random_atomic(rng, n_atoms=int(rng.integers(1, 6)), dim=dim)
    _, v = expected_loss_min(d, Domain(D, dim))
    oracle = grid_min_1d if dim == 1 else grid_min_2d
    _, v_ref = oracle(d.atoms, d.probs, D)
    assert abs(v - v_ref) <= 1e-6
    assert v <= v_ref + 1e-10


def test_excess_loss_examples():
    dom = Domain(16.0)
    d = build_1d(0.04, 16.0, +1)
    w_star, _ = expected_loss_min(d, dom)
    assert abs(excess_loss(d, dom, w_star)) <= 1e-10
    assert excess_loss(d, dom, 16.0) >= 0.04 / 20


def test_2d_half_plane_excess_example():
    D, eps = 30.0, 0.003
    d = build_2d(eps, D, +1)
    dom = Domain(D, 2)
    _, m = expected_loss_min(d, dom)
    r = np.linspace(0, D, 40)
    a = np.linspace(0.5 * np.pi, 1.5 * np.pi, 40)
    pts = np.stack([np.outer(r, np.cos(a)).ravel(), np.outer(r, np.sin(a)).ravel()], axis=1)
    pts = pts[pts[:, 0] <= 0]
    assert np.min(excess_loss(d, dom, pts, minimum=m)) >= eps / 20


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([1, 2]))
def test_expected_loss_midpoint_convex(seed, dim):
    rng = np.random.default_rng(seed)
    d = random_atomic(rng, n_atoms=4, dim=dim)
    u, v = rng.uniform(-20, 20, size=(2, dim))
    mid = expected_loss(d, 0.5 * (u + v))
    assert mid <= 0.5 * (expected_loss(d, u) + expected_loss(d, v)) + 1e-10
    dom = Domain(20.0 * math.sqrt(dim), dim)
    assert excess_loss(d, dom, u) >= -1e-10


def test_plus_perturbation_nonnegative_on_left_half_plane():
    D = 30.0
    plus = build_2d(0.003, D, +1)
    base = build_2d(0.0, D, +1, strict=False)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-D, D, size=(20000, 2))
    pts = pts[(pts[:, 0] <= 0) & (np.linalg.norm(pts, axis=1) <= D)]
    assert np.all(expected_loss(plus, pts) - expected_loss(base, pts) >= 0)


def test_verify_lemma2_passes():
    rep = verify_lemma2(16.0, 0.04, 4096)
    assert rep.passed, rep.to_text()
    assert rep["lemma2.quadratic_residual_vs_taylor"].threshold == pytest.approx(0.2 ** 4 / 192)


def test_verify_lemma2_zero_gap_without_perturbation():
    d_plus = build_1d(0.0, 16.0, +1, strict=False)
    d_minus = build_1d(0.0, 16.0, -1, strict=False)
    np.testing.assert_array_equal(d_plus.probs, d_minus.probs)


def test_verify_lemma3_passes():
    rep = verify_lemma3(30.0, 0.003)
    assert rep.passed, rep.to_text()


@pytest.mark.parametrize("fn, D, eps", [(verify_lemma2, 16.0, 0.5), (verify_lemma3, 30.0, 0.5)])
def test_verifiers_enforce_window(fn, D, eps):
    with pytest.raises(ParameterError):
        fn(D, eps)


def test_lemma3_zero_perturbation_has_no_gap():
    rep = verify_lemma3(30.0, 0.0, n_radial=64, n_angular=128, strict=False)
    left = rep["lemma3.plus_excess_left_min"].value
    # only grid resolution separates the half-plane minimum from the global one
    assert -1e-10 <= left <= 1e-5
    assert left == pytest.approx(rep["lemma3.minus_excess_right_min"].value, abs=1e-12)
