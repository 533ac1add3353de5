"""Reference solvers: the exact minimizer, its cross-check, and the LAD fit."""

import numpy as np
import pytest

from scseg import (
    ReferenceConfig,
    SolverConfig,
    lad_fit,
    proximal_reference,
    solve,
    subgradient_reference,
)
from scseg.errors import ConfigurationError


def test_zero_input(basis8, diff8):
    res = proximal_reference(np.zeros(64), basis8, diff8)
    assert np.abs(res.alpha).max() < 1e-9
    assert res.objective_history[0] == pytest.approx(0.0, abs=1e-9)


def test_constant_block_optimum(basis8, diff8):
    """The optimal split of a c=100 constant puts everything in the
    background at a coefficient cost of c*N."""
    res = proximal_reference(np.full(64, 100.0), basis8, diff8)
    assert res.objective_history[0] == pytest.approx(800.0, rel=1e-9)
    assert res.alpha[0] == pytest.approx(800.0, abs=1e-6)
    assert np.abs(res.s).max() < 1e-6


def test_reference_is_not_beaten(basis8, diff8):
    rng = np.random.default_rng(7)
    for _ in range(5):
        f = rng.uniform(0, 255, 64)
        ref = proximal_reference(f, basis8, diff8, SolverConfig()).objective_history[0]
        admm_obj = solve(f, basis8, diff8, SolverConfig(max_iters=3000)).objective_history[-1]
        assert ref <= admm_obj + 1e-3 * abs(admm_obj)


def test_two_reference_routes_agree(basis8, diff8):
    """The linear-program route and plain subgradient descent are unrelated
    algorithms; their objectives must coincide."""
    rng = np.random.default_rng(9)
    for _ in range(3):
        f = rng.uniform(0, 255, 64)
        lp = proximal_reference(f, basis8, diff8).objective_history[0]
        _, history = subgradient_reference(
            f, basis8, diff8, ref=ReferenceConfig(max_iters=20000)
        )
        assert abs(history[-1] - lp) / lp < 1e-3


def test_best_so_far_never_increases(basis8, diff8, rng):
    f = rng.uniform(0, 255, 64)
    _, history = subgradient_reference(f, basis8, diff8, ref=ReferenceConfig(max_iters=3000))
    assert np.all(np.diff(history) <= 1e-12)


def test_lad_exact_on_spanned_input(basis8, rng):
    coeffs = rng.uniform(-300, 300, 6)
    f = basis8.entries @ coeffs
    res = lad_fit(f, basis8, config=SolverConfig(max_iters=500))
    assert np.abs(res.s).max() < 1e-6


def test_lad_recovers_planted_coefficients(basis8, diff8):
    """Majority-clean pixels: the l1 fit ignores the sparse corruption."""
    rng = np.random.default_rng(9)
    a_star = rng.uniform(60, 300, 6) * rng.choice([-1.0, 1.0], 6)
    a_star[0] = 900.0
    f = basis8.entries @ a_star
    e = np.zeros(64)
    idx = rng.choice(64, size=6, replace=False)
    e[idx] = rng.uniform(25, 60, 6) * rng.choice([-1.0, 1.0], 6)
    res = lad_fit(f + e, basis8, config=SolverConfig(max_iters=2000))
    assert np.abs(res.alpha - a_star).max() < 1e-3
    # same instance through the linear-program route with the fit-only weights
    lp = proximal_reference(f + e, basis8, diff8, term_weights=(0.0, 1.0, 0.0))
    assert np.abs(lp.alpha - a_star).max() < 1e-3


def test_lad_constant_matches_sparse_solver(basis8, diff8):
    f = np.full(64, 100.0)
    cfg = SolverConfig(max_iters=200)
    lad = lad_fit(f, basis8, config=cfg)
    sparse = solve(f, basis8, diff8, cfg)
    assert np.allclose(lad.alpha, sparse.alpha, atol=1e-8)


def test_lad_objective_upper_bound(basis8, rng):
    f = rng.uniform(0, 255, 64)
    res = lad_fit(f, basis8, config=SolverConfig(max_iters=500))
    assert np.abs(res.s).sum() <= np.abs(f).sum() + 1e-9


def test_reference_config_validation():
    with pytest.raises(ConfigurationError):
        ReferenceConfig(max_iters=0)
    with pytest.raises(ConfigurationError):
        ReferenceConfig(step_scale=0.0)
    with pytest.raises(ConfigurationError):
        ReferenceConfig(tol=-1.0)


def test_nonfinite_rejected(basis8, diff8):
    bad = np.zeros(64)
    bad[0] = np.inf
    with pytest.raises(ValueError):
        proximal_reference(bad, basis8, diff8)
