import math

import numpy as np
import pytest

from fixdecomp import (
    CPCViolationError,
    InputFilterTriple,
    SolverConfig,
    affine_residual,
    build_tv_l2,
    energy_hilbert,
    energy_var,
    gradient_bank,
    init_state,
    iterate,
    kernel_symbol,
    residuals,
    solve,
)
from fixdecomp.errors import InvalidParameterError, ShapeMismatchError

from oracles import chambolle_pock_tv, grad_forward, tv_energy

rng = np.random.default_rng(31)


def small_problem(n=8, m=8, mu=0.054, beta=0.1, kappa=2, seed=0):
    g = np.random.default_rng(seed)
    f = g.uniform(0, 255, size=(n, m))
    return f, build_tv_l2(n, m, mu, beta, kappa=kappa)


def test_init_state_contract():
    f, t = small_problem()
    s = init_state(f, t)
    assert np.array_equal(s.u, f)
    assert not np.shares_memory(s.u, f)
    assert np.all(s.w == 0.0) and np.all(s.multiplier == 0.0)
    assert s.tau == 0 and math.isinf(s.rel_change)


def test_constant_image_is_immediate_fixpoint():
    n, m = 8, 8
    f = np.full((n, m), 41.5)
    t = build_tv_l2(n, m, 0.054, 0.1)
    res = solve(f, t, SolverConfig(epsilon=1e-5, max_iters=10))
    d = res.diagnostics
    assert d.converged and d.iterations <= 2
    assert np.allclose(res.smooth, f, atol=1e-12)
    assert d.res_shrink <= 1e-12 and d.res_update <= 1e-12
    assert d.res_couple <= 1e-12 and d.res_dual <= 1e-12
    assert d.res_affine <= 1e-10


def test_one_sweep_matches_explicit_minimizer_oracle():
    # U-step solved independently via the dense normal equations of
    # (mu I + beta G* G) u = mu f + beta G* (w + lam / beta)
    n, m, mu, beta = 8, 8, 0.08, 0.2
    f, t = small_problem(n, m, mu, beta, seed=3)
    s = init_state(f, t)
    for _ in range(3):
        s = iterate(s, f, t)

    lam = s.multiplier
    gb = np.stack([np.roll(s.u, -1, 0) - s.u, np.roll(s.u, -1, 1) - s.u])
    from fixdecomp.shrinkage import shrink_iso

    w_new = shrink_iso(gb - lam / beta, 1.0 / beta)

    size = n * m
    gmat = np.zeros((2 * size, size))
    for j in range(size):
        e = np.zeros(size)
        e[j] = 1.0
        gmat[:, j] = grad_forward(e.reshape(n, m)).reshape(-1)
    normal = mu * np.eye(size) + beta * gmat.T @ gmat
    rhs = mu * f.reshape(-1) + beta * gmat.T @ (w_new + lam / beta).reshape(-1)
    u_ref = np.linalg.solve(normal, rhs).reshape(n, m)

    s2 = iterate(s, f, t)
    assert np.allclose(s2.w, w_new, atol=1e-11)
    assert np.allclose(s2.u, u_ref, atol=1e-9)


def test_iterate_and_solve_agree_bitwise():
    f, t = small_problem(seed=5)
    cfg = SolverConfig(epsilon=1e-300, max_iters=7)
    res = solve(f, t, cfg)
    s = init_state(f, t)
    for _ in range(7):
        s = iterate(s, f, t)
    assert np.array_equal(res.smooth, s.u)
    assert np.array_equal(res.residual, f - s.u)


def test_sweep_membership_residuals_hold_by_construction():
    f, t = small_problem(seed=8)
    s = init_state(f, t)
    for _ in range(4):  # far from convergence on purpose
        s = iterate(s, f, t)
    d = residuals(s, f, t)
    assert d.res_shrink <= 1e-10
    assert d.res_update <= 1e-10
    assert d.res_couple > 1e-3  # genuinely unconverged


def test_solver_converges_and_reports():
    f, t = small_problem(16, 16, seed=1)
    res = solve(f, t, SolverConfig(epsilon=1e-5, max_iters=500, record_trace=True))
    d = res.diagnostics
    assert d.converged
    assert d.iterations < 500
    assert len(res.trace) == d.iterations
    assert set(res.trace[0]) == {"tau", "rel_change", "res_couple"}
    rels = [row["rel_change"] for row in res.trace]
    assert rels[-1] < 1e-5
    assert np.array_equal(res.residual, f - res.smooth)


def test_non_convergence_is_flag_not_exception():
    f, t = small_problem(16, 16, seed=2)
    res = solve(f, t, SolverConfig(epsilon=1e-14, max_iters=3))
    assert not res.diagnostics.converged
    assert res.diagnostics.iterations == 3


def test_zero_image_denominator_guard():
    n = 8
    f = np.zeros((n, n))
    t = build_tv_l2(n, n, 0.054, 0.1)
    res = solve(f, t, SolverConfig(epsilon=1e-5, max_iters=10))
    assert res.diagnostics.converged
    assert np.allclose(res.smooth, 0.0)


def test_energy_non_increasing_for_gradient_model():
    f, t = small_problem(16, 16, seed=4)
    energies = []
    res = solve(
        f,
        t,
        SolverConfig(epsilon=1e-7, max_iters=300, record_trace=True),
        energy_fn=lambda u: energy_var(u, t.analysis, f, 0.054, 2),
    )
    energies = [row["energy"] for row in res.trace]
    diffs = np.diff(energies)
    assert diffs.max() <= 1e-12
    assert energies[-1] < energies[0]


def test_energy_var_matches_independent_formula():
    f, t = small_problem(8, 8, mu=0.3, seed=6)
    u = rng.uniform(0, 255, size=(8, 8))
    got = energy_var(u, t.analysis, f, 0.3, 2)
    assert got == pytest.approx(tv_energy(u, f, 0.3, 2), rel=1e-11)
    got1 = energy_var(u, t.analysis, f, 0.3, 1)
    assert got1 == pytest.approx(tv_energy(u, f, 0.3, 1), rel=1e-11)


def test_energy_hilbert_unit_mask_reduces_to_var():
    f, t = small_problem(8, 8, seed=7)
    u = rng.uniform(0, 255, size=(8, 8))
    mask = np.ones((8, 8), dtype=np.complex128)
    assert energy_hilbert(u, t.analysis, f, 0.2, mask, 2) == pytest.approx(
        energy_var(u, t.analysis, f, 0.2, 2), rel=1e-12
    )


def test_solution_matches_primal_dual_reference():
    n, m, mu = 8, 8, 0.054
    g = np.random.default_rng(17)
    f = g.uniform(0, 255, size=(n, m))
    t = build_tv_l2(n, m, mu, 0.1)
    ours = solve(f, t, SolverConfig(epsilon=1e-9, max_iters=20000)).smooth
    ref = chambolle_pock_tv(f, mu, kappa=2, iters=20000)
    assert np.linalg.norm(ours - ref) / np.linalg.norm(ref) <= 1e-4
    e_ours = energy_var(ours, t.analysis, f, mu, 2)
    e_ref = tv_energy(ref, f, mu, 2)
    assert abs(e_ours - e_ref) / e_ref <= 1e-6


def test_beta_independence_of_limit():
    n, m, mu = 8, 8, 0.1
    g = np.random.default_rng(19)
    f = g.uniform(0, 255, size=(n, m))
    sols = []
    for beta in (0.05, 0.1, 1.0):
        t = build_tv_l2(n, m, mu, beta)
        sols.append(solve(f, t, SolverConfig(epsilon=1e-9, max_iters=20000)).smooth)
    for a in sols[1:]:
        assert np.linalg.norm(a - sols[0]) / np.linalg.norm(sols[0]) <= 1e-3


def test_multiplier_bound_at_tight_convergence():
    n = 16
    g = np.random.default_rng(21)
    f = g.uniform(0, 255, size=(n, n))
    t = build_tv_l2(n, n, 0.054, 0.1, kappa=1)
    s = init_state(f, t)
    while s.rel_change >= 1e-10 and s.tau < 20000:
        s = iterate(s, f, t)
    assert np.abs(s.multiplier).max() <= 1.0 + 1e-6


def test_affine_residual_small_at_convergence_and_guarded():
    f, t = small_problem(16, 16, seed=9)
    res = solve(f, t, SolverConfig(epsilon=1e-7, max_iters=2000))
    assert res.diagnostics.res_affine <= 1e-6

    # a bank composing to sigma == 1 must refuse the affine inverse
    n = 8
    delta = np.zeros((n, n))
    delta[0, 0] = 1.0
    bank = np.stack([kernel_symbol(delta)])
    t_bad = InputFilterTriple(
        low_pass=np.zeros((n, n), dtype=complex),
        analysis=bank,
        synthesis=bank,
        beta=1.0,
        kappa=1,
    )
    state = init_state(np.zeros((n, n)), t_bad)
    with pytest.raises(CPCViolationError):
        affine_residual(state, np.zeros((n, n)), t_bad)
    with pytest.warns(RuntimeWarning):
        d = residuals(state, np.zeros((n, n)), t_bad)
    assert math.isnan(d.res_affine)


def test_triple_validation():
    with pytest.raises(InvalidParameterError):
        InputFilterTriple(
            np.ones((4, 4), dtype=complex),
            np.ones((2, 4, 4), dtype=complex),
            np.ones((3, 4, 4), dtype=complex),
            beta=0.1,
            kappa=2,
        )
    with pytest.raises(InvalidParameterError):
        build_tv_l2(8, 8, mu=-1.0, beta=0.1)
    with pytest.raises(InvalidParameterError):
        build_tv_l2(8, 8, mu=0.1, beta=0.1, kappa=3)
    with pytest.raises(InvalidParameterError):
        SolverConfig(epsilon=0.0)
    f, t = small_problem()
    with pytest.raises(ShapeMismatchError):
        solve(np.ones((4, 4)), t)


def test_config_defaults():
    cfg = SolverConfig()
    assert cfg.epsilon == 1e-5
    assert cfg.max_iters == 500
    assert cfg.record_trace is False
