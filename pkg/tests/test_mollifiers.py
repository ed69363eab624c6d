import math

import numpy as np
import pytest
from scipy import integrate as sciint

from besovlab.errors import InputError, ResolutionError
from besovlab.fields import GridSpec, eval_field, make_field, sample
from besovlab.mollifiers import (make_mollifier, mollifier_bound_check, mollify)
from besovlab.seminorms import FunctionalParams, besov_seminorm_q, lq_norm_q

from oracles import direct_convolution_1d


def test_tent_moments(tent):
    assert tent.total == 1.0
    assert tent.abs_mass == 1.0
    assert tent.grad_mass == 2.0
    # int |eta'|(|v|+2)^{rq} dv = 2 int_0^1 (v+2)^{rq} dv, closed form at rq=1
    assert tent.weighted_grad(1.0) == pytest.approx(5.0, rel=1e-10)
    assert tent.abs_weighted_moment(1.0) == pytest.approx(1.0 / 3.0, rel=1e-10)


def test_gauss_moments():
    g = make_mollifier("truncated-gaussian")
    assert g.total == 1.0
    val, _ = sciint.quad(lambda v: float(g.pdf(v)), -6.0, 6.0, limit=200)
    assert val == pytest.approx(1.0, abs=1e-10)
    # the 6-sigma cut + renormalization perturbs the gradient mass by ~1e-8
    assert abs(g.grad_mass - 2.0 / math.sqrt(2.0 * math.pi)) <= 2e-8


def test_bump_and_signed_moments():
    b = make_mollifier("smooth-bump")
    val, _ = sciint.quad(lambda v: float(b.pdf(v)), -1.0, 1.0, limit=200)
    assert val == pytest.approx(1.0, abs=1e-9)
    s = make_mollifier("signed-test")
    assert s.total == 0.0
    val, _ = sciint.quad(lambda v: float(np.atleast_1d(s.pdf(v))[0]), -1.0, 1.0,
                         limit=200)
    assert abs(val) <= 1e-12
    # CDF of the derivative field is the bump itself
    assert s.cdf(0.0) == pytest.approx(float(b.pdf(0.0)), rel=1e-12)
    assert s.cdf(2.0) == 0.0


def test_mollify_constant(tent):
    const = make_field("constant", value=3.0)
    out = mollify(const, tent, 0.3)
    assert eval_field(out, 0.7)[0] == pytest.approx(3.0)
    signed = make_mollifier("signed-test")
    zero = mollify(const, signed, 0.3)
    assert eval_field(zero, 0.7)[0] == pytest.approx(0.0, abs=1e-15)


def test_mollify_step_closed_form(step, tent):
    u = mollify(step, tent, 0.2)
    assert eval_field(u, 0.0)[0] == pytest.approx(0.5, abs=1e-14)
    # against a dense direct-convolution oracle at several points
    for x in (-0.1, 0.05, 0.5, 0.93, 1.18):
        oracle = direct_convolution_1d(step, tent.pdf, 1.0, 0.2, x)
        assert eval_field(u, x)[0] == pytest.approx(oracle, abs=1e-7)


def test_mollify_step_gauss_and_signed(step):
    g = make_mollifier("truncated-gaussian")
    u = mollify(step, g, 0.1)
    for x in (0.0, 0.25, 1.0):
        oracle = direct_convolution_1d(step, g.pdf, 6.0, 0.1, x, n=60_001)
        assert eval_field(u, x)[0] == pytest.approx(oracle, abs=1e-7)
    s = make_mollifier("signed-test")
    u = mollify(step, s, 0.1)
    oracle = direct_convolution_1d(step, lambda v: np.atleast_1d(s.pdf(v)),
                                   1.0, 0.1, 0.05)
    assert eval_field(u, 0.05)[0] == pytest.approx(oracle, abs=1e-6)


def test_mollify_grid_2d(disk, tent2):
    eps = 0.25
    u = mollify(disk, tent2, eps)
    assert u.kind == "grid"
    assert eval_field(u, np.array([0.0, 0.0]))[0] == pytest.approx(1.0, abs=1e-6)
    assert eval_field(u, np.array([1.2, 0.0]))[0] == 0.0
    # unit-mass mollification conserves the integral up to the O(cell)
    # indicator-sampling bias of the grid path
    assert lq_norm_q(u, 1.0) == pytest.approx(math.pi * 0.25, rel=2e-2)


def test_mollify_resolution_error(step, tent):
    g = GridSpec(origin=(-1.0,), spacing=(0.05,), extent=(60,))
    coarse = sample(step, g)
    with pytest.raises(ResolutionError):
        mollify(coarse, tent, 0.2)   # eps < 8 * spacing
    with pytest.raises(InputError):
        mollify(step, tent, 0.0)


def test_mollifier_bound_check_cases(step, tent):
    const = make_field("constant", value=1.5)
    lhs, rhs = mollifier_bound_check(const, tent, 0.1, 0.5, 2.0, [0.2])
    assert lhs == pytest.approx(0.0, abs=1e-12) and rhs == pytest.approx(0.0, abs=1e-12)
    lhs, rhs = mollifier_bound_check(step, tent, 0.1, 0.5, 2.0, [0.05])
    assert rhs == pytest.approx(0.1, abs=1e-12)   # 1^q * 2 min(|h|, 1)
    assert lhs <= rhs + 1e-12


def test_mollifier_bound_scaling_homogeneity(step, tent):
    # doubling eta scales both sides by 2^q
    double = make_mollifier("mix", components=[(2.0, tent)])
    l1, r1 = mollifier_bound_check(step, tent, 0.1, 0.5, 2.0, [0.05])
    l2, r2 = mollifier_bound_check(step, double, 0.1, 0.5, 2.0, [0.05])
    assert l2 == pytest.approx(4.0 * l1, rel=1e-9)
    assert r2 == pytest.approx(4.0 * r1, rel=1e-9)


@pytest.mark.parametrize("kind", ["tent", "truncated-gaussian"])
@pytest.mark.parametrize("eps", [0.3, 0.05])
def test_besov_contraction_under_mollification(step, kind, eps):
    # [u_eps]_B^q <= abs_mass^q [u]_B^q on a shared shift grid
    m = make_mollifier(kind)
    params = FunctionalParams.jump_regime(2.0)
    grid = [np.array([h]) for h in (0.05, 0.2, 0.7, 1.0)]
    u_eps = mollify(step, m, eps)
    lhs = besov_seminorm_q(u_eps, params, h_grid=grid)
    rhs = besov_seminorm_q(step, params, h_grid=grid)
    assert lhs.value <= m.abs_mass ** 2 * rhs.value + 3.0 * (lhs.error_estimate + 1e-12)


def test_lq_convergence_rate(step, tent):
    # ||u - u_eps||_q^q <= eps^{rq} abs_mass^{q-1} [u]_B^q int |eta||v|^{rq} dv
    q, rq = 2.0, 1.0
    params = FunctionalParams.jump_regime(q)
    besov = besov_seminorm_q(step, params).value
    moment = tent.abs_weighted_moment(rq)
    bound_coef = tent.abs_mass ** (q - 1.0) * besov * moment
    for eps in (0.2, 0.05, 0.01):
        u_eps = mollify(step, tent, eps)
        # dense quadrature of ||u - u_eps||_q^q
        xs = np.linspace(-0.5, 1.5, 40_001)
        mid = 0.5 * (xs[1:] + xs[:-1])
        du = eval_field(step, mid[:, None]) - eval_field(u_eps, mid[:, None])
        lq = float(np.sum(np.linalg.norm(du, axis=-1) ** q) * (xs[1] - xs[0]))
        assert lq / eps ** rq <= bound_coef * 1.0001


def test_mix_mollifier_cdf(step, tent):
    bumpm = make_mollifier("smooth-bump")
    mix = make_mollifier("mix", components=[(0.95, tent), (0.05, bumpm)])
    assert mix.total == pytest.approx(1.0, rel=1e-12)
    u = mollify(step, mix, 0.1)
    oracle = direct_convolution_1d(step, mix.pdf, 1.0, 0.1, 0.07)
    assert eval_field(u, 0.07)[0] == pytest.approx(oracle, abs=1e-5)


def test_smooth_field_mollification(bump, tent):
    u = mollify(bump, tent, 0.1)
    for x in (0.2, 0.5, 1.1):
        oracle = direct_convolution_1d(bump, tent.pdf, 1.0, 0.1, x)
        assert eval_field(u, np.array([x]))[0] == pytest.approx(oracle, abs=1e-8)


def test_mollify_grid_cell_cap(disk, tent2):
    from besovlab.errors import CapabilityError
    with pytest.raises(CapabilityError):
        mollify(disk, tent2, 1e-6)


def test_oversized_gagliardo_rows_flagged_not_fatal(disk, tent2):
    # a 2D sweep reaching grid-infeasible eps flags those rows and continues
    from besovlab.limits import EpsilonGrid, epsilon_sweep
    from besovlab.quadrature import QuadBudget
    from besovlab.seminorms import FunctionalParams, gagliardo_constant_at
    params = FunctionalParams.jump_regime(2.0)
    budget = QuadBudget(max_evaluations=100_000, rng_seed=2)
    grid = EpsilonGrid(math.exp(-2.0), math.exp(-2.0), 4)   # e^-2 .. e^-8
    sweep = epsilon_sweep(
        lambda e: gagliardo_constant_at(disk, tent2, params, e, budget=budget),
        grid, model="constant-tail")
    flagged = [r for r in sweep.rows if not r.ok]
    assert flagged and all("CapabilityError" in r.note for r in flagged)
    assert sweep.valid_rows()
