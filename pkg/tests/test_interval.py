import numpy as np
import pytest

from oseledets import cocycle as cc
from oseledets.errors import (
    ExpansionTooWeak,
    NonAffineBranch,
    PreconditionANotLessThan1,
    QuadratureFailure,
)
from oseledets.interval import (
    BVFunction,
    Branch,
    PiecewiseMap,
    RandomIntervalSystem,
    affine_map,
    branch_partition,
    chi_estimate,
    chi_exact_iid,
    compose_maps,
    compose_word,
    conditional_expectation,
    density_generator,
    doubling_map,
    essrad_sandwich_check,
    identity_map,
    ly_inequality_check,
    random_acim,
    single_slope_map,
    tent_map,
    transfer_apply,
    tripling_map,
    ulam_matrix,
)


# -- variation and BV calculus --------------------------------------------------

def test_variation_indicator():
    assert BVFunction.indicator(0.0, 0.5).variation() == pytest.approx(1.0)


def test_variation_identity():
    assert BVFunction.identity().variation() == pytest.approx(1.0)


def test_variation_hat():
    assert BVFunction.hat().variation() == pytest.approx(2.0)


def test_variation_additivity_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = BVFunction.random(rng)
        g = BVFunction.random(rng)
        assert (f + g).variation() <= f.variation() + g.variation() + 1e-12


def test_integral_linear():
    f = BVFunction.identity()
    assert f.integral() == pytest.approx(0.5)
    assert (f * 3.0).integral() == pytest.approx(1.5)
    assert f.l1_norm() == pytest.approx(0.5)
    g = f + BVFunction.constant(-0.5)
    assert g.l1_norm() == pytest.approx(0.25)


# -- transfer operator -----------------------------------------------------------

def test_transfer_preserves_lebesgue():
    img = transfer_apply(doubling_map(), BVFunction.constant(1.0))
    assert np.allclose(img.left_values, 1.0) and np.allclose(img.right_values, 1.0)


def test_transfer_indicator_matches_preimage_oracle():
    # oracle: (L f)(x) = (1/2)(f(x/2) + f((x+1)/2)) pointwise
    f = BVFunction.indicator(0.0, 0.5)
    img = transfer_apply(doubling_map(), f)
    for x in np.linspace(0.01, 0.99, 37):
        oracle = 0.5 * (f.evaluate(x / 2) + f.evaluate((x + 1) / 2))
        assert img.evaluate(x) == pytest.approx(oracle, abs=1e-12)


def test_transfer_positivity():
    rng = np.random.default_rng(1)
    for _ in range(10):
        f = BVFunction.random(rng)
        f = f + BVFunction.constant(-f.min_value())  # now nonnegative
        img = transfer_apply(tent_map(), f)
        assert img.min_value() >= -1e-12


def test_transfer_integral_preservation_exact():
    rng = np.random.default_rng(2)
    maps = [doubling_map(), tent_map(), tripling_map(),
            affine_map([[0.0, 0.4, 2.5, 0.0], [0.4, 1.0, -5 / 3, 5 / 3]])]
    for t in maps:
        for _ in range(10):
            f = BVFunction.random(rng)
            assert transfer_apply(t, f).integral() == pytest.approx(
                f.integral(), abs=1e-12)


def test_transfer_requires_affine():
    smooth = PiecewiseMap((Branch(a=0.0, b=1.0, fn=lambda x: x ** 2 / 2 + x / 2,
                                  dfn=lambda x: x + 0.5),))
    with pytest.raises(NonAffineBranch):
        transfer_apply(smooth, BVFunction.constant(1.0))


def test_transfer_composition_consistency():
    rng = np.random.default_rng(3)
    t1, t2 = doubling_map(), tent_map()
    comp = compose_maps(t2, t1)
    for _ in range(5):
        f = BVFunction.random(rng)
        via_steps = transfer_apply(t2, transfer_apply(t1, f))
        direct = transfer_apply(comp, f)
        for x in np.linspace(0.013, 0.987, 101):
            assert via_steps.evaluate(x) == pytest.approx(direct.evaluate(x),
                                                          abs=1e-12)
        assert via_steps.variation() == pytest.approx(direct.variation(), abs=1e-10)


# -- bin-transition matrices ------------------------------------------------------

def test_ulam_identity():
    assert np.allclose(ulam_matrix(identity_map(), 5), np.eye(5))


def test_ulam_doubling_matches_measure_oracle():
    # oracle: m(B_i ∩ T^{-1} B_j) by direct interval arithmetic
    k = 2
    t = doubling_map()
    oracle = np.zeros((k, k))
    for i in range(k):
        lo, hi = i / k, (i + 1) / k
        for j in range(k):
            jlo, jhi = j / k, (j + 1) / k
            # preimages of [jlo, jhi) under each branch
            for a, b, s, c in [(0.0, 0.5, 2.0, 0.0), (0.5, 1.0, 2.0, -1.0)]:
                plo, phi = (jlo - c) / s, (jhi - c) / s
                oracle[i, j] += max(0.0, min(hi, min(b, phi)) - max(lo, max(a, plo)))
        oracle[i] /= (hi - lo)
    assert np.allclose(ulam_matrix(t, k), oracle, atol=1e-14)
    assert np.allclose(oracle, [[0.5, 0.5], [0.5, 0.5]])


def test_ulam_tent():
    assert np.allclose(ulam_matrix(tent_map(), 2), [[0.5, 0.5], [0.5, 0.5]])


def test_ulam_rows_stochastic():
    for t in (doubling_map(), tripling_map(), tent_map()):
        for k in (3, 16, 64):
            mat = ulam_matrix(t, k)
            assert np.max(np.abs(mat.sum(axis=1) - 1.0)) <= 1e-12


def test_ulam_smooth_branch_matches_affine():
    smooth = PiecewiseMap((
        Branch(a=0.0, b=0.5, fn=lambda x: 2.0 * x, dfn=lambda x: 2.0 + 0 * x),
        Branch(a=0.5, b=1.0, fn=lambda x: 2.0 * x - 1.0, dfn=lambda x: 2.0 + 0 * x),
    ))
    assert np.allclose(ulam_matrix(smooth, 8), ulam_matrix(doubling_map(), 8),
                       atol=1e-10)


def test_ulam_quadrature_failure_on_pathological_branch():
    # root finding cannot bracket through a non-finite stretch
    def horrid(x):
        x = np.asarray(x, dtype=float)
        return np.where((x > 0.3) & (x < 0.7), np.nan, 0.9 * x)

    bogus = PiecewiseMap((Branch(a=0.0, b=1.0, fn=horrid,
                                 dfn=lambda x: 0.9 + 0.0 * np.asarray(x)),))
    with pytest.raises(QuadratureFailure):
        ulam_matrix(bogus, 8)


# -- expansion index ---------------------------------------------------------------

def test_chi_single_slope():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((tripling_map(),), drv)
    assert chi_exact_iid(sys) == pytest.approx(1 / 3)
    rep = chi_estimate(sys, n=100, samples=2)
    assert rep.chi == pytest.approx(1 / 3, abs=1e-12)


def test_chi_mixed_slopes_closed_form():
    drv = cc.DrivingSystem.iid([0.5, 0.5], seed=7)
    sys = RandomIntervalSystem((tripling_map(), single_slope_map(0.75)), drv)
    assert chi_exact_iid(sys) == pytest.approx(2 / 3)
    rep = chi_estimate(sys, n=20_000, samples=8)
    assert rep.chi == pytest.approx(2 / 3, abs=5e-3)
    assert rep.kappa_star == pytest.approx(np.log(2 / 3), abs=1e-2)


def test_chi_flags_weak_expansion():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((single_slope_map(0.5),), drv)
    rep = chi_estimate(sys, n=50, samples=1)
    assert rep.chi == pytest.approx(2.0)
    assert not rep.expanding_on_average


# -- the variation inequality -------------------------------------------------------

def test_ly_inequality_constant_function():
    rep = ly_inequality_check(doubling_map(), [BVFunction.constant(2.0)])
    assert rep.a == pytest.approx(1.5)
    assert min(rep.slacks) >= 0.0


def test_ly_inequality_indicator_derived():
    f = BVFunction.indicator(0.0, 0.5)
    img = transfer_apply(doubling_map(), f)
    assert img.variation() == pytest.approx(0.0, abs=1e-14)  # L f is constant 1/2
    rep = ly_inequality_check(doubling_map(), [f], frozen_d=0.0)
    assert min(rep.slacks) >= 0.0


def test_ly_inequality_composition_coefficient():
    for n in (1, 2, 3):
        comp = compose_word([doubling_map()], [0] * n)
        rep = ly_inequality_check(comp, [BVFunction.constant(1.0)])
        assert rep.a == pytest.approx(3.0 / 2 ** n)


def test_ly_inequality_random_sample_frozen_d():
    rng = np.random.default_rng(4)
    samples = [BVFunction.random(rng) for _ in range(100)]
    calibration = ly_inequality_check(doubling_map(), samples)
    frozen = calibration.feasible_d
    fresh = [BVFunction.random(rng) for _ in range(100)]
    rep = ly_inequality_check(doubling_map(), fresh, frozen_d=frozen)
    assert min(rep.slacks) >= 0.0


def test_ly_inequality_needs_expansion():
    with pytest.raises(ExpansionTooWeak):
        ly_inequality_check(single_slope_map(0.75), [BVFunction.constant(1.0)])


# -- the contraction-coefficient sandwich ---------------------------------------------

def test_essrad_sandwich_doubling_n2():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((doubling_map(),), drv)
    w = drv.sample_window(0, 4)
    rep = essrad_sandwich_check(sys, w, 2)
    assert rep.a_n == pytest.approx(0.25)
    assert rep.min_pairwise_distance >= 2 * 0.9 * rep.a_n
    assert rep.ic_lower <= rep.fr_upper
    assert rep.fr_measured <= rep.fr_upper + 1e-12


def test_essrad_sandwich_slope3_factor():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((tripling_map(),), drv)
    w = drv.sample_window(0, 2)
    rep = essrad_sandwich_check(sys, w, 1)
    assert rep.a_n == pytest.approx(1 / 3)
    assert rep.fr_upper == pytest.approx(1.0)
    assert rep.ic_lower <= rep.fr_upper


def test_essrad_requires_contraction():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((affine_map([[0.0, 1.0, 1.0, 0.0]]),), drv)
    w = drv.sample_window(0, 3)
    with pytest.raises(PreconditionANotLessThan1):
        essrad_sandwich_check(sys, w, 1)


def test_conditional_expectation_averages():
    f = BVFunction.identity()
    cells = branch_partition(doubling_map())
    e = conditional_expectation(f, cells)
    assert e.evaluate(0.25) == pytest.approx(0.25)
    assert e.evaluate(0.75) == pytest.approx(0.75)
    assert abs((f - e).integral()) <= 1e-12


# -- random invariant densities -----------------------------------------------------

def test_acim_single_doubling_flat():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((doubling_map(),), drv)
    rep = random_acim(sys, k=32, n_past=150)
    assert abs(rep.lambda1) <= 1e-10
    assert rep.d1 == 1
    assert np.max(np.abs(rep.densities[0] - 1.0)) <= 1e-8


def test_acim_doubling_tripling_mix():
    drv = cc.DrivingSystem.iid([0.5, 0.5], seed=5)
    sys = RandomIntervalSystem((doubling_map(), tripling_map()), drv)
    rep = random_acim(sys, k=64, n_past=200)
    assert abs(rep.lambda1) <= 1e-10
    assert rep.d1 == 1
    dens = rep.densities[0]
    assert np.min(dens) >= -1e-8
    assert np.mean(dens) == pytest.approx(1.0, abs=1e-8)  # integral one


def test_acim_nontrivial_density_nonnegative():
    drv = cc.DrivingSystem.iid([0.5, 0.5], seed=6)
    # second branch pair is not measure preserving: preimage weights vary
    skew = affine_map([[0.0, 0.5, 1.4, 0.3], [0.5, 1.0, 2.0, -1.0]])
    sys = RandomIntervalSystem((doubling_map(), skew), drv)
    rep = random_acim(sys, k=64, n_past=250)
    assert abs(rep.lambda1) <= 1e-8
    dens = rep.densities[0]
    assert np.min(dens) >= -1e-8
    assert np.mean(dens) == pytest.approx(1.0, abs=1e-8)
    # genuinely non-flat
    assert np.max(np.abs(dens - 1.0)) > 1e-2


def test_acim_splitting_certified_by_uniqueness_diagnostic():
    drv = cc.DrivingSystem.iid([0.5, 0.5], seed=6)
    skew = affine_map([[0.0, 0.5, 1.4, 0.3], [0.5, 1.0, 2.0, -1.0]])
    sys = RandomIntervalSystem((doubling_map(), skew), drv)
    rep = random_acim(sys, k=16, n_past=200)
    assert rep.chi < 1.0
    assert rep.kappa_star == pytest.approx(np.log(rep.chi)) and rep.kappa_star < 0
    # the splitting converged and its own blocks sit in the projection kernel
    assert max(rep.report.residuals["cauchy_gap"]) <= 1e-6
    assert max(rep.report.residuals["uniqueness_g0"]) <= 1e-8
    assert max(rep.report.residuals["equivariance"]) <= 1e-6


def test_acim_requires_expansion():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((single_slope_map(0.5),), drv)
    with pytest.raises(ExpansionTooWeak):
        random_acim(sys, k=16, n_past=50)


def test_ulam_cocycle_top_exponent_zero():
    drv = cc.DrivingSystem.iid([0.5, 0.5], seed=8)
    sys = RandomIntervalSystem((doubling_map(), tent_map()), drv)
    gen = density_generator(sys, 32)
    exps = cc.lyapunov_exponents(gen, drv, n=4000)
    assert abs(exps[0][0]) <= 1e-10


def test_doubling_ulam_second_exponent_bound():
    drv = cc.DrivingSystem.iid([1.0], seed=1)
    sys = RandomIntervalSystem((doubling_map(),), drv)
    gen = density_generator(sys, 64)
    exps = cc.lyapunov_exponents(gen, drv, n=2000)
    assert exps[0][0] == pytest.approx(0.0, abs=1e-10)
    assert exps[1][0] <= np.log(0.5) + 0.1


# -- map plumbing ------------------------------------------------------------------

def test_compose_word_order():
    t = compose_word([doubling_map(), tripling_map()], [0, 1])
    # T_1 ∘ T_0: doubling first, then tripling: slopes multiply to 6
    assert all(abs(b.slope) == pytest.approx(6.0) for b in t.branches)
    assert t.essinf_derivative() == pytest.approx(6.0)


def test_piecewise_map_validation():
    with pytest.raises(ValueError):
        affine_map([[0.0, 0.5, 2.0, 0.0]])  # does not cover [0, 1]
    with pytest.raises(ValueError):
        affine_map([[0.0, 0.6, 2.0, 0.0], [0.5, 1.0, 2.0, -1.0]])  # overlap
    with pytest.raises(ValueError):
        affine_map([[0.0, 1.0, 2.0, 0.0]])  # image leaves [0, 1]
