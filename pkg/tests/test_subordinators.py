import numpy as np
import pytest
from scipy import integrate

from hilbertlevy.errors import DomainError, LayoutMismatchError, SupportError
from hilbertlevy.jumps import ExponentialJumps, PointMassJumps
from hilbertlevy.subordinators import (CommonFactorJumps, CompoundPoissonJumps,
                                       ExponentialCompoundJumps, GammaJumps,
                                       InverseGaussianJumps, OneSidedStableJumps,
                                       SubordinatorSpec, gamma, inverse_gaussian, laplace_exponent,
                                       levy_density, moment_finite, moments, one_sided_stable,
                                       rays_and_atoms, sample_increment, sample_inverse_gaussian,
                                       sample_one_sided_stable, tail_mass)


def spec(jumps, drift=None):
    return SubordinatorSpec(np.zeros(jumps.d) if drift is None else drift, jumps)


FAMILIES = [
    spec(inverse_gaussian(1.0, 1.0)),
    spec(inverse_gaussian(2.0, 0.0)),
    spec(one_sided_stable(0.5)),
    spec(gamma(2.0)),
    spec(CompoundPoissonJumps(3.0, ExponentialJumps([1.0, 2.0]))),
    spec(CommonFactorJumps([1.0, 0.5], GammaJumps(1.0))),
    SubordinatorSpec.pure_drift([1.0, 2.0]),
]


@pytest.mark.parametrize("subordinator", FAMILIES)
def test_exponent_vanishes_at_zero(subordinator):
    assert laplace_exponent(subordinator, np.zeros(subordinator.d)) == 0


def test_closed_form_exponents():
    assert laplace_exponent(spec(inverse_gaussian(1.0, 1.0)), [-1.0]) == pytest.approx(
        1.0 - np.sqrt(3.0))
    assert laplace_exponent(spec(gamma(2.0)), [-1.0]) == pytest.approx(-2.0 * np.log(2.0))
    assert laplace_exponent(SubordinatorSpec.pure_drift([3.0]), [-2.0]) == pytest.approx(-6.0)


@pytest.mark.parametrize("kernel", [InverseGaussianJumps(1.0, 1.0), InverseGaussianJumps(1.0, 0.0),
                                    OneSidedStableJumps(0.7, 2.0), GammaJumps(2.0),
                                    ExponentialCompoundJumps(2.0, 1.5)])
def test_exponent_matches_the_levy_measure(kernel):
    value, _ = integrate.quad(lambda z: np.expm1(-z) * kernel.density(z), 0.0, np.inf, limit=200)
    assert kernel.laplace_exponent(-1.0).real == pytest.approx(value, rel=1e-5)


@pytest.mark.parametrize("kernel", [InverseGaussianJumps(1.0, 1.0), InverseGaussianJumps(1.0, 0.0),
                                    OneSidedStableJumps(0.4), GammaJumps(0.5),
                                    ExponentialCompoundJumps(0.5, 3.0)])
def test_tail_mass_and_small_moment(kernel):
    r = 0.7
    tail, _ = integrate.quad(kernel.density, r, np.inf)
    small, _ = integrate.quad(lambda z: z * kernel.density(z), 0.0, r)
    assert kernel.tail_mass(r) == pytest.approx(tail, rel=1e-5)
    assert kernel.small_moment(r) == pytest.approx(small, rel=1e-5)


def test_exponent_rejects_positive_real_parts():
    with pytest.raises(DomainError):
        laplace_exponent(spec(gamma(1.0)), [0.5])
    with pytest.raises(LayoutMismatchError):
        laplace_exponent(spec(gamma([1.0, 2.0])), [-1.0])


def test_levy_density():
    assert levy_density(spec(inverse_gaussian(1.0, 0.0)), [1.0]) == pytest.approx(
        1.0 / np.sqrt(2.0 * np.pi))
    assert levy_density(spec(gamma(3.0)), [1.0]) == pytest.approx(3.0 * np.exp(-1.0))
    assert levy_density(spec(gamma(3.0)), [200.0]) < 1e-80


def test_levy_density_support():
    with pytest.raises(SupportError):
        levy_density(spec(gamma([1.0, 1.0])), [1.0, 1.0])
    with pytest.raises(SupportError):
        levy_density(SubordinatorSpec.pure_drift([1.0]), [1.0])
    factor = spec(CommonFactorJumps([1.0, 2.0], GammaJumps(1.0)))
    assert levy_density(factor, [1.0, 2.0]) == pytest.approx(np.exp(-1.0) / np.sqrt(5.0))
    with pytest.raises(SupportError):
        levy_density(factor, [1.0, 1.0])


def test_pure_drift_increment(rng):
    np.testing.assert_array_equal(sample_increment(SubordinatorSpec.pure_drift([1.0]), 2.0, rng),
                                  [2.0])


def test_increments_are_nonnegative(rng):
    for subordinator in FAMILIES:
        draws = sample_increment(subordinator, 0.5, rng, size=1000)
        assert draws.shape == (1000, subordinator.d)
        assert np.all(draws >= 0)


def test_inverse_gaussian_increment_mean(rng):
    draws = sample_increment(spec(inverse_gaussian(1.0, 2.0)), 1.0, rng, size=100_000)[:, 0]
    assert abs(draws.mean() - 0.5) <= 4 * draws.std() / np.sqrt(draws.shape[0])


def test_inverse_gaussian_sampler_moments(rng):
    mean, shape = 2.0, 3.0
    draws = sample_inverse_gaussian(mean, shape, rng, 200_000)
    assert draws.mean() == pytest.approx(mean, rel=0.01)
    assert draws.var() == pytest.approx(mean ** 3 / shape, rel=0.05)


def test_one_sided_stable_laplace_transform(rng):
    alpha = 0.6
    draws = sample_one_sided_stable(alpha, rng, 200_000)
    assert np.mean(np.exp(-draws)) == pytest.approx(np.exp(-1.0), abs=0.005)


def test_degenerate_inverse_gaussian_laplace_transform(rng):
    kernel = InverseGaussianJumps(1.0, 0.0)
    draws = kernel.sample(1.0, rng, 200_000)
    assert np.mean(np.exp(-draws)) == pytest.approx(np.exp(kernel.laplace_exponent(-1.0).real),
                                                    abs=0.005)


def test_compound_poisson_needs_nonnegative_jumps():
    with pytest.raises(DomainError):
        CompoundPoissonJumps(1.0, PointMassJumps([[1.0, -1.0]]))
    with pytest.raises(DomainError):
        CompoundPoissonJumps(0.0, ExponentialJumps([1.0]))


def test_moments():
    ig = moments(spec(inverse_gaussian(1.0, 1.0)))
    assert ig.mean[0] == pytest.approx(1.0)
    assert ig.covariance[0, 0] == pytest.approx(1.0)

    stable = moments(spec(one_sided_stable(0.5)))
    assert np.isinf(stable.mean[0])
    assert not stable.mean_finite[0]
    assert not stable.sqrt_moment_finite[0]

    drift = moments(SubordinatorSpec.pure_drift([3.0]))
    assert drift.mean[0] == 3.0
    assert drift.covariance[0, 0] == 0.0


def test_compound_poisson_moments():
    subordinator = spec(CompoundPoissonJumps(2.0, ExponentialJumps([1.0, 3.0])))
    result = moments(subordinator)
    np.testing.assert_allclose(result.mean, [2.0, 6.0])
    np.testing.assert_allclose(result.covariance, [[4.0, 6.0], [6.0, 36.0]])


def test_common_factor_moments():
    subordinator = spec(CommonFactorJumps([1.0, 2.0], GammaJumps(3.0)), drift=[0.5, 0.0])
    result = moments(subordinator)
    np.testing.assert_allclose(result.mean, [3.5, 6.0])
    np.testing.assert_allclose(result.covariance, 3.0 * np.outer([1.0, 2.0], [1.0, 2.0]))


def test_moment_flags():
    stable = spec(one_sided_stable([0.5, 0.8]))
    np.testing.assert_array_equal(moment_finite(stable, 0.6), [False, True])
    assert moments(stable, alpha=1.5).one_over_alpha_moment_finite.tolist() == [False, True]
    with pytest.raises(DomainError):
        moments(stable, alpha=3.0)


def test_component_trivial():
    subordinator = SubordinatorSpec([0.0, 1.0, 0.0], CommonFactorJumps([0.0, 0.0, 1.0],
                                                                      GammaJumps(1.0)))
    np.testing.assert_array_equal(subordinator.component_trivial(), [True, False, False])
    with pytest.raises(DomainError):
        SubordinatorSpec([-1.0])


def test_tail_mass():
    assert tail_mass(SubordinatorSpec.pure_drift([1.0]), 1.0) == 0.0
    assert tail_mass(spec(gamma(2.0)), 1.0) == pytest.approx(GammaJumps(2.0).tail_mass(1.0))


def test_rays_and_atoms():
    rays, atoms = rays_and_atoms(spec(gamma([1.0, 2.0])))
    assert len(rays) == 2 and atoms is None
    np.testing.assert_array_equal(rays[1].direction, [0.0, 1.0])
    _, atoms = rays_and_atoms(spec(CompoundPoissonJumps(2.0, PointMassJumps([[1.0, 0.0]]))))
    np.testing.assert_array_equal(atoms.points, [[1.0, 0.0]])
    np.testing.assert_allclose(atoms.weights, [2.0])
    assert not atoms.sampled


def test_one_dimensional_exponential_jumps_form_a_ray():
    rays, atoms = rays_and_atoms(spec(CompoundPoissonJumps(2.0, ExponentialJumps([1.5]))))
    assert atoms is None
    [ray] = rays
    np.testing.assert_array_equal(ray.direction, [1.0])
    assert ray.kernel.density(1.0) == pytest.approx(2.0 / 1.5 * np.exp(-1.0 / 1.5))
    assert tail_mass(spec(CompoundPoissonJumps(2.0, ExponentialJumps([1.5]))), 3.0) == (
        pytest.approx(2.0 * np.exp(-2.0)))


def test_multivariate_exponential_jumps_are_sampled():
    jumps = CompoundPoissonJumps(3.0, ExponentialJumps([1.0, 2.0]))
    rays, atoms = rays_and_atoms(spec(jumps))
    assert rays == [] and atoms.sampled
    assert atoms.weights.sum() == pytest.approx(3.0)
    # P(|J| > 0) = 1 for exponential jumps.
    assert jumps.tail_mass(1e-9) == pytest.approx(3.0)


def test_exponential_compound_sampler(rng):
    kernel = ExponentialCompoundJumps(2.0, 1.5)
    draws = kernel.sample(1.0, rng, 200_000)
    assert np.mean(draws == 0.0) == pytest.approx(np.exp(-2.0), abs=0.005)
    assert abs(draws.mean() - kernel.mean()) <= 4 * np.sqrt(kernel.variance() / draws.shape[0])
    assert np.mean(np.exp(-draws)) == pytest.approx(np.exp(kernel.laplace_exponent(-1.0).real),
                                                    abs=0.005)
