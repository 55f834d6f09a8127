import numpy as np
import pytest

from hilbertlevy.errors import QuadratureConvergenceError
from hilbertlevy.jumps import ExponentialJumps, PointMassJumps
from hilbertlevy.quadrature import QuadratureConfig, integrate, ray_cutoffs
from hilbertlevy.subordinators import (CompoundPoissonJumps, GammaJumps, LevyRay,
                                       SubordinatorSpec, gamma, inverse_gaussian, rays_and_atoms)


def identity(theta, rng):
    theta = np.asarray(theta, dtype=float)
    return theta, np.zeros_like(theta)


def noisy_first_coordinate(theta, rng):
    draws = theta[0] * rng.normal(1.0, 0.1, 64)
    return draws.mean(), draws.std(ddof=1) / np.sqrt(64)


def test_cutoffs_match_the_tolerance():
    ray = LevyRay(np.array([1.0]), GammaJumps(1.0))
    lower, upper = ray_cutoffs(ray, 1e-8)
    assert ray.kernel.tail_mass(upper) == pytest.approx(1e-8, rel=1e-6)
    assert ray.kernel.small_moment(lower) == pytest.approx(1e-8, rel=1e-6)
    assert lower < upper


@pytest.mark.parametrize("jumps", [gamma([1.0, 0.5]), inverse_gaussian([1.0, 2.0], [1.0, 2.0])])
def test_first_moment_of_the_levy_measure(jumps):
    rays, atoms = rays_and_atoms(SubordinatorSpec(np.zeros(2), jumps))
    result = integrate(identity, rays, atoms, QuadratureConfig(nodes=128))
    np.testing.assert_allclose(result.value, jumps.mean(), rtol=1e-5)
    np.testing.assert_array_equal(result.standard_error, 0)
    assert result.converged


def test_atoms_are_summed_exactly():
    jumps = CompoundPoissonJumps(3.0, PointMassJumps([[2.0]]))
    rays, atoms = rays_and_atoms(SubordinatorSpec([0.0], jumps))
    result = integrate(identity, rays, atoms, QuadratureConfig())
    np.testing.assert_allclose(result.value, [6.0])
    assert result.error_estimate == 0.0


def test_exponential_compound_ray_is_integrated():
    jumps = CompoundPoissonJumps(2.0, ExponentialJumps([1.5]))
    rays, atoms = rays_and_atoms(SubordinatorSpec([0.0], jumps))
    assert atoms is None
    result = integrate(identity, rays, atoms, QuadratureConfig(nodes=128))
    np.testing.assert_allclose(result.value, [3.0], rtol=1e-5)
    np.testing.assert_array_equal(result.standard_error, 0)
    assert result.converged


def test_sampled_atoms_carry_their_sampling_error():
    jumps = CompoundPoissonJumps(3.0, ExponentialJumps([1.0, 2.0]))
    rays, atoms = rays_and_atoms(SubordinatorSpec(np.zeros(2), jumps))
    result = integrate(identity, rays, atoms, QuadratureConfig())
    # The identity is exact at every point, so all of the error is sampling error.
    expected = np.sqrt(atoms.points.shape[0]) * np.std(atoms.weights[:, None] * atoms.points,
                                                       axis=0, ddof=1)
    np.testing.assert_allclose(result.standard_error, expected)
    assert np.all(result.standard_error > 0)
    assert np.all(np.abs(result.value - jumps.mean()) <= 5 * result.standard_error)


def test_monte_carlo_integrands_are_deterministic():
    rays, atoms = rays_and_atoms(SubordinatorSpec([0.0], gamma(1.0)))
    config = QuadratureConfig(nodes=64, refinement_tolerance=1e-2, seed=7)
    first = integrate(noisy_first_coordinate, rays, atoms, config)
    second = integrate(noisy_first_coordinate, rays, atoms, config)
    assert first.value == second.value
    assert first.standard_error > 0
    assert float(first.value) == pytest.approx(1.0, abs=5 * float(first.standard_error) + 1e-3)


def test_coarse_rules_do_not_converge():
    rays, atoms = rays_and_atoms(SubordinatorSpec([0.0], gamma(1.0)))
    result = integrate(identity, rays, atoms, QuadratureConfig(nodes=2))
    assert not result.converged
    assert result.error_estimate > 0
    with pytest.raises(QuadratureConvergenceError):
        integrate(identity, rays, atoms, QuadratureConfig(nodes=2, strict=True))


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(nodes=1)
    with pytest.raises(ValueError):
        QuadratureConfig(mc_samples=2)
