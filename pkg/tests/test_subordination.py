import numpy as np
import pytest
from scipy import integrate, stats

from hilbertlevy.base import BaseJumps, BaseProcessSpec
from hilbertlevy.errors import (DomainError, LayoutMismatchError, NotIntegrableError,
                                NotSquareIntegrableError)
from hilbertlevy.families import (HNIGParams, HVGParams, StableParams, hnig_exponent, make_hnig,
                                  make_hvg, make_stable)
from hilbertlevy.jumps import ExponentialJumps, PointMassJumps
from hilbertlevy.quadrature import QuadratureConfig
from hilbertlevy.space import CovOperator, SpaceLayout, TruncatedVector
from hilbertlevy.subordination import (IntegrabilityCase, SubordinatedLevyMeasure,
                                       SubordinatedProcessSpec,
                                       classify_integrability, classify_stable_subordination,
                                       cov_operator_of_x, mean_of_x, sample_x, sample_x_batch,
                                       simulate_path, simulate_path_batch, subordinated_exponent,
                                       subordinated_triplet)
from hilbertlevy.subordinators import (CompoundPoissonJumps, SubordinatorSpec, gamma,
                                       one_sided_stable)
from hilbertlevy.verify.stats import ks_two_sample


Q = [[1.0, 0.5]]


def hnig(s=1.0, c=1.0, b=(0.0, 0.0), q=Q):
    return make_hnig(HNIGParams(s, c, TruncatedVector.from_components([b]),
                                CovOperator.from_eigenvalues(q)))


def hvg(a=1.0, b=(0.0, 0.0)):
    return make_hvg(HVGParams(a, TruncatedVector.from_components([b]),
                              CovOperator.from_eigenvalues(Q)))


def stable(alpha):
    return make_stable(StableParams(alpha, CovOperator.from_eigenvalues(Q)))


def vector(*values):
    return TruncatedVector.from_components([values])


# -------------------------------------------------------------------------------------------------
# Exponent
# -------------------------------------------------------------------------------------------------

def test_exponent_at_zero(desk_hnig):
    assert subordinated_exponent(desk_hnig, vector(0.0, 0.0)) == 0


def test_exponent_composes_the_clock_with_the_base(desk_hnig, desk_hnig_params):
    u = vector(1.0, 0.0)
    assert subordinated_exponent(desk_hnig, u) == pytest.approx(1.0 - np.sqrt(2.0 - 1.0j))
    assert subordinated_exponent(desk_hnig, u) == pytest.approx(hnig_exponent(desk_hnig_params, u))


def test_centred_exponents():
    assert subordinated_exponent(hnig(), vector(0.0, np.sqrt(2.0))) == pytest.approx(
        1.0 - np.sqrt(2.0))
    assert subordinated_exponent(hvg(), vector(np.sqrt(2.0), 0.0)) == pytest.approx(-np.log(2.0))


def test_exponent_rejects_foreign_layout(desk_hnig):
    with pytest.raises(LayoutMismatchError):
        subordinated_exponent(desk_hnig, TruncatedVector.from_components([[1.0]]))


def test_dimensions_must_agree():
    base = BaseProcessSpec.gaussian(vector(0.0, 0.0), CovOperator.from_eigenvalues(Q))
    with pytest.raises(LayoutMismatchError):
        SubordinatedProcessSpec(base, SubordinatorSpec.pure_drift([1.0, 1.0]))


# -------------------------------------------------------------------------------------------------
# Sampling
# -------------------------------------------------------------------------------------------------

def test_trivial_clock_gives_zero(rng):
    draws = sample_x_batch(hnig(s=0.0, b=(1.0, 1.0)), 2.0, rng, 100)
    np.testing.assert_array_equal(draws, 0)


def test_sample_moments(desk_hnig, rng):
    draws = sample_x_batch(desk_hnig, 1.0, rng, 100_000)
    np.testing.assert_allclose(draws.mean(axis=0), [0.5, 0.0], atol=0.02)
    np.testing.assert_allclose(np.cov(draws.T), [[1.25, 0.0], [0.0, 0.5]], atol=0.05)


def test_single_draw_has_the_layout(desk_hnig, rng):
    assert sample_x(desk_hnig, 1.0, rng).layout == desk_hnig.layout
    with pytest.raises(DomainError):
        sample_x(desk_hnig, 0.0, rng)


def test_paths_start_at_zero(desk_hnig, rng):
    paths = simulate_path_batch(desk_hnig, [0.0, 0.5, 1.0], rng, 10)
    assert paths.shape == (10, 3, 2)
    np.testing.assert_array_equal(paths[:, 0], 0)
    assert len(simulate_path(desk_hnig, [0.5, 1.0], rng)) == 2


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [-1.0, 1.0], [0.5, 0.5]])
def test_paths_need_increasing_grids(desk_hnig, rng, grid):
    with pytest.raises(DomainError):
        simulate_path_batch(desk_hnig, grid, rng, 1)


def test_path_increments_are_stationary(desk_hnig, rng):
    paths = simulate_path_batch(desk_hnig, [1.0, 2.0], rng, 50_000)
    increments = paths[:, 1] - paths[:, 0]
    np.testing.assert_allclose(increments.mean(axis=0), [0.5, 0.0], atol=0.03)
    assert np.var(paths[:, 1, 1]) == pytest.approx(1.0, rel=0.05)


def test_path_increments_have_the_law_of_the_process(desk_hnig):
    direction = np.array([0.6, 0.8])
    paths = simulate_path_batch(desk_hnig, [0.0, 1.0, 2.0], np.random.default_rng(21), 20_000)
    increments = (paths[:, 2] - paths[:, 1]) @ direction
    fresh = sample_x_batch(desk_hnig, 1.0, np.random.default_rng(22), 20_000) @ direction
    _, pvalue = ks_two_sample(increments, fresh)
    assert pvalue > 1e-3


# -------------------------------------------------------------------------------------------------
# Classification
# -------------------------------------------------------------------------------------------------

def centred_jump_base():
    return BaseProcessSpec(TruncatedVector.from_components([[0.0]]),
                           CovOperator.from_eigenvalues([[0.0]]),
                           (BaseJumps(1.0, PointMassJumps([[-1.0], [1.0]])),))


@pytest.mark.parametrize("spec, case", [
    (hnig(b=(0.5, 0.0)), IntegrabilityCase.SQUARE_INTEGRABLE),
    (hnig(), IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE),
    (hnig(s=0.0, b=(1.0, 0.0)), IntegrabilityCase.THETA_TRIVIAL),
    (hnig(c=0.0, q=[[0.0, 0.0]]), IntegrabilityCase.L_TRIVIAL),
    (hnig(c=0.0), IntegrabilityCase.NOT_INTEGRABLE),
    (hnig(c=0.0, b=(1.0, 0.0)), IntegrabilityCase.NOT_INTEGRABLE),
    (stable(2.0), IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE),
    (stable(1.5), IntegrabilityCase.MEAN_ZERO_INTEGRABLE),
    (stable(1.0), IntegrabilityCase.NOT_INTEGRABLE),
    (hvg(a=2.0, b=(1.0, 0.0)), IntegrabilityCase.SQUARE_INTEGRABLE),
    (SubordinatedProcessSpec(centred_jump_base(),
                             SubordinatorSpec(np.zeros(1), one_sided_stable(0.5))),
     IntegrabilityCase.UNDETERMINED),
])
def test_classification_cases(spec, case):
    assert classify_integrability(spec).cases() == [case]


def test_global_flags():
    report = classify_integrability(stable(1.5))
    assert report.x_integrable
    assert report.x_mean_zero
    assert not report.x_square_integrable
    assert "mean zero" in report.summary()

    undetermined = classify_integrability(SubordinatedProcessSpec(
        centred_jump_base(), SubordinatorSpec(np.zeros(1), one_sided_stable(0.5))))
    assert undetermined.x_integrable is None
    assert undetermined.x_mean_zero is None
    assert "undetermined" in undetermined.summary()


def test_classification_of_several_components():
    base = BaseProcessSpec.gaussian(TruncatedVector.from_components([[1.0], [0.0]]),
                                    CovOperator.from_eigenvalues([[1.0], [1.0]]))
    spec = SubordinatedProcessSpec(base, SubordinatorSpec(np.zeros(2), gamma([1.0, 1.0])))
    report = classify_integrability(spec)
    assert report.cases() == [IntegrabilityCase.SQUARE_INTEGRABLE,
                              IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE]
    assert report.x_square_integrable
    assert not report.x_mean_zero
    assert report.to_dict()["components"][1]["case"] == "mean_zero_square_integrable_case2"


def test_stable_subordination():
    assert classify_stable_subordination(1.5, SubordinatorSpec(np.zeros(1), gamma(1.0)))
    assert not classify_stable_subordination(1.5, SubordinatorSpec(np.zeros(1),
                                                                   one_sided_stable(0.5)))
    assert classify_stable_subordination(1.5, SubordinatorSpec(np.zeros(1), one_sided_stable(0.8)))
    assert not classify_stable_subordination(1.0, SubordinatorSpec(np.zeros(1), gamma(1.0)))
    assert classify_stable_subordination(0.5, SubordinatorSpec.zero(1))
    with pytest.raises(DomainError):
        classify_stable_subordination(2.5, SubordinatorSpec.zero(1))


# -------------------------------------------------------------------------------------------------
# Moments
# -------------------------------------------------------------------------------------------------

def test_hnig_moments(desk_hnig):
    np.testing.assert_allclose(mean_of_x(desk_hnig).values, [0.5, 0.0])
    np.testing.assert_allclose(cov_operator_of_x(desk_hnig).to_matrix(), [[1.25, 0.0], [0.0, 0.5]])


def test_hvg_moments():
    spec = hvg(a=2.0, b=(1.0, 0.0))
    np.testing.assert_allclose(mean_of_x(spec).values, [2.0, 0.0])
    np.testing.assert_allclose(cov_operator_of_x(spec).to_matrix(), [[4.0, 0.0], [0.0, 1.0]])


def test_moments_of_trivial_parts():
    np.testing.assert_array_equal(mean_of_x(hnig(s=0.0, b=(1.0, 0.0))).values, 0)
    np.testing.assert_array_equal(mean_of_x(hnig(c=0.0, q=[[0.0, 0.0]])).values, 0)
    np.testing.assert_array_equal(cov_operator_of_x(hnig(c=0.0, q=[[0.0, 0.0]])).to_matrix(), 0)


def test_moments_raise_with_the_classification():
    with pytest.raises(NotIntegrableError) as error:
        mean_of_x(hnig(c=0.0))
    assert error.value.report.cases() == [IntegrabilityCase.NOT_INTEGRABLE]
    with pytest.raises(NotSquareIntegrableError) as error:
        cov_operator_of_x(stable(1.5))
    assert error.value.report.x_integrable
    np.testing.assert_array_equal(mean_of_x(stable(1.5)).values, 0)


# -------------------------------------------------------------------------------------------------
# Triplet
# -------------------------------------------------------------------------------------------------

def test_triplet_of_a_drifting_clock():
    spec = stable(2.0)
    triplet = subordinated_triplet(spec)
    np.testing.assert_array_equal(triplet.beta.values, 0)
    np.testing.assert_allclose(triplet.gamma.eigenvalues, [2.0, 1.0])
    assert triplet.converged
    assert triplet.levy_measure.tail_mass(1.0) == (0.0, 0.0)
    assert not triplet.levy_measure.has_mixture


def test_triplet_drift_of_a_symmetric_process():
    triplet = subordinated_triplet(hnig())
    np.testing.assert_array_equal(triplet.beta.values, 0)
    np.testing.assert_array_equal(triplet.gamma.eigenvalues, 0)


def test_triplet_scales_the_base_with_the_clock_drift():
    layout = SpaceLayout((1,))
    base = BaseProcessSpec(TruncatedVector(layout, np.array([1.0])),
                           CovOperator.from_eigenvalues([[2.0]]),
                           (BaseJumps(2.0, PointMassJumps([[3.0]])),))
    spec = SubordinatedProcessSpec(base, SubordinatorSpec.pure_drift([0.5]))
    triplet = subordinated_triplet(spec)
    np.testing.assert_allclose(triplet.beta.values, [0.5])
    np.testing.assert_allclose(triplet.gamma.eigenvalues, [1.0])
    assert triplet.levy_measure.tail_mass(2.0) == (pytest.approx(1.0), 0.0)
    assert triplet.levy_measure.tail_mass(4.0) == (pytest.approx(0.0), 0.0)
    mean, _ = triplet.levy_measure.large_jump_mean()
    np.testing.assert_allclose(mean, [3.0])
    with pytest.raises(DomainError):
        triplet.levy_measure.tail_mass(0.0)


@pytest.mark.slow
def test_triplet_drift_matches_the_mean():
    spec = hnig(b=(0.5, 0.0))
    triplet = subordinated_triplet(spec)
    large, large_error = triplet.levy_measure.large_jump_mean()
    tolerance = 5 * (triplet.beta_standard_error + large_error) + 1e-3
    assert np.all(np.abs(triplet.beta.values + large - [0.5, 0.0]) <= tolerance)


def test_tail_mass_under_an_exponential_compound_clock():
    layout = SpaceLayout((1,))
    base = BaseProcessSpec.gaussian(TruncatedVector(layout, np.zeros(1)),
                                    CovOperator.from_eigenvalues([[1.0]]))
    clock = SubordinatorSpec([0.0], CompoundPoissonJumps(1.0, ExponentialJumps([1.0])))
    measure = SubordinatedLevyMeasure(SubordinatedProcessSpec(base, clock), QuadratureConfig())
    r = 0.5
    exact, _ = integrate.quad(
        lambda theta: 2.0 * stats.norm.sf(r / np.sqrt(theta)) * np.exp(-theta), 0.0, np.inf)
    assert exact == pytest.approx(0.49307, abs=2e-5)
    tail, error = measure.tail_mass(r)
    assert 0.0 < error < 2e-3
    assert abs(tail - exact) <= 5 * error + 1e-4


@pytest.mark.slow
def test_symmetric_halfspaces_split_the_tail():
    spec = hnig(q=[[1.0]], b=(0.0,))
    measure = subordinated_triplet(spec).levy_measure
    tail, error = measure.tail_mass(1.0)
    right, _ = measure.halfspace_mass([1.0], 1.0)
    left, _ = measure.halfspace_mass([-1.0], 1.0)
    assert right == pytest.approx(left)
    assert tail == pytest.approx(2.0 * right, abs=5 * error + 1e-3)
