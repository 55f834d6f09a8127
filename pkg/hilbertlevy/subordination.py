"""Subordinated processes X(t) = L(Theta(t)).

Composition of the Lévy exponent, exact sampling of values and paths, the characteristics
(beta, Gamma, mu) of X, its first two moments and the classification of its integrability.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import logging
import numpy as np
from scipy import stats

from hilbertlevy import base as base_processes
from hilbertlevy import subordinators
from hilbertlevy.errors import (ConsistencyError, DomainError, LayoutMismatchError,
                                NotIntegrableError, NotSquareIntegrableError)
from hilbertlevy.quadrature import QuadratureConfig, integrate
from hilbertlevy.space import (CovOperator, OperatorSum, RankOneTensor, TruncatedVector, as_vector,
                               embed, scale_by_multiindex)


logger = logging.getLogger(__name__)

# Positive real parts of phi up to this size are rounding noise.
EXPONENT_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SubordinatedProcessSpec:
    """A base process together with an independent subordinator of matching dimension.

    Parameters
    ----------
    base : `hilbertlevy.base.BaseProcessSpec`
    subordinator : `hilbertlevy.subordinators.SubordinatorSpec`

    """
    base: base_processes.BaseProcessSpec
    subordinator: subordinators.SubordinatorSpec

    def __post_init__(self):
        if self.base.d != self.subordinator.d:
            raise LayoutMismatchError(
                f"Base process has {self.base.d} components, subordinator {self.subordinator.d}")

    @property
    def layout(self):
        return self.base.layout


# -------------------------------------------------------------------------------------------------
# Exponent and sampling
# -------------------------------------------------------------------------------------------------

def exponent_batch(spec, values):
    """rho(u) = psi(phi_1(u_1), ..., phi_d(u_d)) for flat arrays of shape ``(..., total_dim)``."""
    phis = base_processes.component_exponents(spec.base, values)
    slack = EXPONENT_SLACK * (1.0 + np.abs(phis))
    if np.any(phis.real > slack):
        raise ConsistencyError(f"Base exponent with positive real part: {phis}")
    phis = np.minimum(phis.real, 0.0) + 1j * phis.imag
    return subordinators.laplace_exponent(spec.subordinator, phis)


def subordinated_exponent(spec, u):
    """The Lévy exponent rho of X at ``u``.

    Parameters
    ----------
    spec : `SubordinatedProcessSpec`
    u : `hilbertlevy.space.TruncatedVector`

    Returns
    -------
    `complex`

    """
    spec.layout.check(u.layout)
    return complex(exponent_batch(spec, u.values))


def sample_x_batch(spec, t, rng, size):
    """``size`` independent draws of X(t), shape ``(size, total_dim)``."""
    if not t > 0:
        raise DomainError(f"Time must be positive, got {t}")
    thetas = subordinators.sample_increment(spec.subordinator, t, rng, size=size)
    return base_processes.sample_base_batch(spec.base, thetas, rng)


def sample_x(spec, t, rng):
    """An exact draw of X(t) = L(Theta(t))."""
    return TruncatedVector(spec.layout, sample_x_batch(spec, t, rng, 1)[0])


def _check_grid(times):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or times.shape[0] == 0:
        raise DomainError("A time grid needs at least one point")
    if times[0] < 0:
        raise DomainError(f"Time grids start at nonnegative times, got {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise DomainError("Time grid must be strictly increasing")
    return times


def simulate_path_batch(spec, times, rng, size):
    """``size`` paths sampled on the grid, shape ``(size, len(times), total_dim)``.

    Increments over (t_{k-1}, t_k] are independent draws of X(t_k - t_{k-1}), starting from
    X(0) = 0; a grid point at zero yields the zero vector.
    """
    times = _check_grid(times)
    steps = np.diff(np.concatenate(([0.0], times)))
    increments = np.zeros((size, times.shape[0], spec.layout.total_dim))
    for k, dt in enumerate(steps):
        if dt > 0:
            increments[:, k] = sample_x_batch(spec, dt, rng, size)
    return np.cumsum(increments, axis=1)


def simulate_path(spec, times, rng):
    """A single path: one `TruncatedVector` per grid point."""
    path = simulate_path_batch(spec, times, rng, 1)[0]
    return [TruncatedVector(spec.layout, values) for values in path]


# -------------------------------------------------------------------------------------------------
# Characteristics
# -------------------------------------------------------------------------------------------------

class SubordinatedLevyMeasure:
    """The Lévy measure mu of X, evaluated on test sets.

    mu(A) = sum_j a_{0,j} nu_j(eta_j^{-1} A) + int P(L(theta) in A) F(dtheta), the first part
    exactly, the mixture part by quadrature against F with Monte Carlo (or, for Gaussian bases
    and half-spaces, analytic) inner probabilities.

    Parameters
    ----------
    spec : `SubordinatedProcessSpec`
    config : `hilbertlevy.quadrature.QuadratureConfig`

    """

    def __init__(self, spec, config):
        self.__spec = spec
        self.__config = config
        self.__rays, self.__atoms = subordinators.rays_and_atoms(spec.subordinator)
        self.__variance = float(spec.base.component_variances().sum())
        self.__mean = float(np.linalg.norm(spec.base.component_means()))
        self.__tails: Dict[float, Tuple[float, float]] = {}

    @property
    def has_mixture(self):
        return bool(self.__rays) or self.__atoms is not None

    def __drift_jumps(self, evaluate):
        total = 0.0
        for a0, part in zip(self.__spec.subordinator.drift, self.__spec.base.jumps):
            if part is not None and a0 > 0:
                total += a0 * part.rate * evaluate(part.law)
        return total

    def __mixture(self, integrand, lipschitz, label):
        if not self.has_mixture:
            return 0.0, 0.0
        result = integrate(integrand, self.__rays, self.__atoms, self.__config, lipschitz, label)
        return float(result.value), float(result.standard_error)

    def __probability(self, predicate):
        size = self.__config.mc_samples

        def integrand(theta, rng):
            draws = base_processes.sample_base_batch(
                self.__spec.base, np.broadcast_to(theta, (size, theta.shape[0])), rng)
            p = float(np.mean(predicate(draws)))
            return p, np.sqrt(p * (1.0 - p) / size)
        return integrand

    def tail_mass(self, r):
        """mu({x : |x| > r}) and its standard error, for r > 0."""
        if not r > 0:
            raise DomainError(f"Tail radius must be positive, got {r}")
        if r not in self.__tails:
            exact = self.__drift_jumps(lambda law: law.prob_norm_exceeds(r))
            integrand = self.__probability(lambda x: np.linalg.norm(x, axis=1) > r)
            lipschitz = (self.__variance + self.__mean ** 2) / r ** 2
            mixture, error = self.__mixture(integrand, lipschitz, f"mu(|x| > {r})")
            self.__tails[r] = (exact + mixture, error)
        return self.__tails[r]

    def halfspace_mass(self, w, c):
        """mu({x : <w|x> > c}) and its standard error, for c > 0."""
        spec = self.__spec
        w = as_vector(spec.layout, w)
        if not c > 0:
            raise DomainError(f"Half-spaces must stay away from the origin, got c={c}")
        exact = 0.0
        for j, (a0, part) in enumerate(zip(spec.subordinator.drift, spec.base.jumps)):
            if part is not None and a0 > 0:
                exact += a0 * part.rate * part.law.prob_halfspace(w.component(j), c)

        if spec.base.is_gaussian:
            shifts = np.array([w.component(j) @ spec.base.drift.component(j)
                               for j in range(spec.base.d)])
            spreads = spec.base.covariance.component_quadratic_forms(w.values)

            def integrand(theta, rng):
                scale = np.sqrt(theta @ spreads)
                if scale == 0.0:
                    return float(theta @ shifts > c), 0.0
                return float(stats.norm.sf(c, loc=theta @ shifts, scale=scale)), 0.0
        else:
            integrand = self.__probability(lambda x: x @ w.values > c)
        lipschitz = (self.__variance + self.__mean ** 2) * (w.norm() / c) ** 2
        mixture, error = self.__mixture(integrand, lipschitz, "mu(half-space)")
        return exact + mixture, error

    def large_jump_mean(self):
        """int_{|x|>1} x mu(dx) with its standard error.

        Computed by quadrature of E[L(theta) 1{|L(theta)|>1}].
        """
        spec = self.__spec
        values = np.zeros(spec.layout.total_dim)
        for sl, a0, part in zip(spec.layout.blocks(), spec.subordinator.drift, spec.base.jumps):
            if part is not None and a0 > 0:
                values[sl] += a0 * part.large_jump_mean()
        if not self.has_mixture:
            return values, np.zeros_like(values)
        size = self.__config.mc_samples

        def integrand(theta, rng):
            draws = base_processes.sample_base_batch(
                spec.base, np.broadcast_to(theta, (size, theta.shape[0])), rng)
            large = draws * (np.linalg.norm(draws, axis=1) > 1.0)[:, None]
            return large.mean(axis=0), large.std(axis=0, ddof=1) / np.sqrt(size)
        result = integrate(integrand, self.__rays, self.__atoms, self.__config,
                           self.__variance + self.__mean ** 2, "large jump mean")
        return values + result.value, result.standard_error


@dataclass(frozen=True, eq=False)
class SubordinatedTriplet:
    """The characteristics (beta, Gamma, mu) of X with respect to chi.

    Parameters
    ----------
    beta : `hilbertlevy.space.TruncatedVector`
    beta_standard_error : `numpy.ndarray`
        Monte Carlo standard error of every coefficient of beta.
    gamma : `hilbertlevy.space.CovOperator`
        Gamma = a_0 Q.
    levy_measure : `SubordinatedLevyMeasure`
    converged : `bool`
        Whether the quadrature for beta converged.

    """
    beta: TruncatedVector
    beta_standard_error: np.ndarray
    gamma: CovOperator
    levy_measure: SubordinatedLevyMeasure
    converged: bool = True


def subordinated_triplet(spec, config=None):
    """The characteristics of X: beta = a_0 b + int E chi(L(theta)) F(dtheta), Gamma = a_0 Q and mu.

    Parameters
    ----------
    spec : `SubordinatedProcessSpec`
    config : `hilbertlevy.quadrature.QuadratureConfig`, optional

    Returns
    -------
    `SubordinatedTriplet`

    """
    config = config or QuadratureConfig()
    a0 = spec.subordinator.drift
    beta = scale_by_multiindex(a0, spec.base.drift).values
    error = np.zeros(spec.layout.total_dim)
    converged = True
    rays, atoms = subordinators.rays_and_atoms(spec.subordinator)
    if rays or atoms is not None:
        constants = base_processes.growth_function_bound(spec.base)

        def integrand(theta, rng):
            return base_processes.expected_truncation(spec.base, theta, rng, config.mc_samples)
        result = integrate(integrand, rays, atoms, config, constants.c_chi, "beta")
        beta = beta + result.value
        error = result.standard_error
        converged = result.converged
    logger.debug("Triplet drift %s (standard error %s)", beta, error)
    return SubordinatedTriplet(
        beta=TruncatedVector(spec.layout, beta),
        beta_standard_error=np.broadcast_to(error, beta.shape).copy(),
        gamma=spec.base.covariance.scaled(a0),
        levy_measure=SubordinatedLevyMeasure(spec, config),
        converged=converged,
    )


# -------------------------------------------------------------------------------------------------
# Integrability
# -------------------------------------------------------------------------------------------------

class IntegrabilityCase(Enum):
    """How component X_j relates to its moments."""
    SQUARE_INTEGRABLE = "square_integrable_case1"
    MEAN_ZERO_SQUARE_INTEGRABLE = "mean_zero_square_integrable_case2"
    THETA_TRIVIAL = "theta_trivial_case3"
    L_TRIVIAL = "L_trivial_case4"
    INTEGRABLE_ONLY = "integrable_only"
    MEAN_ZERO_INTEGRABLE = "mean_zero_integrable"
    NOT_INTEGRABLE = "not_integrable"
    UNDETERMINED = "undetermined"

    @property
    def square_integrable(self):
        return self in _SQUARE_INTEGRABLE

    @property
    def integrable(self):
        """`Optional[bool]`: `None` when it cannot be decided."""
        if self is IntegrabilityCase.UNDETERMINED:
            return None
        return self is not IntegrabilityCase.NOT_INTEGRABLE

    @property
    def mean_zero(self):
        """`Optional[bool]`: Whether X_j is integrable with E X_j = 0."""
        if self is IntegrabilityCase.UNDETERMINED:
            return None
        return self in _MEAN_ZERO

    @property
    def description(self):
        return _DESCRIPTIONS[self]


_SQUARE_INTEGRABLE = (IntegrabilityCase.SQUARE_INTEGRABLE,
                      IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE,
                      IntegrabilityCase.THETA_TRIVIAL,
                      IntegrabilityCase.L_TRIVIAL)

_MEAN_ZERO = (IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE,
              IntegrabilityCase.THETA_TRIVIAL,
              IntegrabilityCase.L_TRIVIAL,
              IntegrabilityCase.MEAN_ZERO_INTEGRABLE)

_DESCRIPTIONS = {
    IntegrabilityCase.SQUARE_INTEGRABLE: "square integrable, case (1)",
    IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE: "square integrable and mean zero, case (2)",
    IntegrabilityCase.THETA_TRIVIAL: "square integrable, case (3): Θ = 0 a.s.",
    IntegrabilityCase.L_TRIVIAL: "square integrable, case (4): L = 0 a.s.",
    IntegrabilityCase.INTEGRABLE_ONLY: "integrable, not square integrable",
    IntegrabilityCase.MEAN_ZERO_INTEGRABLE: "integrable and mean zero, not square integrable",
    IntegrabilityCase.NOT_INTEGRABLE: "not integrable",
    IntegrabilityCase.UNDETERMINED: "integrability undetermined",
}

SQUARE_INTEGRABILITY = "square integrability characterisation"
INTEGRABILITY = "integrability characterisation"
MARTINGALE_CRITERION = "mean zero criterion: centred square integrable L with E|Θ(1)|^(1/2) < ∞"
GAUSSIAN_CRITERION = "centred Gaussian L: integrable iff E|Θ(1)|^(1/2) < ∞"
OPEN_CASE = ("centred non-Gaussian L with E|Θ(1)|^(1/2) = ∞: necessity of the square root "
             "moment is not known")


@dataclass(frozen=True)
class ComponentClassification:
    component: int
    case: IntegrabilityCase
    governing_result: str

    def to_dict(self):
        return {"component": self.component, "case": self.case.value,
                "description": self.case.description, "governing_result": self.governing_result}


def _conjunction(flags):
    if any(flag is False for flag in flags):
        return False
    if any(flag is None for flag in flags):
        return None
    return True


@dataclass(frozen=True)
class IntegrabilityReport:
    """Per-component integrability cases and the resulting global flags.

    The global flags are conjunctions of the component flags: `True`, `False`, or `None` when
    some component is undetermined and none decides the answer.
    """
    components: Tuple[ComponentClassification, ...]
    x_integrable: Optional[bool] = field(init=False)
    x_mean_zero: Optional[bool] = field(init=False)
    x_square_integrable: bool = field(init=False)

    def __post_init__(self):
        cases = [c.case for c in self.components]
        object.__setattr__(self, "x_integrable", _conjunction([c.integrable for c in cases]))
        object.__setattr__(self, "x_mean_zero", _conjunction([c.mean_zero for c in cases]))
        object.__setattr__(self, "x_square_integrable",
                           all(c.square_integrable for c in cases))

    def cases(self):
        return [c.case for c in self.components]

    def summary(self):
        """One line per component followed by the global verdict."""
        lines = [f"component {c.component}: {c.case.description} [{c.governing_result}]"
                 for c in self.components]
        if self.x_square_integrable:
            verdict = "X is square integrable"
        elif self.x_integrable:
            verdict = "X is integrable, not square integrable"
        elif self.x_integrable is None:
            verdict = "integrability of X is undetermined"
        else:
            verdict = "X is not integrable"
        if self.x_mean_zero:
            verdict += " and mean zero"
        lines.append(verdict)
        return "\n".join(lines)

    def to_dict(self):
        return {
            "components": [c.to_dict() for c in self.components],
            "x_integrable": self.x_integrable,
            "x_mean_zero": self.x_mean_zero,
            "x_square_integrable": self.x_square_integrable,
        }


def _classify_component(j, base, theta_trivial, l_trivial, mean_zero, finite):
    if theta_trivial[j]:
        return ComponentClassification(j, IntegrabilityCase.THETA_TRIVIAL, SQUARE_INTEGRABILITY)
    if l_trivial[j]:
        return ComponentClassification(j, IntegrabilityCase.L_TRIVIAL, SQUARE_INTEGRABILITY)
    if mean_zero[j] and finite[1.0][j]:
        return ComponentClassification(
            j, IntegrabilityCase.MEAN_ZERO_SQUARE_INTEGRABLE, SQUARE_INTEGRABILITY)
    if finite[2.0][j]:
        return ComponentClassification(j, IntegrabilityCase.SQUARE_INTEGRABLE, SQUARE_INTEGRABILITY)
    if finite[1.0][j]:
        return ComponentClassification(j, IntegrabilityCase.INTEGRABLE_ONLY, INTEGRABILITY)
    if not mean_zero[j]:
        return ComponentClassification(j, IntegrabilityCase.NOT_INTEGRABLE, INTEGRABILITY)
    if finite[0.5][j]:
        return ComponentClassification(
            j, IntegrabilityCase.MEAN_ZERO_INTEGRABLE, MARTINGALE_CRITERION)
    if base.component_gaussian()[j]:
        return ComponentClassification(j, IntegrabilityCase.NOT_INTEGRABLE, GAUSSIAN_CRITERION)
    return ComponentClassification(j, IntegrabilityCase.UNDETERMINED, OPEN_CASE)


def classify_integrability(spec):
    """Decide integrability of X from closed-form moment flags; never from samples.

    Parameters
    ----------
    spec : `SubordinatedProcessSpec`

    Returns
    -------
    `IntegrabilityReport`

    """
    finite = {p: subordinators.moment_finite(spec.subordinator, p) for p in (0.5, 1.0, 2.0)}
    theta_trivial = spec.subordinator.component_trivial()
    l_trivial = spec.base.component_trivial()
    mean_zero = spec.base.component_mean_zero()
    components = tuple(
        _classify_component(j, spec.base, theta_trivial, l_trivial, mean_zero, finite)
        for j in range(spec.base.d))
    return IntegrabilityReport(components)


def classify_stable_subordination(alpha, subordinator):
    """Integrability of a strictly alpha-stable base subordinated by ``subordinator``.

    For alpha in (1, 2] X is integrable iff E|Theta(1)|^{1/alpha} < infinity; for alpha <= 1 the
    base itself has no first moment, so only a trivial subordinator gives an integrable X.
    """
    if not 0 < alpha <= 2:
        raise DomainError(f"Stability index must lie in (0, 2], got {alpha}")
    active = ~subordinator.component_trivial()
    if not active.any():
        return True
    if alpha <= 1:
        return False
    flags = subordinators.moments(subordinator, alpha).one_over_alpha_moment_finite
    return bool(np.all(flags[active]))


# -------------------------------------------------------------------------------------------------
# Moments
# -------------------------------------------------------------------------------------------------

def _theta_means(spec, report):
    """E Theta_j(1), with zero where L_j vanishes so that products stay finite."""
    means = subordinators.moments(spec.subordinator).mean.copy()
    for c in report.components:
        if c.case is IntegrabilityCase.L_TRIVIAL:
            means[c.component] = 0.0
    return means


def mean_of_x(spec):
    """E X(1) = (E Theta_j(1) E L_j(1))_j.

    Raises
    ------
    `hilbertlevy.errors.NotIntegrableError`
        Carrying the classification if X is not known to be integrable.

    """
    report = classify_integrability(spec)
    if not report.x_integrable:
        raise NotIntegrableError(f"X is not integrable:\n{report.summary()}", report)
    means = _theta_means(spec, report)
    values = np.zeros(spec.layout.total_dim)
    base_means = spec.base.component_means()
    for c, sl in zip(report.components, spec.layout.blocks()):
        if not c.case.mean_zero:
            values[sl] = means[c.component] * base_means[sl]
    return TruncatedVector(spec.layout, values)


def cov_operator_of_x(spec):
    """Cov X(1) = E Theta(1) Cov L(1) + sum_{i,j} Cov(Theta(1))_{ij} E L_i(1) (x) E L_j(1).

    Returns
    -------
    `hilbertlevy.space.OperatorSum`

    Raises
    ------
    `hilbertlevy.errors.NotSquareIntegrableError`

    """
    report = classify_integrability(spec)
    if not report.x_square_integrable:
        raise NotSquareIntegrableError(f"X is not square integrable:\n{report.summary()}", report)
    means = _theta_means(spec, report)
    diagonal = base_processes.cov_of_base(spec.base).scaled(means)

    covariance = subordinators.moments(spec.subordinator).covariance
    base_means = spec.base.component_means()
    drifting = [j for j in range(spec.base.d) if not spec.base.component_mean_zero()[j]
                and not report.components[j].case.mean_zero]
    terms = []
    for i in drifting:
        for j in drifting:
            weight = float(covariance[i, j])
            if weight != 0.0:
                assert np.isfinite(weight), "square integrable components have finite covariance"
                terms.append((weight, RankOneTensor(
                    embed(spec.layout, i, base_means[spec.layout.block(i)]),
                    embed(spec.layout, j, base_means[spec.layout.block(j)]))))
    return OperatorSum(diagonal, tuple(terms))
