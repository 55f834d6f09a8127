"""The independent base Lévy processes L_1, ..., L_d on the truncated component spaces.

Component j has the characteristics (b_j, Q_j, nu_j) with respect to the truncation
chi(x) = x 1{|x| <= 1}; its jump part nu_j is compound Poisson, rate lambda_j times a jump law.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from hilbertlevy.errors import DomainError, LayoutMismatchError, NotIntegrableError
from hilbertlevy.jumps import JumpLaw
from hilbertlevy.space import CovOperator, TruncatedVector


# Norms below this count as zero when deciding whether a component is centred.
MEAN_ZERO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BaseJumps:
    """Compound Poisson jump part of a single component.

    Parameters
    ----------
    rate : `float`
        Jump intensity lambda_j > 0.
    law : `JumpLaw`
        Distribution of the jumps on H_j.

    """
    rate: float
    law: JumpLaw

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"Jump rate must be positive, got {self.rate}")
        if not self.law.moment_finite(2):
            raise NotIntegrableError("Base jump laws must be square integrable")

    def large_jump_mean(self):
        """int_{|x|>1} x nu_j(dx)."""
        return self.rate * self.law.large_jump_mean()

    def compensator(self):
        """int chi(x) nu_j(dx)."""
        return self.rate * self.law.truncated_mean()


@dataclass(frozen=True, eq=False)
class BaseProcessSpec:
    """The characteristics of L = (L_1, ..., L_d).

    Parameters
    ----------
    drift : `TruncatedVector`
        The drift b = (b_1, ..., b_d) relative to the truncation chi.
    covariance : `CovOperator`
        The Gaussian covariance Q = Q_1 x ... x Q_d.
    jumps : `Tuple[Optional[BaseJumps], ...]`, optional
        Per component the compound Poisson part, `None` where L_j is continuous.

    """
    drift: TruncatedVector
    covariance: CovOperator
    jumps: Optional[Tuple[Optional[BaseJumps], ...]] = None

    def __post_init__(self):
        self.drift.layout.check(self.covariance.layout)
        jumps = self.jumps if self.jumps is not None else (None,) * self.layout.d
        jumps = tuple(jumps)
        if len(jumps) != self.layout.d:
            raise LayoutMismatchError(
                f"Expected {self.layout.d} jump parts, got {len(jumps)}")
        for j, part in enumerate(jumps):
            if part is not None and part.law.dim != self.layout.dims[j]:
                raise LayoutMismatchError(
                    f"Jump law of component {j} has dimension {part.law.dim}, "
                    f"expected {self.layout.dims[j]}")
        object.__setattr__(self, "jumps", jumps)

    @classmethod
    def gaussian(cls, drift, covariance):
        """A Brownian motion with drift."""
        return cls(drift, covariance)

    @property
    def layout(self):
        return self.drift.layout

    @property
    def d(self):
        return self.layout.d

    @property
    def is_gaussian(self):
        return all(part is None for part in self.jumps)

    def component_gaussian(self):
        return np.array([part is None for part in self.jumps])

    def component_means(self):
        """Flat coefficients of E L(1) = b + int_{|x|>1} x nu(dx)."""
        values = self.drift.values.copy()
        for sl, part in zip(self.layout.blocks(), self.jumps):
            if part is not None:
                values[sl] += part.large_jump_mean()
        return values

    def component_mean_zero(self):
        means = self.layout.component_norms(self.component_means())
        return means <= MEAN_ZERO_TOLERANCE

    def component_trivial(self):
        """Per component whether L_j = 0 almost surely."""
        drift_zero = self.layout.component_norms(self.drift.values) == 0
        cov_zero = self.covariance.component_traces() == 0
        return drift_zero & cov_zero & self.component_gaussian()

    def component_variances(self):
        """tr Cov(L_j(1)) = tr Q_j + int |x|^2 nu_j(dx)."""
        variances = self.covariance.component_traces()
        for j, part in enumerate(self.jumps):
            if part is not None:
                variances[j] += part.rate * part.law.second_moment()
        return variances


class BaseExponent(NamedTuple):
    """Per-component exponents phi_j(u_j) and their sum, the exponent of L."""
    components: np.ndarray
    total: complex


@dataclass(frozen=True)
class GrowthBoundConstants:
    """Constants of E|L(theta)| <= |theta| c1 + |theta|^{1/2} c2.

    ``c_chi`` bounds |E chi(L(theta))| <= |theta| c_chi, and ``martingale`` is the constant C with
    E|L(theta)| <= |theta|^{1/2} C when L is centred.
    """
    c1: float
    c2: float
    c_chi: float
    martingale: Optional[float] = None

    def bound(self, theta):
        size = float(np.linalg.norm(theta))
        return size * self.c1 + np.sqrt(size) * self.c2


def component_exponents(spec, values):
    """phi_j(u_j) for flat coefficients of shape ``(..., total_dim)``, returned as ``(..., d)``."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != spec.layout.total_dim:
        raise LayoutMismatchError(
            f"Expected {spec.layout.total_dim} coefficients, got {values.shape[-1]}")
    quad = spec.covariance.component_quadratic_forms(values)
    phis = []
    for j, (sl, part) in enumerate(zip(spec.layout.blocks(), spec.jumps)):
        u_j = values[..., sl]
        phi = 1j * (u_j @ spec.drift.values[sl]) - 0.5 * quad[..., j]
        if part is not None:
            phi = phi + part.rate * (part.law.characteristic(u_j) - 1.0
                                     - 1j * (u_j @ part.law.truncated_mean()))
        phis.append(phi)
    return np.stack(phis, axis=-1)


def levy_exponent_base(spec, u):
    """The exponents phi_j(u_j) of the base components.

    Parameters
    ----------
    spec : `BaseProcessSpec`
    u : `TruncatedVector`

    Returns
    -------
    `BaseExponent`

    """
    spec.layout.check(u.layout)
    phis = component_exponents(spec, u.values)
    return BaseExponent(phis, complex(phis.sum()))


def _check_thetas(spec, thetas):
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[None, :]
    if thetas.ndim != 2 or thetas.shape[1] != spec.d:
        raise LayoutMismatchError(f"theta must have {spec.d} components, got {thetas.shape}")
    if np.any(thetas < 0):
        raise DomainError("The base process is evaluated at nonnegative times only")
    return thetas


def _draw_parts(spec, thetas, rng):
    """Deterministic-plus-jump part and Gaussian part of L(theta) for every row of ``thetas``.

    Each component draws from its own child stream.
    """
    n_rows = thetas.shape[0]
    shift = np.zeros((n_rows, spec.layout.total_dim))
    noise = np.zeros((n_rows, spec.layout.total_dim))
    streams = rng.spawn(spec.d)
    for j, (sl, part, stream) in enumerate(zip(spec.layout.blocks(), spec.jumps, streams)):
        theta_j = thetas[:, j]
        shift[:, sl] = theta_j[:, None] * spec.drift.values[sl]
        normals = stream.standard_normal((n_rows, sl.stop - sl.start))
        noise[:, sl] = np.sqrt(theta_j)[:, None] * normals
        if part is not None:
            counts = stream.poisson(part.rate * theta_j)
            jumps = part.law.sample(stream, int(counts.sum()))
            block = shift[:, sl]
            np.add.at(block, np.repeat(np.arange(n_rows), counts), jumps)
            shift[:, sl] = block - theta_j[:, None] * part.compensator()
    return shift, spec.covariance.sqrt_apply(noise)


def sample_base_batch(spec, thetas, rng):
    """Exact draws of L(theta), one per row of ``thetas``; shape ``(N, total_dim)``."""
    thetas = _check_thetas(spec, thetas)
    shift, noise = _draw_parts(spec, thetas, rng)
    return shift + noise


def sample_base_at(spec, theta, rng):
    """An exact draw of L(theta) = (L_1(theta_1), ..., L_d(theta_d)).

    Parameters
    ----------
    spec : `BaseProcessSpec`
    theta : array_like
        Nonnegative times, one per component.
    rng : `numpy.random.Generator`

    Returns
    -------
    `TruncatedVector`

    """
    return TruncatedVector(spec.layout, sample_base_batch(spec, theta, rng)[0])


def truncate(values):
    """chi(x) = x 1{|x| <= 1} applied row-wise."""
    values = np.asarray(values, dtype=float)
    return values * (np.linalg.norm(values, axis=-1) <= 1.0)[..., None]


def expected_truncation(spec, theta, rng, size):
    """Monte Carlo E chi(L(theta)) with antithetic Gaussian draws.

    Returns
    -------
    mean : `numpy.ndarray`
    standard_error : `numpy.ndarray`

    """
    thetas = _check_thetas(spec, theta)
    pairs = max(size // 2, 2)
    shift, noise = _draw_parts(spec, np.repeat(thetas, pairs, axis=0), rng)
    paired = 0.5 * (truncate(shift + noise) + truncate(shift - noise))
    return paired.mean(axis=0), paired.std(axis=0, ddof=1) / np.sqrt(pairs)


def mean_of_base(spec):
    """E L(1) = b + int_{|x|>1} x nu(dx)."""
    return TruncatedVector(spec.layout, spec.component_means())


def cov_of_base(spec):
    """Cov L(1) = Q + int x (x) x nu(dx), block diagonal over the components."""
    if spec.is_gaussian:
        return spec.covariance
    matrices = []
    for j, part in enumerate(spec.jumps):
        matrix = spec.covariance.component_matrix(j)
        if part is not None:
            matrix = matrix + part.rate * part.law.second_moment_matrix()
        matrices.append(matrix)
    return CovOperator.from_matrices(matrices)


def growth_function_bound(spec):
    """Constants bounding the growth function f(theta) = E|L(theta)|.

    c1 = |b| + int_{|x|>1} |x| nu(dx) and c2 = (tr Q + int_{|x|<=1} |x|^2 nu(dx))^{1/2}. For a
    centred L the martingale constant (tr Q + int |x|^2 nu(dx))^{1/2} is also reported.
    """
    large = 0.0
    small = spec.covariance.trace()
    for part in spec.jumps:
        if part is not None:
            if not part.law.moment_finite(1):
                raise NotIntegrableError("The base jump part has no first moment")
            large += part.rate * part.law.large_jump_abs_mean()
            small += part.rate * part.law.small_second_moment()
    mean = np.linalg.norm(spec.component_means())
    variance = float(spec.component_variances().sum())
    martingale = np.sqrt(variance) if spec.component_mean_zero().all() else None
    return GrowthBoundConstants(
        c1=float(spec.drift.norm() + large),
        c2=float(np.sqrt(small)),
        c_chi=float(max(1.0, mean + variance + mean ** 2)),
        martingale=martingale,
    )


def martingale_moment_bound(spec, alpha):
    """K with E|L(theta)|^alpha <= |theta|^{alpha/2} K for centred L and alpha in (0, 2].

    K = (tr Q + int |x|^2 nu(dx))^{alpha/2}.
    """
    if not 0 < alpha <= 2:
        raise DomainError(f"Moment order must lie in (0, 2], got {alpha}")
    if not spec.component_mean_zero().all():
        raise DomainError("The martingale bound needs a centred base process")
    return float(spec.component_variances().sum() ** (alpha / 2.0))
