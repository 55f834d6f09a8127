"""d-variate subordinators: Laplace exponents, Lévy measures, exact samplers and moments.

A subordinator is described by a drift a_0 in R_+^d and a jump part whose Lévy measure F lives on
R_+^d. F is assembled from one-dimensional pieces ("rays" theta = z * direction, z > 0, carrying a
univariate Lévy density) and, for compound Poisson parts whose law is not a ray, finitely many
weighted points (`AtomRule`). Point-mass laws give exact rules; other laws give a sampled rule whose
spread the quadrature reports as Monte Carlo error.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special

from hilbertlevy.errors import DomainError, LayoutMismatchError, SupportError
from hilbertlevy.jumps import ExponentialJumps, JumpLaw, PointMassJumps

# Compound Poisson laws that are neither point masses nor rays enter the theta-quadrature
# through this many equally weighted draws.
ATOM_SAMPLE_SIZE = 256
ATOM_SAMPLE_SEED = 0xA70


def sample_one_sided_stable(alpha, rng, size):
    """Standard one-sided stable variates S with E exp(-lambda S) = exp(-lambda^alpha).

    Kanter's representation of the Chambers-Mallows-Stuck generator for 0 < alpha < 1.
    """
    u = rng.uniform(0.0, np.pi, size=size)
    e = rng.exponential(size=size)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha))


def sample_inverse_gaussian(mean, shape, rng, size):
    """Inverse Gaussian variates by the transform-rejection method of Michael, Schucany and Haas."""
    nu = rng.standard_normal(size)
    y = nu * nu
    w = mean * y / (2.0 * shape)
    # Smaller root of the quadratic, written without cancellation.
    x = mean / (1.0 + w + np.sqrt(w * (w + 2.0)))
    z = rng.uniform(size=size)
    return np.where(z <= mean / (mean + x), x, mean * mean / x)


def _principal_power(w, alpha):
    """w^alpha on the principal branch with 0^alpha = 0."""
    w = np.asarray(w, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.exp(alpha * np.log(w))
    return np.where(w == 0, 0.0, value)


# -------------------------------------------------------------------------------------------------
# Univariate Lévy measures on (0, infinity)
# -------------------------------------------------------------------------------------------------

class UnivariateJumps(ABC):
    """A Lévy measure on (0, infinity) with its subordinator."""

    @abstractmethod
    def laplace_exponent(self, v):
        """psi(v) = int (e^{v z} - 1) F(dz), vectorised over complex ``v`` with Re(v) <= 0."""

    @abstractmethod
    def density(self, z):
        pass

    @abstractmethod
    def tail_mass(self, z):
        """F((z, infinity))."""

    @abstractmethod
    def small_moment(self, z):
        """int_0^z x F(dx)."""

    @abstractmethod
    def sample(self, dt, rng, size):
        """Increments over a time step ``dt``, shape ``(size,)``."""

    @abstractmethod
    def moment_finite(self, p):
        """Whether E Theta(1)^p is finite."""

    @abstractmethod
    def mean(self):
        """E Theta(1), infinite if it does not exist."""

    @abstractmethod
    def variance(self):
        """Var Theta(1), `nan` if it does not exist."""


class InverseGaussianJumps(UnivariateJumps):
    """The inverse Gaussian subordinator with F(dz) = s / sqrt(2 pi z^3) exp(-c^2 z / 2) dz.

    The degenerate parameter c = 0 is the one-sided 1/2-stable subordinator with scale s sqrt(2)
    and is simulated as such.

    Parameters
    ----------
    s : `float`
        Positive scale.
    c : `float`
        Nonnegative tempering.

    """

    def __init__(self, s, c):
        if not s > 0:
            raise DomainError(f"Inverse Gaussian scale must be positive, got {s}")
        if not c >= 0:
            raise DomainError(f"Inverse Gaussian parameter c must be nonnegative, got {c}")
        self.s = float(s)
        self.c = float(c)

    @property
    def degenerate(self):
        return self.c == 0.0

    def laplace_exponent(self, v):
        v = np.asarray(v, dtype=complex)
        return self.s * (self.c - np.sqrt(self.c ** 2 - 2.0 * v))

    def density(self, z):
        z = np.asarray(z, dtype=float)
        return self.s / np.sqrt(2.0 * np.pi * z ** 3) * np.exp(-0.5 * self.c ** 2 * z)

    def tail_mass(self, z):
        z = np.asarray(z, dtype=float)
        k = 0.5 * self.c ** 2
        value = 2.0 / np.sqrt(z) * np.exp(-k * z)
        if k > 0:
            value = value - 2.0 * np.sqrt(k * np.pi) * special.erfc(np.sqrt(k * z))
        return self.s / np.sqrt(2.0 * np.pi) * value

    def small_moment(self, z):
        z = np.asarray(z, dtype=float)
        if self.degenerate:
            return self.s / np.sqrt(2.0 * np.pi) * 2.0 * np.sqrt(z)
        k = 0.5 * self.c ** 2
        return self.s / np.sqrt(2.0 * k) * special.erf(np.sqrt(k * z))

    def sample(self, dt, rng, size):
        if self.degenerate:
            scale = self.s * np.sqrt(2.0)
            return (dt * scale) ** 2 * sample_one_sided_stable(0.5, rng, size)
        return sample_inverse_gaussian(dt * self.s / self.c, (dt * self.s) ** 2, rng, size)

    def moment_finite(self, p):
        return not self.degenerate or p < 0.5

    def mean(self):
        return np.inf if self.degenerate else self.s / self.c

    def variance(self):
        return np.nan if self.degenerate else self.s / self.c ** 3

    def __repr__(self):
        return f"InverseGaussianJumps(s={self.s}, c={self.c})"


class OneSidedStableJumps(UnivariateJumps):
    """The alpha-stable subordinator, psi(v) = -scale (-v)^alpha, 0 < alpha < 1.

    Its Lévy density is scale alpha / Gamma(1 - alpha) z^{-1-alpha}.
    """

    def __init__(self, alpha, scale=1.0):
        if not 0 < alpha < 1:
            raise DomainError(f"One-sided stable index must lie in (0, 1), got {alpha}")
        if not scale > 0:
            raise DomainError(f"Stable scale must be positive, got {scale}")
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.__constant = self.scale / special.gamma(1.0 - self.alpha)

    def laplace_exponent(self, v):
        return -self.scale * _principal_power(-np.asarray(v, dtype=complex), self.alpha)

    def density(self, z):
        z = np.asarray(z, dtype=float)
        return self.__constant * self.alpha * z ** (-1.0 - self.alpha)

    def tail_mass(self, z):
        return self.__constant * np.asarray(z, dtype=float) ** (-self.alpha)

    def small_moment(self, z):
        z = np.asarray(z, dtype=float)
        return self.__constant * self.alpha / (1.0 - self.alpha) * z ** (1.0 - self.alpha)

    def sample(self, dt, rng, size):
        return (dt * self.scale) ** (1.0 / self.alpha) * sample_one_sided_stable(
            self.alpha, rng, size)

    def moment_finite(self, p):
        return p < self.alpha

    def mean(self):
        return np.inf

    def variance(self):
        return np.nan

    def __repr__(self):
        return f"OneSidedStableJumps(alpha={self.alpha}, scale={self.scale})"


class GammaJumps(UnivariateJumps):
    """The gamma subordinator with parameters (a, 1): F(dz) = a z^{-1} e^{-z} dz."""

    def __init__(self, a):
        if not a > 0:
            raise DomainError(f"Gamma parameter must be positive, got {a}")
        self.a = float(a)

    def laplace_exponent(self, v):
        return -self.a * np.log(1.0 - np.asarray(v, dtype=complex))

    def density(self, z):
        z = np.asarray(z, dtype=float)
        return self.a * np.exp(-z) / z

    def tail_mass(self, z):
        return self.a * special.exp1(np.asarray(z, dtype=float))

    def small_moment(self, z):
        return self.a * (1.0 - np.exp(-np.asarray(z, dtype=float)))

    def sample(self, dt, rng, size):
        return rng.gamma(self.a * dt, 1.0, size=size)

    def moment_finite(self, p):
        return True

    def mean(self):
        return self.a

    def variance(self):
        return self.a

    def __repr__(self):
        return f"GammaJumps(a={self.a})"


class ExponentialCompoundJumps(UnivariateJumps):
    """Jumps at ``rate`` with exponential sizes of mean ``scale``.

    F(dz) = rate / scale * e^{-z/scale} dz, a finite measure of total mass ``rate``.
    """

    def __init__(self, rate, scale):
        if not rate > 0:
            raise DomainError(f"Compound Poisson rate must be positive, got {rate}")
        if not scale > 0:
            raise DomainError(f"Exponential mean must be positive, got {scale}")
        self.rate = float(rate)
        self.scale = float(scale)

    def laplace_exponent(self, v):
        v = np.asarray(v, dtype=complex)
        return self.rate * (1.0 / (1.0 - self.scale * v) - 1.0)

    def density(self, z):
        z = np.asarray(z, dtype=float)
        return self.rate / self.scale * np.exp(-z / self.scale)

    def tail_mass(self, z):
        return self.rate * np.exp(-np.asarray(z, dtype=float) / self.scale)

    def small_moment(self, z):
        x = np.asarray(z, dtype=float) / self.scale
        return self.rate * self.scale * (-np.expm1(-x) - x * np.exp(-x))

    def sample(self, dt, rng, size):
        counts = rng.poisson(self.rate * dt, size=size)
        # A gamma variate with shape 0 is 0.
        return rng.gamma(counts.astype(float), self.scale)

    def moment_finite(self, p):
        return True

    def mean(self):
        return self.rate * self.scale

    def variance(self):
        return 2.0 * self.rate * self.scale ** 2

    def __repr__(self):
        return f"ExponentialCompoundJumps(rate={self.rate}, scale={self.scale})"


@dataclass(frozen=True, eq=False)
class LevyRay:
    """The image of a univariate Lévy measure under z -> z * direction."""
    direction: np.ndarray
    kernel: UnivariateJumps

    @property
    def length(self):
        return float(np.linalg.norm(self.direction))

    def tail_mass(self, r):
        """F-mass of {|theta| > r} on this ray."""
        return float(self.kernel.tail_mass(r / self.length))


@dataclass(frozen=True, eq=False)
class AtomRule:
    """Weighted points standing in for the part of F that is not on a ray.

    With ``sampled`` set the points are equally weighted draws from a continuous law and the
    rule is a Monte Carlo estimate.
    """
    points: np.ndarray
    weights: np.ndarray
    sampled: bool = False


# -------------------------------------------------------------------------------------------------
# d-variate jump parts
# -------------------------------------------------------------------------------------------------

class SubordinatorJumps(ABC):
    """The jump part of a d-variate subordinator."""

    @property
    @abstractmethod
    def d(self):
        pass

    @abstractmethod
    def laplace_exponent(self, s):
        """Vectorised over ``s`` of shape ``(..., d)``."""

    @abstractmethod
    def sample(self, dt, rng, size):
        """Increments of shape ``(size, d)``."""

    @abstractmethod
    def mean(self):
        pass

    @abstractmethod
    def covariance(self):
        """Covariance of Theta(1); entries that do not exist are `nan`."""

    @abstractmethod
    def moment_finite(self, p):
        """Per component whether E Theta_j(1)^p is finite."""

    @abstractmethod
    def active(self):
        """Per component whether the jump part moves that component at all."""

    @abstractmethod
    def density(self, theta):
        pass

    def rays(self):
        return []

    def atoms(self):
        """The `AtomRule` for the part of F off the rays, or `None`."""
        return None

    def tail_mass(self, r):
        mass = sum(ray.tail_mass(r) for ray in self.rays())
        atoms = self.atoms()
        if atoms is not None:
            mass += float(atoms.weights @ (np.linalg.norm(atoms.points, axis=1) > r))
        return mass


class IndependentJumps(SubordinatorJumps):
    """Independent univariate subordinators, one per component."""

    def __init__(self, kernels):
        kernels = tuple(kernels)
        if not kernels:
            raise ValueError("At least one component is required")
        self.kernels = kernels

    @property
    def d(self):
        return len(self.kernels)

    def laplace_exponent(self, s):
        s = np.asarray(s, dtype=complex)
        return sum(k.laplace_exponent(s[..., j]) for j, k in enumerate(self.kernels))

    def sample(self, dt, rng, size):
        return np.column_stack([k.sample(dt, rng, size) for k in self.kernels])

    def mean(self):
        return np.array([k.mean() for k in self.kernels], dtype=float)

    def covariance(self):
        variances = np.array([k.variance() for k in self.kernels], dtype=float)
        covariance = np.diag(variances)
        undefined = np.isnan(variances)
        covariance[undefined, :] = np.nan
        covariance[:, undefined] = np.nan
        return covariance

    def moment_finite(self, p):
        return np.array([k.moment_finite(p) for k in self.kernels])

    def active(self):
        return np.ones(self.d, dtype=bool)

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        positive = np.flatnonzero(theta > 0)
        if np.any(theta < 0) or positive.shape[0] != 1:
            raise SupportError(f"F is concentrated on the coordinate axes, got theta={theta}")
        j = positive[0]
        return float(self.kernels[j].density(theta[j]))

    def rays(self):
        return [LevyRay(np.eye(self.d)[j], k) for j, k in enumerate(self.kernels)]

    def __repr__(self):
        return f"IndependentJumps({list(self.kernels)})"


class CompoundPoissonJumps(SubordinatorJumps):
    """Jumps arriving at ``rate`` with sizes drawn from a law on R_+^d."""

    def __init__(self, rate, law):
        if not rate > 0:
            raise DomainError(f"Compound Poisson rate must be positive, got {rate}")
        if not isinstance(law, JumpLaw) or not law.is_nonnegative():
            raise DomainError("Subordinator jumps must be concentrated on the nonnegative orthant")
        self.rate = float(rate)
        self.law = law
        self.__ray = None
        if isinstance(law, ExponentialJumps) and law.dim == 1:
            self.__ray = LevyRay(np.ones(1), ExponentialCompoundJumps(rate, law.mean()[0]))

    @property
    def d(self):
        return self.law.dim

    def laplace_exponent(self, s):
        return self.rate * (self.law.laplace(s) - 1.0)

    def sample(self, dt, rng, size):
        counts = rng.poisson(self.rate * dt, size=size)
        out = np.zeros((size, self.d))
        jumps = self.law.sample(rng, int(counts.sum()))
        np.add.at(out, np.repeat(np.arange(size), counts), jumps)
        return out

    def mean(self):
        return self.rate * self.law.mean()

    def covariance(self):
        return self.rate * self.law.second_moment_matrix()

    def moment_finite(self, p):
        return np.full(self.d, self.law.moment_finite(p))

    def active(self):
        return np.diag(self.law.second_moment_matrix()) > 0

    def density(self, theta):
        return self.rate * self.law.density(theta)

    def rays(self):
        return [] if self.__ray is None else [self.__ray]

    def atoms(self):
        if self.__ray is not None:
            return None
        if isinstance(self.law, PointMassJumps):
            return AtomRule(self.law.atoms, self.rate * self.law.weights)
        points = self.law.sample(np.random.default_rng(ATOM_SAMPLE_SEED), ATOM_SAMPLE_SIZE)
        return AtomRule(points, np.full(ATOM_SAMPLE_SIZE, self.rate / ATOM_SAMPLE_SIZE),
                        sampled=True)

    def tail_mass(self, r):
        if self.__ray is not None:
            return self.__ray.tail_mass(r)
        return self.rate * float(self.law.prob_norm_exceeds(r))


class CommonFactorJumps(SubordinatorJumps):
    """Theta_j = beta_j Z + (independent part)_j with a shared univariate subordinator Z.

    Parameters
    ----------
    loadings : array_like
        Nonnegative factor loadings beta, not all zero.
    factor : `UnivariateJumps`
        The shared subordinator Z.
    idiosyncratic : `SubordinatorJumps`, optional
        An independent d-variate jump part added on top.

    """

    def __init__(self, loadings, factor, idiosyncratic=None):
        loadings = np.atleast_1d(np.asarray(loadings, dtype=float))
        if np.any(loadings < 0) or not np.any(loadings > 0):
            raise DomainError(f"Factor loadings must be nonnegative and not all zero: {loadings}")
        if idiosyncratic is not None and idiosyncratic.d != loadings.shape[0]:
            raise LayoutMismatchError(
                f"{loadings.shape[0]} loadings but idiosyncratic part of dimension "
                f"{idiosyncratic.d}")
        self.loadings = loadings
        self.factor = factor
        self.idiosyncratic = idiosyncratic

    @property
    def d(self):
        return self.loadings.shape[0]

    def laplace_exponent(self, s):
        s = np.asarray(s, dtype=complex)
        value = self.factor.laplace_exponent(s @ self.loadings)
        if self.idiosyncratic is not None:
            value = value + self.idiosyncratic.laplace_exponent(s)
        return value

    def sample(self, dt, rng, size):
        out = np.outer(self.factor.sample(dt, rng, size), self.loadings)
        if self.idiosyncratic is not None:
            out += self.idiosyncratic.sample(dt, rng, size)
        return out

    def mean(self):
        loaded = self.loadings > 0
        mean = np.zeros(self.d)
        mean[loaded] = self.loadings[loaded] * self.factor.mean()
        if self.idiosyncratic is not None:
            mean = mean + self.idiosyncratic.mean()
        return mean

    def covariance(self):
        loaded = self.loadings > 0
        covariance = np.zeros((self.d, self.d))
        both = np.outer(loaded, loaded)
        covariance[both] = (self.factor.variance()
                            * np.outer(self.loadings, self.loadings))[both]
        if self.idiosyncratic is not None:
            covariance = covariance + self.idiosyncratic.covariance()
        return covariance

    def moment_finite(self, p):
        finite = np.where(self.loadings > 0, self.factor.moment_finite(p), True)
        if self.idiosyncratic is not None:
            finite = finite & self.idiosyncratic.moment_finite(p)
        return finite

    def active(self):
        active = self.loadings > 0
        if self.idiosyncratic is not None:
            active = active | self.idiosyncratic.active()
        return active

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        value = 0.0
        on_support = False
        z = float(theta @ self.loadings) / float(self.loadings @ self.loadings)
        if z > 0 and np.allclose(theta, z * self.loadings, rtol=1e-12, atol=0.0):
            value += float(self.factor.density(z)) / float(np.linalg.norm(self.loadings))
            on_support = True
        if self.idiosyncratic is not None:
            try:
                value += self.idiosyncratic.density(theta)
                on_support = True
            except SupportError:
                pass
        if not on_support:
            raise SupportError(f"theta={theta} is off the support of the common factor measure")
        return value

    def rays(self):
        rays = [LevyRay(self.loadings, self.factor)]
        if self.idiosyncratic is not None:
            rays.extend(self.idiosyncratic.rays())
        return rays

    def atoms(self):
        return None if self.idiosyncratic is None else self.idiosyncratic.atoms()

    def tail_mass(self, r):
        mass = LevyRay(self.loadings, self.factor).tail_mass(r)
        if self.idiosyncratic is not None:
            mass += self.idiosyncratic.tail_mass(r)
        return mass


def inverse_gaussian(s, c):
    """Independent inverse Gaussian components with parameters ``s[j], c[j]``."""
    s, c = np.broadcast_arrays(np.atleast_1d(s), np.atleast_1d(c))
    return IndependentJumps(InverseGaussianJumps(sj, cj) for sj, cj in zip(s, c))


def one_sided_stable(alpha, scale=1.0):
    alpha, scale = np.broadcast_arrays(np.atleast_1d(alpha), np.atleast_1d(scale))
    return IndependentJumps(OneSidedStableJumps(aj, sj) for aj, sj in zip(alpha, scale))


def gamma(a):
    return IndependentJumps(GammaJumps(aj) for aj in np.atleast_1d(a))


# -------------------------------------------------------------------------------------------------
# Subordinators and their operations
# -------------------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubordinatorSpec:
    """A d-variate subordinator: drift a_0 in R_+^d plus an optional jump part.

    Parameters
    ----------
    drift : `numpy.ndarray`
        The drift a_0, componentwise nonnegative.
    jumps : `SubordinatorJumps`, optional
        The jump part; `None` for a pure drift.

    """
    drift: np.ndarray
    jumps: Optional[SubordinatorJumps] = None

    def __post_init__(self):
        drift = np.atleast_1d(np.asarray(self.drift, dtype=float)).copy()
        drift.setflags(write=False)
        if np.any(drift < 0):
            raise DomainError(f"Subordinator drift must be nonnegative, got {drift}")
        if self.jumps is not None and self.jumps.d != drift.shape[0]:
            raise LayoutMismatchError(
                f"Drift has {drift.shape[0]} components, jump part {self.jumps.d}")
        object.__setattr__(self, "drift", drift)

    @classmethod
    def pure_drift(cls, drift):
        return cls(drift)

    @classmethod
    def zero(cls, d):
        return cls(np.zeros(d))

    @property
    def d(self):
        return self.drift.shape[0]

    def component_trivial(self):
        """Per component whether Theta_j = 0 almost surely."""
        trivial = self.drift == 0
        if self.jumps is not None:
            trivial = trivial & ~self.jumps.active()
        return trivial


@dataclass(frozen=True)
class SubordinatorMoments:
    """Moments of Theta(1).

    Parameters
    ----------
    mean : `numpy.ndarray`
        E Theta_j(1), `inf` where infinite.
    covariance : `numpy.ndarray`
        Cov(Theta(1)); `nan` entries do not exist.
    sqrt_moment_finite : `numpy.ndarray`
        Per component whether E Theta_j(1)^{1/2} is finite.
    second_moment_finite : `numpy.ndarray`
    alpha : `float`, optional
        The index the last flag refers to.
    one_over_alpha_moment_finite : `numpy.ndarray`, optional
        Per component whether E Theta_j(1)^{1/alpha} is finite.

    """
    mean: np.ndarray
    covariance: np.ndarray
    sqrt_moment_finite: np.ndarray
    second_moment_finite: np.ndarray
    alpha: Optional[float] = None
    one_over_alpha_moment_finite: Optional[np.ndarray] = None

    @property
    def mean_finite(self):
        return np.isfinite(self.mean)


def _check_components(spec, values, name):
    if values.shape[-1] != spec.d:
        raise LayoutMismatchError(f"{name} has {values.shape[-1]} components, expected {spec.d}")


def laplace_exponent(spec, s):
    """psi(s) = <a_0|s> + int (e^{<s|theta>} - 1) F(dtheta).

    Parameters
    ----------
    spec : `SubordinatorSpec`
    s : array_like
        Complex argument(s) of shape ``(d,)`` or ``(..., d)`` with nonpositive real parts.

    Returns
    -------
    `complex` or `numpy.ndarray`

    Raises
    ------
    `DomainError`
        If a real part is positive.

    """
    s = np.asarray(s, dtype=complex)
    _check_components(spec, s, "Argument")
    if np.any(s.real > 0):
        raise DomainError(f"The Laplace exponent needs Re(s) <= 0, got {s}")
    value = s @ spec.drift
    if spec.jumps is not None:
        value = value + spec.jumps.laplace_exponent(s)
    return value[()] if np.ndim(value) == 0 else value


def levy_density(spec, theta):
    """Density of F at ``theta``.

    On the coordinate axes and factor rays this is the density with respect to length on the
    ray; compound Poisson parts return rate times the jump density.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    _check_components(spec, theta, "theta")
    if spec.jumps is None:
        raise SupportError("A pure drift has no Lévy measure")
    return spec.jumps.density(theta)


def sample_increment(spec, dt, rng, size=None):
    """Exact draws of Theta(t + dt) - Theta(t).

    Returns shape ``(d,)`` when ``size`` is `None`, otherwise ``(size, d)``.
    """
    if not dt > 0:
        raise DomainError(f"Time step must be positive, got {dt}")
    n = 1 if size is None else int(size)
    out = np.broadcast_to(dt * spec.drift, (n, spec.d)).copy()
    if spec.jumps is not None:
        out += spec.jumps.sample(dt, rng, n)
    return out[0] if size is None else out


def moment_finite(spec, p):
    """Per component whether E Theta_j(1)^p is finite."""
    if spec.jumps is None:
        return np.ones(spec.d, dtype=bool)
    return np.asarray(spec.jumps.moment_finite(p), dtype=bool)


def moments(spec, alpha=None):
    """Closed-form moments of Theta(1), with moment flags for p = 1/2, 2 and optionally 1/alpha."""
    if spec.jumps is None:
        mean = spec.drift.copy()
        covariance = np.zeros((spec.d, spec.d))
    else:
        mean = spec.drift + spec.jumps.mean()
        covariance = spec.jumps.covariance()
    one_over_alpha = None
    if alpha is not None:
        if not 0 < alpha <= 2:
            raise DomainError(f"Stability index must lie in (0, 2], got {alpha}")
        one_over_alpha = moment_finite(spec, 1.0 / alpha)
    return SubordinatorMoments(
        mean=mean,
        covariance=covariance,
        sqrt_moment_finite=moment_finite(spec, 0.5),
        second_moment_finite=moment_finite(spec, 2.0),
        alpha=alpha,
        one_over_alpha_moment_finite=one_over_alpha,
    )


def tail_mass(spec, r):
    """F({theta : |theta| > r}) for r > 0."""
    if not r > 0:
        raise DomainError(f"Tail radius must be positive, got {r}")
    return 0.0 if spec.jumps is None else spec.jumps.tail_mass(r)


def rays_and_atoms(spec) -> Tuple[list, Optional[AtomRule]]:
    if spec.jumps is None:
        return [], None
    return spec.jumps.rays(), spec.jumps.atoms()
