"""Jump size distributions of compound Poisson parts.

The same laws serve two purposes: on R_+^d they are the jumps of compound Poisson subordinators,
on a component space H_j they are the jumps of a base process. Quantities involving the
truncation chi(x) = x 1{|x| <= 1} are exact for point masses and otherwise estimated once from a
fixed reference sample, so that they are deterministic.
"""

from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np
from scipy import stats

from hilbertlevy.errors import DomainError, SupportError


REFERENCE_SEED = 0x5EED
REFERENCE_SIZE = 200_000


class JumpLaw(ABC):
    """Distribution of a single jump of a compound Poisson process on R^dim."""

    @property
    @abstractmethod
    def dim(self):
        """`int`: Dimension of the jump vectors."""

    @abstractmethod
    def sample(self, rng, size):
        """Draw ``size`` jumps, returned with shape ``(size, dim)``."""

    @abstractmethod
    def characteristic(self, u):
        """E exp(i<u|J>) for ``u`` of shape ``(..., dim)``."""

    @abstractmethod
    def mean(self):
        pass

    @abstractmethod
    def second_moment_matrix(self):
        """E[J J^T]."""

    def laplace(self, s):
        """E exp(<s|J>) for complex ``s`` with nonpositive real parts."""
        raise DomainError(f"{type(self).__name__} has no Laplace transform on the left half-plane")

    def density(self, x):
        raise SupportError(f"{type(self).__name__} has no Lebesgue density")

    def is_nonnegative(self):
        """Whether the law is concentrated on the nonnegative orthant."""
        return False

    def moment_finite(self, p):
        """Whether E|J|^p is finite. All laws provided here have every moment."""
        return True

    def pushforward(self, matrix):
        """The law of ``matrix @ J``."""
        raise DomainError(f"{type(self).__name__} cannot be mapped linearly")

    def second_moment(self):
        """E|J|^2."""
        return float(np.trace(self.second_moment_matrix()))

    # ---------------------------------------------------------------------------------------------
    # Truncated moments, from the reference sample unless overridden
    # ---------------------------------------------------------------------------------------------

    @cached_property
    def _reference(self):
        rng = np.random.default_rng(REFERENCE_SEED)
        jumps = self.sample(rng, REFERENCE_SIZE)
        return jumps, np.linalg.norm(jumps, axis=1)

    def truncated_mean(self):
        """E[chi(J)] = E[J 1{|J| <= 1}]."""
        jumps, norms = self._reference
        return np.mean(jumps * (norms <= 1.0)[:, None], axis=0)

    def large_jump_mean(self):
        """E[J 1{|J| > 1}]."""
        return self.mean() - self.truncated_mean()

    def large_jump_abs_mean(self):
        """E[|J| 1{|J| > 1}]."""
        _, norms = self._reference
        return float(np.mean(norms * (norms > 1.0)))

    def small_second_moment(self):
        """E[|J|^2 1{|J| <= 1}]."""
        _, norms = self._reference
        return float(np.mean(norms ** 2 * (norms <= 1.0)))

    def prob_norm_exceeds(self, r):
        _, norms = self._reference
        return float(np.mean(norms > r))

    def prob_halfspace(self, w, c):
        """P(<w|J> > c)."""
        jumps, _ = self._reference
        return float(np.mean(jumps @ np.asarray(w, dtype=float) > c))


class PointMassJumps(JumpLaw):
    """A finitely supported jump law.

    Parameters
    ----------
    atoms : array_like
        Support points, shape ``(k, dim)``.
    weights : array_like, optional
        Probabilities of the atoms, uniform if omitted.

    """

    def __init__(self, atoms, weights=None):
        atoms = np.asarray(atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        if atoms.ndim != 2 or atoms.shape[0] == 0:
            raise ValueError(f"Atoms must have shape (k, dim), got {atoms.shape}")
        if weights is None:
            weights = np.full(atoms.shape[0], 1.0 / atoms.shape[0])
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if weights.shape[0] != atoms.shape[0]:
            raise ValueError(f"{atoms.shape[0]} atoms but {weights.shape[0]} weights")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise DomainError(f"Atom weights must be a probability vector, got {weights}")
        self.__atoms = atoms
        self.__weights = weights
        self.__norms = np.linalg.norm(atoms, axis=1)

    @property
    def atoms(self):
        return self.__atoms

    @property
    def weights(self):
        return self.__weights

    @property
    def dim(self):
        return self.__atoms.shape[1]

    def sample(self, rng, size):
        index = rng.choice(len(self.__weights), size=size, p=self.__weights)
        return self.__atoms[index]

    def characteristic(self, u):
        u = np.asarray(u, dtype=float)
        return np.exp(1j * (u @ self.__atoms.T)) @ self.__weights

    def laplace(self, s):
        if not self.is_nonnegative():
            return super().laplace(s)
        s = np.asarray(s, dtype=complex)
        return np.exp(s @ self.__atoms.T) @ self.__weights

    def is_nonnegative(self):
        return bool(np.all(self.__atoms >= 0))

    def mean(self):
        return self.__weights @ self.__atoms

    def second_moment_matrix(self):
        return (self.__atoms * self.__weights[:, None]).T @ self.__atoms

    def pushforward(self, matrix):
        return PointMassJumps(self.__atoms @ np.asarray(matrix, dtype=float).T, self.__weights)

    def truncated_mean(self):
        return (self.__weights * (self.__norms <= 1.0)) @ self.__atoms

    def large_jump_abs_mean(self):
        return float(self.__weights @ (self.__norms * (self.__norms > 1.0)))

    def small_second_moment(self):
        return float(self.__weights @ (self.__norms ** 2 * (self.__norms <= 1.0)))

    def prob_norm_exceeds(self, r):
        return float(self.__weights @ (self.__norms > r))

    def prob_halfspace(self, w, c):
        return float(self.__weights @ (self.__atoms @ np.asarray(w, dtype=float) > c))


class GaussianJumps(JumpLaw):
    """Normally distributed jumps with the given mean and covariance matrix."""

    def __init__(self, mean, covariance):
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
        if covariance.shape != (mean.shape[0], mean.shape[0]):
            raise ValueError(f"Covariance of shape {covariance.shape} for mean {mean.shape}")
        values, basis = np.linalg.eigh(covariance)
        if np.any(values < -1e-12 * max(1.0, float(np.max(np.abs(covariance))))):
            raise DomainError("Jump covariance is not positive semi-definite")
        self.__mean = mean
        self.__covariance = covariance
        self.__root = basis * np.sqrt(np.clip(values, 0.0, None))

    @property
    def dim(self):
        return self.__mean.shape[0]

    @property
    def covariance(self):
        return self.__covariance

    def sample(self, rng, size):
        return self.__mean + rng.standard_normal((size, self.dim)) @ self.__root.T

    def characteristic(self, u):
        u = np.asarray(u, dtype=float)
        quad = np.sum((u @ self.__covariance) * u, axis=-1)
        return np.exp(1j * (u @ self.__mean) - 0.5 * quad)

    def mean(self):
        return self.__mean

    def second_moment_matrix(self):
        return self.__covariance + np.outer(self.__mean, self.__mean)

    def truncated_mean(self):
        if not np.any(self.__mean):
            return np.zeros(self.dim)
        return super().truncated_mean()

    def pushforward(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        return GaussianJumps(matrix @ self.__mean, matrix @ self.__covariance @ matrix.T)

    def prob_halfspace(self, w, c):
        w = np.asarray(w, dtype=float)
        location = float(w @ self.__mean)
        scale = float(np.sqrt(max(w @ self.__covariance @ w, 0.0)))
        if scale == 0.0:
            return float(location > c)
        return float(stats.norm.sf(c, loc=location, scale=scale))


class ExponentialJumps(JumpLaw):
    """Jumps with independent exponential components on the nonnegative orthant.

    Parameters
    ----------
    means : array_like
        Mean of every component, all strictly positive.

    """

    def __init__(self, means):
        means = np.atleast_1d(np.asarray(means, dtype=float))
        if np.any(means <= 0):
            raise DomainError(f"Exponential means must be positive, got {means}")
        self.__means = means

    @property
    def dim(self):
        return self.__means.shape[0]

    def sample(self, rng, size):
        return rng.exponential(self.__means, size=(size, self.dim))

    def characteristic(self, u):
        u = np.asarray(u, dtype=float)
        return np.prod(1.0 / (1.0 - 1j * self.__means * u), axis=-1)

    def laplace(self, s):
        s = np.asarray(s, dtype=complex)
        return np.prod(1.0 / (1.0 - self.__means * s), axis=-1)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise SupportError(f"Exponential jump density needs positive components, got {x}")
        return float(np.prod(np.exp(-x / self.__means) / self.__means))

    def is_nonnegative(self):
        return True

    def mean(self):
        return self.__means

    def second_moment_matrix(self):
        matrix = np.outer(self.__means, self.__means)
        matrix[np.diag_indices(self.dim)] *= 2.0
        return matrix
