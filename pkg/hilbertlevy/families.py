"""Named subordinated families: HNIG, symmetric strictly alpha-stable and HVG processes.

Each family is available as a full `SubordinatedProcessSpec` and through its closed-form
exponent. On a layout with several components all components share one time change, realised
as a common factor with unit loadings.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hilbertlevy.base import BaseJumps, BaseProcessSpec
from hilbertlevy.errors import DomainError
from hilbertlevy.space import CovOperator, TruncatedVector, as_vector, inner, quadratic_form
from hilbertlevy.subordination import SubordinatedProcessSpec, exponent_batch, sample_x_batch
from hilbertlevy.subordinators import (CommonFactorJumps, GammaJumps, IndependentJumps,
                                       InverseGaussianJumps, OneSidedStableJumps,
                                       SubordinatorSpec)


UNIT_NORM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class HNIGParams:
    """Parameters (s, c, b, Q) of an HNIG process; c = 0 is the degenerate case."""
    s: float
    c: float
    b: TruncatedVector
    q: CovOperator

    def __post_init__(self):
        if self.s < 0 or self.c < 0:
            raise DomainError(
                f"HNIG parameters s and c must be nonnegative, got {self.s}, {self.c}")
        self.b.layout.check(self.q.layout)

    @property
    def degenerate(self):
        return self.c == 0


@dataclass(frozen=True, eq=False)
class StableParams:
    """Index alpha in (0, 2] and a nonzero covariance Q of a symmetric strictly stable process."""
    alpha: float
    q: CovOperator

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise DomainError(f"Stability index must lie in (0, 2], got {self.alpha}")
        if self.q.is_zero():
            raise DomainError("The stable family needs a nonzero covariance operator")


@dataclass(frozen=True, eq=False)
class HVGParams:
    """Parameters (a, b, Q) of an HVG process."""
    a: float
    b: TruncatedVector
    q: CovOperator

    def __post_init__(self):
        if self.a < 0:
            raise DomainError(f"HVG parameter a must be nonnegative, got {self.a}")
        self.b.layout.check(self.q.layout)


def _shared_clock(d, kernel):
    """A subordinator running every component on the same univariate clock."""
    if kernel is None:
        return SubordinatorSpec.zero(d)
    if d == 1:
        return SubordinatorSpec(np.zeros(1), IndependentJumps([kernel]))
    return SubordinatorSpec(np.zeros(d), CommonFactorJumps(np.ones(d), kernel))


# -------------------------------------------------------------------------------------------------
# HNIG
# -------------------------------------------------------------------------------------------------

def make_hnig(p):
    """Brownian motion with drift b and covariance Q subordinated by an inverse Gaussian clock.

    For c = 0 the clock is the 1/2-stable subordinator with scale s sqrt(2).

    Parameters
    ----------
    p : `HNIGParams`

    Returns
    -------
    `hilbertlevy.subordination.SubordinatedProcessSpec`

    """
    kernel = None
    if p.s > 0:
        kernel = (OneSidedStableJumps(0.5, p.s * np.sqrt(2.0)) if p.degenerate
                  else InverseGaussianJumps(p.s, p.c))
    base = BaseProcessSpec.gaussian(p.b, p.q)
    return SubordinatedProcessSpec(base, _shared_clock(base.d, kernel))


def hnig_exponent(p, u):
    """rho(u) = s (c - sqrt(c^2 + <Qu|u> - 2i<u|b>)) on the principal branch."""
    radicand = p.c ** 2 + quadratic_form(p.q, u) - 2j * inner(u, p.b)
    return complex(p.s * (p.c - np.sqrt(radicand)))


# -------------------------------------------------------------------------------------------------
# Symmetric strictly stable
# -------------------------------------------------------------------------------------------------

def make_stable(p):
    """Centred Gaussian noise with covariance 2Q subordinated by an alpha/2-stable clock.

    For alpha = 2 the clock is the identity and X is the Gaussian base itself.
    """
    d = p.q.layout.d
    base = BaseProcessSpec.gaussian(TruncatedVector.zeros(p.q.layout), p.q.scaled(np.full(d, 2.0)))
    if p.alpha == 2:
        return SubordinatedProcessSpec(base, SubordinatorSpec.pure_drift(np.ones(d)))
    return SubordinatedProcessSpec(base, _shared_clock(d, OneSidedStableJumps(p.alpha / 2.0)))


def stable_exponent(p, u):
    """rho(u) = -<Qu|u>^{alpha/2}."""
    return complex(-quadratic_form(p.q, u) ** (p.alpha / 2.0))


def stable_angular_function(p, v):
    """f(v) = <Qv|v>^{alpha/2} on the unit sphere, so that rho(u) = -|u|^alpha f(u/|u|).

    Raises `DomainError` unless ``|v| = 1`` up to rounding.
    """
    norm = v.norm()
    if not abs(norm - 1.0) <= UNIT_NORM_TOLERANCE:
        raise DomainError(f"The angular function is defined on unit vectors, got |v| = {norm}")
    return quadratic_form(p.q, v) ** (p.alpha / 2.0)


# -------------------------------------------------------------------------------------------------
# HVG
# -------------------------------------------------------------------------------------------------

def make_hvg(p):
    """Brownian motion with drift b and covariance Q subordinated by a gamma(a, 1) clock."""
    base = BaseProcessSpec.gaussian(p.b, p.q)
    kernel = GammaJumps(p.a) if p.a > 0 else None
    return SubordinatedProcessSpec(base, _shared_clock(base.d, kernel))


def hvg_exponent(p, u):
    """rho(u) = -a Log(1 + <Qu|u>/2 - i<b|u>)."""
    return complex(-p.a * np.log(1.0 + 0.5 * quadratic_form(p.q, u) - 1j * inner(p.b, u)))


# -------------------------------------------------------------------------------------------------
# Univariate reference laws
# -------------------------------------------------------------------------------------------------

def nig_characteristic_function(z, t, alpha, beta, delta, mu=0.0):
    """E exp(iz Y(t)) of an NIG process with parameters (alpha, beta, delta, mu)."""
    z = np.asarray(z, dtype=float)
    gamma = np.sqrt(alpha ** 2 - beta ** 2)
    exponent = 1j * mu * z + delta * (gamma - np.sqrt(alpha ** 2 - (beta + 1j * z) ** 2 + 0j))
    return np.exp(t * exponent)


def nig_projection_parameters(p, w):
    """NIG parameters (alpha, beta, delta) of <w|X> for a non-degenerate HNIG process.

    The projection has drift m = <w|b> and variance v = <Qw|w> before the time change.
    """
    variance = quadratic_form(p.q, w)
    if variance <= 0 or p.degenerate or p.s == 0:
        raise DomainError("NIG parameters need s, c and <Qw|w> to be positive")
    drift = inner(w, p.b)
    beta = drift / variance
    alpha = np.sqrt(p.c ** 2 / variance + beta ** 2)
    return float(alpha), float(beta), float(p.s * np.sqrt(variance))


def vg_characteristic_function(u, t, theta, sigma, nu):
    """E exp(iu Y(t)) of a variance gamma process with drift theta, volatility sigma, rate nu."""
    u = np.asarray(u, dtype=float)
    return (1.0 - 1j * u * theta * nu + 0.5 * sigma ** 2 * nu * u ** 2) ** (-t / nu)


def vg_projection_parameters(p, w):
    """VG parameters (theta, sigma, nu) of <w|X> for an HVG process with a > 0."""
    if p.a <= 0:
        raise DomainError("VG parameters need a > 0")
    return (float(p.a * inner(w, p.b)), float(np.sqrt(p.a * quadratic_form(p.q, w))),
            1.0 / p.a)


# -------------------------------------------------------------------------------------------------
# Finite-dimensional projections
# -------------------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectedProcess:
    """TX(t) for a linear map T : H -> R^n.

    Realised as a subordinated process whose component j is W_j = T_j L_j on R^n with the
    original subordinator; TX is the sum of its components.
    """
    spec: SubordinatedProcessSpec
    n: int

    def exponent(self, z):
        """rho(T* z) for ``z`` of shape ``(..., n)``."""
        z = np.asarray(z, dtype=float)
        return exponent_batch(self.spec, np.tile(z, self.spec.layout.d))

    def characteristic_function(self, z, t=1.0):
        return np.exp(t * self.exponent(z))

    def sample(self, t, rng, size):
        draws = sample_x_batch(self.spec, t, rng, size)
        return draws.reshape(size, self.spec.layout.d, self.n).sum(axis=1)


def project_process(spec, rows: Sequence[TruncatedVector]):
    """The finite-dimensional process TX, T given by its rows.

    The drift of W_j is T_j b_j corrected for the truncation, its covariance T_j Q_j T_j^* and its
    jumps are the images of the jumps of L_j.

    Returns
    -------
    `ProjectedProcess`

    """
    matrix = np.array([as_vector(spec.layout, row).values for row in rows], dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise DomainError("A projection needs at least one row")
    n = matrix.shape[0]
    drifts = []
    matrices = []
    jumps = []
    for j, (sl, part) in enumerate(zip(spec.layout.blocks(), spec.base.jumps)):
        t_j = matrix[:, sl]
        drift = t_j @ spec.base.drift.values[sl]
        if part is None:
            jumps.append(None)
        else:
            law = part.law.pushforward(t_j)
            drift = drift + part.rate * (law.truncated_mean() - t_j @ part.law.truncated_mean())
            jumps.append(BaseJumps(part.rate, law))
        drifts.append(drift)
        matrices.append(t_j @ spec.base.covariance.component_matrix(j) @ t_j.T)
    covariance = CovOperator.from_matrices(matrices)
    base = BaseProcessSpec(TruncatedVector(covariance.layout, np.concatenate(drifts)), covariance,
                           tuple(jumps))
    return ProjectedProcess(SubordinatedProcessSpec(base, spec.subordinator), n)
