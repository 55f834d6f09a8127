"""Quadrature of integrands against a subordinator's Lévy measure F.

Every ray of F is integrated with Gauss-Legendre nodes on the logarithmic scale z = e^y between a
lower cut-off, below which the integrand's linear growth makes the contribution negligible, and an
upper cut-off where the tail mass of F falls below tolerance. Integrands are Monte Carlo estimates,
evaluated with a seed-derived stream per node so that results are deterministic.
"""

from dataclasses import dataclass

import logging
import numpy as np
from scipy import optimize

from hilbertlevy.errors import QuadratureConvergenceError


logger = logging.getLogger(__name__)

LOG_BRACKET = 200.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings of the theta-quadrature.

    Parameters
    ----------
    nodes : `int`
        Gauss-Legendre nodes per ray on the coarse level; the fine level doubles them.
    tolerance : `float`
        Truncation tolerance for the cut-offs of every ray.
    refinement_tolerance : `float`
        Allowed disagreement between the coarse and fine level beyond Monte Carlo noise.
    mc_samples : `int`
        Inner Monte Carlo sample size per node.
    seed : `int`
        Root of the per-node seed schedule.
    strict : `bool`
        Raise `QuadratureConvergenceError` instead of reporting non-convergence.

    """
    nodes: int = 96
    tolerance: float = 1e-8
    refinement_tolerance: float = 1e-6
    mc_samples: int = 4096
    seed: int = 0
    strict: bool = False

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError(f"At least two quadrature nodes are needed, got {self.nodes}")
        if self.mc_samples < 4:
            raise ValueError(f"Too few inner Monte Carlo samples: {self.mc_samples}")


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a quadrature together with its Monte Carlo and refinement errors."""
    value: np.ndarray
    standard_error: np.ndarray
    error_estimate: float
    converged: bool


def _solve_log(function, target):
    """Smallest-scale root of the monotone ``function(e^y) = target`` on the bracket."""
    lo, hi = -LOG_BRACKET, LOG_BRACKET
    f_lo = function(np.exp(lo)) - target
    f_hi = function(np.exp(hi)) - target
    if np.sign(f_lo) == np.sign(f_hi):
        return None
    return optimize.brentq(lambda y: function(np.exp(y)) - target, lo, hi, xtol=1e-10)


def ray_cutoffs(ray, tolerance, lipschitz=1.0):
    """Lower and upper cut-off of the ray parameter z.

    The upper cut-off has F-tail mass ``tolerance``; below the lower one the integrand, bounded by
    ``lipschitz * |theta|``, contributes at most ``tolerance``.
    """
    upper = _solve_log(lambda z: float(ray.kernel.tail_mass(z)), tolerance)
    if upper is None:
        logger.warning("Tail of %r does not drop below %g on the bracket", ray.kernel, tolerance)
        upper = LOG_BRACKET
    scale = max(lipschitz * ray.length, np.finfo(float).tiny)
    lower = _solve_log(lambda z: float(ray.kernel.small_moment(z)), tolerance / scale)
    if lower is None or lower >= upper:
        lower = upper - np.log(1e12)
    return float(np.exp(lower)), float(np.exp(upper))


def ray_rule(ray, nodes, tolerance, lipschitz=1.0):
    """Nodes ``z`` and weights with sum w_k g(z_k) ~ int g(z) F_ray(dz)."""
    z_min, z_max = ray_cutoffs(ray, tolerance, lipschitz)
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo, hi = np.log(z_min), np.log(z_max)
    y = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    z = np.exp(y)
    weights = 0.5 * (hi - lo) * w * z * ray.kernel.density(z)
    return z, weights


def _node_stream(seed, piece, level, k):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(piece, level, k)))


def _accumulate(integrand, thetas, weights, seed, piece, level):
    """Weighted sum of the integrand over the nodes, its variance and the weighted terms."""
    terms = []
    variance = None
    for k, (theta, weight) in enumerate(zip(thetas, weights)):
        value, error = integrand(theta, _node_stream(seed, piece, level, k))
        terms.append(weight * np.asarray(value, dtype=float))
        error = (weight * np.asarray(error, dtype=float)) ** 2
        variance = error if variance is None else variance + error
    terms = np.array(terms)
    return terms.sum(axis=0), variance, terms


def integrate(integrand, rays, atoms, config, lipschitz=1.0, label="integrand"):
    """int g(theta) F(dtheta) for a Monte Carlo integrand.

    Parameters
    ----------
    integrand : `Callable[[numpy.ndarray, numpy.random.Generator], Tuple[array_like, array_like]]`
        Returns the estimate of g(theta) and its standard error.
    rays : `List[hilbertlevy.subordinators.LevyRay]`
    atoms : `hilbertlevy.subordinators.AtomRule` or `None`
        Points and weights for the part of F off the rays. The spread of a sampled rule is added
        to the standard error.
    config : `QuadratureConfig`
    lipschitz : `float`
        Bound L with |g(theta)| <= L |theta| near zero.
    label : `str`
        Name used in log messages.

    Returns
    -------
    `QuadratureResult`

    """
    value = 0.0
    variance = 0.0
    error = 0.0
    for piece, ray in enumerate(rays):
        levels = []
        for level, nodes in enumerate((config.nodes, 2 * config.nodes)):
            z, weights = ray_rule(ray, nodes, config.tolerance, lipschitz)
            thetas = z[:, None] * ray.direction
            levels.append(_accumulate(integrand, thetas, weights, config.seed, piece, level)[:2])
        (coarse, coarse_var), (fine, fine_var) = levels
        difference = float(np.max(np.abs(fine - coarse)))
        noise = float(np.sqrt(np.max(coarse_var + fine_var)))
        logger.debug("%s on ray %d: refinement difference %g, noise %g",
                     label, piece, difference, noise)
        value = value + fine
        variance = variance + fine_var
        error = max(error, max(difference - 4.0 * noise, 0.0))

    if atoms is not None:
        total, atom_var, terms = _accumulate(integrand, atoms.points, atoms.weights, config.seed,
                                             len(rays), 0)
        if atoms.sampled:
            # Equally weighted draws: the spread of the terms is the sampling error of their sum.
            spread = terms.shape[0] * np.var(terms, axis=0, ddof=1)
            logger.debug("%s on sampled atoms: sampling standard error %s",
                         label, np.sqrt(spread))
            atom_var = atom_var + spread
        value = value + total
        variance = variance + atom_var

    scale = max(1.0, float(np.max(np.abs(value))))
    converged = error <= config.refinement_tolerance * scale
    if not converged:
        message = (f"Quadrature of {label} did not converge: refinement levels differ by "
                   f"{error:g} beyond Monte Carlo noise")
        if config.strict:
            raise QuadratureConvergenceError(message)
        logger.warning(message)
    return QuadratureResult(
        value=np.asarray(value, dtype=float),
        standard_error=np.sqrt(np.asarray(variance, dtype=float)),
        error_estimate=error,
        converged=converged,
    )
