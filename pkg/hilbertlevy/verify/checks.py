"""Monte Carlo checks comparing sampled subordinated processes against their analytic properties.

Every check takes an explicit seed and returns a `VerificationReport`; a failing comparison is a
report entry, never an exception.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import functools
import logging
import time
import numpy as np
from numpy.random import default_rng

from hilbertlevy import base as base_processes
from hilbertlevy.errors import DomainError
from hilbertlevy.quadrature import QuadratureConfig
from hilbertlevy.subordination import (cov_operator_of_x, exponent_batch, mean_of_x, sample_x_batch,
                                       subordinated_triplet)
from hilbertlevy.util.rng import as_seed_sequence, check_seed, draw_samples, map_chunks
from hilbertlevy.verify.report import CheckId, CheckStatus, ProbeResult, VerificationReport
from hilbertlevy.verify.stats import (covariance_with_errors, empirical_characteristic_function,
                                      hill_estimator, ks_two_sample, measured, random_directions,
                                      sample_mean)


logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
MIN_TAIL_POINTS = 100
MIN_JUMP_RADIUS = 0.25
# Hill estimates above this index are read as tails lighter than any power law of interest.
LIGHT_TAIL_INDEX = 2.5


def _timed(check_id):
    def decorate(check):
        @functools.wraps(check)
        def run(*args, **kwargs):
            logger.info("Running check %s", check_id.value)
            start = time.perf_counter()
            report = check(*args, **kwargs)
            report.runtime = time.perf_counter() - start
            logger.info("Check %s %s in %.2f s", check_id.value, report.status.value,
                        report.runtime)
            return report
        return run
    return decorate


def _within(analytic, empirical, error, k):
    return bool(abs(analytic - empirical) <= k * error + 1e-12 * (1.0 + abs(analytic)))


def _check_samples(samples):
    if samples < MIN_SAMPLES:
        raise DomainError(f"Checks need at least {MIN_SAMPLES} samples, got {samples}")


# -------------------------------------------------------------------------------------------------
# Characteristic function
# -------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class CFCheckConfig:
    """Probe grid of the characteristic function check.

    Parameters
    ----------
    probes : `int`
        Number of probe vectors, the first of which is u = 0.
    radii : `Tuple[float, ...]`
        Norms of the remaining probes, used cyclically.
    samples : `int`
        Number of draws of X(t).
    t : `float`
        Time at which X is sampled.
    k : `float`
        Pass threshold in standard errors.

    """
    probes: int = 20
    radii: Tuple[float, ...] = (0.5, 1.0, 2.0)
    samples: int = 100_000
    t: float = 1.0
    k: float = 4.0

    def __post_init__(self):
        _check_samples(self.samples)
        if self.probes < 1:
            raise DomainError("The probe grid contains at least u = 0")
        if not self.t > 0 or not self.k > 0:
            raise DomainError(f"Time and threshold must be positive, got t={self.t}, k={self.k}")
        if not self.radii or min(self.radii) <= 0:
            raise DomainError(f"Probe radii must be positive, got {self.radii}")

    def grid(self, total_dim, rng):
        """Probe vectors as rows, u = 0 first."""
        count = self.probes - 1
        radii = np.resize(np.asarray(self.radii, dtype=float), count)
        directions = random_directions(rng, total_dim, count)
        return np.vstack([np.zeros((1, total_dim)), radii[:, None] * directions])


@_timed(CheckId.CF)
def check_cf(spec, cfg=None, seed=0, threads=1, analytic_spec=None):
    """Compare the empirical characteristic function of X(t) with exp(t rho(u)).

    Both parts of every probe must lie within k / sqrt(N) of the analytic value.

    Parameters
    ----------
    spec : `hilbertlevy.subordination.SubordinatedProcessSpec`
        The process that is sampled.
    cfg : `CFCheckConfig`, optional
    seed : `int`
    threads : `int`
    analytic_spec : `hilbertlevy.subordination.SubordinatedProcessSpec`, optional
        Process whose exponent supplies the analytic values, ``spec`` by default.

    Returns
    -------
    `VerificationReport`

    """
    cfg = cfg or CFCheckConfig()
    check_seed(seed)
    grid_seq, sample_seq = as_seed_sequence(seed).spawn(2)
    grid = cfg.grid(spec.layout.total_dim, default_rng(grid_seq))
    analytic = np.exp(cfg.t * exponent_batch(analytic_spec or spec, grid))

    def draw(rng, n):
        values = sample_x_batch(spec, cfg.t, rng, n)
        return empirical_characteristic_function(values @ grid.T) * n

    chunks = map_chunks(draw, cfg.samples, sample_seq, threads)
    empirical = np.sum(chunks, axis=0) / cfg.samples
    error = 1.0 / np.sqrt(cfg.samples)
    probes = []
    for i, (a, e) in enumerate(zip(analytic, empirical)):
        passed = _within(a.real, e.real, error, cfg.k) and _within(a.imag, e.imag, error, cfg.k)
        probes.append(ProbeResult(f"cf[u{i}] |u|={np.linalg.norm(grid[i]):.3g}", complex(a),
                                  complex(e), error, passed))
    return VerificationReport.from_probes(CheckId.CF, probes, seed,
                                          details={"samples": cfg.samples, "t": cfg.t})


# -------------------------------------------------------------------------------------------------
# Moments
# -------------------------------------------------------------------------------------------------

@_timed(CheckId.MOMENTS)
def check_moments(spec, samples=100_000, seed=0, threads=1, k=4.0, analytic_spec=None):
    """Compare the empirical mean vector and covariance matrix of X(1) with the moment formulas.

    Raises
    ------
    `hilbertlevy.errors.NotSquareIntegrableError`
        If ``analytic_spec`` (default ``spec``) is not square integrable.

    """
    _check_samples(samples)
    check_seed(seed)
    reference = analytic_spec or spec
    covariance = cov_operator_of_x(reference).to_matrix()
    mean = mean_of_x(reference).values

    values = draw_samples(lambda rng, n: sample_x_batch(spec, 1.0, rng, n), samples, seed, threads)
    empirical_mean, mean_error = sample_mean(values)
    empirical_cov, cov_error = covariance_with_errors(values)

    probes = [ProbeResult(f"mean[{i}]", mean[i], empirical_mean[i], mean_error[i],
                          _within(mean[i], empirical_mean[i], mean_error[i], k))
              for i in range(mean.shape[0])]
    for i, j in zip(*np.triu_indices(mean.shape[0])):
        probes.append(ProbeResult(f"cov[{i},{j}]", covariance[i, j], empirical_cov[i, j],
                                  cov_error[i, j],
                                  _within(covariance[i, j], empirical_cov[i, j],
                                          cov_error[i, j], k)))
    return VerificationReport.from_probes(CheckId.MOMENTS, probes, seed,
                                          details={"samples": samples})


# -------------------------------------------------------------------------------------------------
# Stable scaling and symmetry
# -------------------------------------------------------------------------------------------------

def _ks_probes(label, pairs, level):
    threshold = level / len(pairs)
    probes = []
    for i, (first, second) in enumerate(pairs):
        statistic, pvalue = ks_two_sample(first, second)
        probes.append(ProbeResult(f"{label}[u{i}] D={statistic:.4g}", threshold, pvalue, None,
                                  pvalue > threshold))
    return probes


@_timed(CheckId.SCALING)
def check_scaling(spec, alpha, t=2.0, samples=100_000, seed=0, threads=1, projections=3,
                  level=0.01):
    """Two-sample KS tests of <u|X(t^alpha)> against t <u|X(1)> on random directions.

    Passes when every p-value exceeds ``level`` divided by the number of projections.
    """
    _check_samples(samples)
    check_seed(seed)
    if not 0 < alpha <= 2:
        raise DomainError(f"Stability index must lie in (0, 2], got {alpha}")
    direction_seq, scaled_seq, unit_seq = as_seed_sequence(seed).spawn(3)
    directions = random_directions(default_rng(direction_seq), spec.layout.total_dim, projections)

    def projected(time_point, sequence):
        return draw_samples(lambda rng, n: sample_x_batch(spec, time_point, rng, n) @ directions.T,
                            samples, sequence, threads)

    scaled = projected(t ** alpha, scaled_seq)
    unit = t * projected(1.0, unit_seq)
    probes = _ks_probes("scaling", [(scaled[:, i], unit[:, i]) for i in range(projections)], level)
    return VerificationReport.from_probes(CheckId.SCALING, probes, seed,
                                          details={"alpha": alpha, "t": t, "samples": samples})


@_timed(CheckId.SYMMETRY)
def check_symmetry(spec, samples=100_000, seed=0, threads=1, projections=3, level=0.01):
    """Two-sample KS tests of <u|X(1)> against -<u|X(1)> on independent halves of the sample."""
    _check_samples(samples)
    check_seed(seed)
    direction_seq, sample_seq = as_seed_sequence(seed).spawn(2)
    directions = random_directions(default_rng(direction_seq), spec.layout.total_dim, projections)
    values = draw_samples(lambda rng, n: sample_x_batch(spec, 1.0, rng, n) @ directions.T,
                          2 * samples, sample_seq, threads)
    first, second = values[:samples], values[samples:]
    probes = _ks_probes("symmetry", [(first[:, i], -second[:, i]) for i in range(projections)],
                        level)
    return VerificationReport.from_probes(CheckId.SYMMETRY, probes, seed,
                                          details={"samples": samples})


# -------------------------------------------------------------------------------------------------
# Growth function of the base
# -------------------------------------------------------------------------------------------------

@_timed(CheckId.GROWTH)
def check_growth_bounds(base, thetas, samples=100_000, seed=0, threads=1, k=4.0):
    """Monte Carlo growth function f(theta) = E|L(theta)| against its analytic bounds.

    Checked on every grid point: f(theta) <= |theta| c1 + |theta|^{1/2} c2, the martingale bound
    for centred bases, |E chi(L(theta))| <= |theta| c_chi and the componentwise sandwich
    f(theta) <= sum_j f_j(theta_j) <= sqrt(d) f(theta). Consecutive grid points theta, theta' are
    also checked for subadditivity and monotonicity through f(theta + theta').

    Parameters
    ----------
    base : `hilbertlevy.base.BaseProcessSpec`
    thetas : array_like
        Grid of shape ``(m, d)``.

    """
    _check_samples(samples)
    check_seed(seed)
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if thetas.shape[1] != base.d or np.any(thetas < 0):
        raise DomainError(f"Growth grid needs nonnegative rows of length {base.d}")
    constants = base_processes.growth_function_bound(base)
    sums = thetas[:-1] + thetas[1:]
    points = np.vstack([thetas, sums])
    sequences = as_seed_sequence(seed).spawn(points.shape[0])

    def statistics(theta, sequence):
        draws = draw_samples(
            lambda rng, n: base_processes.sample_base_batch(
                base, np.broadcast_to(theta, (n, base.d)), rng),
            samples, sequence, threads)
        norms = np.linalg.norm(draws, axis=1)
        components = base.layout.component_norms(draws).sum(axis=-1)
        truncated, truncated_error = sample_mean(base_processes.truncate(draws))
        return (measured(norms), float(components.mean()), float(norms.mean()),
                float(np.linalg.norm(truncated)), float(np.linalg.norm(truncated_error)))

    results = [statistics(theta, sequence) for theta, sequence in zip(points, sequences)]
    growth = [r[0] for r in results]
    probes = []
    for theta, (f, sandwich, plain, chi, chi_error) in zip(thetas, results):
        size = float(np.linalg.norm(theta))
        label = f"theta={np.array2string(theta, precision=3)}"
        probes.append(ProbeResult(f"bound {label}", constants.bound(theta), f.mean, f.stdev,
                                  f.mean <= constants.bound(theta) + k * f.stdev + 1e-12))
        if constants.martingale is not None:
            limit = np.sqrt(size) * constants.martingale
            probes.append(ProbeResult(f"martingale {label}", limit, f.mean, f.stdev,
                                      f.mean <= limit + k * f.stdev + 1e-12))
        probes.append(ProbeResult(f"chi {label}", size * constants.c_chi, chi, chi_error,
                                  chi <= size * constants.c_chi + k * chi_error + 1e-12))
        slack = 1e-9 * (1.0 + sandwich)
        probes.append(ProbeResult(f"sandwich {label}", plain, sandwich, None,
                                  plain <= sandwich + slack
                                  and sandwich <= np.sqrt(base.d) * plain + slack))

    m = thetas.shape[0]
    for i in range(m - 1):
        first, second, joint = growth[i], growth[i + 1], growth[m + i]
        label = f"theta{i}+theta{i + 1}"
        error = np.sqrt(first.stdev ** 2 + second.stdev ** 2 + joint.stdev ** 2)
        probes.append(ProbeResult(f"subadditive {label}", first.mean + second.mean, joint.mean,
                                  error, joint.mean <= first.mean + second.mean + k * error))
        for name, part in (("first", first), ("second", second)):
            error = np.hypot(part.stdev, joint.stdev)
            probes.append(ProbeResult(f"monotone {name} {label}", part.mean, joint.mean, error,
                                      part.mean <= joint.mean + k * error))
    return VerificationReport.from_probes(
        CheckId.GROWTH, probes, seed,
        details={"c1": constants.c1, "c2": constants.c2, "c_chi": constants.c_chi,
                 "martingale": constants.martingale, "samples": samples})


# -------------------------------------------------------------------------------------------------
# Tails
# -------------------------------------------------------------------------------------------------

@_timed(CheckId.TAIL_INDEX)
def check_tail_index(spec, samples=1_000_000, top_fraction=0.01, seed=0, threads=1,
                     expected_range: Optional[Tuple[float, float]] = None):
    """Hill estimate of the tail index of |<u|X(1)>| for a random unit direction u.

    With ``expected_range`` the estimate must fall into it. Without one a tail lighter than any
    power law is expected, read as an estimate above `LIGHT_TAIL_INDEX`. Fewer than
    `MIN_TAIL_POINTS` order statistics make the check inconclusive.
    """
    check_seed(seed)
    if not 0 < top_fraction < 1:
        raise DomainError(f"Top fraction must lie in (0, 1), got {top_fraction}")
    top = int(samples * top_fraction)
    if top < MIN_TAIL_POINTS:
        logger.warning("Only %d tail points, tail index check is inconclusive", top)
        return VerificationReport(CheckId.TAIL_INDEX, CheckStatus.INCONCLUSIVE, seed=seed,
                                  message=f"inconclusive: {top} < {MIN_TAIL_POINTS} tail points")
    direction_seq, sample_seq = as_seed_sequence(seed).spawn(2)
    direction = random_directions(default_rng(direction_seq), spec.layout.total_dim, 1)[0]
    values = np.abs(draw_samples(lambda rng, n: sample_x_batch(spec, 1.0, rng, n) @ direction,
                                 samples, sample_seq, threads))
    estimate = hill_estimator(values, top)
    power_law = estimate <= LIGHT_TAIL_INDEX
    details = {"estimate": estimate, "order_statistics": top, "power_law": power_law}
    if expected_range is None:
        probe = ProbeResult("tail index: light", LIGHT_TAIL_INDEX, estimate, None, not power_law)
        message = "" if power_law else "no power-law tail"
    else:
        low, high = expected_range
        probe = ProbeResult(f"tail index in [{low}, {high}]", (low, high), estimate, None,
                            low <= estimate <= high)
        message = f"estimate {estimate:.3f}"
    return VerificationReport.from_probes(CheckId.TAIL_INDEX, [probe], seed, message=message,
                                          details=details)


@_timed(CheckId.JUMP_MEASURE)
def check_jump_measure(spec, radii=(0.5, 1.0, 2.0), dt=0.01, horizon=1.0, paths=20_000, seed=0,
                       threads=1, k=4.0, config=None, analytic_spec=None):
    """Rates of path increments larger than r against the quadrature of mu({|x| > r}).

    ``paths`` paths on a grid of step ``dt`` up to ``horizon`` are cut into independent cells;
    the rate is the number of cells with |Delta X| > r per unit time. The count is repeated on
    the grid of step dt / 2, which supplies the reported rate, and a disagreement of more than
    one standard error between the two grids is logged as a resolution warning.
    """
    check_seed(seed)
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or radii.min() < MIN_JUMP_RADIUS:
        raise DomainError(f"Jump radii must be at least {MIN_JUMP_RADIUS}, got {radii}")
    if not dt > 0 or not horizon >= dt:
        raise DomainError(f"Need 0 < dt <= horizon, got dt={dt}, horizon={horizon}")
    coarse_seq, fine_seq = as_seed_sequence(seed).spawn(2)

    def rates(step, sequence):
        cells = int(round(horizon / step)) * paths

        def count(rng, n):
            norms = np.linalg.norm(sample_x_batch(spec, step, rng, n), axis=1)
            return (norms[:, None] > radii).sum(axis=0)
        counts = np.sum(map_chunks(count, cells, sequence, threads), axis=0)
        exposure = cells * step
        return counts / exposure, np.sqrt(counts) / exposure

    coarse, coarse_error = rates(dt, coarse_seq)
    fine, fine_error = rates(dt / 2, fine_seq)
    unresolved = np.abs(coarse - fine) > np.hypot(coarse_error, fine_error)
    if unresolved.any():
        logger.warning("Jump counts change under grid refinement at radii %s", radii[unresolved])

    measure = subordinated_triplet(analytic_spec or spec, config or QuadratureConfig()).levy_measure
    probes = []
    for r, rate, error in zip(radii, fine, fine_error):
        tail, tail_error = measure.tail_mass(float(r))
        combined = float(np.hypot(error, tail_error))
        probes.append(ProbeResult(f"mu(|x| > {r:g})", tail, float(rate), combined,
                                  _within(tail, float(rate), combined, k)))
    return VerificationReport.from_probes(
        CheckId.JUMP_MEASURE, probes, seed,
        details={"dt": dt, "paths": paths, "horizon": horizon, "coarse_rates": coarse,
                 "grid_warning": bool(unresolved.any())})
