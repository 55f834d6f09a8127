"""Estimators used by the verification checks."""

from dataclasses import dataclass
from typing import Optional

import math
import numpy as np
from scipy import stats


@dataclass
class MeasuredValue:
    """A Monte Carlo estimate with its standard error."""
    mean: float
    stdev: float
    low: Optional[float] = None
    high: Optional[float] = None


def sample_mean(values):
    """Column means of ``values`` with compensated summation and their standard errors.

    Returns
    -------
    mean : `numpy.ndarray`
    standard_error : `numpy.ndarray`

    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if values.ndim == 1:
        values = values[:, None]
    mean = np.array([math.fsum(column) / n for column in values.T])
    spread = np.sqrt(np.array([math.fsum(c) for c in ((values - mean) ** 2).T]) / (n - 1))
    return mean, spread / np.sqrt(n)


def measured(values):
    """`MeasuredValue` of the mean of a one-dimensional sample."""
    mean, error = sample_mean(np.asarray(values, dtype=float).reshape(-1))
    return MeasuredValue(float(mean[0]), float(error[0]))


def empirical_characteristic_function(projections):
    """Mean of exp(i <u|X>) per column of the projection matrix ``(N, probes)``."""
    projections = np.asarray(projections, dtype=float)
    return np.cos(projections).mean(axis=0) + 1j * np.sin(projections).mean(axis=0)


def covariance_with_errors(samples):
    """Empirical covariance matrix and entrywise standard errors from fourth moments."""
    samples = np.asarray(samples, dtype=float)
    n, dim = samples.shape
    centred = samples - samples.mean(axis=0)
    covariance = np.empty((dim, dim))
    errors = np.empty((dim, dim))
    for i in range(dim):
        products = centred[:, i, None] * centred
        covariance[i] = products.sum(axis=0) / (n - 1)
        errors[i] = products.std(axis=0, ddof=1) / np.sqrt(n)
    return covariance, errors


def hill_estimator(values, k):
    """Hill estimate of the tail index from the ``k`` largest of the positive ``values``.

    alpha = k / sum_{i<=k} (log X_(n-i+1) - log X_(n-k)).
    """
    x = np.sort(np.asarray(values, dtype=float))
    x = x[x > 0]
    n = x.shape[0]
    if not 0 < k < n:
        raise ValueError(f"Need 0 < k < {n} order statistics, got k={k}")
    logs = np.log(x[n - k:]) - np.log(x[n - k - 1])
    return float(k / np.sum(logs))


def ks_two_sample(first, second):
    """Two-sample Kolmogorov-Smirnov test with the asymptotic distribution.

    Returns
    -------
    statistic : `float`
    pvalue : `float`

    """
    result = stats.ks_2samp(first, second, method="asymp")
    return float(result.statistic), float(result.pvalue)


def random_directions(rng, dim, count):
    """``count`` independent uniformly distributed unit vectors in R^dim."""
    directions = rng.standard_normal((count, dim))
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)
