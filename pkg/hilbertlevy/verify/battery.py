"""Running a selection of checks against one process."""

from typing import Any, Dict, Iterable, Mapping, Optional

import logging
import time
import numpy as np

from hilbertlevy.errors import NotSquareIntegrableError
from hilbertlevy.subordination import classify_integrability
from hilbertlevy.util.rng import child_seeds, derived_seed
from hilbertlevy.verify import checks
from hilbertlevy.verify.report import BatteryReport, CheckId, VerificationReport


logger = logging.getLogger(__name__)

DEFAULT_GROWTH_GRID = (0.0, 0.5, 1.0, 2.0, 4.0)


def check_seeds(seed):
    """One integer seed per check id, fixed by the position of the id in `CheckId`.

    Adding a check to a battery therefore never changes the numbers of the others.
    """
    sequences = child_seeds(seed, len(CheckId))
    return {check_id: derived_seed(sequence) for check_id, sequence in zip(CheckId, sequences)}


def _growth_grid(d, options):
    thetas = options.pop("thetas", None)
    if thetas is None:
        return np.outer(DEFAULT_GROWTH_GRID, np.ones(d))
    return np.asarray(thetas, dtype=float)


def run_check(spec, check_id, seed, threads=1, options: Optional[Mapping[str, Any]] = None):
    """Run one check with its options, turning inapplicable checks into skipped reports.

    Parameters
    ----------
    spec : `hilbertlevy.subordination.SubordinatedProcessSpec`
    check_id : `CheckId`
    seed : `int`
    threads : `int`
    options : `Mapping[str, Any]`, optional
        Keyword arguments of the check function.

    Returns
    -------
    `VerificationReport`

    """
    options = dict(options or {})
    if check_id is CheckId.CF:
        analytic_spec = options.pop("analytic_spec", None)
        return checks.check_cf(spec, checks.CFCheckConfig(**options), seed, threads, analytic_spec)
    if check_id is CheckId.MOMENTS:
        try:
            return checks.check_moments(spec, seed=seed, threads=threads, **options)
        except NotSquareIntegrableError as error:
            cases = ", ".join(c.case.description for c in error.report.components)
            return VerificationReport.skipped(
                check_id, f"not square integrable per classification ({cases})", seed)
    if check_id is CheckId.SCALING:
        if "alpha" not in options:
            return VerificationReport.skipped(check_id, "no stability index given", seed)
        return checks.check_scaling(spec, seed=seed, threads=threads, **options)
    if check_id is CheckId.GROWTH:
        thetas = _growth_grid(spec.base.d, options)
        return checks.check_growth_bounds(spec.base, thetas, seed=seed, threads=threads, **options)
    if check_id is CheckId.TAIL_INDEX:
        if options.get("expected_range") is None and not classify_integrability(
                spec).x_square_integrable:
            return VerificationReport.skipped(
                check_id, "heavy tails expected but no tail index range given", seed)
        return checks.check_tail_index(spec, seed=seed, threads=threads, **options)
    if check_id is CheckId.JUMP_MEASURE:
        return checks.check_jump_measure(spec, seed=seed, threads=threads, **options)
    assert check_id is CheckId.SYMMETRY
    return checks.check_symmetry(spec, seed=seed, threads=threads, **options)


def run_battery(spec, check_ids: Iterable, seed, threads=1,
                options: Optional[Dict[CheckId, Mapping[str, Any]]] = None, config=None):
    """Run the selected checks, each on its own seed, and collect the reports by check id.

    Parameters
    ----------
    spec : `hilbertlevy.subordination.SubordinatedProcessSpec`
    check_ids : `Iterable[CheckId or str]`
    seed : `int`
        Root of the per-check seeds.
    threads : `int`
        Worker threads of every Monte Carlo check.
    options : `Dict[CheckId, Mapping[str, Any]]`, optional
        Per-check keyword arguments.
    config : `Dict[str, Any]`, optional
        Configuration echoed in the report.

    Returns
    -------
    `BatteryReport`

    """
    start = time.perf_counter()
    selected = sorted({CheckId(c) for c in check_ids}, key=list(CheckId).index)
    seeds = check_seeds(seed)
    options = options or {}
    reports = []
    for check_id in selected:
        report = run_check(spec, check_id, seeds[check_id], threads, options.get(check_id))
        logger.info("%s", report.summary())
        reports.append(report)
    return BatteryReport(seed, reports, time.perf_counter() - start, config)
