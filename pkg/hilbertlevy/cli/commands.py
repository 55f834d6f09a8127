"""The subcommands of the command-line front end.

Every command takes a parsed `ExperimentConfig` and returns the process exit code. Output files
are written only after all computations have finished.
"""

from typing import List, Optional, TextIO

import csv
import json
import logging
import os
import sys
import numpy as np

from hilbertlevy.cli.config import layout_of, probe_vectors
from hilbertlevy.subordination import (classify_integrability, sample_x_batch, simulate_path_batch,
                                       subordinated_exponent, subordinated_triplet)
from hilbertlevy.util.rng import draw_samples
from hilbertlevy.verify.battery import run_battery


logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3

SAMPLE_HEADER = ("sample_id", "component", "coeff_index", "value")
PATH_HEADER = ("t", "component", "coeff_index", "value")
REPORT_FILE = "report.json"


def _number(value):
    return format(float(value), ".17g")


def _coefficient_labels(layout):
    """(component, coeff_index) of every flat coefficient."""
    return [(j, k) for j, n in enumerate(layout.dims) for k in range(n)]


# -------------------------------------------------------------------------------------------------
# exponent
# -------------------------------------------------------------------------------------------------

def cmd_exponent(config, probes=None, fmt="csv", stream: TextIO = sys.stdout):
    """Print rho(u) for every probe, u given as flat coefficient lists.

    Raises
    ------
    `hilbertlevy.errors.ConfigError`
        If a probe does not fit the layout; nothing is printed in that case.

    """
    vectors = probe_vectors(config, probes)
    rows = [(u, subordinated_exponent(config.spec.process, u)) for u in vectors]
    if fmt == "json":
        json.dump([{"u": u.values.tolist(), "re": rho.real, "im": rho.imag} for u, rho in rows],
                  stream, indent=2)
        stream.write("\n")
        return EXIT_PASS
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("u", "re", "im"))
    for u, rho in rows:
        writer.writerow((" ".join(_number(v) for v in u.values), _number(rho.real),
                         _number(rho.imag)))
    return EXIT_PASS


# -------------------------------------------------------------------------------------------------
# simulate
# -------------------------------------------------------------------------------------------------

def write_samples_csv(path, layout, samples):
    labels = _coefficient_labels(layout)
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SAMPLE_HEADER)
        for i, values in enumerate(samples):
            for (j, k), value in zip(labels, values):
                writer.writerow((i, j, k, _number(value)))


def write_path_csv(path, layout, times, values):
    labels = _coefficient_labels(layout)
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(PATH_HEADER)
        for t, point in zip(times, values):
            for (j, k), value in zip(labels, point):
                writer.writerow((_number(t), j, k, _number(value)))


def cmd_simulate(config, out_dir=None, formats=None, threads=1):
    """Draw X(t) or, with ``run.grid``, whole paths and write them to the output directory.

    I.i.d. draws go to ``samples.csv`` / ``samples.json``; paths go to one ``path-<i>.csv`` per
    path or a single ``paths.json``.

    Returns
    -------
    `int`
        The exit code.

    """
    out_dir = out_dir or config.output.directory
    formats = formats or config.output.formats
    spec = config.spec.process
    layout = layout_of(config)
    run = config.run
    if run.grid is None:
        samples = draw_samples(lambda rng, n: sample_x_batch(spec, run.t, rng, n), run.samples,
                               run.seed, threads)
        os.makedirs(out_dir, exist_ok=True)
        if "csv" in formats:
            write_samples_csv(os.path.join(out_dir, "samples.csv"), layout, samples)
        if "json" in formats:
            with open(os.path.join(out_dir, "samples.json"), "w", encoding="utf-8") as out:
                json.dump({"t": run.t, "dims": list(layout.dims), "seed": run.seed,
                           "samples": samples.tolist()}, out)
        logger.info("Wrote %d draws of X(%g) to %s", run.samples, run.t, out_dir)
        return EXIT_PASS

    times = np.asarray(run.grid, dtype=float)
    paths = draw_samples(lambda rng, n: simulate_path_batch(spec, times, rng, n), run.samples,
                         run.seed, threads)
    os.makedirs(out_dir, exist_ok=True)
    if "csv" in formats:
        width = len(str(max(run.samples - 1, 0)))
        for i, path in enumerate(paths):
            write_path_csv(os.path.join(out_dir, f"path-{i:0{width}d}.csv"), layout, times, path)
    if "json" in formats:
        with open(os.path.join(out_dir, "paths.json"), "w", encoding="utf-8") as out:
            json.dump({"t": times.tolist(), "dims": list(layout.dims), "seed": run.seed,
                       "paths": paths.tolist()}, out)
    logger.info("Wrote %d paths on %d grid points to %s", run.samples, times.shape[0], out_dir)
    return EXIT_PASS


# -------------------------------------------------------------------------------------------------
# verify
# -------------------------------------------------------------------------------------------------

def cmd_verify(config, out_dir=None, threads=1, stream: TextIO = sys.stdout):
    """Run the configured battery, print one line per check and write ``report.json``.

    Returns
    -------
    `int`
        `EXIT_FAIL` if any check failed, else `EXIT_PASS`.

    """
    out_dir = out_dir or config.output.directory
    battery = run_battery(config.spec.process, [c.check_id for c in config.checks],
                          config.run.seed, threads, config.check_options(), config.document)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, REPORT_FILE), "w", encoding="utf-8") as out:
        json.dump(battery.to_dict(), out, indent=2)
    for report in battery.reports:
        stream.write(report.summary() + "\n")
    return EXIT_FAIL if battery.failed else EXIT_PASS


# -------------------------------------------------------------------------------------------------
# classify and triplet
# -------------------------------------------------------------------------------------------------

def cmd_classify(config, as_json=False, stream: TextIO = sys.stdout):
    report = classify_integrability(config.spec.process)
    if as_json:
        json.dump(report.to_dict(), stream, indent=2)
        stream.write("\n")
    else:
        stream.write(report.summary() + "\n")
    return EXIT_PASS


def cmd_triplet(config, radii: Optional[List[float]] = None, stream: TextIO = sys.stdout):
    """Print beta with its standard errors, the eigenvalues of Gamma and tail masses of mu."""
    triplet = subordinated_triplet(config.spec.process, config.run.quadrature)
    radii = radii or [0.5, 1.0, 2.0]
    tails = [(r, *triplet.levy_measure.tail_mass(r)) for r in radii]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("quantity", "index", "value", "standard_error"))
    for i, (value, error) in enumerate(zip(triplet.beta.values, triplet.beta_standard_error)):
        writer.writerow(("beta", i, _number(value), _number(error)))
    for i, value in enumerate(triplet.gamma.eigenvalues):
        writer.writerow(("gamma_eigenvalue", i, _number(value), _number(0.0)))
    for r, value, error in tails:
        writer.writerow(("mu_tail", _number(r), _number(value), _number(error)))
    if not triplet.converged:
        logger.warning("Quadrature of beta did not converge")
    return EXIT_PASS
