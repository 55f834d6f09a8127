import json

import numpy as np
import pytest

from hilbertlevy.families import HNIGParams, make_hnig
from hilbertlevy.space import CovOperator, TruncatedVector
from hilbertlevy.verify.battery import check_seeds, run_battery, run_check
from hilbertlevy.verify.report import (BatteryReport, CheckId, CheckStatus, ProbeResult,
                                       VerificationReport)


FAST_CF = {"samples": 20_000, "probes": 3}


@pytest.fixture
def degenerate_hnig():
    return make_hnig(HNIGParams(1.0, 0.0, TruncatedVector.from_components([[0.0, 0.0]]),
                                CovOperator.from_eigenvalues([[1.0, 0.5]])))


def test_seeds_per_check():
    seeds = check_seeds(11)
    assert list(seeds) == list(CheckId)
    assert len(set(seeds.values())) == len(CheckId)
    assert seeds == check_seeds(11)
    assert seeds != check_seeds(12)


def test_adding_checks_keeps_the_numbers(desk_hnig):
    options = {CheckId.CF: FAST_CF, CheckId.MOMENTS: {"samples": 20_000}}
    alone = run_battery(desk_hnig, [CheckId.CF], 11, options=options)
    together = run_battery(desk_hnig, ["moments", "cf"], 11, options=options)
    assert [r.check_id for r in together.reports] == [CheckId.CF, CheckId.MOMENTS]
    assert ([p.empirical for p in alone.reports[0].probes]
            == [p.empirical for p in together.reports[0].probes])
    assert not together.failed


def test_inapplicable_checks_are_skipped(degenerate_hnig):
    battery = run_battery(degenerate_hnig, ["moments", "scaling", "tail_index"], 1)
    assert [r.status for r in battery.reports] == [CheckStatus.SKIPPED] * 3
    assert not battery.failed
    moments = battery.reports[0]
    assert moments.message.startswith("skipped: not square integrable per classification")
    assert moments.seed == check_seeds(1)[CheckId.MOMENTS]


def test_run_check_passes_options(desk_hnig):
    report = run_check(desk_hnig, CheckId.CF, 3, options=dict(FAST_CF, radii=(1.0,)))
    assert len(report.probes) == 3
    assert report.details["samples"] == 20_000


def test_failed_checks_fail_the_battery():
    reports = [VerificationReport(CheckId.CF, CheckStatus.PASSED),
               VerificationReport(CheckId.MOMENTS, CheckStatus.FAILED)]
    assert BatteryReport(0, reports).failed
    assert not BatteryReport(0, reports[:1]).failed


def test_report_serialisation():
    probe = ProbeResult("cf[u0]", 1 + 0j, complex(0.5, -0.25), 0.01, True)
    report = VerificationReport.from_probes(CheckId.CF, [probe], 3,
                                            details={"rates": np.array([1.0, 2.0])})
    battery = BatteryReport(3, [report], 1.5, {"run": {"seed": 3}})
    document = json.loads(json.dumps(battery.to_dict()))
    assert list(document) == ["config", "seed", "runtime", "checks"]
    check = document["checks"][0]
    assert check["status"] == "passed"
    assert check["probes"][0]["empirical"] == [0.5, -0.25]
    assert check["details"]["rates"] == [1.0, 2.0]


def test_summaries():
    skipped = VerificationReport.skipped(CheckId.SCALING, "no stability index given")
    assert skipped.summary() == "scaling: skipped: no stability index given"
    failed = VerificationReport.from_probes(
        CheckId.MOMENTS, [ProbeResult("mean[0]", 0.0, 1.0, 0.1, False),
                          ProbeResult("mean[1]", 0.0, 0.0, 0.1, True)], 0)
    assert failed.summary() == "moments: failed (1/2 probes)"
