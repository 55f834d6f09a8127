"""Records produced by the verification checks."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class CheckId(Enum):
    CF = "cf"
    MOMENTS = "moments"
    SCALING = "scaling"
    GROWTH = "growth"
    TAIL_INDEX = "tail_index"
    JUMP_MEASURE = "jump_measure"
    SYMMETRY = "symmetry"


class CheckStatus(Enum):
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ProbeResult:
    """One comparison of an analytic and an empirical value.

    Parameters
    ----------
    label : `str`
        What was probed.
    analytic : `Any`
        Expected value, a float, complex number or `None` for pure criteria.
    empirical : `Any`
        Estimated value.
    standard_error : `float`, optional
        Monte Carlo standard error of the estimate, `None` for test statistics.
    passed : `bool`
        Outcome of the probe's criterion.

    """
    label: str
    analytic: Any
    empirical: Any
    standard_error: Optional[float]
    passed: bool

    def to_dict(self):
        return {
            "label": self.label,
            "analytic": _plain(self.analytic),
            "empirical": _plain(self.empirical),
            "standard_error": _plain(self.standard_error),
            "passed": bool(self.passed),
        }


def _plain(value):
    """JSON representation of numbers, keeping complex numbers as [re, im] pairs."""
    if value is None:
        return None
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if hasattr(value, "tolist"):
        return _plain(value.tolist())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (bool, int, float)):
        return value
    return str(value)


@dataclass
class VerificationReport:
    """Outcome of one check.

    ``status`` is `CheckStatus.PASSED` exactly when every probe passed, unless the check was
    skipped or found inconclusive.
    """
    check_id: CheckId
    status: CheckStatus
    probes: List[ProbeResult] = field(default_factory=list)
    seed: Optional[int] = None
    runtime: float = 0.0
    message: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_probes(cls, check_id, probes, seed, **kwargs):
        status = CheckStatus.PASSED if all(p.passed for p in probes) else CheckStatus.FAILED
        return cls(check_id, status, probes, seed, **kwargs)

    @classmethod
    def skipped(cls, check_id, reason, seed=None):
        return cls(check_id, CheckStatus.SKIPPED, seed=seed, message=f"skipped: {reason}")

    @property
    def passed(self):
        return self.status is CheckStatus.PASSED

    @property
    def failed(self):
        return self.status is CheckStatus.FAILED

    def summary(self):
        if self.status is CheckStatus.SKIPPED and self.message:
            return f"{self.check_id.value}: {self.message}"
        line = f"{self.check_id.value}: {self.status.value}"
        if self.probes:
            good = sum(p.passed for p in self.probes)
            line += f" ({good}/{len(self.probes)} probes)"
        if self.message:
            line += f" - {self.message}"
        return line

    def to_dict(self):
        return {
            "check_id": self.check_id.value,
            "status": self.status.value,
            "seed": self.seed,
            "runtime": self.runtime,
            "message": self.message,
            "details": _plain(self.details),
            "probes": [p.to_dict() for p in self.probes],
        }


@dataclass
class BatteryReport:
    """All reports of one verification run, ordered by check id."""
    seed: int
    reports: List[VerificationReport]
    runtime: float = 0.0
    config: Optional[Dict[str, Any]] = None

    @property
    def failed(self):
        return any(r.failed for r in self.reports)

    def to_dict(self):
        return {
            "config": self.config,
            "seed": self.seed,
            "runtime": self.runtime,
            "checks": [r.to_dict() for r in self.reports],
        }
