"""Strict parsing of experiment configuration files.

A configuration is a YAML document with the sections ``spec``, ``run``, ``checks`` and ``output``.
A JSON report written by ``verify`` is accepted as well: its embedded ``config`` is used, so that a
report can be rerun as it stands. Every problem is raised as `ConfigError` naming the key path.
"""

from dataclasses import dataclass, field, fields
from typing import Any, Dict, Mapping, Optional, Tuple

import copy
import logging
import numpy as np
import yaml

from hilbertlevy import families
from hilbertlevy.base import BaseJumps, BaseProcessSpec
from hilbertlevy.errors import ConfigError, HilbertLevyError
from hilbertlevy.jumps import ExponentialJumps, GaussianJumps, PointMassJumps
from hilbertlevy.quadrature import QuadratureConfig
from hilbertlevy.space import CovOperator, TruncatedVector, as_vector
from hilbertlevy.subordination import SubordinatedProcessSpec
from hilbertlevy.subordinators import (CommonFactorJumps, CompoundPoissonJumps, GammaJumps,
                                       IndependentJumps, InverseGaussianJumps, OneSidedStableJumps,
                                       SubordinatorSpec)
from hilbertlevy.util.rng import check_seed
from hilbertlevy.verify.report import CheckId


logger = logging.getLogger(__name__)

FAMILIES = ("hnig", "stable", "hvg", "explicit")
FORMATS = ("csv", "json")

FAMILY_KEYS = {
    "hnig": {"s", "c", "b", "q"},
    "stable": {"alpha", "q"},
    "hvg": {"a", "b", "q"},
    "explicit": {"base", "subordinator"},
}

CHECK_OPTIONS = {
    CheckId.CF: {"probes", "radii", "samples", "t", "k"},
    CheckId.MOMENTS: {"samples", "k"},
    CheckId.SCALING: {"alpha", "t", "samples", "projections", "level"},
    CheckId.GROWTH: {"thetas", "samples", "k"},
    CheckId.TAIL_INDEX: {"samples", "top_fraction", "expected_range"},
    CheckId.JUMP_MEASURE: {"radii", "dt", "horizon", "paths", "k", "quadrature"},
    CheckId.SYMMETRY: {"samples", "projections", "level"},
}

# Checks whose analytic side is taken from the reference spec of a negative control.
REFERENCE_CHECKS = (CheckId.CF, CheckId.MOMENTS, CheckId.JUMP_MEASURE)


def _mapping(value, path):
    if not isinstance(value, Mapping):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _keys(mapping, path, allowed, required=()):
    mapping = _mapping(mapping, path)
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {', '.join(map(str, unknown))}")
    missing = [key for key in required if key not in mapping]
    if missing:
        raise ConfigError(f"{path}: missing key(s) {', '.join(missing)}")
    return mapping


def _number(mapping, key, path, default=None, kind=float):
    if key not in mapping:
        if default is None:
            raise ConfigError(f"{path}.{key}: missing")
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    if kind is int and value != int(value):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    return kind(value)


def _numbers(mapping, key, path):
    value = mapping[key]
    if not isinstance(value, (list, tuple)) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
        raise ConfigError(f"{path}.{key}: expected a list of numbers, got {value!r}")
    return tuple(float(v) for v in value)


# -------------------------------------------------------------------------------------------------
# Spec section
# -------------------------------------------------------------------------------------------------

def _covariance(value, path):
    """Per component either eigenvalues of a diagonal block or a full matrix."""
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected one entry per component")
    matrices = [isinstance(c, list) and bool(c) and isinstance(c[0], list) for c in value]
    if any(matrices):
        return CovOperator.from_matrices(
            [c if is_matrix else np.diag(np.atleast_1d(np.asarray(c, dtype=float)))
             for c, is_matrix in zip(value, matrices)])
    return CovOperator.from_eigenvalues(value)


def _vector(value, layout, path):
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected per-component coefficient lists")
    return as_vector(layout, [np.atleast_1d(np.asarray(c, dtype=float)) for c in value])


def _kernel(value, path):
    value = _mapping(value, path)
    kind = value.get("type")
    if kind == "inverse_gaussian":
        _keys(value, path, {"type", "s", "c"}, ("s", "c"))
        return InverseGaussianJumps(_number(value, "s", path), _number(value, "c", path))
    if kind == "stable":
        _keys(value, path, {"type", "alpha", "scale"}, ("alpha",))
        return OneSidedStableJumps(_number(value, "alpha", path),
                                   _number(value, "scale", path, 1.0))
    if kind == "gamma":
        _keys(value, path, {"type", "a"}, ("a",))
        return GammaJumps(_number(value, "a", path))
    raise ConfigError(f"{path}.type: expected inverse_gaussian, stable or gamma, got {kind!r}")


def _jump_law(value, path, kinds):
    value = _mapping(value, path)
    kind = value.get("type")
    if kind not in kinds:
        raise ConfigError(f"{path}.type: expected one of {', '.join(kinds)}, got {kind!r}")
    if kind == "point_mass":
        _keys(value, path, {"type", "atoms", "weights"}, ("atoms",))
        return PointMassJumps(value["atoms"], value.get("weights"))
    if kind == "gaussian":
        _keys(value, path, {"type", "mean", "covariance"}, ("mean", "covariance"))
        return GaussianJumps(value["mean"], value["covariance"])
    _keys(value, path, {"type", "means"}, ("means",))
    return ExponentialJumps(value["means"])


def _subordinator_jumps(value, path):
    value = _mapping(value, path)
    kind = value.get("type")
    if kind == "independent":
        _keys(value, path, {"type", "kernels"}, ("kernels",))
        return IndependentJumps([_kernel(k, f"{path}.kernels[{i}]")
                                 for i, k in enumerate(value["kernels"])])
    if kind == "compound_poisson":
        _keys(value, path, {"type", "rate", "law"}, ("rate", "law"))
        return CompoundPoissonJumps(_number(value, "rate", path),
                                    _jump_law(value["law"], f"{path}.law",
                                              ("exponential", "point_mass")))
    if kind == "common_factor":
        _keys(value, path, {"type", "loadings", "factor", "idiosyncratic"},
              ("loadings", "factor"))
        idiosyncratic = value.get("idiosyncratic")
        if idiosyncratic is not None:
            idiosyncratic = _subordinator_jumps(idiosyncratic, f"{path}.idiosyncratic")
        return CommonFactorJumps(value["loadings"], _kernel(value["factor"], f"{path}.factor"),
                                 idiosyncratic)
    raise ConfigError(
        f"{path}.type: expected independent, compound_poisson or common_factor, got {kind!r}")


def _explicit(params, path):
    base = _keys(params["base"], f"{path}.base", {"drift", "covariance", "jumps"},
                 ("drift", "covariance"))
    covariance = _covariance(base["covariance"], f"{path}.base.covariance")
    drift = _vector(base["drift"], covariance.layout, f"{path}.base.drift")
    jumps = base.get("jumps")
    parts = None
    if jumps is not None:
        if not isinstance(jumps, list):
            raise ConfigError(f"{path}.base.jumps: expected one entry per component")
        parts = []
        for j, part in enumerate(jumps):
            where = f"{path}.base.jumps[{j}]"
            if part is None:
                parts.append(None)
                continue
            _keys(part, where, {"rate", "law"}, ("rate", "law"))
            parts.append(BaseJumps(_number(part, "rate", where),
                                   _jump_law(part["law"], f"{where}.law",
                                             ("point_mass", "gaussian"))))
        parts = tuple(parts)
    sub = _keys(params["subordinator"], f"{path}.subordinator", {"drift", "jumps"}, ("drift",))
    sub_jumps = sub.get("jumps")
    if sub_jumps is not None:
        sub_jumps = _subordinator_jumps(sub_jumps, f"{path}.subordinator.jumps")
    return SubordinatedProcessSpec(BaseProcessSpec(drift, covariance, parts),
                                   SubordinatorSpec(sub["drift"], sub_jumps))


def _family_params(family, params, path):
    """Family parameter object, `None` for explicit specs."""
    if family == "explicit":
        return None
    q = _covariance(params["q"], f"{path}.q")
    if family == "stable":
        return families.StableParams(_number(params, "alpha", path), q)
    b = _vector(params["b"], q.layout, f"{path}.b")
    if family == "hnig":
        return families.HNIGParams(_number(params, "s", path), _number(params, "c", path), b, q)
    return families.HVGParams(_number(params, "a", path), b, q)


def _build(family, params, path):
    _keys(params, path, FAMILY_KEYS[family], sorted(FAMILY_KEYS[family]))
    try:
        family_params = _family_params(family, params, path)
        if family == "explicit":
            return None, _explicit(params, path)
        maker = {"hnig": families.make_hnig, "stable": families.make_stable,
                 "hvg": families.make_hvg}[family]
        return family_params, maker(family_params)
    except ConfigError:
        raise
    except (HilbertLevyError, ValueError, TypeError) as error:
        raise ConfigError(f"{path}: {error}") from error


@dataclass(frozen=True, eq=False)
class SpecConfig:
    """The process under study and, for negative controls, the reference used analytically.

    Parameters
    ----------
    family : `str`
        One of hnig, stable, hvg or explicit.
    params : `Any`
        The family parameter object, `None` for explicit specs.
    process : `SubordinatedProcessSpec`
    reference : `SubordinatedProcessSpec`, optional
        The process with the ``reference`` overrides applied.

    """
    family: str
    params: Any
    process: SubordinatedProcessSpec
    reference: Optional[SubordinatedProcessSpec] = None

    @property
    def alpha(self):
        """Stability index of a stable family spec, else `None`."""
        return self.params.alpha if self.family == "stable" else None


def parse_spec(section, path="spec"):
    section = _mapping(section, path)
    family = section.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"{path}.family: expected one of {', '.join(FAMILIES)}, got {family!r}")
    params = {k: v for k, v in section.items() if k not in ("family", "reference")}
    family_params, process = _build(family, params, path)
    reference = None
    if section.get("reference") is not None:
        overrides = _keys(section["reference"], f"{path}.reference", FAMILY_KEYS[family])
        _, reference = _build(family, {**params, **overrides}, f"{path}.reference")
    return SpecConfig(family, family_params, process, reference)


# -------------------------------------------------------------------------------------------------
# Run, checks and output sections
# -------------------------------------------------------------------------------------------------

def parse_quadrature(section, path, seed):
    """`QuadratureConfig` from a mapping; the seed defaults to ``seed``."""
    section = _keys(section or {}, path, {f.name for f in fields(QuadratureConfig)})
    values = {"seed": seed, **section}
    try:
        return QuadratureConfig(**values)
    except (ValueError, TypeError) as error:
        raise ConfigError(f"{path}: {error}") from error


@dataclass(frozen=True)
class RunConfig:
    """Seed, sample count, time and optional path grid of a run."""
    seed: int
    samples: int = 10_000
    t: float = 1.0
    grid: Optional[Tuple[float, ...]] = None
    probes: Optional[Tuple[Any, ...]] = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)


def parse_run(section, path="run", seed=None):
    section = _keys(section, path, {"seed", "samples", "t", "grid", "probes", "quadrature"})
    raw_seed = seed if seed is not None else section.get("seed")
    if raw_seed is None:
        raise ConfigError(f"{path}.seed: a seed is required")
    try:
        raw_seed = check_seed(raw_seed)
    except ValueError as error:
        raise ConfigError(f"{path}.seed: {error}") from error
    samples = _number(section, "samples", path, 10_000, int)
    t = _number(section, "t", path, 1.0)
    if samples < 1 or not t > 0:
        raise ConfigError(f"{path}: samples and t must be positive, got {samples}, {t}")
    grid = None
    if section.get("grid") is not None:
        grid = _numbers(section, "grid", path)
    probes = section.get("probes")
    if probes is not None:
        probes = tuple(probes)
    return RunConfig(raw_seed, samples, t, grid, probes,
                     parse_quadrature(section.get("quadrature"), f"{path}.quadrature", raw_seed))


@dataclass(frozen=True)
class CheckConfig:
    """One check of the battery with its keyword overrides."""
    check_id: CheckId
    options: Dict[str, Any] = field(default_factory=dict)


def _check_options(check_id, options, path, seed):
    options = dict(_keys(options, path, CHECK_OPTIONS[check_id]))
    for key in ("radii", "expected_range"):
        if key in options:
            options[key] = _numbers(options, key, path)
    if "quadrature" in options:
        options["config"] = parse_quadrature(options.pop("quadrature"), f"{path}.quadrature",
                                             seed)
    return options


def parse_checks(section, seed, path="checks"):
    if not isinstance(section, list):
        raise ConfigError(f"{path}: expected a list of checks")
    parsed = []
    for i, entry in enumerate(section):
        where = f"{path}[{i}]"
        if isinstance(entry, str):
            entry = {"id": entry}
        entry = _keys(entry, where, {"id", "options"}, ("id",))
        try:
            check_id = CheckId(entry["id"])
        except ValueError as error:
            known = ", ".join(c.value for c in CheckId)
            raise ConfigError(
                f"{where}.id: expected one of {known}, got {entry['id']!r}") from error
        parsed.append(CheckConfig(check_id, _check_options(check_id, entry.get("options") or {},
                                                           f"{where}.options", seed)))
    return tuple(parsed)


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "."
    formats: Tuple[str, ...] = ("csv",)


def parse_output(section, path="output"):
    section = _keys(section or {}, path, {"directory", "formats"})
    formats = tuple(section.get("formats", ("csv",)))
    bad = [f for f in formats if f not in FORMATS]
    if bad or not formats:
        raise ConfigError(
            f"{path}.formats: expected a non-empty subset of {FORMATS}, got {formats}")
    return OutputConfig(str(section.get("directory", ".")), formats)


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A parsed configuration together with the document it came from.

    ``document`` holds the effective configuration, seed override included; it is echoed in
    reports so that a run can be repeated from its report.
    """
    spec: SpecConfig
    run: RunConfig
    checks: Tuple[CheckConfig, ...]
    output: OutputConfig
    document: Dict[str, Any]

    def check_options(self):
        """Keyword arguments of every configured check, with run-wide defaults filled in."""
        options = {}
        for check in self.checks:
            values = dict(check.options)
            if check.check_id is not CheckId.JUMP_MEASURE:
                values.setdefault("samples", self.run.samples)
            if check.check_id is CheckId.SCALING and self.spec.alpha is not None:
                values.setdefault("alpha", self.spec.alpha)
            if check.check_id is CheckId.JUMP_MEASURE:
                values.setdefault("config", self.run.quadrature)
            if self.spec.reference is not None and check.check_id in REFERENCE_CHECKS:
                values["analytic_spec"] = self.spec.reference
            options[check.check_id] = values
        return options


def parse_config(document, seed=None):
    """Validate a configuration document.

    Parameters
    ----------
    document : `Mapping`
        The parsed YAML or report JSON.
    seed : `int`, optional
        Overrides ``run.seed``.

    Returns
    -------
    `ExperimentConfig`

    """
    document = _mapping(document, "config")
    if "config" in document and "checks" in document:
        document = _mapping(document["config"], "config")
    document = copy.deepcopy(dict(document))
    _keys(document, "config", {"spec", "run", "checks", "output"}, ("spec", "run"))
    run = parse_run(document["run"], seed=seed)
    document["run"] = {**document["run"], "seed": run.seed}
    spec = parse_spec(document["spec"])
    checks = parse_checks(document.get("checks") or [], run.seed)
    output = parse_output(document.get("output"))
    logger.debug("Parsed %s configuration with %d checks", spec.family, len(checks))
    return ExperimentConfig(spec, run, checks, output, document)


def load_config(path, seed=None):
    """Read and validate a configuration or report file.

    Raises
    ------
    `ConfigError`
        On malformed documents; `OSError` if the file cannot be read.

    """
    with open(path, "r", encoding="utf-8") as config_file:
        try:
            document = yaml.safe_load(config_file)
        except yaml.YAMLError as error:
            raise ConfigError(f"{path}: {error}") from error
    return parse_config(document, seed)


def layout_of(config):
    """The `SpaceLayout` of the configured process."""
    return config.spec.process.layout


def probe_vectors(config, probes=None):
    """Probe vectors from explicit flat coefficient lists or from ``run.probes``."""
    layout = layout_of(config)
    raw = probes if probes is not None else config.run.probes
    if raw is None:
        return [TruncatedVector.zeros(layout)] + [TruncatedVector.basis(layout, j, k)
                                                  for j in range(layout.d)
                                                  for k in range(layout.dims[j])]
    vectors = []
    for i, values in enumerate(raw):
        try:
            vectors.append(as_vector(layout, values))
        except (HilbertLevyError, ValueError) as error:
            raise ConfigError(f"probe {i}: {error}") from error
    return vectors
