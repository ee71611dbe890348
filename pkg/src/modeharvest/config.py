"""Run configuration: strict JSON schema with round-trip serialization.

Unknown keys are rejected with the offending field path; every key is
documented in :func:`schema_doc`, which the CLI embeds in ``--help``.  All
physical quantities are in units of the switching timescale T (c = hbar = 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConfigError

__all__ = ["RunConfig", "parse_config", "config_to_dict", "schema_doc"]

_SWEEP_AXES = ("gap", "separation", "ratio")
_TASKS = ("harvest", "purity", "oracle")


@dataclass(frozen=True)
class DetectorConfig:
    kind: str = "harmonic"
    scale: float = 0.1
    mode: tuple = (0, 0, 0)
    center: tuple = (0.0, 0.0, 0.0)
    probe_mass: float = 0.0
    coupling: float = 1.0


@dataclass(frozen=True)
class SweepConfig:
    axis: str = "gap"
    min: float = 0.1
    max: float = 8.0
    points: int = 80


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-7
    abs_tol: float = 1e-20
    max_evaluations: int = 200_000
    method: str = "adaptive_gk"


@dataclass(frozen=True)
class PurityConfig:
    mass_ell: float = 10.0
    dims: tuple = (1, 2, 3)
    ratio_min: float = 0.125
    ratio_max: float = 8.0
    points: int = 81
    series_rel_tol: float = 1e-12


@dataclass(frozen=True)
class OracleConfig:
    lattice: dict = field(default_factory=dict)
    lambda_min: float = 0.02
    lambda_max: float = 2.0
    points: int = 9


@dataclass(frozen=True)
class OutputConfig:
    csv: str = "out.csv"
    svg: str | None = None


@dataclass(frozen=True)
class RunConfig:
    task: str = "harvest"
    detector_a: DetectorConfig = field(default_factory=DetectorConfig)
    detector_b: DetectorConfig = field(default_factory=DetectorConfig)
    target_mass: float = 0.0
    timescale: float = 1.0
    center_time: float = 0.0
    sweep: SweepConfig = field(default_factory=SweepConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    purity: PurityConfig = field(default_factory=PurityConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


# (field name, type converter, documentation) per section; the parser and the
# --help text are generated from this one table.
_DETECTOR_FIELDS = {
    "kind": (str, 'trap kind: "harmonic" or "box"'),
    "scale": (float, "trap length scale (oscillator width / cube side), in T"),
    "mode": ("int3", "trap mode index [nx, ny, nz]"),
    "center": ("float3", "trap center offset [x, y, z], in T"),
    "probe_mass": (float, "probe field mass, in 1/T"),
    "coupling": (float, "coupling strength lambda"),
}
_SWEEP_FIELDS = {
    "axis": (str, 'sweep axis: "gap" | "separation" (harvest), "ratio" (purity)'),
    "min": (float, "first sweep value (gap sweeps exclude 0: mode normalization diverges)"),
    "max": (float, "last sweep value"),
    "points": (int, "number of sweep points (>= 2)"),
}
_QUAD_FIELDS = {
    "rel_tol": (float, "relative quadrature tolerance"),
    "abs_tol": (float, "absolute quadrature tolerance"),
    "max_evaluations": (int, "adaptive quadrature evaluation budget"),
    "method": (str, 'innermost engine: "adaptive_gk" | "tensor_gl" | "monte_carlo"'),
}
_PURITY_FIELDS = {
    "mass_ell": (float, "dimensionless field mass times trap scale (m l)"),
    "dims": ("intlist", "spatial dimensions to sweep, subset of [1, 2, 3]"),
    "ratio_min": (float, "smallest sigma/ell ratio"),
    "ratio_max": (float, "largest sigma/ell ratio"),
    "points": (int, "number of ratio points (log-spaced)"),
    "series_rel_tol": (float, "relative truncation target of the mode series"),
}
_ORACLE_FIELDS = {
    "lattice": ("dict", "lattice model document (see oracle JSON schema in the README)"),
    "lambda_min": (float, "smallest coupling of the scan"),
    "lambda_max": (float, "largest coupling of the scan"),
    "points": (int, "number of couplings (log-spaced)"),
}
_OUTPUT_FIELDS = {
    "csv": (str, "output CSV path"),
    "svg": ("str?", "optional output SVG path (null disables)"),
}
_TOP_FIELDS = {
    "task": (str, 'one of "harvest", "purity", "oracle"'),
    "detector_a": ("section", "detector A descriptor"),
    "detector_b": ("section", "detector B descriptor"),
    "target_mass": (float, "target field mass, in 1/T"),
    "timescale": (float, "switching timescale T (sets the unit system)"),
    "center_time": (float, "switching peak instant"),
    "sweep": ("section", "sweep axis and grid"),
    "quadrature": ("section", "quadrature tolerances and method"),
    "purity": ("section", "mixedness-sweep parameters (purity task)"),
    "oracle": ("section", "lattice-validation parameters (oracle task)"),
    "output": ("section", "output paths"),
}

_SECTIONS = {
    "detector_a": (_DETECTOR_FIELDS, DetectorConfig),
    "detector_b": (_DETECTOR_FIELDS, DetectorConfig),
    "sweep": (_SWEEP_FIELDS, SweepConfig),
    "quadrature": (_QUAD_FIELDS, QuadratureConfig),
    "purity": (_PURITY_FIELDS, PurityConfig),
    "oracle": (_ORACLE_FIELDS, OracleConfig),
    "output": (_OUTPUT_FIELDS, OutputConfig),
}


def _convert(value, kind, path):
    try:
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError
            return float(value)
        if kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError
            return value
        if kind is str:
            if not isinstance(value, str):
                raise TypeError
            return value
        if kind == "int3":
            out = tuple(int(v) for v in value)
            if len(out) != 3:
                raise TypeError
            return out
        if kind == "float3":
            out = tuple(float(v) for v in value)
            if len(out) != 3:
                raise TypeError
            return out
        if kind == "intlist":
            return tuple(int(v) for v in value)
        if kind == "dict":
            if not isinstance(value, dict):
                raise TypeError
            return dict(value)
        if kind == "str?":
            if value is None or isinstance(value, str):
                return value
            raise TypeError
    except (TypeError, ValueError):
        pass
    raise ConfigError(f"{path}: cannot interpret {value!r} as {kind}")


def _parse_section(doc, fields, cls, path):
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected an object")
    kwargs = {}
    for key, value in doc.items():
        if key not in fields:
            raise ConfigError(f"{path}.{key}: unknown key")
        kwargs[key] = _convert(value, fields[key][0], f"{path}.{key}")
    return cls(**kwargs)


def parse_config(doc) -> RunConfig:
    """Build a RunConfig from a dict, JSON string, or file path."""
    if isinstance(doc, str):
        if doc.lstrip().startswith("{"):
            doc = json.loads(doc)
        else:
            with open(doc, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    kwargs = {}
    for key, value in doc.items():
        if key not in _TOP_FIELDS:
            raise ConfigError(f"{key}: unknown key")
        if key in _SECTIONS:
            fields, cls = _SECTIONS[key]
            kwargs[key] = _parse_section(value, fields, cls, key)
        else:
            kwargs[key] = _convert(value, _TOP_FIELDS[key][0], key)
    cfg = RunConfig(**kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.task not in _TASKS:
        raise ConfigError(f"task: must be one of {_TASKS}, got {cfg.task!r}")
    if cfg.sweep.points < 2:
        raise ConfigError("sweep.points: must be at least 2")
    if not cfg.sweep.min < cfg.sweep.max:
        raise ConfigError("sweep.min: must be below sweep.max")
    if cfg.sweep.axis not in _SWEEP_AXES:
        raise ConfigError(f"sweep.axis: must be one of {_SWEEP_AXES}")
    if cfg.task == "harvest" and cfg.sweep.axis == "ratio":
        raise ConfigError("sweep.axis: 'ratio' is a purity-task axis")
    if cfg.task == "harvest" and cfg.sweep.axis == "gap" and cfg.sweep.min <= 0:
        raise ConfigError("sweep.min: gap sweeps must start above 0")
    if cfg.task == "purity":
        if any(d not in (1, 2, 3) for d in cfg.purity.dims):
            raise ConfigError("purity.dims: entries must be 1, 2, or 3")
        if not 0 < cfg.purity.ratio_min < cfg.purity.ratio_max:
            raise ConfigError("purity.ratio_min: need 0 < ratio_min < ratio_max")
    for name in ("detector_a", "detector_b"):
        det = getattr(cfg, name)
        if det.kind not in ("harmonic", "box"):
            raise ConfigError(f'{name}.kind: must be "harmonic" or "box"')
        if det.scale <= 0:
            raise ConfigError(f"{name}.scale: must be positive")
        if det.coupling <= 0:
            raise ConfigError(f"{name}.coupling: must be positive")
    if cfg.timescale <= 0:
        raise ConfigError("timescale: must be positive")
    if cfg.target_mass < 0:
        raise ConfigError("target_mass: must be non-negative")
    if cfg.task == "oracle":
        if not 0 < cfg.oracle.lambda_min < cfg.oracle.lambda_max:
            raise ConfigError("oracle.lambda_min: need 0 < lambda_min < lambda_max")
        if cfg.oracle.points < 2:
            raise ConfigError("oracle.points: must be at least 2")
        if not cfg.oracle.lattice:
            raise ConfigError("oracle.lattice: required for the oracle task")


def config_to_dict(cfg: RunConfig) -> dict:
    """Serialize a RunConfig to a JSON-ready dict (round-trips exactly)."""

    def section(obj, fields):
        out = {}
        for key in fields:
            val = getattr(obj, key)
            if isinstance(val, tuple):
                val = list(val)
            out[key] = val
        return out

    doc = {"task": cfg.task}
    for key in ("detector_a", "detector_b"):
        doc[key] = section(getattr(cfg, key), _DETECTOR_FIELDS)
    doc["target_mass"] = cfg.target_mass
    doc["timescale"] = cfg.timescale
    doc["center_time"] = cfg.center_time
    doc["sweep"] = section(cfg.sweep, _SWEEP_FIELDS)
    doc["quadrature"] = section(cfg.quadrature, _QUAD_FIELDS)
    doc["purity"] = section(cfg.purity, _PURITY_FIELDS)
    doc["oracle"] = section(cfg.oracle, _ORACLE_FIELDS)
    doc["output"] = section(cfg.output, _OUTPUT_FIELDS)
    return doc


def schema_doc() -> str:
    """Human-readable description of every config key."""
    lines = ["configuration keys (JSON):"]
    for key, (kind, doc) in _TOP_FIELDS.items():
        if key in _SECTIONS:
            lines.append(f"  {key}: {doc}")
            fields = _SECTIONS[key][0]
            for sub, (skind, sdoc) in fields.items():
                lines.append(f"    {key}.{sub}: {sdoc}")
        else:
            lines.append(f"  {key}: {doc}")
    return "\n".join(lines)
