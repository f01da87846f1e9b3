"""Flat key=value experiment configuration.

One config file describes one reproducible experiment: two detectors, a
field state, a geometry backend, and optional sweep / measurement /
oracle blocks.  Keys use dotted section names (``detector_a.sigma = 0.25``);

unknown keys are rejected so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DomainError
from .geometry import BUMP, DEFAULT_TOL, GAUSSIAN, BoxSpec, DetectorSpec

VACUUM = "vacuum"
THERMAL = "thermal"
CONTINUUM = "continuum"
BOX = "box"

SWEEP_AXES = ("separation", "time_gap", "lambda_a", "sigma_a")
_AXIS_ALIASES = {"lambdaA": "lambda_a", "sigmaA": "sigma_a"}

OUTCOMES = ("ground", "excited", "average")


def _parse_float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise DomainError(f"expected a number, got {raw!r}") from exc


def _parse_int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"expected an integer, got {raw!r}") from exc


def _parse_vector(raw: str) -> tuple[float, float, float]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise DomainError(f"expected three coordinates, got {raw!r}")
    return tuple(_parse_float(p) for p in parts)


def _parse_floats(raw: str) -> tuple[float, ...]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if not parts:
        raise DomainError("expected a list of numbers")
    return tuple(_parse_float(p) for p in parts)


def _parse_complexes(raw: str) -> tuple[complex, ...]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if not parts:
        raise DomainError("expected a list of (complex) numbers")
    try:
        return tuple(complex(p) for p in parts)
    except ValueError as exc:
        raise DomainError(f"bad complex number in {raw!r}") from exc


def _parse_choice(raw: str, choices: tuple[str, ...], what: str) -> str:
    if raw not in choices:
        raise DomainError(f"{what} must be one of {choices}, got {raw!r}")
    return raw


def _parse_init(raw: str):
    if raw in ("ground", "excited", "plus"):
        return raw
    if raw.startswith("bloch:"):
        angles = _parse_floats(raw[len("bloch:"):])
        if len(angles) != 2:
            raise DomainError("bloch init needs two angles: bloch:theta,phi")
        return ("bloch", *angles)
    raise DomainError(
        f"unknown init {raw!r}; expected ground, excited, plus, "
        "or bloch:theta,phi"
    )


@dataclass(frozen=True)
class SweepBlock:
    axis: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise DomainError(
                f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}"
            )
        if not (self.start <= self.stop):
            raise DomainError("sweep range must be ordered: start <= stop")
        if self.count < 1:
            raise DomainError("sweep needs at least one point")


@dataclass(frozen=True)
class MeasureBlock:
    outcome: str

    def __post_init__(self) -> None:
        _parse_choice(self.outcome, OUTCOMES, "measure.outcome")


@dataclass(frozen=True)
class OracleBlock:
    omegas: tuple[float, ...]
    couplings_a: tuple[complex, ...]
    couplings_b: tuple[complex, ...]
    cutoff_start: int = 8
    cutoff_ceiling: int = 64
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        n = len(self.omegas)
        if len(self.couplings_a) != n or len(self.couplings_b) != n:
            raise DomainError(
                "oracle couplings must match the number of mode frequencies"
            )
        if any(w <= 0 for w in self.omegas):
            raise DomainError("oracle mode frequencies must be positive")
        if self.tolerance <= 0:
            raise DomainError("oracle tolerance must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    detector_a: DetectorSpec
    detector_b: DetectorSpec
    field_kind: str = VACUUM
    beta: float | None = None
    backend: str = CONTINUUM
    box: BoxSpec | None = None
    quadrature_tol: float = DEFAULT_TOL
    sweep: SweepBlock | None = None
    measure: MeasureBlock | None = None
    oracle: OracleBlock | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.field_kind == THERMAL and (self.beta is None or self.beta <= 0):
            raise DomainError("thermal field needs field.beta > 0")
        if self.field_kind == VACUUM and self.beta is not None:
            raise DomainError("field.beta is only meaningful with field.kind = thermal")
        if self.backend == BOX and self.box is None:
            raise DomainError(
                "box backend needs geometry.box_length and geometry.box_n_max"
            )

    def to_payload(self) -> dict:
        def detector(spec: DetectorSpec) -> dict:
            return {
                "center": list(spec.center),
                "time": spec.time,
                "sigma": spec.sigma,
                "coupling": spec.coupling,
                "eta": spec.field_scale,
                "gap": spec.gap,
                "profile": spec.profile,
                "init": list(spec.init)
                if isinstance(spec.init, tuple)
                else spec.init,
            }

        payload = {
            "detector_a": detector(self.detector_a),
            "detector_b": detector(self.detector_b),
            "field": {"kind": self.field_kind, "beta": self.beta},
            "geometry": {"backend": self.backend},
            "tolerance": {"quadrature": self.quadrature_tol},
            "seed": self.seed,
        }
        if self.box is not None:
            payload["geometry"].update(
                {
                    "box_length": self.box.length,
                    "box_n_max": self.box.n_max,
                    "box_mass": self.box.mass,
                }
            )
        if self.sweep is not None:
            payload["sweep"] = {
                "axis": self.sweep.axis,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "count": self.sweep.count,
            }
        if self.measure is not None:
            payload["measure"] = {"outcome": self.measure.outcome}
        if self.oracle is not None:
            payload["oracle"] = {
                "omegas": list(self.oracle.omegas),
                "couplings_a": [str(g) for g in self.oracle.couplings_a],
                "couplings_b": [str(g) for g in self.oracle.couplings_b],
                "cutoff_start": self.oracle.cutoff_start,
                "cutoff_ceiling": self.oracle.cutoff_ceiling,
                "tolerance": self.oracle.tolerance,
            }
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), indent=2, sort_keys=True)


_DETECTOR_KEYS = (
    "center",
    "time",
    "sigma",
    "coupling",
    "eta",
    "gap",
    "profile",
    "init",
)

_KNOWN_KEYS = (
    {"field.kind", "field.beta"}
    | {"geometry.backend", "geometry.box_length", "geometry.box_n_max",
       "geometry.box_mass"}
    | {f"detector_a.{k}" for k in _DETECTOR_KEYS}
    | {f"detector_b.{k}" for k in _DETECTOR_KEYS}
    | {"tolerance.quadrature"}
    | {"sweep.axis", "sweep.start", "sweep.stop", "sweep.count"}
    | {"measure.outcome"}
    | {"oracle.omegas", "oracle.couplings_a", "oracle.couplings_b",
       "oracle.cutoff_start", "oracle.cutoff_ceiling", "oracle.tolerance"}
    | {"seed"}
)


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value mapping with syntax and duplicate checks."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise DomainError(f"line {lineno}: expected key = value, got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key or not value:
            raise DomainError(f"line {lineno}: empty key or value in {line!r}")
        if key in mapping:
            raise DomainError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def _detector_from_mapping(mapping: dict[str, str], prefix: str) -> DetectorSpec:
    def get(name: str, default: str) -> str:
        return mapping.get(f"{prefix}.{name}", default)

    return DetectorSpec(
        center=_parse_vector(get("center", "0 0 0")),
        time=_parse_float(get("time", "0")),
        sigma=_parse_float(get("sigma", "1")),
        coupling=_parse_float(get("coupling", "1")),
        field_scale=_parse_float(get("eta", "1")),
        gap=_parse_float(get("gap", "1")),
        profile=_parse_choice(
            get("profile", GAUSSIAN), (GAUSSIAN, BUMP), f"{prefix}.profile"
        ),
        init=_parse_init(get("init", "ground")),
    )


def build_config(mapping: dict[str, str]) -> ExperimentConfig:
    """Typed config from a raw mapping; rejects unknown keys."""
    unknown = sorted(set(mapping) - _KNOWN_KEYS)
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(unknown)}")

    field_kind = _parse_choice(
        mapping.get("field.kind", VACUUM), (VACUUM, THERMAL), "field.kind"
    )
    beta = (
        _parse_float(mapping["field.beta"]) if "field.beta" in mapping else None
    )
    backend = _parse_choice(
        mapping.get("geometry.backend", CONTINUUM), (CONTINUUM, BOX),
        "geometry.backend",
    )
    box = None
    if backend == BOX:
        if "geometry.box_length" not in mapping or "geometry.box_n_max" not in mapping:
            raise DomainError(
                "box backend needs geometry.box_length and geometry.box_n_max"
            )
        box = BoxSpec(
            length=_parse_float(mapping["geometry.box_length"]),
            n_max=_parse_int(mapping["geometry.box_n_max"]),
            mass=_parse_float(mapping.get("geometry.box_mass", "0")),
        )
    elif any(k.startswith("geometry.box_") for k in mapping):
        raise DomainError("geometry.box_* keys need geometry.backend = box")

    sweep = None
    sweep_keys = [k for k in mapping if k.startswith("sweep.")]
    if sweep_keys:
        missing = {"sweep.axis", "sweep.start", "sweep.stop", "sweep.count"} - set(
            mapping
        )
        if missing:
            raise DomainError(f"incomplete sweep block: missing {sorted(missing)}")
        axis = mapping["sweep.axis"]
        axis = _AXIS_ALIASES.get(axis, axis)
        sweep = SweepBlock(
            axis=axis,
            start=_parse_float(mapping["sweep.start"]),
            stop=_parse_float(mapping["sweep.stop"]),
            count=_parse_int(mapping["sweep.count"]),
        )

    measure = None
    if "measure.outcome" in mapping:
        measure = MeasureBlock(outcome=mapping["measure.outcome"])

    oracle = None
    oracle_keys = [k for k in mapping if k.startswith("oracle.")]
    if oracle_keys:
        required = {"oracle.omegas", "oracle.couplings_a", "oracle.couplings_b"}
        missing = required - set(mapping)
        if missing:
            raise DomainError(
                f"incomplete oracle block: missing {sorted(missing)}"
            )
        oracle = OracleBlock(
            omegas=_parse_floats(mapping["oracle.omegas"]),
            couplings_a=_parse_complexes(mapping["oracle.couplings_a"]),
            couplings_b=_parse_complexes(mapping["oracle.couplings_b"]),
            cutoff_start=_parse_int(mapping.get("oracle.cutoff_start", "8")),
            cutoff_ceiling=_parse_int(mapping.get("oracle.cutoff_ceiling", "64")),
            tolerance=_parse_float(mapping.get("oracle.tolerance", "1e-6")),
        )

    return ExperimentConfig(
        detector_a=_detector_from_mapping(mapping, "detector_a"),
        detector_b=_detector_from_mapping(mapping, "detector_b"),
        field_kind=field_kind,
        beta=beta,
        backend=backend,
        box=box,
        quadrature_tol=_parse_float(
            mapping.get("tolerance.quadrature", repr(DEFAULT_TOL))
        ),
        sweep=sweep,
        measure=measure,
        oracle=oracle,
        seed=_parse_int(mapping["seed"]) if "seed" in mapping else None,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}") from exc
    return build_config(parse_config_text(text))
