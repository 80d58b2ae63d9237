"""Run configuration: defaults, ``key = value`` files, environment, flags.

Precedence, lowest first: built-in defaults, config file, ``SPINWIRE_*``
environment variables, command-line flags. Unknown keys are an error at
every layer.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from ._io import format_float
from .analytic import QuadratureSpec
from .errors import ParameterError
from .model import ChainParams, FieldProfile

ENV_PREFIX = "SPINWIRE_"

COMMANDS = ("spectrum", "evolve", "fidelity", "sweep", "optimize", "bscan", "verify")
CSV_COMMANDS = ("spectrum", "evolve", "fidelity", "sweep")


class ConfigError(ParameterError):
    """Bad or unknown configuration key/value (CLI exit code 1)."""


@dataclass(frozen=True)
class RunConfig:
    command: str = "fidelity"
    n_sites: int = 150
    j_coupling: float = 1.0
    d_coupling: float = 14.455
    b_field: float = 500.0
    field: tuple[float, ...] | None = None
    alpha: float = 1.0
    method: str = "exact"
    t_min: float = 0.0
    t_max: float = 200.0
    t_steps: int = 200
    d_min: float = 0.0
    d_max: float = 20.0
    d_steps: int = 200
    nodes: int = 64
    tolerance: float = 1e-8
    max_refinements: int = 20
    b_values: tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0)
    budget: int = 10_000
    n_max: int = 8
    trials: int = 3
    source: int = 1
    target: int | None = None
    analytic: bool = True
    seed: int = 0
    output: str | None = None
    format: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {', '.join(COMMANDS)}, got {self.command!r}")
        if self.method not in ("exact", "analytic"):
            raise ConfigError(f"method must be 'exact' or 'analytic', got {self.method!r}")
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if self.format == "csv" and self.command not in CSV_COMMANDS:
            raise ConfigError(f"format: {self.command} only writes json")
        for name in ("t_steps", "d_steps"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.t_steps > 1 and not self.t_max > self.t_min:
            raise ConfigError(f"t_max must exceed t_min, got [{self.t_min}, {self.t_max}]")
        if self.command == "optimize":
            # lo == hi holds D fixed during the search
            if self.d_max < self.d_min:
                raise ConfigError(f"d_max must be >= d_min, got [{self.d_min}, {self.d_max}]")
        elif self.d_steps > 1 and not self.d_max > self.d_min:
            raise ConfigError(f"d_max must exceed d_min, got [{self.d_min}, {self.d_max}]")
        if self.n_max < 2:
            raise ConfigError(f"n_max must be >= 2, got {self.n_max}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.b_values:
            raise ConfigError("b_values must not be empty")
        # surface parameter errors now, naming the field
        self.params()
        self.quadrature()

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.command in CSV_COMMANDS else "json"

    def params(self) -> ChainParams:
        if isinstance(self.n_sites, bool) or self.n_sites < 1:
            raise ConfigError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.field is not None:
            profile = FieldProfile(self.field)
        else:
            profile = FieldProfile.constant(self.b_field, self.n_sites)
        return ChainParams(
            n_sites=self.n_sites,
            j_coupling=self.j_coupling,
            d_coupling=self.d_coupling,
            field=profile,
            alpha=self.alpha,
        )

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(
            node_count=self.nodes,
            refinement_tolerance=self.tolerance,
            max_refinements=self.max_refinements,
        )

    def t_axis(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def d_axis(self) -> np.ndarray:
        return np.linspace(self.d_min, self.d_max, self.d_steps)

    def as_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out

    def to_text(self) -> str:
        """The effective configuration in the ``key = value`` file format."""
        lines = [f"{f.name} = {_render(getattr(self, f.name))}" for f in fields(self)]
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _render(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, tuple):
        return ",".join(format_float(v) for v in value)
    return str(value)


def _parse_float(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite, got {text!r}")
    return value


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def coerce(key: str, raw: Any) -> Any:
    """Convert a raw string (or already-typed value) to the field's type."""
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    kind = _FIELD_TYPES[key]
    if not isinstance(raw, str):
        if "tuple" in kind and raw is not None:
            return tuple(float(v) for v in raw)
        return raw
    text = raw.strip()
    optional = "None" in kind
    if optional and text.lower() in ("", "none"):
        return None
    if kind.startswith("bool"):
        if text.lower() in ("true", "1", "yes"):
            return True
        if text.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"{key}: expected true/false, got {text!r}")
    if kind.startswith("int"):
        return _parse_int(key, text)
    if kind.startswith("float"):
        return _parse_float(key, text)
    if kind.startswith("tuple"):
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return tuple(_parse_float(key, p) for p in parts)
    return text


def read_config_file(path: str | Path) -> dict[str, Any]:
    values: dict[str, Any] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config: {path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        values[key] = coerce(key, value)
    return values


def read_environment(environ: Mapping[str, str]) -> dict[str, Any]:
    values = {}
    for name, value in environ.items():
        if name.startswith(ENV_PREFIX):
            key = name[len(ENV_PREFIX):].lower()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"unknown configuration key {key!r} (from ${name})")
            values[key] = coerce(key, value)
    return values


def build_config(
    command: str,
    file_values: Mapping[str, Any] | None = None,
    env_values: Mapping[str, Any] | None = None,
    flag_values: Mapping[str, Any] | None = None,
) -> RunConfig:
    merged: dict[str, Any] = {}
    for layer in (file_values or {}, env_values or {}, flag_values or {}):
        for key, value in layer.items():
            merged[key] = coerce(key, value)
    if merged.get("command", command) != command:
        raise ConfigError(
            f"command: config says {merged['command']!r} but {command!r} was requested"
        )
    merged["command"] = command
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
