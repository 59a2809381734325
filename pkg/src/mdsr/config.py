"""Run configuration: INI-style key/value files, named presets, round-tripping.

Example file::

    [run]
    scheme = D1_Fp2
    preset = fig3b4

    [coupling]
    rabi_scale = 78

    [probe]
    grid = -60:60:2001

Values are resolved in increasing precedence: built-in defaults, the preset,
keys present in the file, command-line overrides.
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, Mapping, Optional

import numpy as np

from .levels import SchemeId
from .liouville import ModelParams, PopulationModel
from .spectra import symmetric_grid

__all__ = [
    "ConfigError",
    "GridSpec",
    "CouplingSpec",
    "ProbeSpec",
    "OutputSpec",
    "RunConfig",
    "PRESETS",
    "parse_config",
    "parse_grid",
    "format_config",
    "config_sections",
    "apply_preset",
]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    start: float = -60.0
    stop: float = 60.0
    points: int = 2001

    def __post_init__(self) -> None:
        if self.points < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.stop > self.start:
            raise ValueError("grid stop must exceed start")

    def values(self) -> np.ndarray:
        if self.start == -self.stop:
            return symmetric_grid(self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.points}"


@dataclass(frozen=True)
class CouplingSpec:
    rabi_scale: float = 0.0
    detuning: float = 0.0
    linewidth: float = 1.5


@dataclass(frozen=True)
class ProbeSpec:
    rabi_scale: float = 2.0
    grid: GridSpec = field(default_factory=GridSpec)
    linewidth: float = 1.5


@dataclass(frozen=True)
class OutputSpec:
    path: str = "spectrum.csv"
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ValueError("output format must be csv or json")


@dataclass(frozen=True)
class RunConfig:
    scheme_id: SchemeId = SchemeId.D1_Fp2
    bias_field_G: float = 0.0
    coupling: CouplingSpec = field(default_factory=CouplingSpec)
    probe: ProbeSpec = field(default_factory=ProbeSpec)
    params: ModelParams = field(default_factory=ModelParams)
    output: OutputSpec = field(default_factory=OutputSpec)
    preset: Optional[str] = None

    def __post_init__(self) -> None:
        if self.bias_field_G < 0:
            raise ValueError("bias_field_G must be >= 0")
        if self.coupling.rabi_scale < 0 or self.probe.rabi_scale < 0:
            raise ValueError("rabi_scale must be >= 0")
        if self.coupling.linewidth < 0 or self.probe.linewidth < 0:
            raise ValueError("linewidth must be >= 0")
        if self.preset is not None and self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")


# Shared by all presets: Omega_p = 2 MHz, gamma_ab = 40 kHz, gamma_ac = 2.8 MHz,
# laser linewidths 1.5 MHz, N = 1e11 cm^-3.
_BASELINE = {
    "probe.rabi_scale": 2.0,
    "probe.linewidth": 1.5,
    "coupling.linewidth": 1.5,
    "coupling.detuning": 0.0,
    "model.gamma_ab": 0.04,
    "model.gamma_ac": 2.8,
    "model.atom_density_N": 1e11,
    "run.scheme": "D1_Fp2",
}

PRESETS: Dict[str, Dict[str, object]] = {
    name: {**_BASELINE, "coupling.rabi_scale": omega}
    for name, omega in (
        ("fig2", 78.0),
        ("fig3b1", 14.0),
        ("fig3b2", 31.0),
        ("fig3b3", 56.0),
        ("fig3b4", 78.0),
        ("fig4a", 14.0),
        ("fig4b", 78.0),
    )
}

_MODEL_KEYS = {f.name for f in fields(ModelParams)}
_SCHEMA = {
    "run": {"scheme", "preset", "bias_field_G"},
    "coupling": {"rabi_scale", "detuning", "linewidth"},
    "probe": {"rabi_scale", "grid", "linewidth"},
    "model": _MODEL_KEYS,
    "output": {"path", "format"},
}


def parse_grid(text: str) -> GridSpec:
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:points, got {text!r}")
    return GridSpec(float(parts[0]), float(parts[1]), int(parts[2]))


def _flat_to_config(flat: Mapping[str, object]) -> RunConfig:
    """Build a RunConfig from dotted ``section.key`` values (strings or typed)."""
    base = RunConfig()

    def get(key, conv, default):
        if key not in flat:
            return default
        raw = flat[key]
        if isinstance(raw, str):
            raw = raw.strip()
            if raw == "":
                # an empty coupling strength means no coupling beam
                return 0.0 if key == "coupling.rabi_scale" else default
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            section, name = key.split(".", 1)
            raise ConfigError(f"[{section}] {name}: {exc}") from None

    def opt_float(x):
        if x is None or (isinstance(x, str) and x.lower() in ("", "none")):
            return None
        return float(x)

    coupling = CouplingSpec(
        get("coupling.rabi_scale", float, base.coupling.rabi_scale),
        get("coupling.detuning", float, base.coupling.detuning),
        get("coupling.linewidth", float, base.coupling.linewidth),
    )
    probe = ProbeSpec(
        get("probe.rabi_scale", float, base.probe.rabi_scale),
        get("probe.grid", lambda g: g if isinstance(g, GridSpec) else parse_grid(g), base.probe.grid),
        get("probe.linewidth", float, base.probe.linewidth),
    )
    model_kwargs = {}
    for f in fields(ModelParams):
        key = f"model.{f.name}"
        if f.name == "population_model":
            conv = PopulationModel
        elif f.name == "chi_scale":
            conv = opt_float
        else:
            conv = float
        model_kwargs[f.name] = get(key, conv, getattr(base.params, f.name))
    params = ModelParams(**model_kwargs)
    output = OutputSpec(
        get("output.path", str, base.output.path),
        get("output.format", lambda s: str(s).lower(), base.output.format),
    )
    preset = get("run.preset", lambda s: None if s in (None, "", "none") else str(s), None)
    return RunConfig(
        scheme_id=get("run.scheme", SchemeId, base.scheme_id),
        bias_field_G=get("run.bias_field_G", float, base.bias_field_G),
        coupling=coupling,
        probe=probe,
        params=params,
        output=output,
        preset=preset,
    )


def apply_preset(name: Optional[str], flat: Mapping[str, object]) -> Dict[str, object]:
    """Preset values underneath ``flat``; keys in ``flat`` win."""
    if name is None:
        return dict(flat)
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return {**PRESETS[name], **flat, "run.preset": name}


def _read_flat(text: str) -> Dict[str, str]:
    parser = configparser.ConfigParser(
        interpolation=None, default_section="__defaults__", inline_comment_prefixes=(";",)
    )
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"parse error: {exc}") from None
    flat: Dict[str, str] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"[{section}] unknown key {key!r}")
            flat[f"{section}.{key}"] = value
    return flat


def parse_config(text: str, overrides: Optional[Mapping[str, object]] = None) -> RunConfig:
    """Parse and validate a configuration file body.

    ``overrides`` holds dotted keys (``"probe.grid"``, ``"run.preset"``, ...)
    from the command line; they take precedence over the file.
    """
    flat = _read_flat(text)
    overrides = dict(overrides or {})
    preset = overrides.pop("run.preset", None) or flat.get("run.preset") or None
    if isinstance(preset, str) and preset.strip().lower() in ("", "none"):
        preset = None
    merged = apply_preset(preset.strip() if preset else None, flat)
    merged.update(overrides)
    try:
        return _flat_to_config(merged)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def config_sections(config: RunConfig) -> Dict[str, Dict[str, str]]:
    """All fields of ``config`` as ``section -> key -> text`` (every key explicit)."""
    p = config.params
    model = {
        f.name: (getattr(p, f.name).value if f.name == "population_model" else repr(getattr(p, f.name)))
        for f in fields(ModelParams)
    }
    return {
        "run": {
            "scheme": config.scheme_id.value,
            "preset": config.preset or "none",
            "bias_field_G": repr(config.bias_field_G),
        },
        "coupling": {k: repr(v) for k, v in asdict(config.coupling).items()},
        "probe": {
            "rabi_scale": repr(config.probe.rabi_scale),
            "grid": str(config.probe.grid),
            "linewidth": repr(config.probe.linewidth),
        },
        "model": model,
        "output": {"path": config.output.path, "format": config.output.format},
    }


def format_config(config: RunConfig) -> str:
    """Serialize every field explicitly; ``parse_config`` inverts this exactly."""
    lines = []
    for name, items in config_sections(config).items():
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {v}" for k, v in items.items())
        lines.append("")
    return "\n".join(lines)
