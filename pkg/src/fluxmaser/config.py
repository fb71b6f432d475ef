"""Run configuration: one YAML file, strict keys, full defaults.

Every field has a default, so an empty (or absent) file is a valid run.
Unknown keys anywhere are rejected outright — silent typos in sweep configs
waste cluster hours.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields

import yaml

from .errors import ConfigError

__all__ = [
    "CircuitBlock",
    "SweepBlock",
    "MaserBlock",
    "EvolveBlock",
    "CavityBlock",
    "OutputBlock",
    "RunConfig",
    "load_config",
    "config_digest",
]


@dataclass(frozen=True)
class CircuitBlock:
    gamma: float = 0.5
    ej_over_ec: float = 100.0
    ej_freq: float = 400.0
    n_p: int = 81
    n_q: int = 161
    sector: str = "even"


@dataclass(frozen=True)
class SweepBlock:
    f_start: float = 0.45
    f_stop: float = 0.55
    f_points: int = 101
    f_s_values: tuple[float, ...] = (0.0, 0.22, 0.27)
    ramp_f_s_values: tuple[float, ...] = (0.15, 0.22, 0.27)
    k: int = 6
    seed: int = 0


@dataclass(frozen=True)
class MaserBlock:
    n_th: float = 0.1
    n_max: int = 256
    # (n_t, tau_int/pi) operating points for the distribution tables
    cases: tuple[tuple[float, float], ...] = ((1.0, 1.4), (100.0, 10.0))


@dataclass(frozen=True)
class EvolveBlock:
    n_t: float = 1.0
    tau_int_over_pi: float = 1.4
    n_th: float = 0.1
    n_max: int = 32
    dt: float = 2e-3
    t_final: float = 20.0
    record_every: int = 50
    trajectory_levels: int = 8


@dataclass(frozen=True)
class CavityBlock:
    area: float = 2.25e-4
    height: float = 1e-6
    quality: float = 1e6
    squid_area: float = math.pi * (16e-6) ** 2
    beta_l: float = 0.1
    gap_over_ej: float = 0.05
    t_01: float = 0.13
    n_t: float = 1.0
    interaction_phase_over_pi: float = 1.4


@dataclass(frozen=True)
class OutputBlock:
    digits: int = 12
    workers: int | None = None
    cache_dir: str | None = None


@dataclass(frozen=True)
class RunConfig:
    circuit: CircuitBlock = field(default_factory=CircuitBlock)
    sweep: SweepBlock = field(default_factory=SweepBlock)
    maser: MaserBlock = field(default_factory=MaserBlock)
    evolve: EvolveBlock = field(default_factory=EvolveBlock)
    cavity: CavityBlock = field(default_factory=CavityBlock)
    output: OutputBlock = field(default_factory=OutputBlock)


_BLOCKS = {
    "circuit": CircuitBlock,
    "sweep": SweepBlock,
    "maser": MaserBlock,
    "evolve": EvolveBlock,
    "cavity": CavityBlock,
    "output": OutputBlock,
}


def _coerce(value, target_type, key):
    if value is None:
        return None
    if target_type is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if target_type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected integer, got {value!r}")
        return value
    if target_type is str and isinstance(value, str):
        return value
    if target_type is tuple:
        if not isinstance(value, list):
            raise ConfigError(f"{key}: expected a list, got {value!r}")
        try:
            return tuple(
                tuple(float(x) for x in item) if isinstance(item, list) else float(item)
                for item in value
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key}: expected numeric entries: {exc}") from exc
    if isinstance(value, target_type) and target_type is not object:
        return value
    raise ConfigError(f"{key}: expected {target_type.__name__}, got {value!r}")


def _build_block(cls, data: dict, path: str):
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown key(s) in {path}: {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        f = known[name]
        base = f.type if isinstance(f.type, type) else None
        if base is None:
            hints = {"float": float, "int": int, "str": str, "tuple": tuple}
            base = next((t for n, t in hints.items() if str(f.type).startswith(n)), object)
        kwargs[name] = _coerce(value, base, f"{path}.{name}")
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {path} block: {exc}") from exc


def load_config(path: str | None = None) -> RunConfig:
    """Load and validate a YAML run configuration (all-defaults when None)."""
    if path is None:
        return RunConfig()
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if raw is None:
        return RunConfig()
    if not isinstance(raw, dict):
        raise ConfigError(f"top level of {path} must be a mapping")
    unknown = set(raw) - set(_BLOCKS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    blocks = {}
    for name, cls in _BLOCKS.items():
        section = raw.get(name, {})
        if section is None:
            section = {}
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be a mapping")
        blocks[name] = _build_block(cls, section, name)
    return RunConfig(**blocks)


def config_digest(cfg: RunConfig) -> str:
    """Stable content hash of a resolved configuration."""
    import hashlib
    import json

    def canon(obj):
        if dataclasses.is_dataclass(obj):
            return {f.name: canon(getattr(obj, f.name)) for f in fields(obj)}
        if isinstance(obj, tuple):
            return [canon(x) for x in obj]
        if isinstance(obj, float):
            return repr(obj)
        return obj

    payload = json.dumps(canon(cfg), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]
