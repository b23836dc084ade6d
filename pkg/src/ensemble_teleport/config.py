"""Run configuration: flat ``key = value`` files merged with command-line overrides.

Config file syntax, one setting per line::

    # comment
    model = disentangled
    input = 0.6,0.8
    theta = 0

Keys use the long flag names, with ``-`` or ``_`` accepted interchangeably.
Later sources win: built-in defaults, then the file, then the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

from .ensemble import DEFAULT_PARTITIONS, DEFAULT_SEED, METHODS, PHASE_MODELS
from .states import InputQubit

COMMANDS = ("verify", "teleport", "ensemble", "compare")
MODELS = ("entangled", "disentangled")
FORMATS = ("csv", "json")
R = 1 / math.sqrt(2)
DEFAULT_GRID = f"1,0;0,1;{R!r},{R!r};{R!r},0,0,{R!r}"


class ConfigError(ValueError):
    """Bad configuration value; the message names the offending field or line."""


def _float(name, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None


def _int(name, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None


def _choice(options):
    def parse(name, text):
        if text not in options:
            raise ConfigError(f"{name}: expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


def _str(name, text):
    return text


def _optional_float(name, text):
    return None if text in ("", "none") else _float(name, text)


def _bool(name, text):
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name}: expected true/false, got {text!r}")


def parse_amplitudes(text: str, name: str = "input") -> tuple[complex, complex]:
    """``a_re,a_im,b_re,b_im`` or the real shorthand ``a,b``."""
    parts = [p.strip() for p in text.split(",")]
    values = [_float(name, p) for p in parts]
    if len(values) == 2:
        return complex(values[0]), complex(values[1])
    if len(values) == 4:
        return complex(values[0], values[1]), complex(values[2], values[3])
    raise ConfigError(f"{name}: expected 2 or 4 comma-separated numbers, got {len(values)}")


def parse_grid(text: str) -> list[InputQubit]:
    items = [s for s in (p.strip() for p in text.split(";")) if s]
    if not items:
        raise ConfigError("grid: no input states given")
    return [_input(f"grid[{i}]", s) for i, s in enumerate(items)]


def _input(name, text):
    amplitudes = parse_amplitudes(text, name)
    try:
        return InputQubit(*amplitudes)
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    command: str = "teleport"
    model: str = "entangled"
    input: str = "1,0"
    theta: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    ensemble_theta: float = math.pi / 4
    phase_model: str = "matched"
    offset: float = 0.0
    method: str = "quadrature"
    nodes: int = 64
    samples: int = 100_000
    seed: int = DEFAULT_SEED
    partitions: int = DEFAULT_PARTITIONS
    workers: int = 1
    epsilon: float | None = None
    crystal: bool = False
    grid: str = DEFAULT_GRID
    format: str = "csv"
    out: str = "-"
    tol: float | None = None

    @property
    def input_qubit(self) -> InputQubit:
        return _input("input", self.input)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                text = "none"
            elif isinstance(value, bool):
                text = "true" if value else "false"
            else:
                text = repr(value) if isinstance(value, float) else str(value)
            lines.append(f"{f.name.replace('_', '-')} = {text}")
        return "\n".join(lines) + "\n"


_PARSERS = {
    "command": _choice(COMMANDS),
    "model": _choice(MODELS),
    "input": _str,
    "theta": _float,
    "phi2": _float,
    "phi3": _float,
    "ensemble_theta": _float,
    "phase_model": _choice(PHASE_MODELS),
    "offset": _float,
    "method": _choice(METHODS),
    "nodes": _int,
    "samples": _int,
    "seed": _int,
    "partitions": _int,
    "workers": _int,
    "epsilon": _optional_float,
    "crystal": _bool,
    "grid": _str,
    "format": _choice(FORMATS),
    "out": _str,
    "tol": _optional_float,
}


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Raw ``key -> value`` strings from config text, with line diagnostics."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def load_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {str(path)!r} does not exist")
    return parse_config_text(path.read_text(), str(path))


def build_config(*layers: dict[str, str]) -> RunConfig:
    """Merge raw string layers (later wins) into a validated :class:`RunConfig`."""
    merged = {}
    for layer in layers:
        merged.update({normalize_key(k): v for k, v in layer.items() if v is not None})
    kwargs = {}
    for key, text in merged.items():
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}")
        kwargs[key] = _PARSERS[key](key.replace("_", "-"), str(text))
    cfg = RunConfig(**kwargs)
    _check(cfg)
    return cfg


def _check(cfg: RunConfig) -> None:
    cfg.input_qubit
    parse_grid(cfg.grid)
    for name in ("theta", "ensemble_theta"):
        if not 0.0 <= getattr(cfg, name) <= math.pi / 2:
            raise ConfigError(f"{name.replace('_', '-')}: must lie in [0, pi/2]")
    for name in ("nodes", "samples", "partitions", "workers"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name}: must be positive")
    if cfg.nodes < 4:
        raise ConfigError("nodes: quadrature needs at least 4 nodes")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed: must fit in 64 unsigned bits")
    if cfg.epsilon is not None and not 0 < cfg.epsilon <= math.pi:
        raise ConfigError("epsilon: must lie in (0, pi]")
    if cfg.tol is not None and cfg.tol <= 0:
        raise ConfigError("tol: must be positive")
