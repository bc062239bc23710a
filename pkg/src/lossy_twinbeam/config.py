"""Run configuration: a flat YAML mapping whose keys match the physics symbols."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np
import yaml

from .dynamics import MediumParams, MomentState
from .errors import ParameterError
from .gaussian import covariance_from_moments, is_physical
from .sweep import normalize_objective

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_override"]


class ConfigError(ParameterError):
    """Invalid configuration; the CLI exits with status 2."""


_CHOICES = {
    "model": ("quantum", "classical"),
    "format": ("csv", "json"),
    "entropy_base": ("nats", "bits"),
    "sweep_axis": ("delta_k", "gamma_b"),
}


@dataclass(frozen=True)
class RunConfig:
    xi: float = 1.0
    delta_k: float = 0.0
    gamma_a: float = 0.0
    gamma_b: float = 0.0
    length: float = 1.0
    z_steps: int = 1000
    seed_na: float = 0.0
    seed_nb: float = 0.0
    seed_m_re: float = 0.0
    seed_m_im: float = 0.0
    model: str = "quantum"
    objective: str = "asymptotic_rate"
    gamma_max: float = 50.0
    gamma_tol: float | None = None
    eof_tol: float = 1e-12
    threshold_tol: float = 1e-3
    horizon: float | None = None
    cap: float = 1e12
    entropy_base: str = "nats"
    sweep_axis: str = "delta_k"
    sweep_start: float = -12.0
    sweep_stop: float = 12.0
    sweep_points: int = 49
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type in ("float", "float | None"):
                if value is None and f.type == "float | None":
                    continue
                value = _number(f.name, value)
            elif f.type == "int":
                value = _integer(f.name, value)
            elif f.name in _CHOICES:
                if value not in _CHOICES[f.name]:
                    raise ConfigError(f"{f.name}: expected one of {_CHOICES[f.name]}, got {value!r}")
            elif f.name == "objective":
                try:
                    value = normalize_objective(value)
                except ParameterError as exc:
                    raise ConfigError(str(exc)) from None
            elif f.name == "output" and value is not None:
                value = str(value)
            object.__setattr__(self, f.name, value)
        try:
            self.params
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None
        if self.z_steps < 2:
            raise ConfigError(f"z_steps: must be >= 2, got {self.z_steps}")
        if self.sweep_points < 1:
            raise ConfigError(f"sweep_points: must be >= 1, got {self.sweep_points}")
        if self.sweep_stop < self.sweep_start:
            raise ConfigError("sweep_stop: must be >= sweep_start")
        for name in ("gamma_max", "eof_tol", "threshold_tol", "cap"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name}: must be > 0, got {getattr(self, name)!r}")
        if self.gamma_tol is not None and not self.gamma_tol > 0:
            raise ConfigError(f"gamma_tol: must be > 0, got {self.gamma_tol!r}")
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigError(f"horizon: must be > 0, got {self.horizon!r}")
        if min(self.seed_na, self.seed_nb) < 0:
            raise ConfigError("seed_na/seed_nb: photon numbers must be >= 0")
        if not is_physical(covariance_from_moments(self.seed)):
            raise ConfigError(
                "seed_m_re/seed_m_im: seed correlation too large for the seeded photon numbers"
            )

    @property
    def params(self) -> MediumParams:
        return MediumParams(self.xi, self.delta_k, self.gamma_a, self.gamma_b, self.length)

    @property
    def seed(self) -> MomentState:
        return MomentState(self.seed_na, self.seed_nb, complex(self.seed_m_re, self.seed_m_im))

    @property
    def sweep_grid(self) -> np.ndarray:
        return np.linspace(self.sweep_start, self.sweep_stop, self.sweep_points)

    @property
    def effective_gamma_tol(self) -> float:
        return 1e-4 * self.gamma_max if self.gamma_tol is None else self.gamma_tol

    def with_(self, **changes) -> "RunConfig":
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        return replace(self, **changes)

    def to_yaml(self) -> str:
        return yaml.safe_dump(asdict(self), sort_keys=False, default_flow_style=False)

    @classmethod
    def from_mapping(cls, data) -> "RunConfig":
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("config file must contain a flat key: value mapping")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        for key, value in data.items():
            if isinstance(value, (dict, list)):
                raise ConfigError(f"{key}: nested values are not allowed in the flat config")
        return cls(**data)


def _number(name, value) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{name}: must be finite, got {value!r}")
    return out


def _integer(name, value) -> int:
    out = _number(name, value)
    if out != int(out):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    return int(out)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return RunConfig.from_mapping(data)


def parse_override(text: str) -> tuple[str, object]:
    """``key=value`` with the value parsed as a YAML scalar."""
    if "=" not in text:
        raise ConfigError(f"--set expects key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError:
        value = raw
    return key.strip(), value
