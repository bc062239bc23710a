"""Second-moment equations for twin-beam generation with per-mode loss.

For each frequency the generated light is characterised by three moments:
the photon spectral densities ``n_a`` and ``n_b`` and the cross correlation
``m = <a(w) b(W - w)>``. They obey a closed, affine-linear system of ODEs in
the propagation coordinate ``z``::

    dn_a/dz = i xi m - i xi m* - gamma_a n_a
    dn_b/dz = i xi m - i xi m* - gamma_b n_b
    dm/dz   = -i dk m - (gamma_a + gamma_b)/2 m - i xi (n_a + n_b) - i xi

The constant ``-i xi`` is the vacuum-fluctuation drive. Over the real state
vector ``(n_a, n_b, Re m, Im m)`` the system reads ``dy/dz = M y + d``.

Symbol table (config keys are identical to the field names):

========== =========================================================
``xi``     nonlinear coupling rate (also written chi; called zeta in
           the classical field equations)
``delta_k`` total phase mismatch ``dk_a + dk_b``
``gamma_a`` loss rate of mode a
``gamma_b`` loss rate of mode b
``length`` medium length L (rectangular nonlinearity profile on [0, L])
========== =========================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NonFiniteStateError, ParameterError

__all__ = [
    "MediumParams",
    "MomentState",
    "AffineGenerator",
    "VACUUM",
    "moment_rhs",
    "build_affine_generator",
]


@dataclass(frozen=True)
class MediumParams:
    """Physical configuration of the lossy nonlinear medium.

    All rates are per unit length. By default lengths are measured in units
    where ``xi = 1``.
    """

    xi: float = 1.0
    delta_k: float = 0.0
    gamma_a: float = 0.0
    gamma_b: float = 0.0
    length: float = 1.0

    def __post_init__(self):
        for name in ("xi", "delta_k", "gamma_a", "gamma_b", "length"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ParameterError(f"{name}: expected a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise ParameterError(f"{name}: must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("xi", "gamma_a", "gamma_b"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name}: must be >= 0, got {getattr(self, name)!r}")
        if self.length <= 0:
            raise ParameterError(f"length: must be > 0, got {self.length!r}")

    def with_(self, **changes) -> "MediumParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class MomentState:
    """Moments ``(n_a, n_b, m)`` at one propagation coordinate."""

    n_a: float = 0.0
    n_b: float = 0.0
    m: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "n_a", float(self.n_a))
        object.__setattr__(self, "n_b", float(self.n_b))
        object.__setattr__(self, "m", complex(self.m))

    def as_vector(self) -> np.ndarray:
        return np.array([self.n_a, self.n_b, self.m.real, self.m.imag])

    @classmethod
    def from_vector(cls, y) -> "MomentState":
        y = np.asarray(y, dtype=float)
        return cls(y[0], y[1], complex(y[2], y[3]))

    def check_finite(self) -> None:
        fields = {
            "n_a": self.n_a,
            "n_b": self.n_b,
            "m.real": self.m.real,
            "m.imag": self.m.imag,
        }
        for name, value in fields.items():
            if not math.isfinite(value):
                raise NonFiniteStateError(f"state component {name} is not finite ({value!r})")


VACUUM = MomentState()


@dataclass(frozen=True)
class AffineGenerator:
    """``dy/dz = matrix @ y + drive`` over ``y = (n_a, n_b, Re m, Im m)``."""

    matrix: np.ndarray
    drive: np.ndarray

    def __call__(self, y):
        return self.matrix @ np.asarray(y, dtype=float) + self.drive

    def augmented(self) -> np.ndarray:
        """5x5 matrix ``[[M, d], [0, 0]]`` acting on ``(y, 1)``."""
        a = np.zeros((5, 5))
        a[:4, :4] = self.matrix
        a[:4, 4] = self.drive
        return a


def build_affine_generator(params: MediumParams, quantum: bool = True) -> AffineGenerator:
    """Coefficient matrix and drive of the moment equations.

    With ``quantum=False`` the vacuum drive is dropped, which gives the
    factorised classical limit.
    """
    xi, dk = params.xi, params.delta_k
    ga, gb = params.gamma_a, params.gamma_b
    g = 0.5 * (ga + gb)
    matrix = np.array(
        [
            [-ga, 0.0, 0.0, -2.0 * xi],
            [0.0, -gb, 0.0, -2.0 * xi],
            [0.0, 0.0, -g, dk],
            [-xi, -xi, -dk, -g],
        ]
    )
    drive = np.array([0.0, 0.0, 0.0, -xi if quantum else 0.0])
    return AffineGenerator(matrix, drive)


def moment_rhs(state: MomentState, params: MediumParams, quantum: bool = True) -> MomentState:
    """Instantaneous derivative of the moments, returned as a ``MomentState``."""
    state.check_finite()
    xi, dk = params.xi, params.delta_k
    ga, gb = params.gamma_a, params.gamma_b
    g = 0.5 * (ga + gb)
    re, im = state.m.real, state.m.imag
    drive = xi if quantum else 0.0
    dn_a = -2.0 * xi * im - ga * state.n_a
    dn_b = -2.0 * xi * im - gb * state.n_b
    dre = dk * im - g * re
    dim = -dk * re - g * im - xi * (state.n_a + state.n_b) - drive
    return MomentState(dn_a, dn_b, complex(dre, dim))
