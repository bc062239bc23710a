"""Propagation of the moment equations from z = 0 to z = L.

Two independent routes are provided: a fixed-step RK4 integrator (compiled
kernel with a pure-Python fallback) and the exact solution of the affine
system through the exponential of the augmented 5x5 generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import _core
from .dynamics import VACUUM, MediumParams, MomentState, build_affine_generator
from .errors import GainOverflowError, ParameterError

__all__ = [
    "DEFAULT_CAP",
    "Trajectory",
    "integrate",
    "propagate_closed_form",
    "closed_form_trajectory",
    "asymptotic_growth_rate",
]

DEFAULT_CAP = 1e12


def _check_model(model: str) -> bool:
    if model not in ("quantum", "classical"):
        raise ParameterError(f"model: expected 'quantum' or 'classical', got {model!r}")
    return model == "quantum"


@dataclass(frozen=True)
class Trajectory:
    """Moments sampled on a propagation grid.

    ``values`` has one row ``(n_a, n_b, Re m, Im m)`` per entry of ``z``.
    """

    z: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.z.ndim != 1 or self.values.shape != (self.z.size, 4):
            raise ValueError("trajectory grid and values are misaligned")

    def __len__(self):
        return self.z.size

    @property
    def n_a(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def n_b(self) -> np.ndarray:
        return self.values[:, 1]

    @property
    def m(self) -> np.ndarray:
        return self.values[:, 2] + 1j * self.values[:, 3]

    @property
    def states(self) -> list[MomentState]:
        return [MomentState.from_vector(row) for row in self.values]

    @property
    def final(self) -> MomentState:
        return MomentState.from_vector(self.values[-1])


def integrate(
    state0: MomentState = VACUUM,
    params: MediumParams | None = None,
    steps: int = 1000,
    *,
    model: str = "quantum",
    cap: float = DEFAULT_CAP,
) -> Trajectory:
    """RK4 integration on a uniform grid of ``steps`` intervals over [0, L].

    Raises ``GainOverflowError`` once ``n_a`` exceeds ``cap``.
    """
    params = params or MediumParams()
    quantum = _check_model(model)
    steps = int(steps)
    if steps < 2:
        raise ParameterError(f"steps: must be >= 2, got {steps}")
    state0.check_finite()
    gen = build_affine_generator(params, quantum=quantum)
    h = params.length / steps
    values, overflow = _core.rk4_affine(gen.matrix, gen.drive, state0.as_vector(), h, steps, cap)
    if overflow >= 0:
        raise GainOverflowError(
            f"n_a exceeded the cap {cap:g} at z = {overflow * h:.6g} "
            f"(step {overflow} of {steps}); reduce length or raise the cap"
        )
    z = np.linspace(0.0, params.length, steps + 1)
    return Trajectory(z, np.asarray(values))


def propagate_closed_form(
    state0: MomentState = VACUUM,
    params: MediumParams | None = None,
    z: float | None = None,
    *,
    model: str = "quantum",
) -> MomentState:
    """Exact moments at ``z`` (defaults to the medium length)."""
    params = params or MediumParams()
    quantum = _check_model(model)
    z = params.length if z is None else float(z)
    if z < 0:
        raise ParameterError(f"z: must be >= 0, got {z}")
    state0.check_finite()
    if z == 0:
        return state0
    aug = build_affine_generator(params, quantum=quantum).augmented()
    y = expm(aug * z) @ np.append(state0.as_vector(), 1.0)
    return MomentState.from_vector(y[:4])


def closed_form_trajectory(
    z,
    state0: MomentState = VACUUM,
    params: MediumParams | None = None,
    *,
    model: str = "quantum",
) -> Trajectory:
    """Exact moments on an arbitrary increasing grid ``z``."""
    params = params or MediumParams()
    quantum = _check_model(model)
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size == 0 or np.any(z < 0) or np.any(np.diff(z) <= 0):
        raise ParameterError("z grid must be a nonempty, strictly increasing list of values >= 0")
    state0.check_finite()
    aug = build_affine_generator(params, quantum=quantum).augmented()
    y0 = np.append(state0.as_vector(), 1.0)
    # each point from scratch so errors do not accumulate along the grid
    values = np.array([(expm(aug * zi) @ y0)[:4] if zi > 0 else y0[:4] for zi in z])
    return Trajectory(z, values)


def asymptotic_growth_rate(params: MediumParams) -> float:
    """Largest real part among the eigenvalues of the moment matrix.

    Positive means exponential growth of the spectral densities; ``n_a``
    grows like ``exp(rate * z)`` for large ``z``.
    """
    gen = build_affine_generator(params)
    return float(np.max(np.linalg.eigvals(gen.matrix).real))
