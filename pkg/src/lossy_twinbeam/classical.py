"""Classical limit: field amplitudes and the non-Hermitian coupling matrix.

The classical signal and idler amplitudes evolve as ``du/dz = i N u`` with
``u = (alpha, conj(beta))`` and::

    N = [[ i gamma_a/2 - dk_a,  zeta              ],
         [ -zeta,               i gamma_b/2 + dk_b ]]

Only ``dk = dk_a + dk_b`` is physical; the split is a gauge choice on the
relative phase and is fixed here to ``dk_a = dk_b = dk / 2``. ``zeta`` is the
same coupling as ``xi`` in the moment equations.

With this ``N`` the induced moments satisfy the drive-free moment equations
when the cross correlation is identified as ``m = -alpha * beta``; see
``moments_from_fields``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics import MediumParams, MomentState, moment_rhs

__all__ = [
    "FieldPair",
    "GaugeReducedParams",
    "PARITY",
    "S_MATRIX",
    "classical_field_matrix",
    "classical_field_rhs",
    "propagate_fields",
    "moments_from_fields",
    "classical_moment_rhs",
    "gauge_reduce",
    "gauge_reduced_matrix",
    "eigenvalues_gauge_reduced",
    "classical_growth_rate",
    "exceptional_point_gap",
    "generalized_pt_defect",
]

PARITY = np.array([[0.0, 1.0], [1.0, 0.0]])
S_MATRIX = np.array([[1.0, -1j], [1.0, 1j]])


@dataclass(frozen=True)
class FieldPair:
    """Classical amplitudes of modes a and b."""

    alpha: complex = 0j
    beta: complex = 0j

    @property
    def u(self) -> np.ndarray:
        """The evolved vector ``(alpha, conj(beta))``."""
        return np.array([self.alpha, np.conj(self.beta)], dtype=complex)

    @classmethod
    def from_u(cls, u) -> "FieldPair":
        return cls(complex(u[0]), complex(np.conj(u[1])))


def classical_field_matrix(params: MediumParams) -> np.ndarray:
    half = 0.5 * params.delta_k
    zeta = params.xi
    return np.array(
        [
            [0.5j * params.gamma_a - half, zeta],
            [-zeta, 0.5j * params.gamma_b + half],
        ]
    )


def classical_field_rhs(u: FieldPair, params: MediumParams) -> np.ndarray:
    """``du/dz = i N u`` for ``u = (alpha, conj(beta))``."""
    return 1j * classical_field_matrix(params) @ u.u


def propagate_fields(u0: FieldPair, params: MediumParams, z: float) -> FieldPair:
    return FieldPair.from_u(expm(1j * classical_field_matrix(params) * z) @ u0.u)


def moments_from_fields(u: FieldPair) -> MomentState:
    """Factorised moments ``(|alpha|^2, |beta|^2, -alpha*beta)``.

    The minus sign maps the verbatim field coupling ``+zeta`` onto the sign
    convention of the moment equations (``m -> -m`` is a phase choice on
    mode b and leaves every observable unchanged).
    """
    return MomentState(abs(u.alpha) ** 2, abs(u.beta) ** 2, -u.alpha * u.beta)


def classical_moment_rhs(state: MomentState, params: MediumParams) -> MomentState:
    """Moment equations without the vacuum drive."""
    return moment_rhs(state, params, quantum=False)


@dataclass(frozen=True)
class GaugeReducedParams:
    """``N = i*avg_damping*I + [[eta, zeta], [-zeta, -eta]]``."""

    eta: complex
    zeta: float
    avg_damping: float

    @property
    def delta_gamma(self) -> float:
        return 2.0 * self.eta.imag


def gauge_reduce(params: MediumParams) -> GaugeReducedParams:
    delta_gamma = 0.5 * (params.gamma_a - params.gamma_b)
    eta = 0.5 * (1j * delta_gamma - params.delta_k)
    return GaugeReducedParams(eta, params.xi, 0.25 * (params.gamma_a + params.gamma_b))


def gauge_reduced_matrix(params: MediumParams) -> np.ndarray:
    g = gauge_reduce(params)
    return np.array([[g.eta, g.zeta], [-g.zeta, -g.eta]], dtype=complex)


def eigenvalues_gauge_reduced(params: MediumParams) -> tuple[complex, complex]:
    """``+-sqrt(eta^2 - zeta^2)`` (principal branch first)."""
    g = gauge_reduce(params)
    root = cmath.sqrt(g.eta**2 - g.zeta**2)
    return root, -root


def classical_growth_rate(params: MediumParams) -> float:
    """Exponential rate of ``|alpha|^2`` after restoring the average damping.

    Fields evolve as ``exp(i lambda z)`` with ``lambda = i*avg + lambda'``, so
    the fastest-growing intensity has rate ``2 (|Im lambda'| - avg)``.
    """
    g = gauge_reduce(params)
    root, _ = eigenvalues_gauge_reduced(params)
    return 2.0 * (abs(root.imag) - g.avg_damping)


def exceptional_point_gap(params: MediumParams) -> float:
    """``|eta^2 - zeta^2|``; zero exactly where the two eigenvalues coalesce."""
    g = gauge_reduce(params)
    return abs(g.eta**2 - g.zeta**2)


def generalized_pt_defect(params: MediumParams) -> float:
    """Max-abs entry of the commutator of PT with ``S N' S^-1``.

    PT acts as ``v -> P conj(v)``, so ``[PT, A]`` is the antilinear map with
    matrix ``P conj(A) - A P``.
    """
    a = S_MATRIX @ gauge_reduced_matrix(params) @ np.linalg.inv(S_MATRIX)
    comm = PARITY @ np.conj(a) - a @ PARITY
    return float(np.max(np.abs(comm)))
