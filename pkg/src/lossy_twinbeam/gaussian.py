"""Two-mode Gaussian states built from the moments, and their entanglement.

Quadratures are ``x = a + a^dag`` and ``p = -i (a - a^dag)``, ordered
``(x_a, p_a, x_b, p_b)``, so the vacuum covariance is the identity and a
thermal mode with mean photon number ``n`` has symplectic eigenvalue
``2n + 1``. Entropies are in nats unless ``base="bits"`` is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from . import _core
from .dynamics import MomentState
from .errors import EofSearchError, ParameterError, UnphysicalCovarianceError

__all__ = [
    "OMEGA",
    "PARTIAL_TRANSPOSE",
    "TwoModeCovariance",
    "ThermalSpectrumPoint",
    "EofResult",
    "EOF_ZERO",
    "covariance_from_moments",
    "tmsv_covariance",
    "symplectic_eigenvalues",
    "pt_symplectic_min",
    "is_physical",
    "log_negativity",
    "standard_form",
    "entropy_of_entanglement",
    "entanglement_of_formation",
    "eof_details",
    "thermal_point_from_n",
]

OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
# p_b -> -p_b
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])

# below this an EoF value is reported as numerically zero
EOF_ZERO = 1e-9


@dataclass(frozen=True)
class TwoModeCovariance:
    sigma: np.ndarray

    def __post_init__(self):
        s = np.array(self.sigma, dtype=float)
        if s.shape != (4, 4):
            raise ParameterError(f"covariance must be 4x4, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ParameterError("covariance has non-finite entries")
        if not np.allclose(s, s.T, rtol=1e-12, atol=1e-12):
            raise ParameterError("covariance must be symmetric")
        object.__setattr__(self, "sigma", 0.5 * (s + s.T))

    def __array__(self, dtype=None, copy=None):
        return self.sigma if dtype is None else self.sigma.astype(dtype)


def _matrix(sigma) -> np.ndarray:
    if isinstance(sigma, TwoModeCovariance):
        return sigma.sigma
    return TwoModeCovariance(sigma).sigma


def covariance_from_moments(state: MomentState) -> TwoModeCovariance:
    """Covariance of the zero-mean Gaussian state with the given moments.

    Assumes ``<a^2> = <b^2> = <a^dag b> = 0``, which the dynamics preserve.
    """
    state.check_finite()
    s = np.zeros((4, 4))
    s[0, 0] = s[1, 1] = 2.0 * state.n_a + 1.0
    s[2, 2] = s[3, 3] = 2.0 * state.n_b + 1.0
    re, im = state.m.real, state.m.imag
    cross = 2.0 * np.array([[re, im], [im, -re]])
    s[:2, 2:] = cross
    s[2:, :2] = cross.T
    return TwoModeCovariance(s)


def tmsv_covariance(r: float, phase: float = -0.5 * math.pi) -> TwoModeCovariance:
    """Two-mode squeezed vacuum; the default phase matches the vacuum-driven ``m``."""
    n = math.sinh(r) ** 2
    m = complex(math.cos(phase), math.sin(phase)) * math.sinh(r) * math.cosh(r)
    return covariance_from_moments(MomentState(n, n, m))


def symplectic_eigenvalues(sigma) -> tuple[float, float]:
    """Symplectic eigenvalues ``(nu_1 <= nu_2)`` of a positive covariance."""
    s = _matrix(sigma)
    w, v = np.linalg.eigh(s)
    if w[0] <= 0:
        raise UnphysicalCovarianceError(
            f"covariance is not positive definite (smallest eigenvalue {w[0]:.3g})"
        )
    root = (v * np.sqrt(w)) @ v.T
    # Hermitian form i sqrt(s) Omega sqrt(s) has eigenvalues +-nu
    nu = np.linalg.eigvalsh(1j * root @ OMEGA @ root)
    return float(nu[2]), float(nu[3])


def pt_symplectic_min(sigma) -> float:
    """Smallest symplectic eigenvalue after partial transposition."""
    s = _matrix(sigma)
    return symplectic_eigenvalues(PARTIAL_TRANSPOSE @ s @ PARTIAL_TRANSPOSE)[0]


def is_physical(sigma, tol: float = 1e-9) -> bool:
    try:
        return symplectic_eigenvalues(sigma)[0] >= 1.0 - tol
    except UnphysicalCovarianceError:
        return False


def log_negativity(sigma) -> float:
    """``max(0, -ln nu~_min)``; positive iff the two modes are entangled."""
    return max(0.0, -math.log(pt_symplectic_min(sigma)))


def _inv_sqrt2(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v / np.sqrt(w)) @ v.T


def standard_form(sigma) -> np.ndarray:
    """Local-symplectic normal form ``[[a I, D], [D, b I]]`` with diagonal ``D``.

    Entanglement is invariant under the local operations used here.
    """
    s = _matrix(sigma)
    a_blk, b_blk, c_blk = s[:2, :2], s[2:, 2:], s[:2, 2:]
    da, db = np.linalg.det(a_blk), np.linalg.det(b_blk)
    sa = da**0.25 * _inv_sqrt2(a_blk)
    sb = db**0.25 * _inv_sqrt2(b_blk)
    c1 = sa @ c_blk @ sb.T
    u, d, vt = np.linalg.svd(c1)
    v = vt.T
    d = d.copy()
    if np.linalg.det(u) < 0:
        u[:, 1] *= -1
        d[1] *= -1
    if np.linalg.det(v) < 0:
        v[:, 1] *= -1
        d[1] *= -1
    out = np.zeros((4, 4))
    out[0, 0] = out[1, 1] = math.sqrt(da)
    out[2, 2] = out[3, 3] = math.sqrt(db)
    out[0, 2], out[1, 3] = d
    out[2, 0], out[3, 1] = d
    return out


def entropy_of_entanglement(r: float) -> float:
    """Entropy (nats) of either mode of a two-mode squeezed vacuum."""
    c2, s2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return float(xlogy(c2, c2) - xlogy(s2, s2))


@dataclass(frozen=True)
class EofResult:
    value: float
    squeezing: float
    psi: float
    s_a: float
    s_b: float
    best_evaluated: float
    evaluations: int


def _to_base(value: float, base: str) -> float:
    if base == "nats":
        return value
    if base == "bits":
        return value / math.log(2.0)
    raise ParameterError(f"entropy base: expected 'nats' or 'bits', got {base!r}")


def eof_details(sigma, tol: float = 1e-12, base: str = "nats") -> EofResult:
    """Gaussian entanglement of formation with the optimiser's bookkeeping.

    Minimises the two-mode squeezing ``r`` over pure states
    ``L TMS(r, psi) L^T <= sigma`` with local squeezers ``s_a``, ``s_b``. For
    each shape ``(psi, s_a, s_b)`` the smallest admissible ``r`` comes from
    the compiled kernel; the shape is searched by multi-start Nelder-Mead.
    """
    s = _matrix(sigma)
    nu1, _ = symplectic_eigenvalues(s)
    if nu1 < 1.0 - 1e-9:
        raise UnphysicalCovarianceError(
            f"covariance violates the uncertainty principle (nu_min = {nu1:.12g})"
        )
    if pt_symplectic_min(s) >= 1.0:
        return EofResult(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0)

    std = standard_form(s)
    # near-pure inputs may sit a hair below nu = 1; widen the slack to match
    deficit = max(0.0, 1.0 - nu1)
    slack = (1e-11 + 2.0 * deficit) * float(np.max(np.diag(std)))
    d1, d2 = std[0, 2], std[1, 3]
    psi0 = 0.0 if d1 - d2 >= 0 else math.pi

    best = [math.inf, (psi0, 0.0, 0.0)]
    count = [0]

    def objective(p):
        count[0] += 1
        r = _core.pure_state_squeezing(std, p[0], p[1], p[2], slack)
        if r < best[0]:
            best[0] = r
            best[1] = (float(p[0]), float(p[1]), float(p[2]))
        return r

    step = 0.3
    starts = [(psi0, 0.0, 0.0)] + [
        (psi0, sa * step, sb * step) for sa in (-1, 1) for sb in (-1, 1)
    ]
    for x0 in starts:
        minimize(
            objective,
            np.array(x0),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": tol, "maxiter": 4000},
        )
    r = best[0]
    if r >= _core.INFEASIBLE:
        # unreachable for physical states: sigma itself dominates some pure state
        raise EofSearchError("no admissible pure state found for an entangled covariance")
    value = _to_base(entropy_of_entanglement(r), base)
    psi, s_a, s_b = best[1]
    return EofResult(value, r, psi, s_a, s_b, r, count[0])


def entanglement_of_formation(sigma, tol: float = 1e-12, base: str = "nats") -> float:
    return eof_details(sigma, tol=tol, base=base).value


@dataclass(frozen=True)
class ThermalSpectrumPoint:
    r: float
    n: float
    alpha: float


def thermal_point_from_n(n: float) -> ThermalSpectrumPoint:
    """Squeezing and thermal exponent for spectral density ``n = sinh^2 r``.

    ``alpha = ln(1 / tanh^2 r)`` is infinite at ``n = 0``.
    """
    n = float(n)
    if not math.isfinite(n) or n < 0:
        raise ParameterError(f"spectral density must be finite and >= 0, got {n!r}")
    r = math.asinh(math.sqrt(n))
    alpha = math.inf if n == 0 else -2.0 * math.log(math.tanh(r))
    return ThermalSpectrumPoint(r, n, alpha)
