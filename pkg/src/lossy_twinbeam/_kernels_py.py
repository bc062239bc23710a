"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` line for line and are used when the compiled
extension is unavailable (or when ``LOSSY_TWINBEAM_PURE_PYTHON=1``).
"""

import math

import numpy as np

# Returned by pure_state_squeezing when no pure state of the requested shape
# fits under the covariance; any feasible squeezing is far below it.
INFEASIBLE = 100.0

_U_MAX = 30.0
_S_MAX = 20.0
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def rk4_affine(matrix, drive, y0, h, steps, cap):
    """Fixed-step classical RK4 for ``dy/dz = matrix @ y + drive``.

    Returns ``(out, overflow)`` where ``out`` has ``steps + 1`` rows and
    ``overflow`` is the first row index whose ``y[0]`` exceeds ``cap`` (``-1``
    if none). Integration stops at the overflowing row.
    """
    m = np.ascontiguousarray(matrix, dtype=float)
    d = np.ascontiguousarray(drive, dtype=float)
    y = np.array(y0, dtype=float)
    out = np.empty((steps + 1, 4))
    out[0] = y
    half = 0.5 * h
    for i in range(1, steps + 1):
        k1 = m @ y + d
        k2 = m @ (y + half * k1) + d
        k3 = m @ (y + half * k2) + d
        k4 = m @ (y + h * k3) + d
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i] = y
        if not y[0] <= cap:
            return out, i
    return out, -1


def _eig2_min(a, b, c):
    # smallest eigenvalue of [[a, b], [b, c]]
    return 0.5 * (a + c) - math.sqrt(0.25 * (a - c) ** 2 + b * b)


def _blocks(sigma, psi, s_a, s_b):
    """Blocks of ``L^-1 sigma L^-T`` in the eigenbasis of the TMS generator."""
    ea, eb = math.exp(-s_a), math.exp(-s_b)
    li = (ea, 1.0 / ea, eb, 1.0 / eb)
    x = [[sigma[i][j] * li[i] * li[j] for j in range(4)] for i in range(4)]
    cp, sp = math.cos(psi), math.sin(psi)
    cm = ((cp, sp), (sp, -cp))
    x11 = ((x[0][0], x[0][1]), (x[1][0], x[1][1]))
    x12 = ((x[0][2], x[0][3]), (x[1][2], x[1][3]))
    x22 = ((x[2][2], x[2][3]), (x[3][2], x[3][3]))

    def mul(p, q):
        return (
            (p[0][0] * q[0][0] + p[0][1] * q[1][0], p[0][0] * q[0][1] + p[0][1] * q[1][1]),
            (p[1][0] * q[0][0] + p[1][1] * q[1][0], p[1][0] * q[0][1] + p[1][1] * q[1][1]),
        )

    x12c = mul(x12, cm)
    cx21 = ((x12c[0][0], x12c[1][0]), (x12c[0][1], x12c[1][1]))  # transpose
    cx22c = mul(cm, mul(x22, cm))
    a = [[0.5 * (x11[i][j] + x12c[i][j] + cx21[i][j] + cx22c[i][j]) for j in range(2)] for i in range(2)]
    dd = [[0.5 * (x11[i][j] - x12c[i][j] - cx21[i][j] + cx22c[i][j]) for j in range(2)] for i in range(2)]
    bb = [[0.5 * (x11[i][j] - x12c[i][j] + cx21[i][j] - cx22c[i][j]) for j in range(2)] for i in range(2)]
    return a, bb, dd


def _schur_min(a, bb, dd, u):
    """Smallest eigenvalue of the Schur complement at ``t = exp(u)``."""
    t = math.exp(u)
    p00, p01, p11 = a[0][0] - t, 0.5 * (a[0][1] + a[1][0]), a[1][1] - t
    det = p00 * p11 - p01 * p01
    i00, i01, i11 = p11 / det, -p01 / det, p00 / det
    # bb^T P^-1 bb
    q00 = i00 * bb[0][0] + i01 * bb[1][0]
    q10 = i01 * bb[0][0] + i11 * bb[1][0]
    q01 = i00 * bb[0][1] + i01 * bb[1][1]
    q11 = i01 * bb[0][1] + i11 * bb[1][1]
    r00 = bb[0][0] * q00 + bb[1][0] * q10
    r01 = bb[0][0] * q01 + bb[1][0] * q11
    r11 = bb[0][1] * q01 + bb[1][1] * q11
    it = 1.0 / t
    s00 = dd[0][0] - it - r00
    s01 = 0.5 * (dd[0][1] + dd[1][0]) - r01
    s11 = dd[1][1] - it - r11
    return _eig2_min(s00, s01, s11)


def pure_state_squeezing(sigma, psi, s_a, s_b, tol):
    """Smallest two-mode squeezing ``r`` of a pure state fitting under sigma.

    The pure-state family is ``L TMS(r, psi) L^T`` with local squeezers
    ``L = diag(e^s_a, e^-s_a, e^s_b, e^-s_b)``. ``tol`` is the absolute slack
    allowed on the smallest eigenvalue of ``sigma - L TMS L^T``. Returns
    ``INFEASIBLE + violation`` when no ``r`` works for this shape.
    """
    if abs(s_a) > _S_MAX or abs(s_b) > _S_MAX:
        return INFEASIBLE + abs(s_a) + abs(s_b)
    if hasattr(sigma, "tolist"):
        sigma = sigma.tolist()
    a, bb, dd = _blocks(sigma, psi, s_a, s_b)
    amin = _eig2_min(a[0][0], 0.5 * (a[0][1] + a[1][0]), a[1][1])
    dmin = _eig2_min(dd[0][0], 0.5 * (dd[0][1] + dd[1][0]), dd[1][1])
    if amin <= 0.0 or dmin <= 0.0:
        return INFEASIBLE + 1.0
    # A - tI > 0 and D - I/t > 0 bound u = log t to an open interval
    lo = max(-math.log(dmin), -_U_MAX)
    hi = min(math.log(amin), _U_MAX)
    if hi - lo < 1e-7:
        # interval collapsed (pure states): test the single candidate directly
        return _collapsed(a, bb, dd, 0.5 * (lo + hi), tol, lo - hi)
    width = hi - lo
    lo += 1e-14 * width
    hi -= 1e-14 * width
    if lo < 0.0 < hi and _schur_min(a, bb, dd, 0.0) >= -tol:
        return 0.0
    if lo < 0.0 < hi:
        outer = 0.0
    elif lo >= 0.0:
        outer = lo
    else:
        outer = hi
    # golden-section maximum of the concave Schur eigenvalue
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _schur_min(a, bb, dd, x1)
    f2 = _schur_min(a, bb, dd, x2)
    while hi - lo > 1e-13:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _schur_min(a, bb, dd, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _schur_min(a, bb, dd, x1)
    if f1 >= f2:
        ustar, gstar = x1, f1
    else:
        ustar, gstar = x2, f2
    if gstar < -tol:
        return INFEASIBLE + (-gstar)
    # bisect from the feasible maximiser toward u = 0
    return _edge(a, bb, dd, ustar, outer, tol)


def _full_min(a, bb, dd, u):
    t = math.exp(u)
    y = np.array(
        [
            [a[0][0] - t, a[0][1], bb[0][0], bb[0][1]],
            [a[1][0], a[1][1] - t, bb[1][0], bb[1][1]],
            [bb[0][0], bb[1][0], dd[0][0] - 1.0 / t, dd[0][1]],
            [bb[0][1], bb[1][1], dd[1][0], dd[1][1] - 1.0 / t],
        ]
    )
    return np.linalg.eigvalsh(y)[0]


def _collapsed(a, bb, dd, u, tol, gap):
    g = _full_min(a, bb, dd, u)
    if g >= -tol:
        return 0.5 * abs(u)
    return INFEASIBLE + max(gap, 0.0) - g


def _edge(a, bb, dd, inner, outer, tol):
    # bisection: inner is feasible, outer is not; return |u|/2 at the edge
    for _ in range(200):
        mid = 0.5 * (inner + outer)
        if _schur_min(a, bb, dd, mid) >= -tol:
            inner = mid
        else:
            outer = mid
        if abs(inner - outer) <= 1e-15 * max(1.0, abs(inner)):
            break
    return 0.5 * abs(inner)
