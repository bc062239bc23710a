"""Parameter sweeps, optimal idler loss, enhancement and the loss-benefit threshold.

Two objectives are available for choosing the loss rate ``gamma_b``:

``asymptotic_rate``
    largest real eigenvalue of the moment matrix (horizon independent);
``final_intensity``
    ``n_a`` at the evaluation horizon, propagated exactly from vacuum.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import VACUUM, MediumParams
from .errors import ParameterError, TwinBeamError
from .propagation import asymptotic_growth_rate, propagate_closed_form

__all__ = [
    "OBJECTIVES",
    "SweepSpec",
    "SweepRow",
    "GammaOptimum",
    "ThresholdResult",
    "NonMonotonePredicateError",
    "normalize_objective",
    "objective_value",
    "golden_section_max",
    "optimize_gamma",
    "enhancement_factor",
    "loss_benefit_threshold",
    "sweep_delta_k",
    "sweep_gamma_b",
    "run_sweep",
    "thread_count",
]

OBJECTIVES = ("asymptotic_rate", "final_intensity")
_ALIASES = {"rate": "asymptotic_rate", "intensity": "final_intensity"}
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class NonMonotonePredicateError(TwinBeamError, RuntimeError):
    """The loss-helps predicate switches more than once on the scanned range."""


def normalize_objective(objective: str) -> str:
    name = _ALIASES.get(objective, objective)
    if name not in OBJECTIVES:
        raise ParameterError(
            f"objective: expected one of {OBJECTIVES + tuple(_ALIASES)}, got {objective!r}"
        )
    return name


def objective_value(params: MediumParams, objective: str = "asymptotic_rate", horizon=None) -> float:
    objective = normalize_objective(objective)
    if objective == "asymptotic_rate":
        return asymptotic_growth_rate(params)
    z = params.length if horizon is None else float(horizon)
    return propagate_closed_form(VACUUM, params, z).n_a


def thread_count(threads=None) -> int:
    if threads is None:
        threads = os.environ.get("LOSSY_TWINBEAM_THREADS", "1")
    try:
        threads = int(threads)
    except ValueError:
        raise ParameterError(f"LOSSY_TWINBEAM_THREADS: expected an integer, got {threads!r}") from None
    return max(1, threads)


def _map(fn, items, threads=None):
    # results keep input order; each item is computed independently
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def golden_section_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[lo, hi]`` to bracket width ``tol``."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


@dataclass(frozen=True)
class GammaOptimum:
    gamma_opt: float
    value: float
    objective: str
    multimodal: bool = False
    degenerate: bool = False
    bracket_max: float = 0.0
    tol: float = 0.0


def optimize_gamma(
    base: MediumParams,
    objective: str = "asymptotic_rate",
    bracket_max: float | None = None,
    tol: float | None = None,
    *,
    horizon: float | None = None,
    grid_points: int = 201,
) -> GammaOptimum:
    """Loss rate ``gamma_b`` in ``[0, bracket_max]`` maximising the objective.

    A coarse grid locates the best local maximum, which golden-section search
    then refines. When the grid shows several local maxima each one is
    refined and the best wins (``multimodal`` is set). Ties go to the smaller
    loss. A constant objective returns ``gamma_opt = 0`` with ``degenerate``.
    """
    objective = normalize_objective(objective)
    if bracket_max is None:
        bracket_max = 50.0 * base.xi if base.xi > 0 else 50.0
    if not bracket_max > 0:
        raise ParameterError(f"bracket_max: must be > 0, got {bracket_max!r}")
    if tol is None:
        tol = 1e-4 * bracket_max
    if not tol > 0:
        raise ParameterError(f"tol: must be > 0, got {tol!r}")

    def f(g):
        return objective_value(base.with_(gamma_b=g), objective, horizon)

    grid = np.linspace(0.0, bracket_max, grid_points)
    vals = np.array([f(g) for g in grid])
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.ptp(vals) <= 1e-14 * scale:
        return GammaOptimum(0.0, float(vals[0]), objective, False, True, bracket_max, tol)

    peaks = [
        i
        for i in range(grid_points)
        if (i == 0 or vals[i] > vals[i - 1]) and (i == grid_points - 1 or vals[i] >= vals[i + 1])
    ]
    multimodal = len(peaks) > 1
    if not multimodal:
        peaks = [int(np.argmax(vals))]

    candidates = []
    for i in peaks:
        candidates.append((float(grid[i]), float(vals[i])))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid_points - 1)]
        candidates.append(golden_section_max(f, float(lo), float(hi), tol))
    best_val = max(v for _, v in candidates)
    eps = 1e-15 * max(1.0, abs(best_val))
    gamma, value = min((g, v) for g, v in candidates if v >= best_val - eps)
    return GammaOptimum(gamma, value, objective, multimodal, False, bracket_max, tol)


def enhancement_factor(
    base: MediumParams,
    horizon: float | None = None,
    *,
    bracket_max: float | None = None,
    tol: float | None = None,
) -> float:
    """``n_a(gamma_opt) / n_a(gamma_b = 0)`` at the horizon (1 when both vanish).

    ``gamma_opt`` maximises the final intensity, so the ratio is at least 1.
    """
    z = base.length if horizon is None else float(horizon)
    opt = optimize_gamma(base, "final_intensity", bracket_max, tol, horizon=z)
    lossless = objective_value(base.with_(gamma_b=0.0), "final_intensity", z)
    if lossless == 0.0:
        return 1.0 if opt.value == 0.0 else math.inf
    return max(opt.value, lossless) / lossless


@dataclass(frozen=True)
class ThresholdResult:
    delta_k_star: float
    objective: str
    scan: list = field(default_factory=list)


def loss_benefit_threshold(
    base: MediumParams,
    tol: float = 1e-3,
    *,
    objective: str = "asymptotic_rate",
    dk_max: float | None = None,
    scan_points: int = 49,
    gamma_tol: float | None = None,
    bracket_max: float | None = None,
    horizon: float | None = None,
) -> ThresholdResult:
    """Smallest ``delta_k >= 0`` beyond which some idler loss increases the objective.

    The predicate is ``optimize_gamma(...).gamma_opt > gamma_tol``. It is
    scanned on ``[0, dk_max]`` and must switch from false to true at most
    once before bisection to width ``tol``. Returns ``inf`` if loss never
    helps on the scanned range.
    """
    objective = normalize_objective(objective)
    if dk_max is None:
        dk_max = 12.0 * base.xi if base.xi > 0 else 12.0
    if bracket_max is None:
        bracket_max = 50.0 * base.xi if base.xi > 0 else 50.0
    opt_tol = 1e-4 * bracket_max
    if gamma_tol is None:
        gamma_tol = opt_tol

    def helps(dk):
        res = optimize_gamma(base.with_(delta_k=dk), objective, bracket_max, opt_tol, horizon=horizon)
        return res.gamma_opt > gamma_tol

    grid = np.linspace(0.0, dk_max, scan_points)
    flags = [helps(float(dk)) for dk in grid]
    scan = list(zip(grid.tolist(), flags))
    switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
    if switches > 1 or (switches == 1 and flags[0]):
        raise NonMonotonePredicateError(
            f"loss-helps predicate is not monotone in delta_k on [0, {dk_max:g}]: {scan}"
        )
    if flags[0]:
        return ThresholdResult(0.0, objective, scan)
    if not flags[-1]:
        return ThresholdResult(math.inf, objective, scan)
    k = flags.index(True)
    lo, hi = float(grid[k - 1]), float(grid[k])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if helps(mid):
            hi = mid
        else:
            lo = mid
    return ThresholdResult(0.5 * (lo + hi), objective, scan)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: tuple
    base: MediumParams = MediumParams()
    horizon: float | None = None
    objective: str = "asymptotic_rate"

    def __post_init__(self):
        if self.axis not in ("delta_k", "gamma_b"):
            raise ParameterError(f"axis: expected 'delta_k' or 'gamma_b', got {self.axis!r}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ParameterError("grid: must be nonempty")
        if not all(math.isfinite(v) for v in grid):
            raise ParameterError("grid: values must be finite")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ParameterError("grid: values must be sorted")
        if self.axis == "gamma_b" and grid[0] < 0:
            raise ParameterError("grid: gamma_b values must be >= 0")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "objective", normalize_objective(self.objective))

    @property
    def z(self) -> float:
        return self.base.length if self.horizon is None else float(self.horizon)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    n_a: float
    gamma_opt: float | None = None
    enhancement: float | None = None


def _point(spec: SweepSpec, value: float) -> MediumParams:
    return spec.base.with_(**{spec.axis: value})


def sweep_delta_k(spec: SweepSpec, threads=None) -> list[tuple[float, float]]:
    """``(delta_k, n_a at horizon)`` from vacuum for each grid value."""
    if spec.axis != "delta_k":
        raise ParameterError("sweep_delta_k needs a delta_k axis")
    return [(r.axis_value, r.n_a) for r in run_sweep(spec, threads=threads)]


def sweep_gamma_b(spec: SweepSpec, threads=None) -> list[tuple[float, float]]:
    if spec.axis != "gamma_b":
        raise ParameterError("sweep_gamma_b needs a gamma_b axis")
    return [(r.axis_value, r.n_a) for r in run_sweep(spec, threads=threads)]


def run_sweep(
    spec: SweepSpec,
    *,
    with_gamma_opt: bool = False,
    with_enhancement: bool = False,
    bracket_max: float | None = None,
    tol: float | None = None,
    threads=None,
) -> list[SweepRow]:
    """Evaluate every grid point independently; rows follow the grid order."""
    z = spec.z

    def evaluate(value):
        p = _point(spec, value)
        n_a = propagate_closed_form(VACUUM, p, z).n_a
        gamma_opt = enhancement = None
        if with_gamma_opt:
            gamma_opt = optimize_gamma(p, spec.objective, bracket_max, tol, horizon=z).gamma_opt
        if with_enhancement:
            enhancement = enhancement_factor(p, z, bracket_max=bracket_max, tol=tol)
        return SweepRow(value, n_a, gamma_opt, enhancement)

    return _map(evaluate, list(spec.grid), threads)
