"""Table-producing commands behind the CLI subcommands."""

from __future__ import annotations

import math

from .config import RunConfig
from .dynamics import MomentState
from .errors import UnphysicalCovarianceError
from .gaussian import (
    covariance_from_moments,
    entanglement_of_formation,
    is_physical,
    log_negativity,
    pt_symplectic_min,
    symplectic_eigenvalues,
)
from .propagation import integrate, propagate_closed_form
from .sweep import SweepSpec, loss_benefit_threshold, optimize_gamma, run_sweep
from .tables import Table

__all__ = [
    "EVOLVE_COLUMNS",
    "SWEEP_COLUMNS",
    "cmd_evolve",
    "cmd_sweep",
    "cmd_optimize_gamma",
    "cmd_threshold",
    "cmd_entanglement",
]

EVOLVE_COLUMNS = ("z", "n_a", "n_b", "re_m", "im_m", "abs_m", "log_neg", "eof")
SWEEP_COLUMNS = ("axis_value", "n_a", "gamma_opt", "enhancement")
ENTANGLEMENT_COLUMNS = (
    "z", "n_a", "n_b", "re_m", "im_m", "nu_1", "nu_2", "nu_pt_min", "log_neg", "eof",
)


def _entropy(value: float, cfg: RunConfig) -> float:
    return value / math.log(2.0) if cfg.entropy_base == "bits" else value


def cmd_evolve(cfg: RunConfig, with_eof: bool = False) -> Table:
    """Trajectory of the configured model; EoF only when requested."""
    traj = integrate(cfg.seed, cfg.params, cfg.z_steps, model=cfg.model, cap=cfg.cap)
    table = Table(EVOLVE_COLUMNS)
    for z, state in zip(traj.z, traj.states):
        cov = covariance_from_moments(state)
        if with_eof and not is_physical(cov):
            raise UnphysicalCovarianceError(
                f"stepped state at z = {z:.6g} is unphysical; increase z_steps (now {cfg.z_steps})"
            )
        log_neg = _entropy(log_negativity(cov), cfg)
        eof = None
        if with_eof:
            eof = entanglement_of_formation(cov, tol=cfg.eof_tol, base=cfg.entropy_base)
        table.append(
            [float(z), state.n_a, state.n_b, state.m.real, state.m.imag, abs(state.m), log_neg, eof]
        )
    return table


def cmd_sweep(cfg: RunConfig, with_gamma_opt: bool = False, threads=None) -> Table:
    spec = SweepSpec(
        cfg.sweep_axis,
        tuple(cfg.sweep_grid.tolist()),
        cfg.params,
        cfg.horizon,
        cfg.objective,
    )
    rows = run_sweep(
        spec,
        with_gamma_opt=with_gamma_opt,
        with_enhancement=True,
        bracket_max=cfg.gamma_max,
        tol=cfg.effective_gamma_tol,
        threads=threads,
    )
    return Table(SWEEP_COLUMNS, [[r.axis_value, r.n_a, r.gamma_opt, r.enhancement] for r in rows])


def cmd_optimize_gamma(cfg: RunConfig) -> Table:
    res = optimize_gamma(
        cfg.params, cfg.objective, cfg.gamma_max, cfg.effective_gamma_tol, horizon=cfg.horizon
    )
    return Table(
        ("gamma_opt", "objective_value", "objective", "multimodal", "degenerate"),
        [[res.gamma_opt, res.value, res.objective, res.multimodal, res.degenerate]],
    )


def cmd_threshold(cfg: RunConfig) -> Table:
    res = loss_benefit_threshold(
        cfg.params,
        cfg.threshold_tol,
        objective=cfg.objective,
        bracket_max=cfg.gamma_max,
        horizon=cfg.horizon,
    )
    return Table(("delta_k_star", "objective"), [[res.delta_k_star, res.objective]])


def cmd_entanglement(cfg: RunConfig, moments: MomentState | None = None) -> Table:
    """Entanglement measures of explicit moments, or of the configured run at z = L."""
    if moments is None:
        z = cfg.length
        moments = propagate_closed_form(cfg.seed, cfg.params, z, model=cfg.model)
    else:
        z = None
    cov = covariance_from_moments(moments)
    nu1, nu2 = symplectic_eigenvalues(cov)
    eof = entanglement_of_formation(cov, tol=cfg.eof_tol, base=cfg.entropy_base)
    return Table(
        ENTANGLEMENT_COLUMNS,
        [[
            z, moments.n_a, moments.n_b, moments.m.real, moments.m.imag,
            nu1, nu2, pt_symplectic_min(cov), _entropy(log_negativity(cov), cfg), eof,
        ]],
    )
