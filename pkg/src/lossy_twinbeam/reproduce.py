"""Data tables and matplotlib scripts for the fig2, fig3 and fig4 pipelines.

fig2  n_a against delta_k for several idler losses, gamma_opt and enhancement
fig3  n_a, n_b, |m| and EoF along z at delta_k = 11.5 for several idler losses
fig4  quantum against classical for seeds n_a(0) = 0.2 and 20 at gamma_opt

Medium lengths default to 1.0 (fig2), 0.8 (fig3) and 8.0 (fig4); any key in
``FIGURE_DEFAULTS`` can be overridden.
"""

from __future__ import annotations

import os

import numpy as np

from .dynamics import VACUUM, MediumParams, MomentState
from .errors import ParameterError
from .gaussian import covariance_from_moments, entanglement_of_formation
from .propagation import closed_form_trajectory, propagate_closed_form
from .sweep import _map, enhancement_factor, optimize_gamma
from .tables import Table, render, write_text

__all__ = ["FIGURES", "FIGURE_DEFAULTS", "reproduce"]

FIGURES = ("fig2", "fig3", "fig4")

FIGURE_DEFAULTS = {
    "fig2": {"xi": 1.0, "length": 1.0, "gamma_family": (0.0, 5.0, 10.0), "dk_max": 15.0, "points": 61},
    "fig3": {"xi": 1.0, "delta_k": 11.5, "length": 0.8, "gamma_family": (0.0, 5.0, 10.0, 22.7), "points": 81},
    "fig4": {"xi": 1.0, "delta_k": 11.5, "gamma_b": 22.7, "length": 8.0, "seeds": (0.2, 20.0), "points": 81},
}


def _label(value: float) -> str:
    return format(value, "g")


def _eof_column(traj, base):
    return [
        entanglement_of_formation(covariance_from_moments(s), base=base) for s in traj.states
    ]


def _fig2(opts, threads):
    base = MediumParams(xi=opts["xi"], length=opts["length"])
    dks = np.linspace(0.0, opts["dk_max"], opts["points"]).tolist()
    family = opts["gamma_family"]

    def point(dk):
        p = base.with_(delta_k=dk)
        opt = optimize_gamma(p, "final_intensity", opts["gamma_max"])
        curves = [propagate_closed_form(VACUUM, p.with_(gamma_b=g)).n_a for g in family]
        enh = enhancement_factor(p, bracket_max=opts["gamma_max"])
        return curves, opt.gamma_opt, opt.value, enh

    results = _map(point, dks, threads)
    a = Table(["delta_k"] + [f"n_a_gamma_{_label(g)}" for g in family] + ["n_a_gamma_opt"])
    b = Table(["delta_k", "gamma_opt"])
    c = Table(["delta_k", "enhancement"])
    for dk, (curves, gopt, best, enh) in zip(dks, results):
        a.append([dk] + curves + [best])
        b.append([dk, gopt])
        c.append([dk, enh])
    return {
        "fig2a_spectral_density": a,
        "fig2b_gamma_opt": b,
        "fig2c_enhancement": c,
    }


def _fig3(opts, threads):
    base = MediumParams(xi=opts["xi"], delta_k=opts["delta_k"], length=opts["length"])
    z = np.linspace(0.0, base.length, opts["points"])
    family = opts["gamma_family"]

    def run(g):
        traj = closed_form_trajectory(z, VACUUM, base.with_(gamma_b=g))
        return traj, _eof_column(traj, opts["entropy_base"])

    runs = _map(run, list(family), threads)
    heads = ["z"] + [f"gamma_{_label(g)}" for g in family]
    out = {}
    for key, extract in (
        ("fig3a_n_a", lambda t, e: t.n_a),
        ("fig3b_n_b", lambda t, e: t.n_b),
        ("fig3c_abs_m", lambda t, e: np.abs(t.m)),
        ("fig3d_eof", lambda t, e: e),
    ):
        cols = [list(map(float, extract(t, e))) for t, e in runs]
        out[key] = Table(heads, [[float(zi)] + [c[i] for c in cols] for i, zi in enumerate(z)])
    return out


def _fig4(opts, threads):
    p = MediumParams(
        xi=opts["xi"], delta_k=opts["delta_k"], gamma_b=opts["gamma_b"], length=opts["length"]
    )
    z = np.linspace(0.0, p.length, opts["points"])
    out = {}
    letters = iter("abcdef")
    seeds = opts["seeds"]

    def run(args):
        seed, model = args
        traj = closed_form_trajectory(z, MomentState(seed), p, model=model)
        return traj, _eof_column(traj, opts["entropy_base"])

    jobs = [(s, m) for s in seeds for m in ("quantum", "classical")]
    runs = dict(zip(jobs, _map(run, jobs, threads)))
    for name, extract in (
        ("n_a", lambda t, e: t.n_a),
        ("abs_m", lambda t, e: np.abs(t.m)),
        ("eof", lambda t, e: e),
    ):
        for seed in seeds:
            q = list(map(float, extract(*runs[(seed, "quantum")])))
            c = list(map(float, extract(*runs[(seed, "classical")])))
            key = f"fig4{next(letters)}_{name}_seed_{_label(seed)}"
            out[key] = Table(["z", "quantum", "classical"], [[float(zi), q[i], c[i]] for i, zi in enumerate(z)])
    return out


_BUILDERS = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4}

_PLOT_TEMPLATE = '''"""Plot {figure} from the tables written next to this script."""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
TABLES = {tables!r}
LOGY = {logy!r}


def load(name):
    with open(os.path.join(HERE, name + ".csv")) as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], rows[1:]
    cols = list(zip(*[[float(v) if v else float("nan") for v in r] for r in body]))
    return head, cols


fig, axes = plt.subplots(len(TABLES), 1, figsize=(6, 2.6 * len(TABLES)), squeeze=False)
for ax, name in zip(axes[:, 0], TABLES):
    head, cols = load(name)
    for label, col in zip(head[1:], cols[1:]):
        ax.plot(cols[0], col, label=label)
    ax.set_xlabel(head[0])
    ax.set_title(name)
    if name in LOGY:
        ax.set_yscale("log")
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{figure}.png"), dpi=150)
'''


def reproduce(figure: str, outdir, fmt: str = "csv", overrides=None, threads=None) -> list[str]:
    """Write the figure's tables (and a plotting script) into ``outdir``."""
    if figure not in _BUILDERS:
        raise ParameterError(f"unknown figure {figure!r}; expected one of {FIGURES}")
    opts = dict(FIGURE_DEFAULTS[figure])
    opts.setdefault("gamma_max", 50.0)
    opts.setdefault("entropy_base", "nats")
    for key, value in (overrides or {}).items():
        if key not in opts:
            raise ParameterError(f"{figure}: cannot override {key!r}; allowed: {sorted(opts)}")
        opts[key] = value
    tables = _BUILDERS[figure](opts, threads)
    written = []
    for name, table in tables.items():
        path = os.path.join(outdir, f"{name}.{fmt}")
        write_text(path, render(table, fmt))
        written.append(path)
    if fmt == "csv":
        logy = [n for n in tables if "eof" not in n and "gamma_opt" not in n]
        script = _PLOT_TEMPLATE.format(figure=figure, tables=list(tables), logy=logy)
        path = os.path.join(outdir, f"plot_{figure}.py")
        write_text(path, script)
        written.append(path)
    return written
