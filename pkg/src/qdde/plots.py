"""Figure rendering for the CLI reports; every function writes one PNG."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_solve_1d(x, initial, analytic, classical, quantum, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(x, initial, color="0.6", lw=1.0, label="initial")
    ax.plot(x, analytic, "k-", lw=1.5, label="analytic")
    ax.plot(x, classical, "b--", lw=1.2, label="classical")
    ax.plot(x, quantum, "r.", ms=5, label="quantum (recovered)")
    ax.set_xlabel("x")
    ax.set_ylabel("p(x, T)")
    ax.legend()
    _save(fig, path)


def plot_solve_2d(classical, quantum, extent, path: str) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    vmax = max(float(np.max(classical)), float(np.max(quantum)))
    for ax, field, title in ((axes[0], classical, "classical"),
                             (axes[1], quantum, "quantum (recovered)")):
        im = ax.imshow(field.T, origin="lower", extent=extent, vmin=0.0,
                       vmax=vmax, cmap="viridis")
        ax.set_title(title)
        ax.set_xlabel("x_0")
        ax.set_ylabel("x_1")
        fig.colorbar(im, ax=ax, shrink=0.8)
    _save(fig, path)


def plot_error_scan(n_x, eps, eps_c, eps_q, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.loglog(n_x, eps, "ko-", label="eps")
    ax.loglog(n_x, eps_c, "bs--", label="eps_c")
    ax.loglog(n_x, eps_q, "r^--", label="eps_q")
    ax.set_xlabel("n_x")
    ax.set_ylabel("max-norm error")
    ax.set_xticks(list(n_x))
    ax.set_xticklabels([str(v) for v in n_x])
    ax.legend()
    _save(fig, path)


def plot_depth_scan(rows, path: str) -> None:
    """rows: (subroutine, gate_set, q, n_x, depth, gate_count)."""
    subs = sorted({r[0] for r in rows})
    fig, axes = plt.subplots(1, len(subs), figsize=(6 * len(subs), 4.5),
                             squeeze=False)
    for ax, sub in zip(axes[0], subs):
        series: dict[str, list[tuple[int, int]]] = {}
        for s, gs, q, _, depth, _ in rows:
            if s == sub:
                series.setdefault(gs, []).append((q, depth))
        for gs in sorted(series):
            pts = sorted(series[gs])
            style = "k--" if gs == "theoretical" else "o-"
            ax.semilogy([p[0] for p in pts], [p[1] for p in pts], style,
                        label=gs)
        ax.set_title(sub)
        ax.set_xlabel("qubits per register")
        ax.set_ylabel("depth")
        ax.legend(fontsize=8)
    _save(fig, path)


def plot_gateset_scan(rows, path: str) -> None:
    """rows: (d, n_x, gate_set, tag, depth, theoretical)."""
    dims = sorted({r[0] for r in rows})
    fig, axes = plt.subplots(1, len(dims), figsize=(6 * len(dims), 4.5),
                             squeeze=False)
    for ax, dim in zip(axes[0], dims):
        series: dict[tuple[str, str], list[tuple[int, int]]] = {}
        theory: dict[int, float] = {}
        for d, n_x, gs, tag, depth, th in rows:
            if d != dim:
                continue
            series.setdefault((gs, tag), []).append((n_x, depth))
            theory[n_x] = th
        for (gs, tag) in sorted(series):
            pts = sorted(series[(gs, tag)])
            lw = 2.0 if tag == "Total" else 0.8
            ax.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", lw=lw,
                      label=f"{gs}:{tag}")
        tp = sorted(theory.items())
        ax.loglog([p[0] for p in tp], [p[1] for p in tp], "k--",
                  label="theoretical")
        ax.set_title(f"d = {dim}")
        ax.set_xlabel("n_x")
        ax.set_ylabel("depth")
        ax.legend(fontsize=7, ncol=2)
    _save(fig, path)


def plot_shots_scan(n_shots, eps_q, bound, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.loglog(n_shots, eps_q, "ro-", label="eps_q")
    ax.loglog(n_shots, bound, "k--", label="confidence bound")
    ax.set_xlabel("shots")
    ax.set_ylabel("eps_q")
    ax.legend()
    _save(fig, path)


def plot_stateprep_compare(rows, path: str) -> None:
    """rows: (d, n_x, q, naive_depth, lowrank_depth, reduction_percent)."""
    labels = [f"d={d}, n_x={n}" for d, n, *_ in rows]
    naive = [r[3] for r in rows]
    lowrank = [r[4] for r in rows]
    pos = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.bar(pos - 0.2, naive, width=0.4, label="naive")
    ax.bar(pos + 0.2, lowrank, width=0.4, label="low rank")
    ax.set_yscale("log")
    ax.set_xticks(pos)
    ax.set_xticklabels(labels, rotation=20)
    ax.set_ylabel("rebased depth")
    ax.legend()
    _save(fig, path)
