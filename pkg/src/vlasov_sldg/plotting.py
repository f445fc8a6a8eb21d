"""Figures for a run: phase-space snapshots and invariant-error histories."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .diagnostics import relative_error_series  # noqa: E402

ERROR_PANELS = (
    ("total_energy", "energy"),
    ("entropy", "entropy"),
    ("l1_norm", "$L^1$ norm"),
    ("l2_norm", "$L^2$ norm"),
)


def plot_snapshot(x, v, averages, t, path, title=None):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    mesh = ax.pcolormesh(x, v, averages.T, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="f (cell average)")
    ax.set_xlabel("x")
    ax.set_ylabel("v")
    ax.set_title(title or f"t = {t:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_invariant_errors(runs, path):
    """Error histories for one or more runs.

    ``runs`` maps a legend label to a list of InvariantRecord.  Errors are
    shown as absolute relative deviations on a log scale.
    """
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    for label, records in runs.items():
        series = relative_error_series(records)
        t = series["t"]
        for ax, (key, name) in zip(axes.flat, ERROR_PANELS):
            err = np.abs(series[key])
            ax.semilogy(t[1:], np.maximum(err[1:], 1e-17), label=label, lw=1.2)
            ax.set_title(f"relative error in {name}")
    for ax in axes[1]:
        ax.set_xlabel("t")
    axes.flat[0].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_electric_energy(runs, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, records in runs.items():
        t = np.array([r.t for r in records])
        ee = np.array([r.electric_energy for r in records])
        ax.semilogy(t, np.maximum(ee, 1e-300), label=label, lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("electric energy")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_run_figures(records, snapshots, output_dir, label="run"):
    out = Path(output_dir)
    paths = [
        plot_invariant_errors({label: records}, out / "invariants.png"),
        plot_electric_energy({label: records}, out / "electric_energy.png"),
    ]
    for t, f in sorted(snapshots.items()):
        grid = f.grid
        paths.append(plot_snapshot(grid.x_grid.centers, grid.v_grid.centers, f.cell_averages(), t,
                                   out / f"snapshot_t{float(t):g}.png"))
    return paths
