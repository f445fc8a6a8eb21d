"""CSV and metadata output for a finished run."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .config import format_config
from .diagnostics import InvariantRecord

DIAGNOSTIC_COLUMNS = (
    "t", "mass", "momentum", "kinetic_energy", "electric_energy", "total_energy",
    "l1", "l2", "entropy", "min_value", "negative_mass",
)


def fmt(x):
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def snapshot_name(t, suffix="csv"):
    return f"snapshot_t{float(t):g}.{suffix}"


def write_diagnostics(records, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DIAGNOSTIC_COLUMNS)
        for rec in records:
            writer.writerow([fmt(x) for x in rec.as_tuple()])
    return path


def read_diagnostics(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != DIAGNOSTIC_COLUMNS:
            raise ValueError(f"{path}: unexpected diagnostics header {header}")
        return [InvariantRecord(*(float(x) for x in row)) for row in reader]


def write_snapshot(f, path, nodal=False):
    """Cell averages of ``f``: one line per velocity cell, x varying along it.

    The first column is the velocity cell center, the header lists the x
    cell centers.  With ``nodal`` the full 4-index nodal array is also
    written next to it as ``.nodal.csv`` (ix, iv, a, b, x, v, f per line).
    """
    path = Path(path)
    grid = f.grid
    avg = f.cell_averages()
    xc, vc = grid.x_grid.centers, grid.v_grid.centers
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["v\\x"] + [fmt(x) for x in xc])
        for iv, v in enumerate(vc):
            writer.writerow([fmt(v)] + [fmt(val) for val in avg[:, iv]])
    if nodal:
        x, v = grid.mesh()
        nodal_path = path.with_suffix(".nodal.csv")
        with nodal_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["ix", "iv", "a", "b", "x", "v", "f"])
            for idx in np.ndindex(f.values.shape):
                writer.writerow(list(idx) + [fmt(x[idx]), fmt(v[idx]), fmt(f.values[idx])])
    return path


def read_snapshot(path):
    """Return ``(x_centers, v_centers, averages)`` with averages indexed [ix, iv]."""
    rows = list(csv.reader(Path(path).open(newline="", encoding="utf-8")))
    x = np.array([float(s) for s in rows[0][1:]])
    v = np.array([float(r[0]) for r in rows[1:]])
    avg = np.array([[float(s) for s in r[1:]] for r in rows[1:]]).T
    return x, v, avg


def write_meta(cfg, path, extra=None):
    lines = ["# resolved run configuration"] + format_config(cfg)
    if extra:
        lines.append("# derived")
        lines += [f"{k} = {v}" for k, v in extra.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return Path(path)


def write_outputs(records, snapshots, cfg, output_dir, extra_meta=None):
    """Write diagnostics.csv, snapshot_t<time>.csv files and run_meta.txt.

    Returns the list of written paths.  I/O failures propagate as ``OSError``
    naming the path.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_diagnostics(records, out / "diagnostics.csv")]
    for t in sorted(snapshots):
        written.append(write_snapshot(snapshots[t], out / snapshot_name(t), nodal=cfg.nodal_snapshots))
    written.append(write_meta(cfg, out / "run_meta.txt", extra_meta))
    return written
