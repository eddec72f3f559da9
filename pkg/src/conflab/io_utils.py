"""Deterministic artifact emission: CSV tables, SVG geometry, PGM fields, JSON."""

from __future__ import annotations

import csv
import json
import os

import numpy as np


def emit_csv(path, header, rows, comment: str | None = None):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if comment:
            w.writerow([f"# {comment}"])
        w.writerow(header)
        for row in rows:
            w.writerow(list(row))
    return path


def emit_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not JSON serializable: {type(x)}")


def emit_pgm(path, array, levels: int = 255, comment: str | None = None):
    """ASCII PGM of a 2D float array, linearly scaled to the gray range."""
    a = np.asarray(array, dtype=float)
    if a.ndim != 2:
        raise ValueError("PGM needs a 2D array")
    lo, hi = float(a.min()), float(a.max())
    span = hi - lo if hi > lo else 1.0
    gray = np.round((a - lo) / span * levels).astype(int)
    with open(path, "w") as fh:
        fh.write("P2\n")
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(f"{a.shape[1]} {a.shape[0]}\n{levels}\n")
        for row in gray:
            fh.write(" ".join(str(v) for v in row) + "\n")
    return path


def emit_svg(path, polylines, size: int = 600, margin: float = 0.05,
             colors=None, closed: bool = True, comment: str | None = None):
    """Standalone SVG of polylines/polygons, deterministic ordering and text.

    polylines: list of (n, 2) arrays.  Raises on an empty list.
    """
    if not polylines:
        raise ValueError("nothing to draw")
    polys = [np.asarray(p, dtype=float) for p in polylines]
    all_pts = np.vstack(polys)
    lo = all_pts.min(axis=0)
    hi = all_pts.max(axis=0)
    span = max(float(max(hi - lo)), 1e-12)
    pad = margin * span

    def to_px(p):
        x = (p[:, 0] - lo[0] + pad) / (span + 2 * pad) * size
        y = size - (p[:, 1] - lo[1] + pad) / (span + 2 * pad) * size
        return x, y

    palette = colors or ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                         "#8c564b", "#17becf", "#7f7f7f"]
    tag = "polygon" if closed else "polyline"
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">']
    if comment:
        lines.append(f"<!-- {comment} -->")
    for k, p in enumerate(polys):
        x, y = to_px(p)
        pts = " ".join(f"{xi:.3f},{yi:.3f}" for xi, yi in zip(x, y))
        color = palette[k % len(palette)]
        lines.append(f'<{tag} points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
