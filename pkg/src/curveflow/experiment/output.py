"""CSV and SVG writers for run metrics and curve snapshots."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..geometry import Curve
from ..metrics import METRIC_COLUMNS, RunMetrics

FLOAT_FMT = "{:.17g}"
METRICS_FILE = "metrics.csv"


def _fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return FLOAT_FMT.format(float(value))


def write_rows(path: Path, header, rows):
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def curve_filename(j: int) -> str:
    return f"curve_{j}.csv"


def emit_csv(metrics: RunMetrics, snapshots, path) -> list[Path]:
    """Write ``metrics.csv`` plus one ``curve_<j>.csv`` per snapshot into ``path``."""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    written = [out / METRICS_FILE]
    write_rows(written[0], METRIC_COLUMNS, metrics.rows())
    for j, curve in snapshots:
        target = out / curve_filename(j)
        pts = curve.points
        write_rows(target, ("i", "x", "y"), ((i + 1, pts[i, 0], pts[i, 1]) for i in range(curve.n)))
        written.append(target)
    return written


def read_curve_csv(path) -> Curve:
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["i", "x", "y"]:
            raise ValueError(f"{path}: unexpected header {header}")
        pts = [(float(x), float(y)) for _, x, y in reader]
    return Curve(np.array(pts))


def read_metrics_csv(path) -> list[dict]:
    with open(path, newline="", encoding="ascii") as fh:
        return list(csv.DictReader(fh))


def _bbox(snapshots):
    pts = np.vstack([c.points for _, c in snapshots])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    return lo, hi


def svg_document(snapshots, markers=(), stroke="#1f3b73", marker_color="#b03020", stroke_width=1.2) -> str:
    """SVG text overlaying ``snapshots`` as closed paths.

    ``markers`` lists the step indices whose grid points get circle markers.
    The y axis points up; the viewBox adds a margin of 5% of the half extent.
    """
    if not snapshots:
        raise ValueError("need at least one snapshot")
    lo, hi = _bbox(snapshots)
    extent = float(max(hi - lo))
    if extent == 0:
        extent = 1.0
    margin = 0.025 * extent
    x0, y0 = lo[0] - margin, -hi[1] - margin
    w, h = hi[0] - lo[0] + 2 * margin, hi[1] - lo[1] + 2 * margin
    dot = 0.004 * extent
    markers = set(markers)

    def num(v):
        return f"{v:.6g}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{num(x0)} {num(y0)} {num(w)} {num(h)}" '
        f'width="600" height="{num(600 * h / w)}">',
        f'<g fill="none" stroke="{stroke}" stroke-width="{stroke_width}" vector-effect="non-scaling-stroke">',
    ]
    for j, curve in snapshots:
        p = curve.points
        coords = " L ".join(f"{num(x)},{num(-y)}" for x, y in p)
        parts.append(f'<path id="step-{j}" d="M {coords} Z" vector-effect="non-scaling-stroke"/>')
    parts.append("</g>")
    for j, curve in snapshots:
        if j not in markers:
            continue
        parts.append(f'<g id="points-{j}" fill="{marker_color}" stroke="none">')
        parts.extend(f'<circle cx="{num(x)}" cy="{num(-y)}" r="{num(dot)}"/>' for x, y in curve.points)
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(snapshots, path, markers=(), **style) -> Path:
    text = svg_document(snapshots, markers=markers, **style)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path
