"""Render simulation-run artifacts into images.

Inputs are the CSV/JSON files written by the simulation CLI:

  heatmap CSV   neuron_x, neuron_y, requests, simulated_time
  summary JSON  accepted_count, total_points, ... (run metadata)
  raster CSV    kind (point|segment), neuron_x, neuron_y, t0, t1,
                accepted (0|1|na)

Malformed inputs raise SchemaError; rendering never mutates its inputs and
produces the same image for the same inputs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

NeuronId = Tuple[int, int]

HEATMAP_COLUMNS = ["neuron_x", "neuron_y", "requests", "simulated_time"]
RASTER_COLUMNS = ["kind", "neuron_x", "neuron_y", "t0", "t1", "accepted"]
SUMMARY_KEYS = ("accepted_count", "total_points")


class SchemaError(ValueError):
    """An input file does not conform to the expected CSV/JSON schema."""


def _read_csv(path, columns: List[str]) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != columns:
            raise SchemaError(
                f"{path}: columns {reader.fieldnames} != expected {columns}")
        return list(reader)


def _parse_int(row: dict, key: str, path) -> int:
    try:
        return int(row[key])
    except (ValueError, TypeError) as e:
        raise SchemaError(f"{path}: bad {key} value {row.get(key)!r}") from e


def _parse_float(row: dict, key: str, path) -> float:
    try:
        return float(row[key])
    except (ValueError, TypeError) as e:
        raise SchemaError(f"{path}: bad {key} value {row.get(key)!r}") from e


def load_heatmap(path) -> Dict[NeuronId, Tuple[int, float]]:
    rows = {}
    for row in _read_csv(path, HEATMAP_COLUMNS):
        n = (_parse_int(row, "neuron_x", path), _parse_int(row, "neuron_y", path))
        rows[n] = (_parse_int(row, "requests", path),
                   _parse_float(row, "simulated_time", path))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_summary(path) -> dict:
    try:
        summary = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON: {e}") from e
    missing = [k for k in SUMMARY_KEYS if k not in summary]
    if missing:
        raise SchemaError(f"{path}: summary missing keys {missing}")
    return summary


def load_raster(path):
    points = []   # (neuron, time, accepted)
    segments = []  # (neuron, lo, hi)
    for row in _read_csv(path, RASTER_COLUMNS):
        n = (_parse_int(row, "neuron_x", path), _parse_int(row, "neuron_y", path))
        kind = row["kind"]
        if kind == "point":
            acc = row["accepted"]
            if acc not in ("0", "1", "na"):
                raise SchemaError(f"{path}: bad accepted value {acc!r}")
            points.append((n, _parse_float(row, "t0", path),
                           None if acc == "na" else int(acc)))
        elif kind == "segment":
            lo = _parse_float(row, "t0", path)
            hi = _parse_float(row, "t1", path)
            if not lo < hi:
                raise SchemaError(f"{path}: degenerate segment [{lo}, {hi})")
            segments.append((n, lo, hi))
        else:
            raise SchemaError(f"{path}: unknown kind {kind!r}")
    return points, segments


def render_heatmap(heatmap_csv, summary_json, out_image) -> None:
    """Lattice cells colored by request count, annotated with the run's
    accepted count and total simulated points."""
    rows = load_heatmap(heatmap_csv)
    summary = load_summary(summary_json)

    xs = [n[0] for n in rows]
    ys = [n[1] for n in rows]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    grid = np.zeros((y_hi - y_lo + 1, x_hi - x_lo + 1))
    for (x, y), (req, _sim) in rows.items():
        grid[y - y_lo, x - x_lo] = req

    fig, ax = plt.subplots(figsize=(6, 5), dpi=100)
    im = ax.imshow(grid, origin="lower",
                   extent=(x_lo - 0.5, x_hi + 0.5, y_lo - 0.5, y_hi + 0.5),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label="requests")
    ax.set_xlabel("neuron x")
    ax.set_ylabel("neuron y")
    ax.set_title(
        f"accepted: {summary['accepted_count']}, "
        f"total simulated: {summary['total_points']}")
    fig.tight_layout()
    fig.savefig(out_image)
    plt.close(fig)


def render_raster(points_csv, neurons: Sequence[NeuronId],
                  window: Tuple[float, float], out_image,
                  labels_by: str = "points") -> None:
    """Time on the x-axis, one lane per neuron on the y-axis. Filled markers
    are accepted points, hollow markers rejected ones, and horizontal lines
    mark covered intervals. Lanes are ranked by activity (point count,
    descending) and labeled 0..n-1."""
    if not neurons:
        raise SchemaError("no neurons requested")
    a, b = window
    if not a < b:
        raise SchemaError(f"degenerate window [{a}, {b})")
    points, segments = load_raster(points_csv)

    wanted = list(dict.fromkeys(tuple(n) for n in neurons))
    counts = {n: 0 for n in wanted}
    for n, t, _acc in points:
        if n in counts and a <= t < b:
            counts[n] += 1
    order = sorted(wanted, key=lambda n: (-counts[n], n))
    lane = {n: k for k, n in enumerate(order)}

    fig, ax = plt.subplots(figsize=(8, 0.6 * len(order) + 1.5), dpi=100)
    for n, lo, hi in segments:
        if n in lane:
            lo, hi = max(lo, a), min(hi, b)
            if lo < hi:
                ax.hlines(lane[n], lo, hi, color="tab:blue", lw=3, alpha=0.5)
    for n, t, acc in points:
        if n in lane and a <= t < b:
            if acc == 1:
                ax.plot(t, lane[n], "o", color="black", ms=5)
            else:
                ax.plot(t, lane[n], "o", mfc="none", mec="black", ms=5)
    ax.set_yticks(range(len(order)))
    ax.set_yticklabels(
        [f"{k}: ({n[0]},{n[1]})" for k, n in enumerate(order)])
    ax.set_xlim(a, b)
    ax.set_ylim(-0.5, len(order) - 0.5)
    ax.invert_yaxis()
    ax.set_xlabel("time")
    ax.set_ylabel("neuron (ranked by activity)")
    fig.tight_layout()
    fig.savefig(out_image)
    plt.close(fig)
