"""File formats for run records and configuration.

A run directory holds:
  points.csv    time, neuron_x, neuron_y, origin, generation, v_kind, accepted
  summary.json  accepted_count, total_points, covered_measure, seed,
                model_fingerprint, wall_ms (+ target/t0/t1 run metadata)
  tallies.csv   neuron_x, neuron_y, requests, simulated_time
  coverage.csv  neuron_x, neuron_y, start, end

Floats are serialized with round-trip-exact formatting so determinism
checks can compare bytes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .coverage import CoverageMap
from .engine_bf import Limits, SimulationRecord
from .models import (
    FiniteHawkesModel,
    KalikowModel,
    LatticeGaussianHawkesModel,
)
from .types import NeuronId, TimeInterval


def fmt_float(x: float) -> str:
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    model: KalikowModel
    target: NeuronId
    t0: float
    t1: float
    seed: int
    limits: Limits
    override_sparsity: bool
    raw: dict


def model_from_config(cfg: dict) -> KalikowModel:
    kind = cfg.get("kind")
    if kind == "lattice-gaussian":
        for forbidden in ("nu", "A"):
            if forbidden in cfg:
                raise ValueError(
                    f"'{forbidden}' is derived for the lattice model and "
                    f"must not be supplied")
        return LatticeGaussianHawkesModel(
            sigma=float(cfg["sigma"]),
            lam_empty=float(cfg["lambda_empty"]),
            M=float(cfg["M"]),
        )
    if kind == "finite":
        neurons = tuple(_as_neuron(n) for n in cfg["neurons"])
        return FiniteHawkesModel(
            neurons=neurons,
            weights=tuple(tuple(float(w) for w in row)
                          for row in cfg["weights"]),
            nu=tuple(float(v) for v in cfg["nu"]),
            window=float(cfg["A"]),
            M=float(cfg["M"]),
        )
    raise ValueError(f"unknown model kind: {kind!r}")


def _as_neuron(n) -> NeuronId:
    if isinstance(n, int):
        return (n, 0)
    x, y = n
    return (int(x), int(y))


def load_config(path) -> RunConfig:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    limits_cfg = raw.get("limits", {})
    limits = Limits(
        max_points=int(limits_cfg.get("max_points", Limits.max_points)),
        max_generations=int(
            limits_cfg.get("max_generations", Limits.max_generations)),
    )
    return RunConfig(
        model=model_from_config(raw["model"]),
        target=_as_neuron(raw.get("target", [0, 0])),
        t0=float(raw.get("t0", 0.0)),
        t1=float(raw.get("t1", 0.0)),
        seed=int(raw.get("seed", 0)),
        limits=limits,
        override_sparsity=bool(raw.get("override_sparsity", False)),
        raw=raw,
    )


# ---------------------------------------------------------------------------
# Record save / load
# ---------------------------------------------------------------------------

POINT_COLUMNS = ["time", "neuron_x", "neuron_y", "origin", "generation",
                 "v_kind", "accepted"]


def save_record(record: SimulationRecord, outdir) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "points.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(POINT_COLUMNS)
        for p in record.points:
            accepted = "na" if p.x_mark is None else str(p.x_mark)
            w.writerow([fmt_float(p.time), p.neuron[0], p.neuron[1],
                        p.origin, p.generation, p.v_kind, accepted])

    with open(out / "tallies.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["neuron_x", "neuron_y", "requests", "simulated_time"])
        neurons = sorted(set(record.request_counts) | set(record.simulated_time))
        for n in neurons:
            w.writerow([n[0], n[1], record.request_counts.get(n, 0),
                        fmt_float(record.simulated_time.get(n, 0.0))])

    with open(out / "coverage.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["neuron_x", "neuron_y", "start", "end"])
        for n in sorted(record.coverage.neurons()):
            for iv in record.coverage.intervals(n):
                w.writerow([n[0], n[1], fmt_float(iv.start), fmt_float(iv.end)])

    summary = {
        "accepted_count": record.accepted_count,
        "total_points": record.total_points,
        "covered_measure": record.coverage.covered_measure(),
        "seed": record.seed,
        "model_fingerprint": record.model_fingerprint,
        "wall_ms": record.wall_ms,
        "target": list(record.target),
        "t0": record.t0,
        "t1": record.t1,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")


@dataclass
class LoadedPoint:
    time: float
    neuron: NeuronId
    origin: str
    generation: int
    v_kind: str
    x_mark: Optional[int]


def load_record(indir) -> SimulationRecord:
    """Rebuild a record's public fields from a run directory."""
    ind = Path(indir)
    summary = json.loads((ind / "summary.json").read_text(encoding="utf-8"))

    points: List[LoadedPoint] = []
    with open(ind / "points.csv", newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != POINT_COLUMNS:
            raise ValueError(
                f"points.csv columns {reader.fieldnames} != {POINT_COLUMNS}")
        for row in reader:
            points.append(LoadedPoint(
                time=float(row["time"]),
                neuron=(int(row["neuron_x"]), int(row["neuron_y"])),
                origin=row["origin"],
                generation=int(row["generation"]),
                v_kind=row["v_kind"],
                x_mark=None if row["accepted"] == "na" else int(row["accepted"]),
            ))

    request_counts: Dict[NeuronId, int] = {}
    simulated_time: Dict[NeuronId, float] = {}
    with open(ind / "tallies.csv", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            n = (int(row["neuron_x"]), int(row["neuron_y"]))
            request_counts[n] = int(row["requests"])
            simulated_time[n] = float(row["simulated_time"])

    coverage = CoverageMap()
    with open(ind / "coverage.csv", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            n = (int(row["neuron_x"]), int(row["neuron_y"]))
            coverage.insert(n, TimeInterval(float(row["start"]),
                                            float(row["end"])))

    target = tuple(summary["target"])
    t0, t1 = float(summary["t0"]), float(summary["t1"])
    accepted = [p.time for p in points
                if p.neuron == target and p.x_mark == 1 and t0 <= p.time < t1]
    return SimulationRecord(
        target=target, t0=t0, t1=t1,
        seed=int(summary["seed"]),
        model_fingerprint=summary["model_fingerprint"],
        points=points,
        coverage=coverage,
        request_counts=request_counts,
        simulated_time=simulated_time,
        simulated_intervals=[],
        accepted_output=sorted(accepted),
        wall_ms=float(summary["wall_ms"]),
    )


def save_trains(trains: Dict[NeuronId, List[float]], outdir, seed: int,
                fingerprint: str) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rows = sorted(
        (t, n) for n, ts in trains.items() for t in ts)
    with open(out / "trains.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["time", "neuron_x", "neuron_y"])
        for t, n in rows:
            w.writerow([fmt_float(t), n[0], n[1]])
    summary = {
        "total_points": len(rows),
        "per_neuron_counts": {f"{n[0]},{n[1]}": len(ts)
                              for n, ts in sorted(trains.items())},
        "seed": seed,
        "model_fingerprint": fingerprint,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
