"""Command-line entry point.

Exit codes: 0 success, 1 validation failure, 2 limit/assertion errors,
3 I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import verify as verify_mod
from .analysis import raster, request_heatmap
from .baseline import (
    simulate_kalikow_full,
    simulate_ogata_inverse,
    simulate_ogata_thinning,
)
from .engine_bf import simulate_bf
from .errors import (
    CeilingViolated,
    InvalidModel,
    LimitExceeded,
    OrderingViolation,
)
from .models import FiniteHawkesModel, validate_model
from .recordio import fmt_float, load_config, load_record, save_record, save_trains
from .types import TimeInterval


def _parse_neurons(spec: str):
    out = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        x, y = part.split(",")
        out.append((int(x), int(y)))
    return out


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    report = validate_model(cfg.model)
    print(f"zeta = {report.zeta}")
    for msg in report.messages:
        print(msg, file=sys.stderr)
    if report.ok:
        return 0
    if args.override or cfg.override_sparsity:
        print("validation failed but override requested", file=sys.stderr)
        return 0
    return 1


def cmd_simulate_bf(args) -> int:
    cfg = load_config(args.config)
    record = simulate_bf(cfg.model, cfg.target, cfg.t0, cfg.t1, cfg.seed,
                         limits=cfg.limits,
                         override_sparsity=cfg.override_sparsity)
    save_record(record, args.out)
    print(f"accepted {record.accepted_count} / {record.total_points} points "
          f"-> {args.out}")
    return 0


def cmd_simulate_ogata(args) -> int:
    cfg = load_config(args.config)
    if not isinstance(cfg.model, FiniteHawkesModel):
        raise InvalidModel("baseline simulators need a finite model")
    sims = {
        "inverse": simulate_ogata_inverse,
        "thinning": simulate_ogata_thinning,
        "kalikow-full": simulate_kalikow_full,
    }
    trains = sims[args.variant](cfg.model, cfg.t0, cfg.t1, cfg.seed)
    save_trains(trains, args.out, cfg.seed, cfg.model.fingerprint())
    total = sum(len(ts) for ts in trains.values())
    print(f"{args.variant}: {total} points -> {args.out}")
    return 0


def cmd_heatmap(args) -> int:
    record = load_record(args.record)
    summary = request_heatmap(record)
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["neuron_x", "neuron_y", "requests", "simulated_time"])
        for n in sorted(summary.rows):
            req, sim = summary.rows[n]
            w.writerow([n[0], n[1], req, fmt_float(sim)])
    print(f"heatmap with {len(summary.rows)} neurons -> {args.out}")
    return 0


def cmd_raster(args) -> int:
    record = load_record(args.record)
    a, b = (float(x) for x in args.window.split(","))
    data = raster(record, _parse_neurons(args.neurons), TimeInterval(a, b))
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["kind", "neuron_x", "neuron_y", "t0", "t1", "accepted"])
        for n, t, acc, _origin, _gen in data.events:
            w.writerow(["point", n[0], n[1], fmt_float(t), "",
                        "na" if acc < 0 else acc])
        for n, lo, hi in data.segments:
            w.writerow(["segment", n[0], n[1], fmt_float(lo), fmt_float(hi),
                        "na"])
    print(f"{len(data.events)} events, {len(data.segments)} segments "
          f"-> {args.out}")
    return 0


def cmd_verify(args) -> int:
    cfg_raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    result = verify_mod.SUITES[args.suite](cfg_raw)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"verify_{args.suite}.json", "w", encoding="utf-8") as f:
        json.dump(result, f, indent=2)
        f.write("\n")
    print(f"suite {args.suite}: {'ok' if result['ok'] else 'FAILED'}")
    return 0 if result["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bfsim",
        description="Perfect simulation of one neuron in a potentially "
                    "infinite Hawkes network")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate-bf", help="run the backward-forward engine")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate_bf)

    s = sub.add_parser("simulate-ogata", help="run a finite-network oracle")
    s.add_argument("--config", required=True)
    s.add_argument("--variant", required=True,
                   choices=["inverse", "thinning", "kalikow-full"])
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate_ogata)

    s = sub.add_parser("verify", help="run a statistical verification suite")
    s.add_argument("--suite", required=True, choices=sorted(verify_mod.SUITES))
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("heatmap", help="per-neuron request/time summary")
    s.add_argument("--record", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_heatmap)

    s = sub.add_parser("raster", help="extract events and covered segments")
    s.add_argument("--record", required=True)
    s.add_argument("--neurons", required=True,
                   help="semicolon-separated x,y pairs, e.g. '0,0;1,0'")
    s.add_argument("--window", required=True, help="a,b")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_raster)

    s = sub.add_parser("validate", help="check the model's decomposition")
    s.add_argument("--config", required=True)
    s.add_argument("--override", action="store_true")
    s.set_defaults(func=cmd_validate)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidModel as e:
        print(f"validation failure: {e}", file=sys.stderr)
        return 1
    except (LimitExceeded, OrderingViolation, CeilingViolated,
            AssertionError) as e:
        print(f"engine error: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"I/O or config error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
