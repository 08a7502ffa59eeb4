import csv
import json
from pathlib import Path

import pytest

from bfsim import LatticeGaussianHawkesModel, simulate_bf
from bfsim.cli import main
from bfsim.recordio import load_record, save_record


def write_config(path, **overrides):
    cfg = {
        "model": {"kind": "lattice-gaussian", "M": 2.0, "sigma": 1.0,
                  "lambda_empty": 0.25},
        "target": [0, 0],
        "t0": 0.0,
        "t1": 20.0,
        "seed": 7,
    }
    cfg.update(overrides)
    Path(path).write_text(json.dumps(cfg), encoding="utf-8")
    return cfg


def test_validate_ok(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    write_config(cfg)
    assert main(["validate", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    zeta = float(out.split("zeta =")[1].split()[0])
    assert zeta == pytest.approx(0.9)


def test_validate_supercritical_exit_1(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, model={
        "kind": "finite", "neurons": [[0, 0]], "weights": [[0.9]],
        "nu": [0.1], "A": 1.0, "M": 2.0})
    assert main(["validate", "--config", str(cfg)]) == 1
    assert main(["validate", "--config", str(cfg), "--override"]) == 0


def test_lattice_config_rejects_supplied_nu(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, model={
        "kind": "lattice-gaussian", "M": 2.0, "sigma": 1.0,
        "lambda_empty": 0.25, "nu": 0.45})
    assert main(["validate", "--config", str(cfg)]) == 3


def test_simulate_bf_deterministic_bytes(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["simulate-bf", "--config", str(cfg), "--out", str(out1)]) == 0
    assert main(["simulate-bf", "--config", str(cfg), "--out", str(out2)]) == 0
    assert (out1 / "points.csv").read_bytes() == (out2 / "points.csv").read_bytes()
    assert (out1 / "coverage.csv").read_bytes() == \
        (out2 / "coverage.csv").read_bytes()
    assert (out1 / "tallies.csv").read_bytes() == \
        (out2 / "tallies.csv").read_bytes()


def test_record_round_trip(tmp_path):
    m = LatticeGaussianHawkesModel(sigma=1.0, lam_empty=0.25, M=2.0)
    rec = simulate_bf(m, (0, 0), 0.0, 30.0, seed=19)
    save_record(rec, tmp_path / "run")
    loaded = load_record(tmp_path / "run")
    assert loaded.accepted_output == rec.accepted_output
    assert loaded.total_points == rec.total_points
    assert loaded.seed == rec.seed
    assert loaded.model_fingerprint == rec.model_fingerprint
    assert loaded.request_counts == rec.request_counts
    # tallies.csv writes an explicit 0.0 row for requested-but-never-simulated
    # neurons; values agree everywhere
    for n in set(loaded.simulated_time) | set(rec.simulated_time):
        assert loaded.simulated_time.get(n, 0.0) == pytest.approx(
            rec.simulated_time.get(n, 0.0))
    assert [(p.time, p.neuron, p.origin, p.generation, p.v_kind, p.x_mark)
            for p in loaded.points] == \
           [(p.time, p.neuron, p.origin, p.generation, p.v_kind, p.x_mark)
            for p in rec.points]
    for n in rec.coverage.neurons():
        assert loaded.coverage.intervals(n) == rec.coverage.intervals(n)


def test_simulate_ogata_variants(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, model={
        "kind": "finite", "neurons": [[0, 0]], "weights": [[0.5]],
        "nu": [0.9], "A": 0.9, "M": 2.0}, t1=50.0)
    for variant in ("inverse", "thinning", "kalikow-full"):
        out = tmp_path / variant
        rc = main(["simulate-ogata", "--config", str(cfg),
                   "--variant", variant, "--out", str(out)])
        assert rc == 0
        assert (out / "trains.csv").exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["total_points"] > 0


def test_simulate_ogata_needs_finite_model(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg)
    rc = main(["simulate-ogata", "--config", str(cfg),
               "--variant", "inverse", "--out", str(tmp_path / "o")])
    assert rc == 1


def test_heatmap_and_raster_commands(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, t1=40.0)
    run = tmp_path / "run"
    assert main(["simulate-bf", "--config", str(cfg), "--out", str(run)]) == 0

    hm = tmp_path / "heatmap.csv"
    assert main(["heatmap", "--record", str(run), "--out", str(hm)]) == 0
    with open(hm, newline="") as f:
        rows = list(csv.DictReader(f))
    assert rows
    assert set(rows[0]) == {"neuron_x", "neuron_y", "requests",
                            "simulated_time"}
    target_rows = [r for r in rows
                   if (int(r["neuron_x"]), int(r["neuron_y"])) == (0, 0)]
    assert float(target_rows[0]["simulated_time"]) >= 40.0

    ra = tmp_path / "raster.csv"
    assert main(["raster", "--record", str(run), "--neurons", "0,0;1,0",
                 "--window", "10,30", "--out", str(ra)]) == 0
    with open(ra, newline="") as f:
        rrows = list(csv.DictReader(f))
    kinds = {r["kind"] for r in rrows}
    assert "point" in kinds and "segment" in kinds
    # round-trip: re-reading reproduces every field written
    for r in rrows:
        if r["kind"] == "point":
            assert r["accepted"] in ("0", "1", "na")
            float(r["t0"])
        else:
            assert float(r["t0"]) < float(r["t1"])


def test_missing_config_exit_3(tmp_path):
    assert main(["validate", "--config", str(tmp_path / "nope.json")]) == 3


def test_limit_error_exit_2(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, model={
        "kind": "finite", "neurons": [[0, 0]], "weights": [[0.9]],
        "nu": [0.1], "A": 5.0, "M": 2.0},
        t1=50.0, override_sparsity=True,
        limits={"max_points": 200})
    rc = main(["simulate-bf", "--config", str(cfg),
               "--out", str(tmp_path / "run")])
    assert rc == 2


def test_verify_poisson_suite(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, model={"kind": "lattice-gaussian", "M": 2.0,
                             "sigma": 1.0, "lambda_empty": 1.0},
                 t1=500.0, verify={"seeds": 5})
    out = tmp_path / "verify"
    assert main(["verify", "--suite", "poisson", "--config", str(cfg),
                 "--out", str(out)]) == 0
    result = json.loads((out / "verify_poisson.json").read_text())
    assert result["ok"]
    assert result["expected_rate"] == pytest.approx(1.8)


def test_verify_branching_suite_small(tmp_path):
    cfg = tmp_path / "c.json"
    write_config(cfg, verify={"runs": 300})
    out = tmp_path / "verify"
    assert main(["verify", "--suite", "branching", "--config", str(cfg),
                 "--out", str(out)]) == 0
    result = json.loads((out / "verify_branching.json").read_text())
    assert result["extinct"] == 300
    assert result["zeta"] == pytest.approx(0.9)
