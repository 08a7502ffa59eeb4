import csv
import json
import subprocess
import sys

import pytest

from bffig import SchemaError, render_heatmap, render_raster
from bffig.cli import main


def run_sim(outdir, config):
    cfg_path = outdir / "config.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")
    run = outdir / "run"
    subprocess.run(
        [sys.executable, "-m", "bfsim.cli", "simulate-bf",
         "--config", str(cfg_path), "--out", str(run)], check=True)
    hm = outdir / "heatmap.csv"
    subprocess.run(
        [sys.executable, "-m", "bfsim.cli", "heatmap",
         "--record", str(run), "--out", str(hm)], check=True)
    ra = outdir / "raster.csv"
    subprocess.run(
        [sys.executable, "-m", "bfsim.cli", "raster",
         "--record", str(run), "--neurons", "0,0;1,0;0,1;-1,0;0,-1",
         "--window", "0,100", "--out", str(ra)], check=True)
    return run, hm, ra


@pytest.fixture(scope="session")
def sample_run(tmp_path_factory):
    # the standard illustration setting: M=2, sigma=1, lambda_empty=0.25,
    # horizon [0, 100]
    out = tmp_path_factory.mktemp("sample")
    config = {
        "model": {"kind": "lattice-gaussian", "M": 2.0, "sigma": 1.0,
                  "lambda_empty": 0.25},
        "target": [0, 0], "t0": 0.0, "t1": 100.0, "seed": 42,
    }
    return run_sim(out, config)


def test_render_heatmap_sample(sample_run, tmp_path):
    run, hm, _ = sample_run
    img = tmp_path / "heatmap.png"
    render_heatmap(hm, run / "summary.json", img)
    data = img.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000
    # deterministic output for fixed inputs
    img2 = tmp_path / "heatmap2.png"
    render_heatmap(hm, run / "summary.json", img2)
    assert img2.read_bytes() == data


def test_render_raster_sample(sample_run, tmp_path):
    _, _, ra = sample_run
    img = tmp_path / "raster.png"
    render_raster(ra, [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)],
                  (0.0, 100.0), img)
    data = img.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000
    img2 = tmp_path / "raster2.png"
    render_raster(ra, [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)],
                  (0.0, 100.0), img2)
    assert img2.read_bytes() == data


def test_single_cell_heatmap(tmp_path):
    # degenerate mixture: every request lands on the target cell only
    config = {
        "model": {"kind": "lattice-gaussian", "M": 2.0, "sigma": 1.0,
                  "lambda_empty": 1.0},
        "target": [0, 0], "t0": 0.0, "t1": 50.0, "seed": 1,
    }
    run, hm, _ = run_sim(tmp_path, config)
    with open(hm, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 1
    img = tmp_path / "single.png"
    render_heatmap(hm, run / "summary.json", img)
    assert img.stat().st_size > 0


def test_heatmap_missing_column_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("neuron_x,neuron_y,requests\n0,0,3\n", encoding="utf-8")
    summary = tmp_path / "summary.json"
    summary.write_text(json.dumps({"accepted_count": 1, "total_points": 2}),
                       encoding="utf-8")
    with pytest.raises(SchemaError):
        render_heatmap(bad, summary, tmp_path / "x.png")
    rc = main(["heatmap", "--heatmap", str(bad), "--summary", str(summary),
               "--out", str(tmp_path / "x.png")])
    assert rc != 0


def test_summary_missing_key_rejected(tmp_path):
    hm = tmp_path / "hm.csv"
    hm.write_text("neuron_x,neuron_y,requests,simulated_time\n0,0,3,1.5\n",
                  encoding="utf-8")
    summary = tmp_path / "summary.json"
    summary.write_text(json.dumps({"accepted_count": 1}), encoding="utf-8")
    rc = main(["heatmap", "--heatmap", str(hm), "--summary", str(summary),
               "--out", str(tmp_path / "x.png")])
    assert rc == 2


def test_raster_bad_kind_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("kind,neuron_x,neuron_y,t0,t1,accepted\n"
                   "blob,0,0,1.0,2.0,na\n", encoding="utf-8")
    rc = main(["raster", "--points", str(bad), "--neurons", "0,0",
               "--window", "0,10", "--out", str(tmp_path / "x.png")])
    assert rc == 2


def test_raster_bad_accepted_value_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("kind,neuron_x,neuron_y,t0,t1,accepted\n"
                   "point,0,0,1.0,,maybe\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        render_raster(bad, [(0, 0)], (0.0, 10.0), tmp_path / "x.png")


def test_raster_degenerate_window_rejected(tmp_path):
    ok = tmp_path / "ok.csv"
    ok.write_text("kind,neuron_x,neuron_y,t0,t1,accepted\n"
                  "point,0,0,1.0,,1\n", encoding="utf-8")
    rc = main(["raster", "--points", str(ok), "--neurons", "0,0",
               "--window", "5,5", "--out", str(tmp_path / "x.png")])
    assert rc == 2


def test_cli_end_to_end(sample_run, tmp_path):
    run, hm, ra = sample_run
    assert main(["heatmap", "--heatmap", str(hm),
                 "--summary", str(run / "summary.json"),
                 "--out", str(tmp_path / "h.png")]) == 0
    assert main(["raster", "--points", str(ra), "--neurons", "0,0;1,0",
                 "--window", "20,60", "--out", str(tmp_path / "r.png")]) == 0
    assert (tmp_path / "h.png").stat().st_size > 0
    assert (tmp_path / "r.png").stat().st_size > 0


def test_missing_input_file_exit_3(tmp_path):
    rc = main(["heatmap", "--heatmap", str(tmp_path / "nope.csv"),
               "--summary", str(tmp_path / "nope.json"),
               "--out", str(tmp_path / "x.png")])
    assert rc == 3
