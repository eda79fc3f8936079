import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from holocode import gf2
from holocode.cli import EXIT_CONFIG, EXIT_IO, main, parse_region, ConfigError
from holocode.io import code_from_bundle, code_to_bundle, golden_dir, load_bundle, save_bundle, svg_line_plot
from holocode.network import build_code
from holocode.pauli import CheckMatrix
from holocode.tessellation import Tiling, build_tiling

FIVE_QUBIT = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
GOLDEN_CASES = [((5, 4), n, None) for n in range(3)] + [((4, 5), n, "X") for n in range(4)]


def golden_name(pq, n, gauge):
    return f"code_{pq[0]}{pq[1]}_n{n}_{(gauge or 'none').lower()}.json"


def run(argv, tmp_path):
    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        return main(argv)
    finally:
        os.chdir(cwd)


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# bundles


@pytest.mark.parametrize("pq,n,gauge", [((5, 4), 1, None), ((4, 5), 1, "X"), ((4, 5), 0, None)])
def test_bundle_round_trip(pq, n, gauge, tmp_path):
    code = build_code(pq, n, gauge)
    path = tmp_path / "b.json"
    save_bundle(code, path)
    back = load_bundle(path)
    assert np.array_equal(back.checks.rows, code.checks.rows)
    assert [r.bulk for r in back.logical_reps] == [r.bulk for r in code.logical_reps]
    assert back.boundary_labels == code.boundary_labels
    assert code_to_bundle(back) == code_to_bundle(code)
    back.check_invariants()


def test_bundle_errors():
    bundle = code_to_bundle(build_code((5, 4), 0))
    with pytest.raises(ValueError):
        code_from_bundle({k: v for k, v in bundle.items() if k != "checks"})
    bad = dict(bundle, checks=bundle["checks"] + ["XX"])
    with pytest.raises(ValueError):
        code_from_bundle(bad)


@pytest.mark.parametrize("pq,n,gauge", GOLDEN_CASES)
def test_golden_bundles(pq, n, gauge):
    path = golden_dir() / golden_name(pq, n, gauge)
    want = json.loads(path.read_text())
    got = json.loads(json.dumps(code_to_bundle(build_code(pq, n, gauge))))
    assert got == want


@pytest.mark.parametrize("pq", [(5, 4), (4, 5)])
def test_golden_tilings(pq):
    want = Tiling.from_json((golden_dir() / f"tiling_{pq[0]}{pq[1]}_n3.json").read_text())
    got = build_tiling(pq, 3)
    assert got.faces == want.faces and got.contraction_edges == want.contraction_edges
    assert got.open_legs == want.open_legs


def test_golden_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("HOLOCODE_GOLDEN_DIR", str(tmp_path))
    assert golden_dir() == tmp_path
    monkeypatch.delenv("HOLOCODE_GOLDEN_DIR")
    assert golden_dir().name == "golden"


def test_svg_plot_embeds_data():
    svg = svg_line_plot({"n=1": [(0.1, 0.01), (0.2, 0.05)]}, "p_e", "rate")
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "0.05" in svg and "</svg>" in svg


# ---------------------------------------------------------------------------
# region parsing


def test_parse_region():
    assert parse_region("0-3", 10) == (0, 1, 2, 3)
    assert parse_region("0,2,5-7", 10) == (0, 2, 5, 6, 7)
    assert parse_region("horizon", 10, ["h0", "h1"]) == ("h0", "h1")
    with pytest.raises(ConfigError):
        parse_region("9-12", 10)
    with pytest.raises(ConfigError):
        parse_region("horizon", 10, [])


# ---------------------------------------------------------------------------
# commands


def test_build_pentagon_n0(tmp_path):
    assert run(["build", "--schlafli", "5,4", "--n", "0", "--out", "c.json"], tmp_path) == 0
    bundle = json.loads((tmp_path / "c.json").read_text())
    got = CheckMatrix.from_strings(bundle["checks"])
    assert gf2.row_space_equal(got.rows, CheckMatrix.from_strings(FIVE_QUBIT).rows)
    manifest = json.loads((tmp_path / "c.json.manifest.json").read_text())
    assert set(manifest) >= {"command_line", "config_hash", "seed", "artifacts", "version"}
    assert list(manifest["artifacts"]) == ["c.json"]


def test_build_45_examples(tmp_path):
    assert run(["build", "--schlafli", "4,5", "--n", "3", "--gauge", "x", "--out", "c3.json"], tmp_path) == 0
    assert len(json.loads((tmp_path / "c3.json").read_text())["boundary_order"]) == 284
    assert run(["build", "--schlafli", "4,5", "--n", "0", "--out", "c0.json"], tmp_path) == 0
    b = json.loads((tmp_path / "c0.json").read_text())
    assert (len(b["boundary_order"]), len(b["logicals"]), len(b["checks"])) == (4, 1, 3)


def test_simulate_zero_noise_and_determinism(tmp_path):
    args = ["simulate", "--schlafli", "4,5", "--n", "1", "--gauge", "x", "--p-e", "0,0.2", "--trials", "200",
            "--seed", "5"]
    assert run(args + ["--out", "a.csv"], tmp_path) == 0
    assert run(args + ["--out", "b.csv"], tmp_path) == 0
    a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
    assert a == b
    rows = read_csv(tmp_path / "a.csv")
    assert list(rows[0]) == ["n", "p_e", "p_r", "trials", "failures", "rate", "ci_low", "ci_high", "seed", "decoder"]
    assert rows[0]["rate"] == "0.0" and rows[0]["decoder"] == "bp_osd0"
    m_a = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    m_b = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    assert m_a["config_hash"] == m_b["config_hash"]
    assert list(m_a["artifacts"].values()) == list(m_b["artifacts"].values())


def test_simulate_single_trial(tmp_path):
    assert run(["simulate", "--schlafli", "4,5", "--n", "0", "--gauge", "x", "--p-e", "0", "--trials", "1",
                "--out", "r.csv"], tmp_path) == 0
    assert read_csv(tmp_path / "r.csv")[0]["rate"] == "0.0"


def test_simulate_from_bundle_with_config_and_svg(tmp_path):
    run(["build", "--schlafli", "4,5", "--n", "0", "--gauge", "x", "--out", "c.json"], tmp_path)
    (tmp_path / "cfg.json").write_text(json.dumps({"trials": 50, "seed": 3, "decoder": {"method": "peeling"}}))
    assert run(["simulate", "--bundle", "c.json", "--config", "cfg.json", "--p-e", "0.1,0.3", "--trials", "80",
                "--format", "svg", "--out", "r.svg"], tmp_path) == 0
    rows = read_csv(tmp_path / "r.csv")
    assert [r["trials"] for r in rows] == ["80", "80"]  # flag beats config file
    assert rows[0]["decoder"] == "peeling" and rows[0]["seed"] == "3"
    assert (tmp_path / "r.svg").read_text().rstrip().endswith("</svg>")


def test_entropy_command(tmp_path):
    assert run(["entropy", "--n", "0", "--region", "0-4", "--bulk", "open", "--out", "e.csv"], tmp_path) == 0
    (row,) = read_csv(tmp_path / "e.csv")
    assert row["entropy"] == "1" and row["bulk_treatment"] == "open"
    assert run(["entropy", "--n", "2", "--network", "blackhole", "--region", "horizon", "--bulk", "open",
                "--out", "bh.csv"], tmp_path) == 0
    (row,) = read_csv(tmp_path / "bh.csv")
    assert row["entropy"] == "5"
    assert run(["entropy", "--n", "1", "--windows", "4", "--out", "w.csv"], tmp_path) == 0
    rows = read_csv(tmp_path / "w.csv")
    assert len(rows) == 20
    assert all(int(r["entropy"]) <= int(r["min_cut"]) for r in rows)


def test_blackhole_wormhole_foliate_smooth_commands(tmp_path):
    assert run(["blackhole", "--n", "2", "--out", "bh.json"], tmp_path) == 0
    assert json.loads((tmp_path / "bh.json").read_text())["horizon_entropy"] == 5
    assert run(["wormhole", "--n", "1", "--out", "wh.json"], tmp_path) == 0
    assert json.loads((tmp_path / "wh.json").read_text())["spanning_checks"] > 0
    assert run(["foliate", "--schlafli", "4,5", "--n", "1", "--gauge", "x", "--rounds", "2", "--out", "f.json"],
               tmp_path) == 0
    assert json.loads((tmp_path / "f.json").read_text())["closed_webs"]
    assert run(["smooth", "--schlafli", "4,5", "--n", "1", "--max-iters", "200", "--out", "s.json"], tmp_path) == 0
    info = json.loads((tmp_path / "s.json").read_text())["smoothing"]
    assert info["max_weight_after"] <= info["max_weight_before"]


def test_region_map_command(tmp_path):
    assert run(["region-map", "--p-e", "0.05,0.9", "--trials", "100", "--seed", "1", "--out", "map.csv"],
               tmp_path) == 0
    rows = read_csv(tmp_path / "map.csv")
    assert [r["status"] in ("suppress", "no", "unknown") for r in rows] == [True, True]
    assert rows[1]["status"] != "suppress"
    assert (tmp_path / "map_rates.csv").exists()


def test_exit_codes(tmp_path):
    assert run(["build", "--schlafli", "7,3", "--n", "1", "--out", "x.json"], tmp_path) == EXIT_CONFIG
    assert run(["simulate", "--bundle", "missing.json", "--out", "x.csv"], tmp_path) == EXIT_IO
    assert run(["entropy", "--n", "0", "--region", "0-9", "--out", "x.csv"], tmp_path) == EXIT_CONFIG
    with pytest.raises(SystemExit) as info:
        run(["build", "--n", "0", "--out", "x.json"], tmp_path)
    assert info.value.code == EXIT_CONFIG


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "holocode.cli", "build", "--schlafli", "5,4", "--n", "0",
                          "--out", str(tmp_path / "c.json")], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert Path(tmp_path / "c.json").exists()
