import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from thermogap import cli

FIXTURES = Path(__file__).parent / "fixtures"


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cone_golden_file(tmp_path, capsys):
    out = tmp_path / "cone.csv"
    code, _, _ = run(["cone", "--q", "0.5", "--grid", "10", "--out", str(out)], capsys)
    assert code == 0
    assert out.read_bytes() == (FIXTURES / "cone_q0.5_grid10.csv").read_bytes()


def test_cone_grid50(tmp_path, capsys):
    out = tmp_path / "cone.csv"
    code, stdout, _ = run(["cone", "--q", "0.5", "--grid", "50", "--out", str(out)], capsys)
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode("utf-8"))))
    assert len(rows) == 2500
    assert list(rows[0]) == list(cli.CONE_HEADER)
    feasible = [r for r in rows if r["feasible"] == "true"]
    nearest = min(feasible, key=lambda r: (float(r["p0"]) - 0.5) ** 2 + (float(r["p1"]) - 0.5) ** 2)
    assert float(nearest["rho10_max"]) == pytest.approx(0.5, abs=0.02)
    meta = json.loads(stdout)
    assert meta["n_rows"] == 2500 and meta["n_feasible"] == len(feasible)


def test_cone_svg(tmp_path, capsys):
    svg = tmp_path / "cone.svg"
    code, _, _ = run(["cone", "--q", "0.5", "--grid", "40", "--out", str(tmp_path / "c.csv"), "--svg", str(svg)],
                     capsys)
    assert code == 0
    text = svg.read_text(encoding="utf-8")
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert "<polyline" in text and "max 0." in text and "min 0." in text


def test_cone_json(tmp_path, capsys):
    out = tmp_path / "cone.json"
    assert run(["cone", "--q", "0.3", "--grid", "5", "--format", "json", "--out", str(out)], capsys)[0] == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"metadata", "rows"} and len(doc["rows"]) == 25
    assert doc["rows"][0]["rho10_max"] is None


def test_cone_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["cone", "--q", "0.3", "--grid", "15", "--out", str(a)], capsys)
    run(["cone", "--q", "0.3", "--grid", "15", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_gap_single_row(tmp_path, capsys):
    out = tmp_path / "gap.csv"
    assert run(["gap", "--q", "0.5", "--out", str(out)], capsys)[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    assert float(rows[0]["delta10"]) == pytest.approx(0.0580127, abs=1e-7)
    assert float(rows[0]["bound_main"]) == pytest.approx(0.001121824, abs=1e-9)
    assert rows[0]["certified"] == "true"


def test_gap_vacuous_row_warns(tmp_path, capsys):
    out, meta = tmp_path / "gap.csv", tmp_path / "meta.json"
    assert run(["gap", "--q", "0.7", "--out", str(out), "--meta", str(meta)], capsys)[0] == 0
    assert list(csv.DictReader(out.open()))[0]["certified"] == "false"
    assert any("q=0.7" in w for w in json.loads(meta.read_text())["warnings"])


def test_gap_empty_grid(tmp_path, capsys):
    out = tmp_path / "gap.csv"
    assert run(["gap", "--q", "0.5", "--epsilon", "--out", str(out)], capsys)[0] == 0
    assert out.read_text() == ",".join(cli.GAP_HEADER) + "\n"


def test_simulate(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--q", "0.5", "--bath-k", "4", "--bath-base", "2", "--samples", "500", "--seed", "42"]
    code, stdout, _ = run(args + ["--out", str(a)], capsys)
    assert code == 0
    run(args + ["--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.open()))
    assert len(rows) == 500 and list(rows[0]) == list(cli.SIM_HEADER)
    assert all(float(r["rho10"]) <= float(r["bound_eq7"]) + 1e-10 for r in rows)
    meta = json.loads(stdout)
    assert meta["seed"] == 42 and "delta_report" in meta and "delta_eff" in meta


def test_simulate_point_b(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(["simulate", "--q", "0.5", "--bath-k", "4", "--samples", "20", "--pattern", "point-b",
                           "--normal-form", "--out", str(out)], capsys)
    assert code == 0
    meta = json.loads(stdout)
    assert meta["sigma_pattern_all"] is True
    assert meta["observed_max"] == pytest.approx(0.425, abs=1e-10)


def test_simulate_guard(capsys):
    code, _, err = run(["simulate", "--q", "0.5", "--bath-k", "20", "--samples", "1"], capsys)
    assert code == 3 and "try K=" in err


@pytest.mark.parametrize("args", [
    ["cone", "--q", "1.5"],
    ["cone", "--q", "0.5", "--grid", "1"],
    ["gap", "--epsilon", "-1"],
    ["simulate", "--q", "0.5", "--bath-k", "3"],
    ["verify", "--criteria", "nonsense"],
    ["frobnicate"],
    [],
])
def test_usage_errors(args, capsys):
    assert run(args, capsys)[0] == 2


def test_unwritable_path(capsys):
    code, _, err = run(["gap", "--out", "/nonexistent/dir/out.csv"], capsys)
    assert code == 3


def test_verify_gap_group(capsys):
    code, stdout, _ = run(["verify", "--criteria", "gap"], capsys)
    assert code == 0
    assert "[PASS]  2." in stdout and "[PASS]  8." in stdout and "1." not in stdout.split("\n")[0]


def test_verify_force_fail(capsys):
    code, stdout, _ = run(["verify", "--criteria", "2", "--force-fail"], capsys)
    assert code == 1 and "failing: 2" in stdout


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thermogap", "gap", "--q", "0.5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("q,epsilon")
