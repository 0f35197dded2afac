"""Command-line runs, fixture parsing and report reproducibility."""
import csv
import io
import json
import subprocess
import sys

import pytest

from subkoba.cli import run
from subkoba.errors import FixtureError
from subkoba.fixtures import datum_to_dict, load_alg, load_chart, save_json
from subkoba.hyperbolicity import sl2c_real_datum


def call(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run(args + ["--no-timestamp", "--output", str(out)])
    return code, out.read_text()


def report(args, tmp_path):
    code, text = call(args, tmp_path)
    return code, json.loads(text)


def test_grade_su21(tmp_path):
    code, r = report(["grade", "--type", "A2", "--v", "torus"], tmp_path)
    assert code == 0
    assert r["result"]["dims"] == [1, 2, 2, 2, 1]
    assert r["config"]["settings"]["seed"] == 0


def test_curvature_bound_fixture(tmp_path, fixtures_dir):
    code, r = report(["curvature-bound", "--fixture", str(fixtures_dir / "su21.alg"), "--restarts", "8"], tmp_path)
    assert code == 0 and r["result"]["c"] > 0
    assert r["config"]["settings"]["restarts"] == 8


def test_curvature_bound_compact_exit_2(tmp_path, fixtures_dir):
    code, r = report(["curvature-bound", "--fixture", str(fixtures_dir / "su2_compact.alg")], tmp_path)
    assert code == 2 and r["result"]["verdict"] == "NotNegative"


def test_classify_compact_exit_2(tmp_path, fixtures_dir):
    code, r = report(["classify", "--fixture", str(fixtures_dir / "su2_compact.alg")], tmp_path)
    assert code == 2
    assert r["result"]["verdict"] == "Rejected" and r["result"]["reason"] == "compact factor"
    assert r["result"]["witness"] is not None


@pytest.mark.parametrize("name,expected", [("su21.alg", "CanonicalSuperhorizontal"),
                                           ("su22.alg", "CanonicalSuperhorizontal"),
                                           ("sl2c_real.alg", "complex Lie algebra"),
                                           ("su21_k1.alg", "k1 = k cap g1R is nonzero")])
def test_classify_fixtures(tmp_path, fixtures_dir, name, expected):
    code, r = report(["classify", "--fixture", str(fixtures_dir / name)], tmp_path)
    res = r["result"]
    assert expected in (res["verdict"], res["reason"])
    assert code == (0 if expected == "CanonicalSuperhorizontal" else 2)


def test_chow_connect_cli(tmp_path, fixtures_dir):
    code, r = report(["chow-connect", "--fixture", str(fixtures_dir / "heisenberg.chart"),
                      "--from", "0,0,0", "--to", "0.1,0.2,0.3"], tmp_path)
    assert code == 0 and r["result"]["error"] < 1e-9


def test_kobayashi_cli(tmp_path, fixtures_dir):
    code, r = report(["kobayashi-estimate", "--fixture", str(fixtures_dir / "disc.chart"),
                      "--from", "0", "--to", "0.5"], tmp_path)
    assert code == 0 and abs(r["result"]["value"] - 1.0986122886681098) < 1e-3


def test_forstneric_cli(tmp_path, fixtures_dir):
    code, r = report(["forstneric-check", "--fixture", str(fixtures_dir / "heisenberg.chart")], tmp_path)
    assert code == 0 and abs(r["result"]["C_N"]["C_N"] - 18.18) < 1e-9
    code, r = report(["forstneric-check", "--fixture", str(fixtures_dir / "vanishing_minor.chart")], tmp_path)
    assert code == 2


def test_root_system_csv(tmp_path):
    code, text = call(["root-system", "--type", "C2", "--format", "csv"], tmp_path, "out.csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["root", "b"] and len(rows) == 5


def test_byte_identical_reports(tmp_path, fixtures_dir, monkeypatch):
    args = ["curvature-bound", "--fixture", str(fixtures_dir / "su22.alg"), "--restarts", "8"]
    _, a = call(args, tmp_path, "a.json")
    monkeypatch.setenv("SUBKOBA_THREADS", "1")
    _, b = call(args, tmp_path, "b.json")
    assert a == b


def test_timestamp_present_by_default(tmp_path):
    out = tmp_path / "t.json"
    run(["grade", "--type", "A1", "--output", str(out)])
    assert "timestamp" in json.loads(out.read_text())


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"seed": 1, "bogus": 2}')
    code, r = report(["grade", "--type", "A2", "--config", str(cfg)], tmp_path)
    assert code == 1 and "bogus" in r["error"]["message"]


def test_nonpositive_tolerance(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"tol": 0}')
    code, _ = report(["grade", "--type", "A2", "--config", str(cfg)], tmp_path)
    assert code == 1


def test_input_errors(tmp_path, fixtures_dir):
    assert report(["grade", "--type", "Z3"], tmp_path)[0] == 1
    assert report(["classify", "--fixture", str(tmp_path / "missing.alg")], tmp_path)[0] == 1
    assert report(["chow-connect", "--fixture", str(fixtures_dir / "heisenberg.chart"),
                   "--from", "0,0", "--to", "1,1,1"], tmp_path)[0] == 1
    assert run(["no-such-command"]) == 1


def test_malformed_fixture_location(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text('{\n  "format": "subkoba.alg/1",\n  "kind": "flag",\n  "cartan_type": "A2",\n}\n')
    with pytest.raises(FixtureError) as e:
        load_alg(bad)
    assert e.value.location.startswith("line 5")
    bad.write_text(json.dumps({"format": "subkoba.chart/1", "n": 2, "frame": [[[[[0], ["1", "0"]]], []]]}))
    with pytest.raises(FixtureError) as e:
        load_chart(bad)
    assert e.value.location == "$.frame[0][0][0]"
    code, r = report(["classify", "--fixture", str(tmp_path / "bad.alg")], tmp_path)
    assert code == 1 and r["error"]["location"] == "$.format"


def test_datum_fixture_round_trip(tmp_path, fixtures_dir):
    hd = sl2c_real_datum()
    save_json(datum_to_dict(hd), tmp_path / "x.alg")
    fx = load_alg(tmp_path / "x.alg")
    assert fx.hd.la.table == hd.la.table and fx.hd.j == hd.j and fx.hd.theta == hd.theta
    assert (tmp_path / "x.alg").read_text() == (fixtures_dir / "sl2c_real.alg").read_text()


def test_console_script_exit_code(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "subkoba.cli", "classify", "--fixture",
                           str(fixtures_dir / "su2_compact.alg"), "--no-timestamp"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["result"]["reason"] == "compact factor"
