import csv
import json
import math
import subprocess
import sys
from fractions import Fraction as F

import pytest

from spiralmin.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_profile(capsys):
    d = run_json(capsys, "profile", "--k1", "0", "--k2", "0", "--C", "1")
    assert d["s_crit"] == pytest.approx(math.pi / 4, abs=1e-15)
    assert d["threshold"] == pytest.approx(4.0, rel=1e-15)
    d = run_json(capsys, "profile", "--k1", "2", "--k2", "0", "--C", "1", "--s", "0.3", "0.5")
    assert d["s_crit"] == pytest.approx(math.pi / 6, abs=1e-14)
    assert d["s_crit_over_pi"] == pytest.approx(1 / 6, abs=1e-14)
    assert [r["s"] for r in d["values"]] == [0.3, 0.5]


def test_malformed_input_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["profile", "--k1", "0", "--k2", "0", "--C", "one"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["profile", "--k1", "0", "--k2", "0", "--C", "nan"])
    assert e.value.code == 2
    assert run(capsys, "profile", "--k1", "-1", "--k2", "0", "--C", "1")[0] == 2


def test_domain_and_integrals(capsys):
    d = run_json(capsys, "domain", "--k1", "0", "--k2", "0", "--C", "0", "--Ctilde", "4")
    assert d["z_L"] == 0.0 and d["z_R_over_pi"] == pytest.approx(1 / 3, abs=1e-15)
    d = run_json(capsys, "integrals", "--k1", "1", "--k2", "2", "--C", "-1", "--Ctilde", "86.80555555555554")
    assert d["J1"] == pytest.approx(1.1233271303845014, rel=1e-12)
    assert d["s2_advance_over_pi"] == pytest.approx(-d["J2_over_pi"])


def test_empty_domain_exit_3(capsys):
    code, _, err = run(capsys, "solve-curve", "--k1", "1", "--k2", "1", "--C", "1", "--Ctilde", "10")
    assert code == 3 and "spiralmin:" in err
    assert run(capsys, "domain", "--k1", "1", "--k2", "1", "--C", "1", "--Ctilde", "16.0000000000001")[0] == 3


def test_solve_curve_reports_quarter_turn(capsys, tmp_path):
    out = tmp_path / "c.json"
    d = run_json(capsys, "solve-curve", "--k1", "0", "--k2", "0", "--C", "1", "--Ctilde", "9", "--out", str(out))
    assert d["delta_s1_over_pi"] == pytest.approx(0.5, abs=1e-12)
    data = json.loads(out.read_text())
    assert list(data)[:4] == ["k1", "k2", "C", "Ctilde"]
    assert len(data["samples"]) == 513


def test_json_round_trip_bit_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["solve-curve", "--k1", "1", "--k2", "2", "--C", "0.7", "--Ctilde", "60", "--rounds", "3", "--samples", "64"]
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    # re-read, re-serialize: identical bytes
    assert (dumps(json.loads(a.read_text())) + "\n").encode() == a.read_bytes()
    # and the file re-validates against a fresh integration
    d = run_json(capsys, "verify", "--k1", "1", "--k2", "2", "--curve", str(a), "--suite", "traces")
    assert d["pass"] is True


def test_tampered_curve_rejected(capsys, tmp_path):
    a = tmp_path / "a.json"
    run(capsys, "solve-curve", "--k1", "1", "--k2", "1", "--C", "-1", "--Ctilde", "40", "--samples", "32", "--out", str(a))
    data = json.loads(a.read_text())
    data["samples"][5]["a"] += 1e-9
    a.write_text(json.dumps(data))
    assert run(capsys, "verify", "--k1", "1", "--k2", "1", "--curve", str(a))[0] == 2


def test_csv_output(capsys, tmp_path):
    out = tmp_path / "c.csv"
    args = ["solve-curve", "--k1", "0", "--k2", "1", "--C", "0", "--Ctilde", "5", "--samples", "32"]
    run(capsys, *args, "--format", "csv", "--out", str(out))
    raw = out.read_bytes()
    assert raw.count(b"\r\n") == 34 and b"\n" not in raw.replace(b"\r\n", b"")
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["s", "t_arc", "a", "b", "s1", "s2"]
    assert float(rows[1][1]) == 0.0 and all(len(r) == 6 for r in rows)


def test_export_obj(capsys, tmp_path):
    out = tmp_path / "c.obj"
    args = ["export", "--k1", "1", "--k2", "1", "--C", "-1", "--Ctilde", "40", "--samples", "32", "--rounds", "2"]
    assert run(capsys, *args, "--format", "obj", "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#") and lines[1].startswith("# k1=1")
    verts = [list(map(float, ln.split()[1:])) for ln in lines if ln.startswith("v ")]
    assert len(verts) == 65
    assert max(abs(math.hypot(*v) - 1) for v in verts) < 1e-14
    side = json.loads((tmp_path / "c.obj.json").read_text())
    assert side["n_vertices"] == 65 and len(side["t_arc"]) == 65


def test_export_json_matches_solve_curve(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    p = ["--k1", "1", "--k2", "0", "--C", "0.4", "--Ctilde", "30", "--samples", "32"]
    run(capsys, "solve-curve", *p, "--out", str(a))
    run(capsys, "export", *p, "--format", "json", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_steady(capsys):
    d = run_json(capsys, "steady", "--k1", "1", "--k2", "0", "--c", "inf")
    assert d["c"] == "+inf" and d["a"] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    d = run_json(capsys, "steady", "--k1", "1", "--k2", "1", "--c", "3/2")
    assert d["c"] == "3/2" and d["t_period"] == pytest.approx(4 * math.pi) and d["closes"] is True
    assert abs(d["trace"]) < 1e-12
    assert run(capsys, "steady", "--k1", "3", "--k2", "0", "--c", "1.5")[0] == 2


def test_search_singly(capsys):
    d = run_json(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0", "--q", "3/5")
    assert d["q1"] == "3/5" and d["q2"] == "0/1"
    assert d["class"] == "SelfIntersecting" and d["rounds"] == 5
    assert list(d)[:9] == ["k1", "k2", "C", "Ctilde", "q1", "q2", "rounds", "class", "antipodal_disjoint"]


def test_search_minus_one(capsys):
    d = run_json(capsys, "search", "--k1", "2", "--k2", "1", "--C", "-1", "--q", "1/4")
    assert d["Ctilde"] == pytest.approx(45.116000489033418, rel=1e-10)
    assert d["q2"] == "-3/8" and d["class"] == "CylinderGlueSecondFlip"


def test_search_sweep_is_ordered(capsys, monkeypatch):
    monkeypatch.setenv("SPIRALMIN_THREADS", "2")
    d = run_json(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0", "--q", "3/5", "--q", "2/3", "--q", "7/11")
    assert [c["q1"] for c in d] == ["3/5", "2/3", "7/11"]


def test_search_double(capsys):
    d = run_json(
        capsys, "search", "--k1", "1", "--k2", "2", "--q", "7/20", "--q2", "1/5", "--seed-C", "0.5", "--seed-Ctilde", "40"
    )
    assert d["q2"] == "1/5" and d["class"] == "Unclassified"


def test_search_exit_codes(capsys):
    with pytest.raises(SystemExit) as e:
        main(["search", "--k1", "0", "--k2", "1", "--C", "0", "--q", "0.6"])
    assert e.value.code == 2
    assert run(capsys, "search", "--k1", "0", "--k2", "0", "--C", "-1", "--q", "1/3")[0] == 4
    assert run(capsys, "search", "--k1", "1", "--k2", "1", "--C", "0.5", "--q", "1/3")[0] == 2
    assert run(capsys, "search", "--k1", "1", "--k2", "1", "--q", "1/3", "--q2", "1/5")[0] == 2


def test_verify_legendrian_pass(capsys):
    d = run_json(capsys, "verify", "--k1", "1", "--k2", "2", "--C", "-1", "--Ctilde", "90", "--suite", "legendrian")
    assert d["pass"] is True and d["suites"]["legendrian"]["variation"] < 1e-8


def test_verify_perturbed_fails(capsys):
    code, out, _ = run(
        capsys, "verify", "--k1", "1", "--k2", "2", "--C", "0.7", "--Ctilde", "60", "--perturb", "0.01", "--suite", "traces"
    )
    d = json.loads(out)
    assert code == 5 and d["pass"] is False and d["suites"]["traces"]["max_residual"] > 1e-3


def test_verify_steady_clifford_all(capsys):
    h = repr(math.sqrt(0.5))
    d = run_json(capsys, "verify", "--k1", "0", "--k2", "0", "--steady", h, h, "1", "--suite", "all")
    assert d["pass"] is True
    assert set(d["suites"]) == {"traces", "legendrian", "takahashi", "fd", "great-circle"}
    assert "skipped" not in d["suites"]["great-circle"]


def test_verify_all_skips(capsys):
    d = run_json(capsys, "verify", "--k1", "1", "--k2", "1", "--C", "0.5", "--Ctilde", "40", "--samples", "64")
    assert "skipped" in d["suites"]["legendrian"] and "skipped" in d["suites"]["great-circle"]


def test_config_file(capsys, tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"samples": 32, "rounds": 2}))
    d = run_json(capsys, "--config", str(conf), "solve-curve", "--k1", "0", "--k2", "1", "--C", "0", "--Ctilde", "5")
    assert d["n_samples"] == 65 and d["rounds"] == 2
    d = run_json(
        capsys, "--config", str(conf), "solve-curve", "--k1", "0", "--k2", "1", "--C", "0", "--Ctilde", "5", "--samples", "16"
    )
    assert d["n_samples"] == 33
    conf.write_text(json.dumps({"samples": 4}))
    assert run(capsys, "--config", str(conf), "solve-curve", "--k1", "0", "--k2", "1", "--C", "0", "--Ctilde", "5")[0] == 2
    conf.write_text("[1, 2")
    assert run(capsys, "--config", str(conf), "profile", "--k1", "0", "--k2", "1", "--C", "0")[0] == 2


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "spiralmin", "profile", "--k1", "1", "--k2", "1", "--C", "-1"],
        capture_output=True, text=True, check=False,
    )  # fmt: skip
    assert r.returncode == 0 and json.loads(r.stdout)["threshold"] == pytest.approx(16.0)


def test_dumps_format():
    assert dumps({"x": 0.1, "n": 3, "b": True, "f": float("inf")}) == (
        '{\n  "x": 0.10000000000000001,\n  "n": 3,\n  "b": true,\n  "f": "inf"\n}'
    )


def test_search_scan(capsys, monkeypatch):
    monkeypatch.setenv("SPIRALMIN_THREADS", "2")
    d = run_json(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0", "--scan", "3/5", "7/10", "10")
    want = sorted({F(n, k) for k in range(1, 11) for n in range(k + 1) if F(3, 5) <= F(n, k) <= F(7, 10)})
    assert [c["q1"] for c in d] == [f"{q.numerator}/{q.denominator}" for q in want]
    assert run(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0", "--scan", "2/3", "3/5", "5")[0] == 2
    assert run(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0", "--scan", "0.6", "2/3", "5")[0] == 2
    assert run(capsys, "search", "--k1", "0", "--k2", "1", "--C", "0")[0] == 2
