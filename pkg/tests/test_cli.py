import csv
import io
import json
import math
import subprocess
import sys

import pytest

from freefid.cli import RunConfig, UsageError, dump_json, execute, jsonable, main, parse_complex
from freefid.distributions import Beta, BetaPrime, Gaussian, PointMass, StudentT, affine
from freefid.errors import SpecParseError
from freefid.specstr import parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# spec strings

def test_spec_round_trip():
    for text in ("beta:3/2:5", "betaprime:5:2", "gamma:1", "invgamma:2", "ultra:1/2", "t:2",
                 "gauss", "semicircle", "mp", "cauchy", "delta:0", "affine:2:-1:beta:1/2:1/2"):
        d = parse_spec(text)
        assert parse_spec(d.spec()) == d
    assert parse_spec("BETA:2:3") == Beta(2, 3)
    assert parse_spec("bp:1:60") == BetaPrime(1, 60)
    assert parse_spec("normal") == Gaussian()
    assert parse_spec("affine:2:-1:beta:1/2:1/2") == affine(Beta(0.5, 0.5), 2, -1)


@pytest.mark.parametrize("text", ["", "beta", "beta:1", "beta:1:2:3", "beta:x:2", "beta:-1:2",
                                  "foo:1", "t:0", "beta:1/0:2", "affine:2:beta:1:1"])
def test_spec_errors(text):
    with pytest.raises(SpecParseError):
        parse_spec(text)


def test_parse_complex():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex(" 0.5j ") == 0.5j
    with pytest.raises(UsageError):
        parse_complex("one")


# commands

def test_eval_semicircle_and_point_mass(capsys):
    code, doc, _ = run_json(capsys, "eval", "--spec", "semicircle", "--zlist", "2i")
    assert code == 0 and doc["errors"] == []
    rec = doc["results"][0]
    assert rec["G"][0] == pytest.approx(0) and rec["G"][1] == pytest.approx(1 - math.sqrt(2))
    assert rec["side"] == "UpperPlane"
    code, doc, _ = run_json(capsys, "eval", "--spec", "delta:3/2", "--zlist", "2+1i,1i")
    assert code == 0
    assert doc["results"][0]["F"] == pytest.approx([0.5, 1.0])


def test_eval_from_file(tmp_path, capsys):
    f = tmp_path / "z.txt"
    f.write_text("1i\n2+1i\n\n-1-0.5i\n")
    code, doc, _ = run_json(capsys, "eval", "--spec", "t:2", "--zfile", str(f))
    assert code == 0 and len(doc["results"]) == 3
    assert doc["results"][2]["side"] == "LowerContinuation"


def test_eval_numeric_failure_is_per_record(capsys):
    code, doc, _ = run_json(capsys, "eval", "--spec", "beta:2:3", "--zlist", "1i,-1")
    assert code == 2
    assert "error" not in doc["results"][0]
    assert "error" in doc["results"][1]
    assert doc["errors"]


def test_density_csv(capsys):
    code, out, _ = run(capsys, "density", "--spec", "beta:1/2:1/2", "--xmin", "0.25",
                       "--xmax", "0.75", "--n", "3", "--format", "csv")
    assert code == 0
    assert out.endswith("\r\n") and "\r\n" in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "density", "err_est"]
    assert float(rows[2][1]) == pytest.approx(2 / math.pi, abs=1e-9)
    digits = rows[2][1].replace(".", "").replace("-", "").lstrip("0").split("e")[0]
    assert len(digits) >= 15


def test_density_uniform_and_semicircle(capsys):
    code, doc, _ = run_json(capsys, "density", "--spec", "beta:1:1", "--xmin", "0.2", "--xmax", "0.8", "--n", "4")
    assert code == 0
    assert all(r["density"] == pytest.approx(1.0, abs=1e-9) for r in doc["results"])
    code, doc, _ = run_json(capsys, "density", "--spec", "semicircle", "--xmin", "0", "--xmax", "0", "--n", "1")
    assert doc["results"][0]["density"] == pytest.approx(1 / math.pi, abs=1e-9)


def test_fid_bundles(capsys):
    code, doc, _ = run_json(capsys, "fid", "--spec", "beta:2:3")
    assert code == 0 and doc["results"]["verdict"] == "KnownFID"
    code, doc, _ = run_json(capsys, "fid", "--spec", "gamma:1", "--probes", "hankel")
    assert doc["results"]["verdict"] == "CertifiedNotFID"
    assert doc["results"]["probes"]["hankel"]["reason"] == "HankelNegative"
    code, doc, _ = run_json(capsys, "fid", "--spec", "beta:11/20:11/20")
    assert doc["results"]["verdict"] == "CertifiedNotFID"
    assert doc["results"]["probes"]["endpoint"]["status"] == "CertifiedNotFID"


def test_strict_inconclusive(capsys):
    code, doc, _ = run_json(capsys, "fid", "--spec", "beta:5/4:5/4", "--probes", "region")
    assert code == 0 and doc["results"]["verdict"] == "Inconclusive"
    code, _, _ = run(capsys, "fid", "--spec", "beta:5/4:5/4", "--probes", "region", "--strict")
    assert code == 3


def test_trace_outputs(capsys):
    code, doc, _ = run_json(capsys, "trace", "--spec", "betaprime:5:2", "--anchor", "AtZero")
    assert code == 0
    assert doc["results"]["end_state"]["kind"] == "ReachedPoint"
    assert doc["results"]["end_state"]["point"] == pytest.approx([-1, 0])
    code, out, _ = run(capsys, "trace", "--spec", "beta:0.2:4", "--anchor", "AtZero", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["re_z", "im_z", "G"] and len(rows) > 20


def test_indicator(capsys):
    code, doc, _ = run_json(capsys, "indicator", "--spec", "gauss", "--t", "0.9,1.5")
    assert code == 0
    r09, r15 = doc["results"]
    assert "y0" not in r09 and r09["monotone"]
    assert r15["y1"] > 0
    code, doc, _ = run_json(capsys, "indicator", "--spec", "t:2", "--t", "2")
    assert "y0" in doc["results"][0]


def test_selftest(capsys):
    code, doc, _ = run_json(capsys, "selftest", "--suite", "semigroup")
    assert code == 0
    assert all(c["pass"] and c["value"] < 1e-12 for c in doc["results"]["semigroup"])


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--spec", "beta:1", "--zlist", "1i")[0] == 1
    assert run(capsys, "eval", "--spec", "beta:2:3")[0] == 1
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "eval", "--spec", "gauss", "--zlist", "1i", "--tol", "-1")[0] == 1
    assert run(capsys, "fid", "--spec", "gauss", "--probes", "bogus")[0] == 1
    assert run(capsys, "eval", "--spec", "gauss", "--zfile", "/nonexistent/z")[0] == 1
    assert run(capsys, "indicator", "--spec", "gauss", "--yrange", "3,1")[0] == 1


def test_out_file(tmp_path, capsys):
    path = tmp_path / "o.json"
    code, out, _ = run(capsys, "eval", "--spec", "gauss", "--zlist", "1i", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["config"]["out"] == str(path)


# determinism and the config echo

def test_config_echo_round_trip(capsys):
    argv = ["eval", "--spec", "beta:3/2:5", "--zlist", "1+1i,0.3-0.2i", "--tol", "1e-9"]
    _, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    cfg = RunConfig.from_dict(doc["config"])
    assert dump_json(cfg.to_dict()) == dump_json(doc["config"])
    results, errors, _, _ = execute(cfg)
    again = dump_json({"config": cfg.to_dict(), "results": results, "errors": errors})
    assert again == out


def test_deterministic_output(capsys, monkeypatch):
    argv = ["fid", "--spec", "beta:2:3", "--probes", "region,exponent,hankel"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    argv = ["eval", "--spec", "t:5/2", "--zlist", ",".join(f"{k / 3}+{k / 5 + 0.1}i" for k in range(-8, 9))]
    serial = run(capsys, *argv)[1]
    monkeypatch.setenv("FREEPROB_THREADS", "4")
    assert run(capsys, *argv)[1] == serial


def test_jsonable_edge_values():
    assert jsonable(float("nan")) == "nan" and jsonable(float("-inf")) == "-inf"
    assert jsonable(2 ** 80) == str(2 ** 80)
    assert jsonable(1 + 2j) == [1.0, 2.0]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "freefid", "eval", "--spec", "delta:0", "--zlist", "1i"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert json.loads(r.stdout)["results"][0]["G"] == pytest.approx([0, -1])
