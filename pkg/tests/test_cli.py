import json
import subprocess
import sys

import pytest

from qcomb.cli import RunConfig, UsageError, main, parse_comb_file, run
from qcomb.comb import comb_equal, coset_comb, dumps_comb, fourier, reflect, scale
from qcomb.exactnum import FieldElem
from qcomb.lattice import Lattice
from qcomb.reconstruct import nu

LD = Lattice.diagonal([FieldElem(0, 1), 1])


def _json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_bundled_nu():
    assert comb_equal(parse_comb_file("@nu"), nu())


def test_counterexample_passes(capsys):
    code, rep = _json(capsys, ["counterexample"])
    assert code == 0 and rep["passed"]
    checks = rep["result"]
    assert {"spectrum", "poisson", "refutation", "no_common_period"} <= set(checks)
    assert all(c["passed"] for c in checks.values())
    assert rep["version"] and rep["config"]["subcommand"] == "counterexample"


def test_fourier_twice_is_reflection(tmp_path):
    src = tmp_path / "nu.json"
    src.write_text(dumps_comb(nu()))
    once, twice = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["fourier", "-i", str(src), "-o", str(once)]) == 0
    assert main(["fourier", "-i", str(once), "-o", str(twice)]) == 0
    assert comb_equal(parse_comb_file(str(twice)), reflect(nu()))


def test_verify_detects_corrupted_transform(tmp_path, capsys):
    m = coset_comb(LD)
    src, good, bad = tmp_path / "m.json", tmp_path / "good.json", tmp_path / "bad.json"
    src.write_text(dumps_comb(m))
    good.write_text(dumps_comb(fourier(m)))
    bad.write_text(dumps_comb(scale(fourier(m), 2)))
    assert main(["verify", "-i", str(src), "-i", str(good), "--probes", "4"]) == 0
    capsys.readouterr()
    code, rep = _json(capsys, ["verify", "-i", str(src), "-i", str(bad), "--probes", "4"])
    assert code != 0 and not rep["passed"]


def test_reports_are_deterministic(capsys):
    outs = []
    for _ in range(2):
        main(["verify", "--probes", "5", "--seed", "3", "--format", "json"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    main(["verify", "--probes", "5", "--seed", "4", "--format", "json"])
    assert capsys.readouterr().out != outs[0]


def test_malformed_file_reports_pointer(tmp_path, capsys):
    doc = json.loads(dumps_comb(nu()))
    doc["components"][0]["terms"][0]["coeff"]["rat"] = "1/0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, rep = _json(capsys, ["verify", "-i", str(bad)])
    assert code != 0
    assert rep["error"]["type"] == "CombFormatError"
    assert rep["error"]["pointer"] == "/components/0/terms/0/coeff/rat"


def test_missing_file(capsys):
    code, rep = _json(capsys, ["fourier", "-i", "/nonexistent/x.json"])
    assert code != 0 and "error" in rep


def test_dio(capsys):
    code, rep = _json(capsys, ["dio", "--alpha", "sqrt", "--eps", "0.02"])
    assert code == 0
    text = json.dumps(rep["result"])
    assert "29" in text and "-41" in text


def test_oracle_and_refute(capsys):
    code, rep = _json(capsys, ["oracle", "--at", "0,0;0:1/2,1/2"])
    assert code == 0
    code, rep = _json(capsys, ["refute", "--theta", "0.3,1.1", "--eps", "0.1,0.01"])
    assert code == 0 and rep["result"]["verdict"] == "cover refuted on sampled directions"


def test_reconstruct_cmd_fails_on_nu(capsys):
    code, rep = _json(capsys, ["reconstruct", "--window", "12"])
    assert code != 0 and not rep["passed"]


def test_discreteness_and_diffs(capsys):
    code, rep = _json(capsys, ["discreteness", "--window", "10"])
    assert code == 0 and rep["result"]["support"]["min_gap"] == 0.5
    assert rep["result"]["spectrum"]["min_gap"] == 0.5
    code, rep = _json(capsys, ["diffs", "--window", "8"])
    assert code == 0


def test_periods(capsys):
    code, rep = _json(capsys, ["periods", "--window", "40"])
    assert code == 0


def test_bad_usage():
    with pytest.raises(SystemExit):
        main(["verify", "--tol", "-1"])
    with pytest.raises(UsageError):
        RunConfig("verify", tol=0).validate()
    code, body = run(RunConfig("verify", inputs=["@nu"], probes=2, format="text"))
    assert code == 0 and "status: PASS" in body


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qcomb", "dio", "--alpha", "sqrt", "--eps", "0.1"], capture_output=True, text=True)
    assert out.returncode == 0 and "status: PASS" in out.stdout
