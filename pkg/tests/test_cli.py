import io
import json

import pytest

from telesigma.cli import build_parser, config_from_args, main, run
from telesigma.serialize import dumps


def run_cli(*argv):
    cfg = config_from_args(build_parser().parse_args(list(argv)))
    out = io.StringIO()
    code = run(cfg, out)
    return code, out.getvalue()


def test_analyze_worked_example():
    code, out = run_cli("analyze", "4,6,5", "--output", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["gaps"] == [1, 2, 3, 7] and rep["genus"] == 4 and rep["partition"] == [4, 1, 1, 1]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["analyze", "4,5,6"], 2),
        (["analyze", "--curve", "4,6"], 2),
        (["analyze", "2,3"], 0),
        (["equations", "--curve", "6,9,5"], 0),
        (["schur", "--partition", "3,2,1"], 0),
        (["schur", "--curve", "2,7"], 0),
        (["verify", "--curve", "2,3", "--theorem", "5.4", "--n", "2"], 0),
        (["verify", "--curve", "2,7", "--theorem", "5.2"], 0),
        (["verify", "--curve", "4,6,5", "--theorem", "5.1", "--k", "2"], 0),
        (["verify", "--curve", "4,6,5", "--check", "product", "--n", "4"], 0),
        (["verify", "--curve", "4,6,5", "--theorem", "5.1", "--k", "9"], 2),
        (["verify", "--curve", "4,5,6", "--theorem", "5.4", "--n", "2"], 2),
        (["verify", "--curve", "2,3", "--theorem", "5.4"], 2),
        (["expand", "2,3", "--order", "8", "--kappa", "symbolic"], 0),
        (["expand", "2,3", "--order", "0"], 2),
        (["expand", "2,3", "--kappa", "nonsense"], 2),
    ],
)
def test_exit_codes(argv, code):
    assert run_cli(*argv)[0] == code


def test_verify_report_shape():
    code, out = run_cli("verify", "--curve", "2,3", "--theorem", "5.4", "--n", "2", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "verified"
    (task,) = rep["tasks"]
    assert task["results"][0]["residual_monomials"] == {}
    assert "timing" in task


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "4,6,5"],
        ["equations", "2,3", "--kappa", "symbolic"],
        ["expand", "3,4", "--order", "6", "--kappa", "symbolic"],
        ["schur", "--partition", "4,1,1,1"],
    ],
)
def test_json_round_trip(argv):
    _, out = run_cli(*argv, "--output", "json")
    assert dumps(json.loads(out)) + "\n" == out


def test_kappa_file(tmp_path):
    good = tmp_path / "k.json"
    good.write_text(json.dumps({"k2_0.0": "1/2", "k2_1.1": "-3"}))
    code, out = run_cli("equations", "2,3", "--kappa", str(good))
    assert code == 0
    assert "- (1/2)" in out or "- 1/2" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"k2_7.0": "1"}))
    assert run_cli("equations", "2,3", "--kappa", str(bad))[0] == 2
    floats = tmp_path / "f.json"
    floats.write_text(json.dumps({"k2_0.0": 0.5}))
    assert run_cli("equations", "2,3", "--kappa", str(floats))[0] == 2


def test_malformed_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["analyze", "4,x"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["verify", "--bogus"])
    assert e.value.code == 2


def test_parallel_matches_serial():
    argv = ["verify", "--all-fixtures", "--output", "json"]
    _, serial = run_cli(*argv)
    _, parallel = run_cli(*argv, "--jobs", "2")
    strip = lambda rep: [(t["key"], t["status"], t["results"]) for t in json.loads(rep)["tasks"]]
    assert strip(serial) == strip(parallel)
    assert json.loads(serial)["status"] == "verified"
