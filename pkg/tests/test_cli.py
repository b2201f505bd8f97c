import json
import subprocess
import sys

import pytest

from hkcert.cli import main, run


def _json(argv):
    status, out, err = run(argv)
    assert status == 0, err
    return json.loads(out)


def test_todd():
    doc = _json(["todd", "--order", "4"])
    assert doc["coefficients"] == ["1", "1/2", "1/12", "0", "-1/720"]
    assert doc["command"] == "todd"


def test_twist_hpoly_signs_beta():
    assert _json(["twist", "--m", "1", "--n", "1"])["terms"]["1,1"] == "1"
    assert _json(["hpoly", "--m", "2", "--q", "-2"])["h_coefficients"] == ["0", "-1", "1"]
    doc = _json(["signs", "--m", "2", "--n", "2", "--v", "2"])
    assert doc["top_pattern"]["holds"] is True
    doc = _json(["beta", "--m", "2", "--n", "2", "--ell", "2", "--class", '{"1,1": "1"}'])
    assert doc["image"]["3"] == "-2"
    doc = _json(["beta", "--m", "2", "--n", "1", "--q", "-1"])
    assert doc["image"]["3"] == "1/2"


def test_segre_commands():
    doc = _json(["segre", "min-ell", "--m", "2", "--n", "1"])
    assert doc["ell"] >= 1 and doc["report"]["covered"]
    doc = _json(["segre", "check", "--m", "2", "--n", "1", "--ell", "3", "--q", "-2"])
    assert doc["mcm"] is True
    doc = _json(["segre", "coverage", "--m", "1", "--n", "1"])
    assert doc["verdict"] == "not covered"
    doc = _json(["segre", "test-module", "--m", "1", "--n", "1"])
    assert doc["weights"] == [1, 1, 1] and doc["contains_B"]


def test_hk_count_csv():
    status, out, _ = run(["hk", "count", "--preset", "quadric", "--p", "2", "--nmax", "2", "--csv"])
    assert status == 0
    assert out.splitlines() == ["q,length", "1,1", "2,10", "4,84"]


def test_hk_fit():
    doc = _json(["hk", "fit", "--preset", "quadric", "--p", "2", "--nmax", "4", "--d", "3"])
    assert doc["verified"] and doc["coefficients"]["q^3"] == "4/3"


def test_plan_and_eval_round_trip(tmp_path):
    doc = _json(["plan", "--d", "4", "--pattern", "0,0,0,1,1"])
    cert = doc["certificate"]
    assert cert["pattern"] == [0, 0, 0, 1, 1]
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(doc))
    ev = _json(["plan", "eval", "--cert", str(path), "--n", "3"])
    assert ev["round_trip"] and ev["psi_consistent"]
    assert ev["recovered_coefficients"] == cert["coefficients"]


def test_plan_seed_is_echoed_and_deterministic():
    argv = ["plan", "--pattern", "0,0,0,-1,1,1", "--p", "3", "--seed", "17"]
    a, b = run(argv), run(argv)
    assert a == b
    doc = json.loads(a[1])
    assert doc["parameters"]["seed"] == 17 and doc["certificate"]["random_seed"] == 17


def test_cone_commands(tmp_path):
    doc = _json(["cone", "quadric", "--query", "1,0", "--strict"])
    assert doc["verdict"]["contains"] and doc["certificate_verified"]
    doc = _json(["cone", "quadric", "--query", "0,1"])
    assert not doc["verdict"]["contains"]
    path = tmp_path / "verdict.json"
    path.write_text(json.dumps(doc))
    again = _json(["cone", "quadric", "--cert", str(path)])
    assert again["reproduces_input"] and again["verdict"] == doc["verdict"]
    doc = _json(["cone", "quadric", "--functionals", "1,2"])
    assert doc["nef"]["violations"][0]["generator"] == "Q"
    assert _json(["cone", "psi", "--p", "5"])["stable"]


@pytest.mark.parametrize(
    "argv, status",
    [
        (["twist", "--m", "1"], 1),
        (["plan", "--pattern", "0,1,0,1"], 1),
        (["bogus"], 1),
        (["todd", "--csv", "--json"], 1),
        (["segre", "check", "--m", "1", "--n", "1", "--q", "0", "--csv"], 1),
        (["segre", "min-ell", "--m", "1", "--n", "1", "--max", "1"], 2),
        (["cone", "quadric", "--query", "1", "--strict"], 1),
    ],
)
def test_exit_codes(argv, status):
    assert run(argv)[0] == status


def test_verify_all():
    status, out, _ = run(["verify-all"])
    doc = json.loads(out)
    assert status == 0 and doc["all_passed"] and len(doc["checks"]) == 11


def test_main_writes_stdout(capsys):
    assert main(["todd", "--order", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["coefficients"] == ["1", "1/2"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hkcert", "hk", "count", "--nmax", "1", "--csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "2,10"
