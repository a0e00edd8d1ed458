import json
import os
import subprocess
import sys

import pytest

import frozen
from dnmod.cli import main


def run(*argv):
    return subprocess.run([sys.executable, "-m", "dnmod.cli", *argv], capture_output=True, text=True)


def json_of(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_cn_example(capsys):
    code, out = json_of(capsys, "cn", "--d3", "0,-44,0,-16,0,-4", "--order", "20")
    assert code == 0 and out["command"].startswith("cn")
    vals = [int(r["data"]["value"]) for r in out["rows"]]
    assert vals[:5] == [1, 0, -2, 0, -1]
    assert vals == frozen.ETA_2_2_10_2[1:21]


def test_ap_example(capsys):
    code, out = json_of(capsys, "ap", "--curve", "cubic:1,-24,36", "--p", "5")
    assert code == 0
    a = int(out["rows"][0]["data"]["a_p"])
    assert -4 <= a <= 4 and a == frozen.AP_Z3_Z2_M24Z_36[5]


def test_hunt_example(capsys):
    code, out = json_of(capsys, "hunt", "--order", "3", "--prime", "11", "--stage", "first8", "--list")
    assert code == 0
    tuples = [r["data"]["tuple"] for r in out["rows"] if "tuple" in r["data"]]
    assert "0,0,0,6,7" in tuples
    assert out["rows"][0]["status"] == "pass"


@pytest.mark.parametrize("argv", [
    ["phi0", "--d2", "-7,-8,0,2", "--order", "5"],
    ["phi0", "--d3", "0,-44,0,-16,0,-4", "--order", "6", "--log"],
    ["qexp", "--d2", "-7,-8,0,2", "--order", "10"],
    ["curve", "--d3", "-4,-88,-300,-304,0,-8"],
    ["curve", "--curve", "quartic:-4,-88,-300,-304"],
    ["asd", "--d2", "0,-16,0,0"],
    ["bridge", "--d2", "-7,-8,0,2"],
    ["cn", "--d3", "0,-44,0,-16,0,-4", "--order", "10"],
])
def test_commands_succeed(capsys, argv):
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert out.startswith("# ") and out.rstrip().endswith("0 failed")


def test_phi0_values(capsys):
    code, out = json_of(capsys, "phi0", "--d2", "-7,-8,0,2", "--order", "5")
    assert [r["data"]["value"] for r in out["rows"]] == ["1", "2", "10", "56", "346", "2252"]


def test_sqrt5_row_gives_rational_cn(capsys):
    code, out = json_of(capsys, "cn", "--d3", "0,22-30*sqrt5,0,1000-440*sqrt5,0,18-10*sqrt5", "--order", "20")
    assert code == 0
    assert [int(r["data"]["value"]) for r in out["rows"]] == frozen.ETA_2_2_10_2[1:21]


@pytest.mark.parametrize("argv", [
    ["cn"],
    ["cn", "--d3", "1,2,3"],
    ["cn", "--d3", "0,-44,0,-16,0,-4", "--order", "1000"],
    ["ap", "--curve", "elliptic:1,2"],
    ["hunt", "--order", "4", "--prime", "7"],
    ["reproduce", "no_such_table"],
    ["ap", "--curve", "cubic:0,-16,0", "--p", "2", "--strict-nonsense"],
])
def test_usage_errors_exit_2(argv):
    res = run(*argv)
    assert res.returncode == 2, res.stdout + res.stderr
    assert res.stderr


def test_mismatch_exits_1(tmp_path):
    reg = tmp_path / "reg.txt"
    # a zagier row with a wrong u column
    reg.write_text("zagier_d2 | A=7 | B=-8 | lambda=2 | t=1^3*6^9/2^3*3^9 | f=2*3^6/1^2*6^3 | "
                   "u=1,2,10,56,346,2253 | twin=-7,-8,-2 | twin_rule=alternate\n")
    res = subprocess.run([sys.executable, "-m", "dnmod.cli", "reproduce", "zagier_d2", "--order", "20", "--json"],
                         capture_output=True, text=True, env={**os.environ, "DNMOD_REGISTRY": str(reg)})
    assert res.returncode == 1
    out = json.loads(res.stdout)
    assert out["failures"] >= 1
    assert any(r["status"] == "fail" for r in out["rows"])


def test_json_schema_and_determinism():
    a = run("reproduce", "d3_degenerate", "--order", "40", "--json")
    b = run("reproduce", "d3_degenerate", "--order", "40", "--json", "--jobs", "2")
    assert a.returncode == 0 and a.stdout == b.stdout
    out = json.loads(a.stdout)
    assert set(out) == {"command", "rows", "failures"} and out["failures"] == 0
    for row in out["rows"]:
        assert set(row) == {"id", "status", "data"}
        assert row["status"] in ("pass", "fail", "info")
        assert all(isinstance(v, str) for v in row["data"].values())


def test_tsv_output(capsys):
    assert main(["cn", "--d2", "0,-16,0,0", "--order", "5", "--tsv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == ["id", "status", "field", "value"]
    assert all(len(line.split("\t")) == 4 for line in lines)


def test_json_and_tsv_exclusive():
    assert run("cn", "--d2", "0,-16,0,0", "--json", "--tsv").returncode == 2
