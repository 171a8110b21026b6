import json
import os
import subprocess
import sys

import pytest

from superdeform.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_bracket_json(capsys):
    code, out, _ = run(capsys, "verify", "bracket", "--degree-cap", "4", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["schema"] == 1 and rep["command"] == "verify"


def test_json_is_deterministic(capsys):
    outs = [run(capsys, "cocycles", "list", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["ok"]


def test_text_header(capsys):
    code, out, _ = run(capsys, "verify", "transvectant", "3/2", "--degree-cap", "4")
    assert code == 0 and out.splitlines()[0] == "verify: PASS"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["verify"], ["verify", "cocycle"],
                                  ["verify", "cocycle", "gamma[nope]"], ["obstruct", "7/3"],
                                  ["verify", "bracket", "--degree-cap", "2"],
                                  ["example", "n9"]])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and "usage error" in err


def test_parse_command(capsys):
    code, out, _ = run(capsys, "parse", "etabar(etabar(x^2))", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["value"] == "-2*x" and rep["category"] == "poly"


def test_parse_from_file(capsys, tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("(x + th) * a^(lam + 3/2)\n")
    code, out, _ = run(capsys, "parse", f"@{f}", "--json")
    assert code == 0 and json.loads(out)["category"] == "density"


def test_failed_check_exits_2(capsys):
    # the worked n=3 example does not reproduce the displayed relation
    code, out, _ = run(capsys, "example", "n3", "--json")
    rep = json.loads(out)
    assert code == 2 and not rep["ok"]


def test_example_n0_passes(capsys):
    code, _, _ = run(capsys, "example", "n0")
    assert code == 0


def test_threads_env_validated(capsys, monkeypatch):
    monkeypatch.setenv("SUPERDEFORM_THREADS", "zero")
    code, _, err = run(capsys, "cocycles", "list")
    assert code == 1


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=os.path.join(os.path.dirname(__file__), "..", "src"))
    p = subprocess.run([sys.executable, "-m", "superdeform", "selftest", "--json"], capture_output=True,
                       text=True, env=env)
    assert p.returncode == 0, p.stderr
    assert json.loads(p.stdout)["command"] == "selftest"


def test_parse_error_is_reported(capsys):
    code, out, _ = run(capsys, "parse", "1 +", "--json")
    rep = json.loads(out)
    assert code == 2 and rep["error"] == "syntax" and (rep["line"], rep["column"]) == (1, 4)
