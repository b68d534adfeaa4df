import json
import subprocess
import sys

import pytest

from lamprobe.cli import run


def ok(*argv):
    status, text = run(list(argv))
    assert status == 0, text
    return json.loads(text)


def test_reduce_k():
    report = ok("reduce", "--strategy", "normal", "--fuel", "100", "K a b")
    assert report["command"] == "reduce"
    assert report["result"] == {"status": "Finished", "term": "a", "steps": 2}
    assert report["budgets"] == {"fuel": 100, "steps": 2, "strategy": "normal"}
    assert report["inputs"][0]["prelude"] == ["K"]
    assert report["inputs"][0]["expanded"] == r"(\x y.x) a b"


def test_reduce_exhausted_exits_one():
    status, text = run(["reduce", "--fuel", "20", "Omega"])
    assert status == 1
    report = json.loads(text)
    assert report["result"]["status"] == "Exhausted"
    assert report["budgets"]["steps"] == 20


def test_parse_reports_free_variables():
    report = ok("parse", r"\x.x y")
    assert report["result"] == {"term": r"\x.x y", "free_variables": ["y"], "closed": False}


@pytest.mark.parametrize("argv", [["parse", "x Q"], ["parse", r"\x."], ["central", "x"], ["interp", "--model", "nope", "I"]])
def test_input_errors_exit_two(argv):
    status, text = run(argv)
    assert status == 2
    assert "error" in json.loads(text)


def test_solvable():
    report = ok("solvable", r"\x.x Omega")
    assert report["result"]["status"] == "Solvable"
    status, text = run(["solvable", "--fuel", "1000", "Omega"])
    assert status == 1 and json.loads(text)["result"]["status"] == "Unknown"


def test_bohm():
    report = ok("bohm", "--depth", "2", r"\x.x (Omega x)")
    assert report["result"]["approximant"] == r"\x.x ⊥"


def test_cl():
    report = ok("cl", "I")
    assert report["result"]["cl"] == "S K K"
    assert report["result"]["weak"]["status"] == "Finished"


def test_central():
    report = ok("central", "--fuel", "1000", "T")
    assert report["result"]["verdict"] == "Central"
    report = ok("central", "--fuel", "1000", "S")
    assert report["result"]["verdict"] == "NotCentral"
    assert report["result"]["axioms"]["i"]["status"] == "Fails"
    assert len(report["result"]["axioms"]["i"]["witness"]) == 2
    status, _ = run(["central", "--fuel", "30", "Omega"])
    assert status == 1


def test_bool():
    report = ok("bool", "not", "T")
    assert report["result"]["normal_form"]["term"] == ok("reduce", "F")["result"]["term"]
    status, _ = run(["bool", "or", "T"])
    assert status == 2


def test_interp_identity():
    report = ok("interp", "--model", "engeler:1", "--rank", "2", "--fuel", "1000", "I")
    assert report["result"]["count"] == 12
    assert "({a}→a)" in report["result"]["elements"]
    assert report["model"] == "engeler:1"


def test_interp_relational():
    report = ok("interp", "--model", "rel", "--size", "3", "I")
    assert report["result"]["elements"] == [{"context": "{}", "element": "[*]→*"}]


def test_interp_rank_too_large():
    status, text = run(["interp", "--rank", "4", "I"])
    assert status == 2 and "EnumerationTooLarge" in json.loads(text)["error"]


def test_member():
    assert ok("member", "--rank", "2", "({a}→a)", "I")["result"]["member"] == "Yes"
    assert ok("member", "--model", "rel", "[*]→*", "I")["result"]["member"] == "Yes"
    assert ok("member", "--model", "rel", "*", "I")["result"]["member"] == "No"
    status, text = run(["member", "--fuel", "20", "({a}→a)", "Omega"])
    assert status == 1 and json.loads(text)["result"]["member"] == "Unknown"
    status, _ = run(["member", "(b)", "I"])
    assert status == 2


def test_compare_eta_in_d():
    report = ok("compare", "--model", "rel", "--size", "7", "I", r"\x y. x y")
    assert report["result"]["kind"] == "EqualUpTo"
    assert report["result"]["bound"] == 7


def test_compare_k_f_graph():
    report = ok("compare", "--rank", "2", "K", "F")
    assert report["result"]["kind"] == "Incomparable"
    assert "({a}→({}→a))" in report["result"]["left_only"]
    assert "({}→({a}→a))" in report["result"]["right_only"]


def test_web_check_and_web_model(tmp_path):
    web = tmp_path / "w.web"
    web.write_text("atom a\ncode c = {a} -> a\n")
    report = ok("web", "check", "--rank", "1", str(web))
    assert report["result"]["atoms"] == ["a"]
    assert report["result"]["codes"] == [{"name": "c", "argument": ["a"], "result": "a"}]
    assert report["result"]["carrier_sizes"] == [2, 9]
    assert report["result"]["complete"] is True
    # rank 3 would need every subset of the rank-2 stratum
    report = ok("web", "check", str(web))
    assert report["result"]["carrier_sizes"][:2] == [2, 9]
    assert report["result"]["complete"] is False
    interp = ok("interp", "--model", f"web:{web}", "--rank", "0", "I")
    assert interp["result"]["elements"] == ["c"]


def test_web_errors(tmp_path):
    dup = tmp_path / "dup.web"
    dup.write_text("atom a\ncode c = {a} -> a\ncode d = {a} -> a\n")
    status, text = run(["web", "check", str(dup)])
    assert status == 2 and "InjectivityViolation" in json.loads(text)["error"]
    assert "line 3" in json.loads(text)["error"]
    status, text = run(["web", "check", str(tmp_path / "missing.web")])
    assert status == 2


def test_empty_web(tmp_path):
    empty = tmp_path / "empty.web"
    empty.write_text("")
    assert ok("web", "check", str(empty))["result"]["carrier_sizes"] == [0, 0, 0, 0]
    assert ok("interp", "--model", f"web:{empty}", "I")["result"]["count"] == 0


def test_env_file(tmp_path):
    env = tmp_path / "x.env"
    env.write_text("x = { ({a}→a) }\ny = { a }\n")
    report = ok("interp", "--rank", "1", "--env", str(env), "x y")
    assert report["result"]["elements"] == ["a"]


def test_pretty_and_timing():
    status, text = run(["reduce", "--pretty", "K a b"])
    assert status == 0
    assert "term: a" in text and not text.startswith("{")
    status, text = run(["parse", "--timing", "x"])
    assert "wall_time" in json.loads(text)
    assert "wall_time" not in json.loads(run(["parse", "x"])[1])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lamprobe", "reduce", "--fuel", "10", "S a b c"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["term"] == "a c (b c)"
    proc = subprocess.run([sys.executable, "-m", "lamprobe", "parse", "(x"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "" and "LambdaSyntaxError" in proc.stderr
