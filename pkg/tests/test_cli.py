import json

import pytest
from click.testing import CliRunner

from dtlkit.cli import main


def run(*args, input=None):
    return CliRunner().invoke(main, list(args), input=input)


def test_homdim_example():
    res = run("homdim", "1", "3")
    assert res.exit_code == 0
    assert json.loads(res.output) == {"2": "1", "4": "1"}


def test_kirby_pol_example():
    res = run("kirby-pol", "0", "2")
    assert res.exit_code == 0
    assert json.loads(res.output) == {"0": "1", "-2": "1", "-4": "1"}


def test_kh_unknot_example(tmp_path):
    path = tmp_path / "unknot.pd"
    path.write_text("LOOP 1\n")
    res = run("kh", str(path))
    assert res.exit_code == 0
    assert json.loads(res.output) == {"0": {"1": "1", "-1": "1"}}
    # bundled diagrams are found by name too
    assert run("kh", "unknot.pd").output == res.output


def test_kh_routes_agree():
    assert run("kh", "figure_eight").output == run("kh", "figure_eight", "--route", "cube").output


def test_output_is_byte_stable():
    first = run("colored-kh", "trefoil", "--color", "jw:2").output
    assert first == run("colored-kh", "trefoil", "--color", "jw:2").output


def test_colored_kirby_unknot():
    res = run("colored-kh", "unknot", "--color", "kirby:0", "--level", "3")
    assert json.loads(res.output) == {"0": {"0": "1", "-2": "1", "-4": "1", "-6": "1"}}
    both = json.loads(run("colored-kh", "unknot", "--color", "kirby", "--level", "1").output)
    assert set(both) == {"w0@1", "w1@1"}


def test_text_format_in_either_position():
    a = run("--format", "text", "kh", "trefoil").output
    b = run("kh", "trefoil", "--format", "text").output
    assert a == b
    assert "h=3: q^9" in a


def test_reduce_and_pol_from_word():
    res = run("reduce", "--word", "cup1 cap1", "--from", "0")
    assert json.loads(res.output)["terms"] == ["2 * 0 0 ;"]
    res = run("pol", "--word", "cup1", "--from", "0")
    data = json.loads(res.output)
    assert [lbl for lbl, _ in data["codomain"]] == ["1", "x1", "x2", "x1*x2"]


def test_reduce_from_stdin():
    res = run("reduce", "-", input="1 1 ; arc(B1,T1,1)\n")
    assert res.exit_code == 0
    assert json.loads(res.output)["degrees"] == [2]


def test_parse_errors_report_position():
    res = run("reduce", "-", input="1 1 ; arc(B1,T1,0)\n1 1 ; arc(B1,T9,0)\n")
    assert res.exit_code == 2
    assert "line 2" in res.output


def test_bound_violation_echoes_the_limit():
    res = run("jw", "12")
    assert res.exit_code == 2
    assert "n<=8" in res.output


def test_missing_diagram():
    res = run("kh", "no_such_knot")
    assert res.exit_code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "jwrels", "--max-n", "3"],
        ["verify", "karrels", "--max-n", "3"],
        ["verify", "oracle", "--max-n", "4", "--seed", "7"],
        ["handle-slide", "1", "R", "2"],
        ["kirby-square", "0", "1", "2"],
        ["kirby-end", "1", "3"],
        ["kdtl", "verify", "--suite", "decomp", "--level", "2"],
        ["verify-all", "--suite", "kirby", "--suite", "homtables", "--level", "2", "--max-n", "3"],
    ],
)
def test_check_commands_pass(args):
    res = run(*args)
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["status"] == "pass"


def test_failure_witness_is_reported():
    from dtlkit.karoubi import Check
    from dtlkit.suites import Report

    rep = Report("demo", [Check("always fails", {"n": 3}, False)])
    data = rep.to_json()
    assert data["status"] == "fail"
    assert data["checks"][0]["witness"] == {"n": 3}
