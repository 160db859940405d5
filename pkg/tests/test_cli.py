import json
import shlex
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO

import pytest

from ainfty import bar
from ainfty.cli import load_action, main, UsageError


def run(line):
    out, err = StringIO(), StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(shlex.split(line))
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize(
    "line, expected",
    [
        ('tree normalize "([0](* *) *)"', "(* * *)"),
        ('tree compose "(* *)" 1 "(* *)"', "([1](* *) *)"),
        ('tree degeneracy "(* *)" 1', "*"),
        ('k length "([1/2](* *) *)"', "3"),
        ("k faces 4", "K_4 f-vector: 5 5 1"),
        ('path lambda "(* * *)" --at 1/2', "(* [1/2](* *))"),
        ('bar retract "[(* * *); g, g, 1]"', "1"),
        ('sc theta "(* * *)"', "cl{[0,1/3],[1/3,2/3],[2/3,1]}"),
        ('sc compose "op{[0,1/3];[2/3,1]}" 2 "op{[0,1/4];[1/2,1]}"', "op{[0,1/3],[2/3,3/4];[5/6,1]}"),
        ('sc rho "op{;[0,1]}" --path "[0,1/2):* [1/2,1):a @1:a"', "[0,1/2):* [1/2,1):a @1:a"),
    ],
)
def test_text_results(line, expected):
    code, out, _ = run(line)
    assert code == 0
    assert out.strip() == expected


def test_json_format():
    code, out, _ = run('k comb "([1/2](* *) *)" --format json')
    assert code == 0
    assert json.loads(out) == {"factors": ["(* *)", "(* *)"], "labels": ["1/2"]}
    code, out, _ = run('path sigma --tree "(* *)" --format json')
    data = json.loads(out)
    assert data["length"] == "2" and len(data["segments"]) == 2


def test_svg_format():
    code, out, _ = run('tree normalize "(* * *)" --format svg')
    assert code == 0 and out.startswith("<svg")
    code, _, err = run('k length "(* *)" --format svg')
    assert code == 2 and "no picture" in err


@pytest.mark.parametrize(
    "line, message",
    [
        ('tree normalize "(* *"', "position"),
        ('tree graft "(* *)" 3 1/2 "(* *)"', "error:"),
        ('bar normalize "[(* *); *, x]"', "error:"),
        ("bar usual-map --element q", "not a monoid element"),
        ("bar retract --monoid missing.json \"[(* *); e, 0]\"", "no such monoid"),
        ("k faces 12", "faces are enumerated"),
        ('sc compose "cl{[0,1]}" 1 "op{;[0,1]}"', "closed"),
    ],
)
def test_user_errors_exit_2(line, message):
    code, _, err = run(line)
    assert code == 2
    assert message in err


def test_bad_arguments_exit_2():
    assert run("no-such-group")[0] == 2
    assert run("verify no-such-suite")[0] == 2


def test_verify_exit_codes():
    code, out, _ = run("verify operad-axioms --cases 20 --seed 1")
    assert code == 0 and out.strip().endswith("OK")
    code, out, _ = run("verify length --mutate length-sign --cases 30")
    assert code == 1 and "minimized" in out


def test_validate_im():
    code, out, _ = run("bar validate-im --max-leaves 3")
    assert code == 0 and out.strip().endswith("OK")


def test_path_eval_round_trip(tmp_path):
    code, out, _ = run('path gamma --tree "(* *)" --format json')
    doc = tmp_path / "g.json"
    doc.write_text(json.dumps(json.loads(out)["segments"]))
    code, out, _ = run(f"path eval {doc} --at 1")
    assert code == 0 and out.strip() == "(* [1](* *))"


def test_load_action(tmp_path):
    assert load_action("z2").elements == ("e", "g")
    f = tmp_path / "rz.json"
    f.write_text(bar.right_zero_action().dumps())
    assert load_action(str(f)).elements == ("e", "a", "b")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(UsageError):
        load_action(str(bad))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ainfty", "tree", "shift", "(* [1/2](* *))"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "([1/2](* *) *)"
