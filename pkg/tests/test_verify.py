import json
import random

import pytest

from ainfty import gen, verify
from ainfty.swiss_cheese import ClosedConfig, OpenConfig
from ainfty.trees import CLOSED, OPEN, is_normal


@pytest.mark.parametrize("name, cases", [("operad-axioms", 1000), ("sigma-endpoints", 500)])
def test_reference_runs_are_clean(name, cases):
    report = verify.verify(name, 42, cases)
    assert report.ok and report.cases == cases


@pytest.mark.parametrize("name", verify.suite_names())
def test_every_suite_runs(name):
    assert verify.verify(name, 1, 20).ok


def test_reports_are_deterministic():
    a = verify.verify("length", 7, 30, ("length-sign",))
    b = verify.verify("length", 7, 30, ("length-sign",))
    assert not a.ok
    assert a.to_json() == b.to_json()
    assert json.loads(a.to_json())["failures"][0]["minimized"] == a.failures[0].minimized


def test_text_report():
    text = verify.verify("length", 7, 30, ("length-sign",)).to_text(limit=1)
    assert text.splitlines()[0].startswith("suite length seed 7 cases 30 failures")
    assert "minimized:" in text and text.endswith("FAILED")
    assert verify.verify("length", 7, 5).to_text().endswith("OK")


def test_unknown_suite():
    with pytest.raises(verify.UnknownSuite):
        verify.verify("no-such-suite")


def test_counterexample_reproduces():
    report = verify.verify("length", 3, 20, ("length-sign",))
    f = report.failures[0]
    assert verify.reproduce("length", f.minimized, ("length-sign",)) is not None
    assert verify.reproduce("length", f.minimized) is None


def test_encode_decode_round_trip():
    for name in verify.suite_names():
        case = verify.generate_case(name, 5, 0)
        lit = verify.encode(name, case)
        assert verify.encode(name, verify.decode(name, lit)) == lit


def test_generators():
    rng = random.Random(0)
    for _ in range(200):
        t = gen.random_tree(rng, 2, 6)
        assert is_normal(t) and 2 <= t.n_leaves <= 6
        o = gen.open_variant(t)
        assert o.has_open and o.n_leaves == t.n_leaves
        assert isinstance(gen.random_closed_config(rng), ClosedConfig)
        assert isinstance(gen.random_open_config(rng), OpenConfig)
    assert gen.rng_for("a", 1, 2).random() == gen.rng_for("a", 1, 2).random()
    assert gen.rng_for("a", 1, 2).random() != gen.rng_for("a", 1, 3).random()
    assert gen.random_shape(rng, 1, OPEN).color is OPEN
    assert gen.random_shape(rng, 1, CLOSED).color is CLOSED


def test_labeled_tree_counts():
    # each shape contributes labels ** internal-edge count trees
    for n in range(2, 6):
        expected = sum(2 ** s.n_internal for s in gen.all_shapes(n))
        assert len(gen.labeled_trees(n)) == expected
