import xml.etree.ElementTree as ET

import pytest

from ainfty.svg import render, render_path_snapshot
from ainfty.paths import sigma
from ainfty.swiss_cheese import parse_config, theta
from ainfty.trees import corolla, parse_tree

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def test_tree_has_one_line_per_leaf():
    doc = parse(render(corolla(3)))
    leaves = [e for e in doc.iter(NS + "line") if e.get("class") == "leaf"]
    assert len(leaves) == 3


def test_theta_image_boxes():
    doc = parse(render(theta(corolla(3))))
    boxes = [e for e in doc.iter(NS + "rect") if e.get("class") == "closed"]
    assert len(boxes) == 3


def test_open_config_marks_distinguished():
    doc = parse(render(parse_config("op{[0,1/2];[1/2,1]}")))
    classes = [e.get("class") for e in doc.iter(NS + "rect")]
    assert classes.count("distinguished") == 1


def test_output_is_deterministic():
    t = parse_tree("([1/2](* *) * o)")
    assert render(t) == render(t)


def test_snapshot_and_labels():
    svg = render_path_snapshot(sigma(corolla(2)), [0, 1, 2])
    captions = [e.text for e in parse(svg).iter(NS + "text") if e.text.startswith("t=")]
    assert captions == ["t=0", "t=1", "t=2"]


def test_render_rejects_other_objects():
    with pytest.raises(TypeError):
        render(42)
