"""Exact combinatorics of metric trees, A-infinity actions, bar constructions and interval operads."""

from .moore import Path, path_equal
from .rational import Affine
from .trees import (
    DELTA_0,
    DELTA_1,
    LEAF,
    OPEN_LEAF,
    Leaf,
    Node,
    Tree,
    corolla,
    deshift,
    equal_mod,
    format_tree,
    graft,
    normalize,
    parse_tree,
    shift,
)

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "DELTA_0",
    "DELTA_1",
    "LEAF",
    "OPEN_LEAF",
    "Leaf",
    "Node",
    "Path",
    "Tree",
    "corolla",
    "deshift",
    "equal_mod",
    "format_tree",
    "graft",
    "normalize",
    "parse_tree",
    "path_equal",
    "shift",
]
