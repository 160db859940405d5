"""Seeded generators for trees, labels and step paths."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .operad_k import _shapes
from .trees import CLOSED, DELTA_0, LEAF, OPEN, OPEN_LEAF, Leaf, Node, Tree, map_labels, normalize

DENOMINATORS = (1, 2, 3, 4, 5, 6, 8, 12)
DEFAULT_MAX_LEAVES = 7


def rng_for(suite: str, seed: int, index: int) -> random.Random:
    """Independent stream per (suite, seed, case); string seeds hash deterministically."""
    return random.Random(f"{suite}:{seed}:{index}")


def random_label(rng: random.Random, allow_zero: bool = False) -> Fraction:
    d = rng.choice(DENOMINATORS)
    lo = 0 if allow_zero else 1
    return Fraction(rng.randint(lo, d), d)


def random_shape(rng: random.Random, n: int, color=CLOSED) -> Tree:
    """A uniformly split planar tree with ``n`` leaves, all vertices of arity >= 2."""
    if n == 1:
        return OPEN_LEAF if color is OPEN else LEAF
    k = rng.randint(2, n)
    cuts = sorted(rng.sample(range(1, n), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    kids = []
    for idx, p in enumerate(parts):
        c = color if idx == len(parts) - 1 else CLOSED
        sub = random_shape(rng, p, c)
        kids.append((None if isinstance(sub, Leaf) else Fraction(1), sub))
    return Node(kids)


def random_tree(
    rng: random.Random,
    min_leaves: int = 1,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    color=CLOSED,
) -> Tree:
    """A normal-form metric tree with random rational labels in ``(0, 1]``."""
    n = rng.randint(min_leaves, max_leaves)
    shape = random_shape(rng, n, color)
    return map_labels(shape, lambda _: random_label(rng))


def random_raw_tree(rng: random.Random, max_leaves: int = 6, depth: int = 3) -> Tree:
    """A raw tree: 0 labels, stubs and unary vertices all allowed."""
    if depth == 0 or max_leaves <= 1 or rng.random() < 0.25:
        return LEAF
    k = rng.randint(1, 3)
    kids = []
    budget = max_leaves
    for _ in range(k):
        roll = rng.random()
        if roll < 0.15:
            kids.append((random_label(rng, allow_zero=True), DELTA_0))
        elif roll < 0.55 or budget <= 1:
            kids.append((None, LEAF))
            budget -= 1
        else:
            sub = random_raw_tree(rng, max(1, budget - 1), depth - 1)
            if isinstance(sub, Leaf):
                kids.append((None, sub))
            else:
                kids.append((random_label(rng, allow_zero=True), sub))
            budget -= max(1, sub.n_leaves)
    return Node(kids)


def all_shapes(n: int) -> tuple:
    return _shapes(n)


def labeled_trees(n: int, labels: Sequence = (Fraction(1, 2), Fraction(1))) -> list:
    """Every shape with ``n`` leaves, each internal edge ranging over ``labels``."""
    import itertools

    out = []
    for shape in _shapes(n):
        for combo in itertools.product(labels, repeat=shape.n_internal):
            it = iter(combo)
            out.append(map_labels(shape, lambda _: next(it)))
    return out


def open_variant(t: Tree) -> Tree:
    """Recolor the last leaf of a closed tree as open."""
    if isinstance(t, Leaf):
        return OPEN_LEAF
    kids = list(t.children)
    lab, last = kids[-1]
    kids[-1] = (lab, open_variant(last))
    return Node(kids)


def random_word(rng: random.Random, elements: Sequence, n: int) -> tuple:
    return tuple(rng.choice(elements) for _ in range(n))


def _grid_points(rng: random.Random, count: int, grid: int = 12) -> list:
    # sorted, repeats allowed so that neighbouring intervals may touch
    return sorted(Fraction(rng.randint(0, grid), grid) for _ in range(count))


def random_intervals(rng: random.Random, n: int, grid: int = 12) -> list:
    """``n`` ordered little intervals with rational endpoints."""
    while True:
        pts = _grid_points(rng, 2 * n, grid)
        ivs = [(pts[2 * k], pts[2 * k + 1]) for k in range(n)]
        if all(a < b for a, b in ivs):
            return ivs


def random_closed_config(rng: random.Random, max_arity: int = 4):
    from .swiss_cheese import ClosedConfig

    return ClosedConfig(tuple(random_intervals(rng, rng.randint(1, max_arity))))


def random_open_config(rng: random.Random, max_closed: int = 3, distinguished: bool = True):
    from .swiss_cheese import OpenConfig

    k = rng.randint(0, max_closed)
    ivs = random_intervals(rng, k + (1 if distinguished else 0))
    dist = None
    if distinguished:
        a, _ = ivs.pop()
        dist = (a, Fraction(1))
    return OpenConfig(tuple(ivs), dist)


def random_step_path(rng: random.Random, values: Sequence, base, max_pieces: int = 3, end=None):
    """A step path starting at ``base``; it ends at ``end`` (``base`` when omitted)."""
    from .swiss_cheese import PCPath

    m = rng.randint(1, max_pieces)
    cuts = sorted(set(Fraction(rng.randint(1, 11), 12) for _ in range(m - 1)))
    breaks = [Fraction(0)] + cuts + [Fraction(1)]
    vals = [base] + [rng.choice(values) for _ in range(len(breaks) - 2)]
    return PCPath(tuple(breaks), tuple(vals), base if end is None else end)


__all__ = [
    "rng_for",
    "random_label",
    "random_shape",
    "random_tree",
    "random_raw_tree",
    "all_shapes",
    "labeled_trees",
    "open_variant",
    "random_word",
    "random_intervals",
    "random_closed_config",
    "random_open_config",
    "random_step_path",
    "normalize",
]
