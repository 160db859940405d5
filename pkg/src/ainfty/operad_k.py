"""The associahedra operad K and the two-colored operad of A-infinity actions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .trees import (
    CLOSED,
    DELTA_0,
    LEAF,
    OPEN,
    OPEN_LEAF,
    Leaf,
    Node,
    Tree,
    TreeError,
    graft,
    leaf_colors,
    normalize,
)

ONE = Fraction(1)

MAX_FACE_ARITY = 9


def compose_k(t: Tree, i: int, s: Tree) -> Tree:
    """Operad composition in K: graft at label 1, then normalize."""
    return normalize(graft(t, i, ONE, s))


def as_k_point(t: Tree) -> Tree:
    t = normalize(t)
    if t.has_open:
        raise TreeError("points of K are closed trees")
    return t


# ------------------------------------------------------------------- combs


@dataclass(frozen=True)
class CombDecomposition:
    """``T = T_{k+1} o_1^{u_k} ... o_1^{u_1} T_1``; ``factors[0]`` is ``T_1``."""

    factors: tuple
    labels: tuple

    @property
    def k(self) -> int:
        return len(self.labels)

    def right(self, i: int) -> Tree:
        """``R_i = T_{k+1} o_1^{u_k} ... o_1^{u_{i+1}} T_{i+1}``."""
        out = self.factors[-1]
        for j in range(self.k, i, -1):
            out = _graft_comb(out, self.labels[j - 1], self.factors[j - 1])
        return out

    def left(self, i: int) -> Tree:
        """``L_i = T_i o_1^{u_{i-1}} ... o_1^{u_1} T_1``."""
        out = self.factors[0]
        for j in range(1, i):
            out = graft(self.factors[j], 1, self.labels[j - 1], out)
        return out

    def recompose(self) -> Tree:
        return self.right(0)


def _graft_comb(top: Tree, u, factor: Tree) -> Tree:
    # append a lower factor below the first leaf of the partial comb
    return graft(top, 1, u, factor)


@lru_cache(maxsize=1 << 14)
def comb_decompose(t: Tree) -> CombDecomposition:
    t = normalize(t)
    spine = []
    labels = []
    node = t
    while isinstance(node, Node) and node.children and isinstance(node.children[0][1], Node):
        u, below = node.children[0]
        spine.append(Node([(None, LEAF)] + list(node.children[1:])))
        labels.append(u)
        node = below
    spine.append(node)
    # spine runs root first; factors are listed top (first leaf) first
    return CombDecomposition(tuple(reversed(spine)), tuple(reversed(labels)))


@lru_cache(maxsize=1 << 14)
def length(t: Tree) -> Fraction:
    """``l(T) = 2(1 + sum of comb labels)``, with ``l(delta_1) = 0``."""
    t = normalize(t)
    if isinstance(t, Leaf):
        return Fraction(0)
    return 2 * (1 + sum(comb_decompose(t).labels, Fraction(0)))


def length_i(t: Tree, i: int) -> Fraction:
    """``l_i(T) = 1 + 2 sum_{k<i} u_k + u_i``."""
    labels = comb_decompose(t).labels
    if not 1 <= i <= len(labels):
        raise IndexError(f"comb index {i} out of range 1..{len(labels)}")
    return 1 + 2 * sum(labels[: i - 1], Fraction(0)) + labels[i - 1]


# ------------------------------------------------------------------- faces


def _shape(kids):
    return Node([(None if isinstance(c, Leaf) else ONE, c) for c in kids])


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    if n == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(n):
        for kids in _products([_shapes(p) for p in parts]):
            out.append(_shape(kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(n: int) -> tuple:
    """Compositions of ``n`` into at least two positive parts."""
    out = []

    def rec(rest, acc):
        if rest == 0:
            if len(acc) >= 2:
                out.append(tuple(acc))
            return
        for p in range(1, rest + 1):
            if not acc and p == n:
                continue
            acc.append(p)
            rec(rest - p, acc)
            acc.pop()

    rec(n, [])
    return tuple(out)


def _products(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _products(pools[1:]):
            yield (head,) + tail


def face_dimension(shape: Tree) -> int:
    return shape.n_leaves - 2 - shape.n_internal


def enumerate_faces(n: int) -> list[Tree]:
    """All faces of ``K_n`` as label-free shapes (internal edges printed bare)."""
    if not 2 <= n <= MAX_FACE_ARITY:
        raise ValueError(f"face enumeration supports 2 <= n <= {MAX_FACE_ARITY}")
    return list(_shapes(n))


def f_vector(n: int) -> tuple:
    counts = [0] * (n - 1)
    for s in enumerate_faces(n):
        counts[face_dimension(s)] += 1
    return tuple(counts)


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


# ---------------------------------------------------------------- Act-infinity


def signature(t: Tree) -> tuple:
    """``(p, q)``: numbers of closed and open leaves."""
    colors = leaf_colors(t) if t.n_leaves else []
    q = sum(1 for c in colors if c is OPEN)
    return (len(colors) - q, q)


class ActInftyOperad:
    """Metric colored trees with at most one open leaf, placed last.

    With ``unital=False`` the arity-zero closed point ``delta_0`` is excluded,
    giving the non-unital variant.
    """

    def __init__(self, unital: bool = True):
        self.unital = unital

    def contains(self, t: Tree) -> bool:
        t = normalize(t)
        if t == DELTA_0 or (isinstance(t, Node) and t.n_leaves == 0):
            return self.unital
        return True

    def point(self, t: Tree) -> Tree:
        t = normalize(t)
        if not self.contains(t):
            raise TreeError("delta_0 is not part of the non-unital operad")
        return t

    def identity(self, color=CLOSED) -> Tree:
        return OPEN_LEAF if color is OPEN else LEAF

    def compose(self, t: Tree, i: int, s: Tree, r=ONE) -> Tree:
        t, s = self.point(t), self.point(s)
        p, q = signature(t)
        if s.has_open and not (q == 1 and i == p + 1):
            raise TreeError("an open output only grafts into the open slot p+1")
        return normalize(graft(t, i, r, s))


def apply_discrete(t: Tree, xs: Sequence, monoid) -> object:
    """``M_n(T; xs)`` for a discrete monoid: the ordered product, tree-independent."""
    t = normalize(t)
    if t.n_leaves != len(xs):
        raise ValueError(f"arity mismatch: {t.n_leaves} leaves, {len(xs)} labels")
    return monoid.product(xs)
