"""Edge-labeled colored planar rooted trees.

A tree is either a :class:`Leaf` (an external edge, colored closed or open)
or a :class:`Node` whose children are ``(label, subtree)`` pairs in planar
order.  The label is ``None`` exactly when the subtree is a leaf; otherwise it
is the length of the internal edge, an exact rational in ``[0, 1]`` (or an
:class:`~ainfty.rational.Affine` when the tree is a path skeleton).

Raw trees are ordinary values.  :func:`normalize` computes the canonical
representative of the metric-tree class: 0-edges contracted, ``delta_0`` stubs
erased and unary vertices removed with the max rule on their edge labels.
"""

from __future__ import annotations

import enum
import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from .rational import Affine, as_rational, format_label, label_at, parse_label


class Color(enum.IntEnum):
    CLOSED = 0
    OPEN = 1

    @property
    def symbol(self) -> str:
        return "*" if self is Color.CLOSED else "o"


CLOSED = Color.CLOSED
OPEN = Color.OPEN


class TreeError(ValueError):
    pass


class Tree:
    __slots__ = ()

    n_leaves: int
    n_internal: int
    has_open: bool

    @property
    def color(self) -> Color:
        return OPEN if self.has_open else CLOSED

    def __str__(self):
        return format_tree(self)


class Leaf(Tree):
    __slots__ = ("leaf_color", "_hash")

    def __init__(self, color: Color = CLOSED):
        self.leaf_color = Color(color)
        self._hash = hash(("leaf", int(self.leaf_color)))

    n_leaves = 1
    n_internal = 0

    @property
    def has_open(self) -> bool:
        return self.leaf_color is OPEN

    def __eq__(self, other):
        return isinstance(other, Leaf) and other.leaf_color is self.leaf_color

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Leaf({self.leaf_color.name})"


class Node(Tree):
    __slots__ = ("children", "n_leaves", "n_internal", "has_open", "_hash")

    def __init__(self, children: Sequence[tuple]):
        kids = []
        n_leaves = 0
        n_internal = 0
        n_open = 0
        for idx, (label, child) in enumerate(children):
            if not isinstance(child, Tree):
                raise TreeError(f"child {idx} is not a tree: {child!r}")
            if isinstance(child, Leaf):
                if label is not None:
                    raise TreeError("external edges carry no label")
            else:
                if label is None:
                    raise TreeError("internal edges need a label")
                if type(label) is not Fraction and not isinstance(label, Affine):
                    label = as_rational(label)
                if type(label) is Fraction:
                    if not 0 <= label.numerator <= label.denominator:
                        raise TreeError(f"edge label {label} outside [0,1]")
                n_internal += 1 + child.n_internal
            if child.has_open:
                n_open += 1
                if idx != len(children) - 1:
                    raise TreeError("the open leaf must be the last leaf")
            n_leaves += child.n_leaves
            kids.append((label, child))
        if n_open > 1:
            raise TreeError("at most one open leaf")
        self.children = tuple(kids)
        self.n_leaves = n_leaves
        self.n_internal = n_internal
        self.has_open = n_open == 1
        self._hash = hash(self.children)

    @classmethod
    def _trusted(cls, kids: list) -> "Node":
        """Build from children already known to satisfy the invariants."""
        node = object.__new__(cls)
        node.children = tuple(kids)
        node.n_leaves = sum(c.n_leaves for _, c in kids)
        node.n_internal = sum(c.n_internal + (lab is not None) for lab, c in kids)
        node.has_open = any(c.has_open for _, c in kids)
        node._hash = hash(node.children)
        return node

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Node)
            and self._hash == other._hash
            and self.children == other.children
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Node({format_tree(self)})"


LEAF = Leaf(CLOSED)
OPEN_LEAF = Leaf(OPEN)
DELTA_0 = Node(())
DELTA_1 = LEAF


def corolla(n: int, color: Color = CLOSED) -> Tree:
    """``delta_n``; for the open color the last of the ``n`` leaves is open."""
    if n < 0:
        raise TreeError("negative arity")
    if color is OPEN:
        if n < 1:
            raise TreeError("an open corolla needs its open leaf")
        if n == 1:
            return OPEN_LEAF
        return Node([(None, LEAF)] * (n - 1) + [(None, OPEN_LEAF)])
    if n == 1:
        return LEAF
    return Node([(None, LEAF)] * n)


def leaf_colors(t: Tree) -> list[Color]:
    if isinstance(t, Leaf):
        return [t.leaf_color]
    out = []
    for _, c in t.children:
        out.extend(leaf_colors(c))
    return out


def is_corolla(t: Tree) -> bool:
    return isinstance(t, Node) and all(isinstance(c, Leaf) for _, c in t.children)


def map_labels(t: Tree, f: Callable) -> Tree:
    if isinstance(t, Leaf):
        return t
    kids = [(None if lab is None else f(lab), map_labels(c, f)) for lab, c in t.children]
    if all(a is lab and b is c for (a, b), (lab, c) in zip(kids, t.children)):
        return t
    return Node(kids)


def at_time(t: Tree, s) -> Tree:
    """Substitute the local time ``s`` into every affine label."""
    return map_labels(t, lambda lab: label_at(lab, s))


def labels(t: Tree) -> list:
    """Internal edge labels in preorder."""
    out = []
    if isinstance(t, Node):
        for lab, c in t.children:
            if lab is not None:
                out.append(lab)
                out.extend(labels(c))
    return out


# ---------------------------------------------------------------- grafting


def graft(t: Tree, i: int, r, s: Tree) -> Tree:
    """``t o_i^r s``: graft the root of ``s`` on leaf ``i`` (1-based) of ``t``.

    The result is raw.  Grafting a bare leaf changes nothing, and grafting
    onto the one-leaf tree returns ``s``; in both cases the label is dropped.
    """
    if not 1 <= i <= t.n_leaves:
        raise TreeError(f"leaf index {i} out of range 1..{t.n_leaves}")
    if not isinstance(r, Affine):
        r = as_rational(r)
        if not 0 <= r <= 1:
            raise TreeError(f"edge label {r} outside [0,1]")
    return _graft(t, i, r, s)


def _graft(t: Tree, i: int, r, s: Tree) -> Tree:
    if isinstance(t, Leaf):
        if t.leaf_color is not s.color:
            raise TreeError(
                f"color mismatch: leaf is {t.leaf_color.name}, root is {s.color.name}"
            )
        return s
    kids = list(t.children)
    for idx, (lab, c) in enumerate(kids):
        if i <= c.n_leaves:
            if isinstance(c, Leaf):
                if c.leaf_color is not s.color:
                    raise TreeError(
                        f"color mismatch: leaf is {c.leaf_color.name}, "
                        f"root is {s.color.name}"
                    )
                kids[idx] = (None, s) if isinstance(s, Leaf) else (r, s)
            else:
                kids[idx] = (lab, _graft(c, i, r, s))
            return Node(kids)
        i -= c.n_leaves
    raise AssertionError("unreachable")


# ----------------------------------------------------------- normalization


@lru_cache(maxsize=1 << 16)
def normalize(t: Tree) -> Tree:
    """Canonical representative of the class of ``t`` in the metric-tree space."""
    out, _ = _norm(t)
    return out


def _norm(t: Tree):
    # Returns (tree, carry); carry is the label of the surviving edge when the
    # root vertex of t turned unary and was removed.
    if isinstance(t, Leaf):
        return t, None
    out = []
    changed = False
    for lab, c in t.children:
        c2, carry = _norm(c)
        if isinstance(c2, Leaf):
            changed = changed or c2 is not c
            out.append((None, c2))
            continue
        if not c2.children:
            changed = True
            continue
        if isinstance(lab, Affine) or isinstance(carry, Affine):
            raise TreeError("cannot normalize a tree with affine labels")
        if carry is not None and carry > lab:
            lab = carry
        if lab == 0:
            changed = True
            out.extend(c2.children)
        else:
            changed = changed or c2 is not c or carry is not None
            out.append((lab, c2))
    if len(out) == 1:
        lab, c = out[0]
        return c, lab
    if not changed:
        return t, None
    return Node._trusted(out), None


def equal_mod(t: Tree, s: Tree) -> bool:
    return normalize(t) == normalize(s)


def is_normal(t: Tree) -> bool:
    return normalize(t) == t


# ------------------------------------------------------------ local rewriting
#
# Single rewrite steps addressed by node paths (tuples of child indices).  The
# recursive normalize above is the canonical strategy; these exist so that
# arbitrary rewrite schedules can be compared against it.


def subtree_at(t: Tree, path: tuple) -> Tree:
    for k in path:
        t = t.children[k][1]
    return t


def replace_children(t: Tree, path: tuple, new_kids_fn) -> Tree:
    """Rebuild ``t`` with the child list of the node at ``path`` transformed."""
    if not path:
        return new_kids_fn(list(t.children))
    k = path[0]
    kids = list(t.children)
    lab, c = kids[k]
    kids[k] = (lab, replace_children(c, path[1:], new_kids_fn))
    return Node(kids)


def _wrap(kids):
    return Node(kids)


def rewrite_sites(t: Tree) -> list[tuple]:
    sites = []

    def walk(node, path, is_root):
        if isinstance(node, Leaf):
            return
        if len(node.children) == 1:
            sites.append(("unary", path))
        for k, (lab, c) in enumerate(node.children):
            if isinstance(c, Node):
                if not c.children:
                    sites.append(("stub", path + (k,)))
                elif lab == 0:
                    sites.append(("collapse", path + (k,)))
                walk(c, path + (k,), False)

    walk(t, (), True)
    return sites


def rewrite_step(t: Tree, site: tuple) -> Tree:
    kind, path = site
    if kind == "unary":
        node = subtree_at(t, path)
        (beta, child), = node.children
        if not path:
            return child
        parent, k = path[:-1], path[-1]

        def fix(kids):
            alpha, _ = kids[k]
            if isinstance(child, Leaf):
                kids[k] = (None, child)
            else:
                kids[k] = (max(alpha, beta), child)
            return _wrap(kids)

        return replace_children(t, parent, fix)
    parent, k = path[:-1], path[-1]
    if kind == "stub":
        def fix(kids):
            del kids[k]
            return _wrap(kids)
        return replace_children(t, parent, fix)
    if kind == "collapse":
        def fix(kids):
            _, c = kids[k]
            kids[k:k + 1] = list(c.children)
            return _wrap(kids)
        return replace_children(t, parent, fix)
    raise ValueError(f"unknown rewrite {kind!r}")


def normalize_randomly(t: Tree, rng: random.Random) -> Tree:
    """Normalize by firing randomly chosen local rewrites until none apply."""
    while True:
        sites = rewrite_sites(t)
        if not sites:
            return t
        t = rewrite_step(t, rng.choice(sites))


# ------------------------------------------------------------ shift, deshift


def deshift(t: Tree) -> Tree:
    """Re-root at the first leaf; the old root becomes the last leaf."""
    t = normalize(t)
    if t.has_open:
        raise TreeError("deshift is defined on closed trees only")
    if t.n_leaves < 1:
        raise TreeError("deshift needs at least one leaf")
    return _deshift(t)


def _deshift(t: Tree) -> Tree:
    if isinstance(t, Leaf):
        return t
    (e1, c1), rest = t.children[0], list(t.children[1:])
    rotated = Node(rest + [(None, LEAF)])
    if isinstance(c1, Leaf):
        return rotated
    inner = _deshift(c1)
    return _graft(inner, inner.n_leaves, e1, rotated)


def shift(t: Tree) -> Tree:
    """Re-root at the last leaf; the old root becomes the first leaf."""
    t = normalize(t)
    if t.has_open:
        raise TreeError("shift is defined on closed trees only")
    if t.n_leaves < 1:
        raise TreeError("shift needs at least one leaf")
    return _shift(t)


def _shift(t: Tree) -> Tree:
    if isinstance(t, Leaf):
        return t
    rest, (ek, ck) = list(t.children[:-1]), t.children[-1]
    rotated = Node([(None, LEAF)] + rest)
    if isinstance(ck, Leaf):
        return rotated
    inner = _shift(ck)
    return _graft(inner, 1, ek, rotated)


def degeneracy(t: Tree, i: int) -> Tree:
    """``s_i(t)``: erase leaf ``i`` by grafting ``delta_0`` and normalizing."""
    if not 1 <= i <= t.n_leaves:
        raise TreeError(f"leaf index {i} out of range 1..{t.n_leaves}")
    if leaf_colors(t)[i - 1] is not CLOSED:
        raise TreeError("only closed leaves can be erased")
    return normalize(graft(t, i, 1, DELTA_0))


# ------------------------------------------------------------------ literals


def format_tree(t: Tree, with_labels: bool = True) -> str:
    if isinstance(t, Leaf):
        return t.leaf_color.symbol
    parts = []
    for lab, c in t.children:
        if lab is not None and with_labels:
            parts.append(f"[{format_label(lab)}]{format_tree(c, with_labels)}")
        else:
            parts.append(format_tree(c, with_labels))
    return "(" + " ".join(parts) + ")"


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class _TreeParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def fail(self, msg):
        raise TreeSyntaxError(msg, self.text, self.pos)

    def tree(self) -> Tree:
        ch = self.peek()
        if ch == "*":
            self.pos += 1
            return LEAF
        if ch == "o":
            self.pos += 1
            return OPEN_LEAF
        if ch == "(":
            start = self.pos
            self.pos += 1
            kids = []
            while self.peek() not in (")", None):
                kids.append(self.child())
            if self.peek() is None:
                self.fail("unclosed '('")
            self.pos += 1
            try:
                return Node(kids)
            except TreeError as exc:
                raise TreeSyntaxError(str(exc), self.text, start) from None
        self.fail("expected '*', 'o' or '('")

    def child(self):
        if self.peek() == "[":
            start = self.pos
            end = self.text.find("]", self.pos)
            if end < 0:
                self.fail("unclosed '['")
            try:
                lab = parse_label(self.text[self.pos + 1:end])
            except ValueError as exc:
                raise TreeSyntaxError(str(exc), self.text, start) from None
            self.pos = end + 1
            sub = self.tree()
            if isinstance(sub, Leaf):
                raise TreeSyntaxError("a leaf edge cannot carry a label", self.text, start)
            return (lab, sub)
        sub = self.tree()
        # an unlabeled internal edge is the operad composition, length 1
        return (None, sub) if isinstance(sub, Leaf) else (Fraction(1), sub)


def parse_tree(text: str) -> Tree:
    p = _TreeParser(text)
    t = p.tree()
    if p.peek() is not None:
        p.fail("trailing input")
    return t


def leaf_index_paths(t: Tree) -> Iterator[tuple]:
    """Node paths of the parents of each leaf, in leaf order, with child slot."""
    if isinstance(t, Leaf):
        return
    for k, (lab, c) in enumerate(t.children):
        if isinstance(c, Leaf):
            yield ((), k)
        else:
            for p, slot in leaf_index_paths(c):
                yield ((k,) + p, slot)
