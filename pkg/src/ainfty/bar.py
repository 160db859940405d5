"""Two-sided bar constructions over finite discrete monoids.

An element ``[T; q, x_1, ..., x_n, p]`` is a metric tree with ``n + 2``
leaves whose first leaf carries a label from the right space ``Q``, the last
one a label from the left space ``P`` and the middle ones monoid elements.
With discrete inputs the structure maps are the ordered product ``M``, the
action ``N`` (product, then act) and the right action ``R``; all of them are
independent of the tree, which makes every identification decidable:

* 0-labeled edges collapse as in the associahedra;
* an edge of length 1 evaluates its whole subtree to a single label;
* a unit label in a middle slot is erased by a degeneracy.

The cone ``CP`` has its apex at height 0 and ``P`` embedded at height 1.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import trees
from .moore import Path, Segment, juxtapose, reverse, rescale
from .operad_k import length
from .paths import DELTA_2, gamma, lambda_path, sigma
from .rational import Affine, as_rational, format_label, label_at, parse_label
from .trees import (
    DELTA_0,
    LEAF,
    Leaf,
    Node,
    Tree,
    corolla,
    deshift,
    graft,
    shift,
)

ONE = Fraction(1)


class BarError(ValueError):
    pass


class ActionError(ValueError):
    pass


# --------------------------------------------------------------- labels


class _Star:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


class _Apex:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "apex"

    def __reduce__(self):
        return (_Apex, ())


STAR = _Star()
APEX = _Apex()


@dataclass(frozen=True)
class ConePoint:
    """``[p, h]`` in the unreduced cone; height 0 is the apex."""

    base: object
    height: object

    def __str__(self):
        return f"[{self.base},{format_label(self.height)}]"


def cone_point(base, height):
    height = as_rational(height) if not isinstance(height, Affine) else height
    if not isinstance(height, Affine) and height == 0:
        return APEX
    return ConePoint(base, height)


# -------------------------------------------------------------- actions


class FiniteAction:
    """A finite monoid with optional finite left and right action sets.

    ``mul[x][y]`` is the product ``xy``; ``left_action[x][p]`` is ``x.p``;
    ``right_action[q][x]`` is ``q.x``.  All axioms are checked exhaustively
    unless ``verify=False`` (used to build deliberately broken examples).
    """

    def __init__(
        self,
        elements: Sequence,
        unit,
        mul: dict,
        left_set: Sequence = (),
        left_action: Optional[dict] = None,
        right_set: Sequence = (),
        right_action: Optional[dict] = None,
        basepoint=None,
        verify: bool = True,
    ):
        self.elements = tuple(elements)
        self.unit = unit
        self.mul = {x: dict(row) for x, row in mul.items()}
        self.left_set = tuple(left_set)
        self.left_action = {x: dict(row) for x, row in (left_action or {}).items()}
        self.right_set = tuple(right_set)
        self.right_action = {q: dict(row) for q, row in (right_action or {}).items()}
        if basepoint is None and self.left_set:
            basepoint = self.left_set[0]
        self.basepoint = basepoint
        if verify:
            self.check()

    # -- structure
    def product(self, xs: Iterable):
        out = self.unit
        for x in xs:
            out = self.mul[out][x]
        return out

    def act(self, x, p):
        return self.left_action[x][p]

    def ract(self, q, x):
        return self.right_action[q][x]

    # -- axioms
    def violations(self) -> list[str]:
        out = []
        els = self.elements
        if self.unit not in els:
            out.append(f"unit {self.unit!r} is not an element")
            return out
        for x in els:
            for y in els:
                if self.mul.get(x, {}).get(y) not in els:
                    out.append(f"product {x}*{y} undefined or outside the monoid")
        if out:
            return out
        for x in els:
            if self.mul[self.unit][x] != x or self.mul[x][self.unit] != x:
                out.append(f"unit law fails at {x}")
        for x, y, z in itertools.product(els, repeat=3):
            if self.mul[self.mul[x][y]][z] != self.mul[x][self.mul[y][z]]:
                out.append(f"associativity fails at ({x},{y},{z})")
        if self.left_set:
            for x in els:
                for p in self.left_set:
                    if self.left_action.get(x, {}).get(p) not in self.left_set:
                        out.append(f"left action {x}.{p} undefined")
            if not out:
                for p in self.left_set:
                    if self.act(self.unit, p) != p:
                        out.append(f"unit does not fix {p}")
                for x, y, p in itertools.product(els, els, self.left_set):
                    if self.act(self.mul[x][y], p) != self.act(x, self.act(y, p)):
                        out.append(f"left action not associative at ({x},{y},{p})")
            if self.basepoint not in self.left_set:
                out.append(f"basepoint {self.basepoint!r} not in the left set")
        if self.right_set:
            for q in self.right_set:
                for x in els:
                    if self.right_action.get(q, {}).get(x) not in self.right_set:
                        out.append(f"right action {q}.{x} undefined")
            if not out:
                for q in self.right_set:
                    if self.ract(q, self.unit) != q:
                        out.append(f"unit does not fix {q}")
                for q, x, y in itertools.product(self.right_set, els, els):
                    if self.ract(q, self.mul[x][y]) != self.ract(self.ract(q, x), y):
                        out.append(f"right action not associative at ({q},{x},{y})")
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise ActionError("; ".join(bad[:5]))

    # -- file format
    def to_dict(self) -> dict:
        els = list(self.elements)
        doc = {
            "elements": els,
            "unit": self.unit,
            "mul": [[self.mul[x][y] for y in els] for x in els],
        }
        if self.left_set:
            doc["left_set"] = list(self.left_set)
            doc["left_action"] = [[self.act(x, p) for p in self.left_set] for x in els]
            doc["basepoint"] = self.basepoint
        if self.right_set:
            doc["right_set"] = list(self.right_set)
            doc["right_action"] = [[self.ract(q, x) for x in els] for q in self.right_set]
        return doc

    @classmethod
    def from_dict(cls, doc: dict, verify: bool = True) -> "FiniteAction":
        try:
            els = list(doc["elements"])
            mul = {x: dict(zip(els, row)) for x, row in zip(els, doc["mul"])}
            left = list(doc.get("left_set", []))
            left_action = {x: dict(zip(left, row)) for x, row in zip(els, doc.get("left_action", []))}
            right = list(doc.get("right_set", []))
            right_action = {q: dict(zip(els, row)) for q, row in zip(right, doc.get("right_action", []))}
            unit = doc["unit"]
        except (KeyError, TypeError) as exc:
            raise ActionError(f"malformed action document: {exc}") from None
        return cls(els, unit, mul, left, left_action, right, right_action, doc.get("basepoint"), verify)

    @classmethod
    def load(cls, path: str, verify: bool = True) -> "FiniteAction":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), verify)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self):
        return f"FiniteAction(elements={list(self.elements)}, left_set={list(self.left_set)})"


def cyclic_action(n: int = 2) -> FiniteAction:
    """``Z/n`` acting on itself by translation on both sides."""
    els = ["e"] + [f"g{k}" if n > 2 else "g" for k in range(1, n)]
    pts = [str(k) for k in range(n)]
    mul = {els[a]: {els[b]: els[(a + b) % n] for b in range(n)} for a in range(n)}
    left = {els[a]: {pts[b]: pts[(a + b) % n] for b in range(n)} for a in range(n)}
    right = {pts[b]: {els[a]: pts[(a + b) % n] for a in range(n)} for b in range(n)}
    return FiniteAction(els, "e", mul, pts, left, pts, right, basepoint="0")


def right_zero_action() -> FiniteAction:
    """``{e, a, b}`` with ``xy = y`` for ``x, y`` in ``{a, b}``, acting on itself."""
    els = ["e", "a", "b"]
    mul = {x: {y: (x if y == "e" else y) for y in els} for x in els}
    # the regular representations
    left = {x: {p: mul[x][p] for p in els} for x in els}
    right = {q: {x: mul[q][x] for x in els} for q in els}
    return FiniteAction(els, "e", mul, els, left, els, right, basepoint="e")


# -------------------------------------------------------------- elements


@dataclass(frozen=True)
class BarElement:
    tree: Tree
    labels: tuple

    def __post_init__(self):
        if self.tree.has_open:
            raise BarError("bar trees are closed")
        if self.tree.n_leaves != len(self.labels):
            raise BarError(
                f"label count {len(self.labels)} does not match {self.tree.n_leaves} leaves"
            )
        if len(self.labels) < 2:
            raise BarError("bar elements have at least two leaves")

    @property
    def middle(self) -> tuple:
        return self.labels[1:-1]


def element(tree, *labels) -> BarElement:
    if isinstance(tree, str):
        tree = trees.parse_tree(tree)
    return BarElement(tree, tuple(labels))


KINDS = ("star", "monoid", "set", "cone")


class BarContext:
    """``B(Q, X, P)`` for chosen outer spaces.

    ``right`` is the first-leaf space (``star``, ``monoid`` or ``set`` for the
    action's right set); ``left`` is the last-leaf space (``star``, ``monoid``,
    ``set`` or ``cone``).  A context doubles as a path space for :mod:`moore`.
    """

    name = "bar"

    def __init__(self, action: FiniteAction, right: str = "star", left: str = "star"):
        if right not in ("star", "monoid", "set") or left not in KINDS:
            raise BarError(f"unsupported context B({right}, X, {left})")
        if left in ("set", "cone") and not action.left_set:
            raise BarError("this context needs a left action set")
        if right == "set" and not action.right_set:
            raise BarError("this context needs a right action set")
        self.action = action
        self.right = right
        self.left = left
        self._flows: dict = {}

    def __repr__(self):
        return f"B({self.right},X,{self.left})"

    # -- structure maps (tree independent)
    def M(self, xs):
        return self.action.product(xs)

    def R(self, q, xs):
        if self.right == "star":
            return STAR
        if self.right == "monoid":
            return self.action.product([q, *xs])
        return self.action.ract(q, self.action.product(xs))

    def N(self, xs, p):
        x = self.action.product(xs)
        if self.left == "star":
            return STAR
        if self.left == "monoid":
            return self.action.product([x, p])
        if self.left == "set":
            return self.action.act(x, p)
        if p is APEX:
            return APEX
        return ConePoint(self.action.act(x, p.base), p.height)

    def evaluate(self, labels: Sequence, start: int, total: int):
        """``E`` applied to the labels of a subtree spanning ``start..``."""
        if start == 0:
            return self.R(labels[0], labels[1:])
        if start + len(labels) == total:
            return self.N(labels[:-1], labels[-1])
        return self.M(labels)

    # -- points
    def rest_label(self, kind):
        return {"star": STAR, "monoid": self.action.unit}.get(kind)

    def basepoint(self) -> BarElement:
        q = STAR if self.right == "star" else None
        p = STAR if self.left == "star" else APEX if self.left == "cone" else None
        if q is None or p is None:
            raise BarError(f"{self!r} has no distinguished basepoint")
        return BarElement(DELTA_2, (q, p))

    def check_labels(self, el: BarElement) -> None:
        els = self.action.elements
        for x in el.middle:
            if x not in els:
                raise BarError(f"{x!r} is not a monoid element")
        self._check_outer(el.labels[0], self.right, "first")
        self._check_outer(el.labels[-1], self.left, "last")

    def _check_outer(self, lab, kind, where):
        ok = {
            "star": lambda v: v is STAR,
            "monoid": lambda v: v in self.action.elements,
            "set": lambda v: v in (self.action.left_set if where == "last" else self.action.right_set),
            "cone": lambda v: v is APEX
            or (isinstance(v, ConePoint) and v.base in self.action.left_set),
        }[kind]
        if not ok(lab):
            raise BarError(f"{lab!r} is not a valid {where} label for {self!r}")

    # -- normal form
    def normalize(self, el: BarElement) -> BarElement:
        tree, labels = el.tree, list(el.labels)
        labels = [self._norm_label(v) for v in labels]
        while True:
            tree = trees.normalize(tree)
            tree, labels = self._evaluate_unit_edges(tree, labels)
            units = [i for i in range(1, len(labels) - 1) if labels[i] == self.action.unit]
            if not units and tree == trees.normalize(tree):
                return BarElement(tree, tuple(labels))
            for i in reversed(units):
                tree = graft(tree, i + 1, ONE, DELTA_0)
                del labels[i]

    def _norm_label(self, v):
        if isinstance(v, ConePoint):
            return cone_point(v.base, v.height)
        return v

    def _evaluate_unit_edges(self, tree, labels):
        total = len(labels)
        out_labels = []

        def walk(node, offset):
            if isinstance(node, Leaf):
                out_labels.append(labels[offset])
                return node
            kids = []
            changed = False
            for lab, c in node.children:
                if lab == 1:
                    out_labels.append(self.evaluate(labels[offset:offset + c.n_leaves], offset, total))
                    kids.append((None, LEAF))
                    changed = True
                else:
                    sub = walk(c, offset)
                    changed = changed or sub is not c
                    kids.append((lab, sub))
                offset += c.n_leaves
            return Node._trusted(kids) if changed else node

        new_tree = walk(tree, 0)
        return new_tree, out_labels

    def equal(self, a: BarElement, b: BarElement) -> bool:
        return self.normalize(a) == self.normalize(b)

    # -- single rewrites, for schedule-independence checks
    def rewrite_sites(self, el: BarElement) -> list:
        sites = [("tree", s) for s in trees.rewrite_sites(el.tree)]

        def walk(node, path):
            if isinstance(node, Leaf):
                return
            for k, (lab, c) in enumerate(node.children):
                # an edge over every leaf only appears under a unary root, which collapses first
                if isinstance(c, Node) and 0 < c.n_leaves < len(el.labels) and lab == 1:
                    sites.append(("eval", path + (k,)))
                walk(c, path + (k,))

        walk(el.tree, ())
        for i in range(1, len(el.labels) - 1):
            if el.labels[i] == self.action.unit:
                sites.append(("unit", i))
        return sites

    def rewrite_step(self, el: BarElement, site) -> BarElement:
        kind, where = site
        if kind == "tree":
            return BarElement(trees.rewrite_step(el.tree, where), el.labels)
        if kind == "unit":
            tree = graft(el.tree, where + 1, ONE, DELTA_0)
            return BarElement(tree, el.labels[:where] + el.labels[where + 1:])
        if kind == "eval":
            parent, k = where[:-1], where[-1]
            node = trees.subtree_at(el.tree, parent)
            offset = _leaf_offset(el.tree, parent) + sum(c.n_leaves for _, c in node.children[:k])
            n = node.children[k][1].n_leaves
            value = self.evaluate(el.labels[offset:offset + n], offset, len(el.labels))

            def fix(kids):
                kids[k] = (None, LEAF)
                return Node(kids)

            tree = trees.replace_children(el.tree, parent, fix)
            return BarElement(tree, el.labels[:offset] + (value,) + el.labels[offset + n:])
        raise BarError(f"unknown rewrite {kind!r}")

    def normalize_randomly(self, el: BarElement, rng: random.Random) -> BarElement:
        el = BarElement(el.tree, tuple(self._norm_label(v) for v in el.labels))
        while True:
            sites = self.rewrite_sites(el)
            if not sites:
                return el
            el = self.rewrite_step(el, rng.choice(sites))

    # -- path-space interface
    def substitute(self, skeleton: BarElement, s) -> BarElement:
        return BarElement(
            trees.at_time(skeleton.tree, s),
            tuple(
                ConePoint(v.base, label_at(v.height, s)) if isinstance(v, ConePoint) else v
                for v in skeleton.labels
            ),
        )

    def map_labels(self, skeleton: BarElement, fn: Callable) -> BarElement:
        return BarElement(
            trees.map_labels(skeleton.tree, fn),
            tuple(
                ConePoint(v.base, fn(v.height)) if isinstance(v, ConePoint) else v
                for v in skeleton.labels
            ),
        )

    def format(self, el: BarElement) -> str:
        return format_element(el)

    def parse(self, text: str) -> BarElement:
        return parse_element(text)

    # -- maps between contexts
    def retarget(self, right=None, left=None) -> "BarContext":
        return BarContext(self.action, right or self.right, left or self.left)


def _leaf_offset(tree: Tree, path: tuple) -> int:
    offset = 0
    node = tree
    for k in path:
        offset += sum(c.n_leaves for _, c in node.children[:k])
        node = node.children[k][1]
    return offset


# ---------------------------------------------------------------- literals


def format_value(v) -> str:
    if v is STAR:
        return "*"
    if v is APEX:
        return "apex"
    if isinstance(v, ConePoint):
        return f"[{v.base},{format_label(v.height)}]"
    return str(v)


def format_element(el: BarElement) -> str:
    return f"[{trees.format_tree(el.tree)}; " + ", ".join(format_value(v) for v in el.labels) + "]"


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return parts


def _parse_value(tok: str):
    if tok == "*":
        return STAR
    if tok == "apex":
        return APEX
    if tok.startswith("[") and tok.endswith("]"):
        base, _, height = tok[1:-1].partition(",")
        if not height:
            raise BarError(f"cone point needs a height: {tok!r}")
        return ConePoint(base.strip(), parse_label(height))
    if not tok:
        raise BarError("empty label")
    return tok


def parse_element(text: str) -> BarElement:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise BarError(f"bar element must look like [tree; labels]: {text!r}")
    body = s[1:-1]
    tree_txt, sep, rest = body.partition(";")
    if not sep:
        raise BarError(f"missing ';' in bar element: {text!r}")
    tree = trees.parse_tree(tree_txt)
    labels = tuple(_parse_value(tok) for tok in _split_top(rest))
    return BarElement(tree, labels)


# ------------------------------------------------------------- retraction


def retract(ctx: BarContext, el: BarElement):
    """``[T; x, x_1..x_n, p] -> N(T; x, x_1..x_n, p)`` on ``B(X, X, P)``."""
    return ctx.N(el.labels[:-1], el.labels[-1])


def embed(ctx: BarContext, p) -> BarElement:
    return BarElement(DELTA_2, (ctx.action.unit, p))


def project(el: BarElement) -> BarElement:
    """Forget the first label: ``B(X, X, P) -> B(*, X, P)`` on representatives."""
    return BarElement(el.tree, (STAR,) + el.labels[1:])


def include_in_cone(el: BarElement) -> BarElement:
    """``B(*, X, P) -> B(*, X, CP)`` through ``p -> [p, 1]``."""
    p = el.labels[-1]
    return BarElement(el.tree, el.labels[:-1] + (ConePoint(p, ONE),))


def label_path(ctx: BarContext, path: Path, labels: Sequence) -> Path:
    """Decorate a tree-valued path with fixed leaf labels."""
    labels = tuple(labels)
    return path.map(lambda sk: BarElement(sk, labels), space=ctx)


# ---------------------------------------------------------- the usual map


def usual_map(ctx: BarContext, x) -> Path:
    """The Moore loop ``f(x)`` of length 2 in ``B(*, X, *)``."""
    q, p = ctx.basepoint().labels
    return Path(
        [
            Segment(ONE, BarElement(graft(DELTA_2, 2, Affine(1, -1), DELTA_2), (q, x, p))),
            Segment(ONE, BarElement(graft(DELTA_2, 1, Affine(0, 1), DELTA_2), (q, x, p))),
        ],
        ctx,
    )


def f_n(ctx: BarContext, t: Tree, xs: Sequence) -> Path:
    """``f_n(T; x)(t) = [sigma(T)(t); *, x, *]``."""
    t = trees.normalize(t)
    if t.n_leaves != len(xs) + 1:
        raise BarError(f"f_n needs {t.n_leaves - 1} labels, got {len(xs)}")
    q, p = ctx.basepoint().labels
    return label_path(ctx, sigma(t), (q, *xs, p))


# ------------------------------------------------------ the retraction flow


def big_gamma(ctx: BarContext, el: BarElement) -> Path:
    """``Gamma(el)(t) = [gamma_T(t); e, labels]`` on ``[0, 1]``.

    Flows are memoized per context; treat the returned path as read-only.
    """
    path = ctx._flows.get(el)
    if path is None:
        path = label_path(ctx, gamma(el.tree), (ctx.action.unit, *el.labels))
        path.unit_interval = True
        if len(ctx._flows) < 1 << 14:
            ctx._flows[el] = path
    return path


def reduce_first(ctx: BarContext, t: Tree, s: Tree, labels: Sequence) -> BarElement:
    """``[T; M(S; x, x_1..), x_|S|.., p]`` from the labels of ``T o_1 S``."""
    k = s.n_leaves
    return BarElement(t, (ctx.M(labels[:k]),) + tuple(labels[k:]))


def h_homotopy(ctx: BarContext, t: Tree, s: Tree, labels: Sequence, time, u):
    """``H_(T o_1 S, T)(labels)(t, u)`` as a normalized element."""
    time, u = as_rational(time), as_rational(u)
    t, s = trees.normalize(t), trees.normalize(s)
    lg = length(t) + length(s)
    b = (1 - u) * length(s) / lg
    reduced = reduce_first(ctx, t, s, labels)
    if time <= b:
        return ctx.normalize(reduced)
    return big_gamma(ctx, reduced)((time - b) / (1 - b))


def h_path(ctx: BarContext, t: Tree, s: Tree, labels: Sequence, u) -> Path:
    """``t -> H(t, u)`` for fixed ``u``, as a unit-interval path."""
    u = as_rational(u)
    t, s = trees.normalize(t), trees.normalize(s)
    b = (1 - u) * length(s) / (length(t) + length(s))
    reduced = reduce_first(ctx, t, s, labels)
    flow = rescale(big_gamma(ctx, reduced), 1 - b)
    if b == 0:
        return flow
    return juxtapose(Path.constant(reduced, b, ctx), flow)


def alpha(ctx: BarContext, el: BarElement) -> Path:
    """``alpha_P(el)(t)``: the reversed flow projected to ``B(*, X, P)``."""
    target = ctx.retarget(right="star")
    flow = reverse(big_gamma(ctx, el))
    out = flow.map(project, space=target)
    out.unit_interval = True
    return out


# ----------------------------------------------------------------- the cone


def cone_context(action: FiniteAction) -> BarContext:
    return BarContext(action, "star", "cone")


def gamma_p(ctx: BarContext, p) -> Path:
    """The relative loop ``t -> [delta_2; *, [p, t]]`` from the apex into ``P//X``."""
    return Path.single(BarElement(DELTA_2, (STAR, ConePoint(p, Affine(0, 1)))), 1, ctx)


def big_lambda(ctx: BarContext, t: Tree, xs: Sequence) -> Path:
    return label_path(ctx, lambda_path(t), (STAR, *xs, APEX))


def f_equivariant(ctx: BarContext, t: Tree, xs: Sequence, p) -> Path:
    """``F_n(T; x, p) = Lambda(T; x, p) . [T; *, x, [p, t]]``."""
    t = trees.normalize(t)
    if t.n_leaves != len(xs) + 2:
        raise BarError(f"F_n needs {t.n_leaves - 2} monoid labels, got {len(xs)}")
    rise = Path.single(BarElement(t, (STAR, *xs, ConePoint(p, Affine(0, 1)))), 1, ctx)
    return juxtapose(big_lambda(ctx, t, xs), rise)


def beta(ctx: BarContext, el: BarElement) -> Path:
    """``beta(el) = [delta_2; *, [N(el), t]] . iota alpha_P(el)``."""
    cone = cone_context(ctx.action)
    climb = gamma_p(cone, retract(ctx, el))
    tail = alpha(ctx, el).map(include_in_cone, space=cone)
    return juxtapose(climb, tail)


def rho_p(ctx: BarContext, p) -> Path:
    """The two-piece loop ``[delta_2 o_2^{1-2t} delta_2; *, e, [p,1]] . [delta_2 o_1^{2t} ...]``."""
    e = ctx.action.unit
    top = ConePoint(p, ONE)
    return Path(
        [
            Segment(Fraction(1, 2), BarElement(graft(DELTA_2, 2, Affine(1, -2), DELTA_2), (STAR, e, top))),
            Segment(Fraction(1, 2), BarElement(graft(DELTA_2, 1, Affine(0, 2), DELTA_2), (STAR, e, top))),
        ],
        ctx,
    )


# ------------------------------------------ structure maps and A-infinity maps


NEvaluator = Callable[[Tree, tuple, object], object]
FEvaluator = Callable[[Tree, tuple], Callable]


def discrete_n(action: FiniteAction) -> NEvaluator:
    """``N_k(T; x, p) = (x_1 ... x_{k-1}) . p``."""
    return lambda t, xs, p: action.act(action.product(xs), p)


def n_to_f(n_map: NEvaluator) -> FEvaluator:
    """``f_{n-1}(T; x)(p) = N_n(deshift T; x, p)``."""
    return lambda t, xs: (lambda p: n_map(deshift(t), tuple(xs), p))


def f_to_n(f_map: FEvaluator) -> NEvaluator:
    """``N_n(T; x, p) = f_{n-1}(shift T; x)(p)``."""

    def n_map(t, xs, p):
        if t.n_leaves == 1:
            return p
        return f_map(shift(t), tuple(xs))(p)

    return n_map


@dataclass
class IwaseMimuraReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def labeled_shapes(n: int, labels=(Fraction(1, 2), ONE)) -> list[Tree]:
    """Normal trees with ``n`` leaves whose internal edges take the given labels."""
    from .operad_k import _shapes

    if n == 0:
        return [DELTA_0]
    out = []
    for shape in _shapes(n):
        slots = shape.n_internal
        for combo in itertools.product(labels, repeat=slots):
            it = iter(combo)
            out.append(trees.map_labels(shape, lambda _: next(it)))
    return out


def validate_iwase_mimura(
    action: FiniteAction,
    n_map: Optional[NEvaluator] = None,
    h: Optional[Callable] = None,
    max_leaves: int = 5,
    labels=(ONE,),
) -> IwaseMimuraReport:
    """Check conditions i)-iii) and the unit clause on all small trees."""
    n_map = n_map or discrete_n(action)
    if h is None:
        h = lambda x: action.act(x, action.basepoint)
    M = lambda t, xs: action.product(xs)
    els, pts = action.elements, action.left_set
    out = []
    count = 0
    shapes = {n: labeled_shapes(n, labels) for n in range(1, max_leaves + 1)}
    shapes[0] = [DELTA_0]

    def words(k):
        return itertools.product(els, repeat=k)

    for r in range(2, max_leaves + 1):
        for s in range(0, max_leaves + 2 - r):
            k = r + s - 1
            if k < 1 or k > max_leaves:
                continue
            for rho in shapes[r]:
                for tau in shapes[s]:
                    for xs in words(k - 1):
                        for p in pts:
                            # i) a monoid subtree in slot j < r
                            for j in range(1, r):
                                lhs = n_map(trees.normalize(graft(rho, j, ONE, tau)), xs, p)
                                inner = M(tau, xs[j - 1:j - 1 + s])
                                rhs = n_map(rho, xs[:j - 1] + (inner,) + xs[j - 1 + s:], p)
                                count += 1
                                if lhs != rhs:
                                    out.append(f"i) rho={rho} j={j} tau={tau} x={xs} p={p}: {lhs} != {rhs}")
                            # ii) an action subtree in the last slot
                            if s >= 1:
                                lhs = n_map(trees.normalize(graft(rho, r, ONE, tau)), xs, p)
                                inner = n_map(tau, xs[r - 1:], p)
                                rhs = n_map(rho, xs[:r - 1], inner)
                                count += 1
                                if lhs != rhs:
                                    out.append(f"ii) rho={rho} sigma={tau} x={xs} p={p}: {lhs} != {rhs}")
    # iii) at the basepoint, with h(x) = x . p0
    for k in range(2, max_leaves + 1):
        for mu in shapes[k]:
            for xs in words(k - 1):
                lhs = n_map(mu, xs, action.basepoint)
                rhs = h(M(trees.degeneracy(mu, k), xs))
                count += 1
                if lhs != rhs:
                    out.append(f"iii) mu={mu} x={xs}: {lhs} != {rhs}")
    # the s = 0 consequence: unit labels erase by degeneracy
    for k in range(2, max_leaves + 1):
        for mu in shapes[k]:
            for xs in words(k - 2):
                for i in range(1, k):
                    for p in pts:
                        lhs = n_map(mu, xs[:i - 1] + (action.unit,) + xs[i - 1:], p)
                        rhs = n_map(trees.degeneracy(mu, i), xs, p)
                        count += 1
                        if lhs != rhs:
                            out.append(f"unit) mu={mu} i={i} x={xs} p={p}: {lhs} != {rhs}")
    return IwaseMimuraReport(count, out)
