"""The explicit path families on tree space.

``sigma(T)`` slides a new leaf from the right of ``deshift(T)`` over to the
left of ``T``; ``gamma(T)`` slides ``delta_2`` from the first leaf down to the
root; ``lambda_path(T)`` is the variant used for the equivariance of the
embedding into the cone.  All three are built recursively by splitting off
one internal edge at a time and are memoized on normal forms.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .moore import Path, Segment, juxtapose, window
from .operad_k import comb_decompose, length, length_i
from .rational import Affine
from .trees import (
    LEAF,
    Leaf,
    Node,
    Tree,
    TreeError,
    corolla,
    degeneracy,
    deshift,
    graft,
    is_corolla,
    normalize,
)

ONE = Fraction(1)
DELTA_2 = corolla(2)


class FamilyPath(Path):
    """A path together with the tree it was built from."""

    __slots__ = ("source", "family")

    def __init__(self, segments, source: Tree, family: str, unit_interval=False):
        super().__init__(segments, unit_interval=unit_interval)
        self.source = source
        self.family = family


def _tag(path: Path, source: Tree, family: str, unit_interval=False) -> FamilyPath:
    return FamilyPath(path.segments, source, family, unit_interval)


def graft_path(path: Path, i: int, r, s: Tree) -> Path:
    """``path o_i^r S`` pointwise."""
    return path.map(lambda sk: graft(sk, i, r, s))


def graft_into(t: Tree, i: int, r, path: Path) -> Path:
    """``T o_i^r path`` pointwise."""
    return path.map(lambda sk: graft(t, i, r, sk))


def split_edge(t: Tree):
    """A canonical decomposition ``T = T1 o_i^r T2`` of a non-corolla.

    Prefers the first child of the root when it is internal (``i = 1``);
    otherwise takes the first internal child of the root.
    """
    offset = 0
    for k, (lab, c) in enumerate(t.children):
        if isinstance(c, Node):
            kids = list(t.children)
            kids[k] = (None, Leaf(c.color))
            return Node(kids), offset + 1, lab, c
        offset += c.n_leaves
    raise TreeError("corollas have no internal edge")


def edge_splits(t: Tree):
    """Every decomposition ``T = T1 o_i^r T2``, one per internal edge."""
    if isinstance(t, Leaf):
        return
    offset = 0
    for k, (lab, c) in enumerate(t.children):
        if isinstance(c, Node):
            kids = list(t.children)
            kids[k] = (None, Leaf(c.color))
            yield Node(kids), offset + 1, lab, c
            for x, i, r, y in edge_splits(c):
                kids = list(t.children)
                kids[k] = (lab, x)
                yield Node(kids), offset + i, r, y
        offset += c.n_leaves


def _k_point(t: Tree, min_leaves: int, what: str) -> Tree:
    t = normalize(t)
    if t.has_open:
        raise TreeError(f"{what} is defined on closed trees")
    if t.n_leaves < min_leaves:
        raise TreeError(f"{what} needs at least {min_leaves} leaves")
    return t


# ------------------------------------------------------------------- sigma


def sigma(t: Tree) -> FamilyPath:
    """Moore path of length ``l(T)`` from ``delta_2 o_2 deshift(T)`` to ``delta_2 o_1 T``."""
    t = _k_point(t, 2, "sigma")
    return _tag(_sigma(t), t, "sigma")


@lru_cache(maxsize=None)
def _sigma(t: Tree) -> Path:
    if is_corolla(t):
        return Path(
            [
                Segment(ONE, graft(DELTA_2, 2, Affine(1, -1), t)),
                Segment(ONE, graft(DELTA_2, 1, Affine(0, 1), t)),
            ]
        )
    t1, i, r, t2 = split_edge(t)
    return _sigma_split(normalize(t1), i, r, normalize(t2))


def _sigma_split(t1: Tree, i: int, r, t2: Tree) -> Path:
    if i > 1:
        return graft_path(_sigma(t1), i, r, t2)
    first = graft_path(window(_sigma(t2), 0, length(t2) + r - 1), t2.n_leaves + 1, r, deshift(t1))
    second = graft_path(window(_sigma(t1), 1 - r, length(t1)), 1, r, t2)
    return juxtapose(first, second)


def sigma_via(t1: Tree, i: int, r, t2: Tree) -> Path:
    """sigma of ``T1 o_i^r T2`` computed through this particular splitting."""
    t1 = _k_point(t1, 2, "sigma")
    t2 = _k_point(t2, 2, "sigma")
    return _sigma_split(t1, i, Fraction(r), t2)


# ------------------------------------------------------------------- gamma


def gamma(t: Tree) -> FamilyPath:
    """The unit-interval path from ``T o_1 delta_2`` to ``delta_2 o_2 T``."""
    t = _k_point(t, 1, "gamma")
    return _tag(_gamma(t), t, "gamma", unit_interval=True)


@lru_cache(maxsize=None)
def _gamma(t: Tree) -> Path:
    if isinstance(t, Leaf):
        return Path.constant(DELTA_2, 1)
    comb = comb_decompose(t)
    l = length(t)
    segs = [Segment(1 / l, graft(t, 1, Affine(1, -l), DELTA_2))]
    for k in range(1, comb.k + 1):
        u = comb.labels[k - 1]
        r_k, l_k = comb.right(k), comb.left(k)
        segs.append(Segment(u / l, graft(r_k, 1, u, graft(DELTA_2, 2, Affine(0, l), l_k))))
        segs.append(Segment(u / l, graft(r_k, 1, Affine(u, -l), graft(DELTA_2, 2, u, l_k))))
    segs.append(Segment(1 / l, graft(DELTA_2, 2, Affine(0, l), t)))
    return Path(segs)


def gamma_breakpoints(t: Tree) -> list[Fraction]:
    """The times ``(l_k - u_k)/l`` and ``l_k/l`` where the formula changes."""
    t = _k_point(t, 2, "gamma")
    comb = comb_decompose(t)
    l = length(t)
    out = [Fraction(0), 1 / l]
    for k in range(1, comb.k + 1):
        lk = length_i(t, k)
        out += [lk / l, (lk + comb.labels[k - 1]) / l]
    out.append(Fraction(1))
    return out


# ------------------------------------------------------------------ lambda


def root_valence(t: Tree) -> int:
    return len(t.children) if isinstance(t, Node) else 0


def lambda_path(t: Tree) -> FamilyPath:
    """Moore path in ``K_|T|`` from ``delta_2 o_2 s_|T|(deshift T)`` to ``T``."""
    t = _k_point(t, 2, "lambda")
    return _tag(_lambda(t), t, "lambda")


@lru_cache(maxsize=None)
def _lambda(t: Tree) -> Path:
    if root_valence(t) == 2:
        (u, t1), (v, t2) = t.children
        return lambda_binary_root(
            t1, ONE if u is None else u, t2, ONE if v is None else v
        )
    if is_corolla(t):
        n = t.n_leaves
        return Path.single(graft(DELTA_2, 2, Affine(1, -1), corolla(n - 1)), 1)
    t1, i, r, t2 = split_edge(t)
    return lambda_wide_root(normalize(t1), i, r, normalize(t2))


def lambda_wide_root(t1: Tree, i: int, r, t2: Tree) -> Path:
    """The recursion for a root of valence > 2, through ``T1 o_i^r T2``."""
    if i > 1:
        return graft_path(_lambda(t1), i, r, t2)
    erased = degeneracy(deshift(t1), t1.n_leaves)
    first = graft_path(window(_sigma(t2), 0, length(t2) + r - 1), t2.n_leaves + 1, r, erased)
    second = graft_path(window(_lambda(t1), 1 - r, length(t1) - 1), 1, r, t2)
    return juxtapose(first, second)


def lambda_binary_root(t1: Tree, u, t2: Tree, v) -> Path:
    """The root-valence-two formula for ``(delta_2 o_2^v T2) o_1^u T1``.

    A leaf in either slot is read as ``delta_1`` on an edge of length 1.
    """
    if isinstance(t1, Leaf):
        u = ONE
    if isinstance(t2, Leaf):
        v = ONE
    if isinstance(t1, Leaf) and isinstance(t2, Leaf):
        return Path.constant(DELTA_2, 0)
    m = max(u, v)
    if isinstance(t1, Leaf):
        first = Path.constant(graft(DELTA_2, 2, m, t2), 0)
    else:
        first = graft_path(window(_sigma(t1), 0, length(t1) + u - 1), t1.n_leaves + 1, m, t2)
    slide = graft(DELTA_2, 2, Affine(m, -1), t2) if isinstance(t2, Node) else DELTA_2
    second = Path.single(graft(slide, 1, u, t1), m - v)
    return juxtapose(first, second)


def fn_loop(t: Tree) -> FamilyPath:
    """The tree-space loop underlying ``f_n(T; -)``."""
    return sigma(t)


def clear_caches() -> None:
    _sigma.cache_clear()
    _gamma.cache_clear()
    _lambda.cache_clear()
