"""The one-dimensional Swiss-cheese operad in the folded ``[0,1]`` model.

A closed configuration is an ordered tuple of little intervals in ``[0,1]``.
An open configuration adds a distinguished last interval ``[a, 1]`` that
contains 1; its closed slots come first.  Every composition glues through
the affine map ``x -> a + (b - a) x`` of the receiving slot.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import trees
from .paths import split_edge
from .rational import as_rational, format_rational, parse_rational
from .trees import CLOSED, OPEN, Leaf, Node, Tree, TreeError

Interval = tuple  # (a, b) with a < b


class ConfigError(ValueError):
    pass


def _interval(a, b) -> Interval:
    a, b = as_rational(a), as_rational(b)
    if not 0 <= a < b <= 1:
        raise ConfigError(f"bad little interval [{a},{b}]")
    return (a, b)


def _check_order(ivs: Sequence[Interval]) -> None:
    for (_, b), (a, _) in zip(ivs, ivs[1:]):
        if b > a:
            raise ConfigError("little intervals overlap or are out of order")


def _glue(slot: Interval, iv: Interval) -> Interval:
    a, b = slot
    w = b - a
    return (a + w * iv[0], a + w * iv[1])


def _mix(p: Interval, q: Interval, w) -> Interval:
    # (1-w) p + w q endpointwise
    return ((1 - w) * p[0] + w * q[0], (1 - w) * p[1] + w * q[1])


@dataclass(frozen=True)
class ClosedConfig:
    intervals: tuple

    def __post_init__(self):
        ivs = tuple(_interval(a, b) for a, b in self.intervals)
        if not ivs:
            raise ConfigError("closed configurations have at least one interval")
        _check_order(ivs)
        object.__setattr__(self, "intervals", ivs)

    @property
    def arity(self) -> int:
        return len(self.intervals)

    def __str__(self):
        return format_config(self)


@dataclass(frozen=True)
class OpenConfig:
    closed: tuple
    distinguished: Optional[Interval]

    def __post_init__(self):
        ivs = tuple(_interval(a, b) for a, b in self.closed)
        dist = self.distinguished
        if dist is not None:
            dist = _interval(*dist)
            if dist[1] != 1:
                raise ConfigError("the distinguished interval must contain 1")
        _check_order(ivs + ((dist,) if dist else ()))
        object.__setattr__(self, "closed", ivs)
        object.__setattr__(self, "distinguished", dist)

    @property
    def arity(self) -> tuple:
        return (len(self.closed), 1 if self.distinguished else 0)

    def __str__(self):
        return format_config(self)


CLOSED_UNIT = ClosedConfig(((0, 1),))
OPEN_UNIT = OpenConfig((), (0, 1))


def compose_closed(c: ClosedConfig, i: int, d: ClosedConfig) -> ClosedConfig:
    if not 1 <= i <= c.arity:
        raise ConfigError(f"slot {i} out of range 1..{c.arity}")
    slot = c.intervals[i - 1]
    glued = tuple(_glue(slot, iv) for iv in d.intervals)
    return ClosedConfig(c.intervals[: i - 1] + glued + c.intervals[i:])


def compose_open_closed(o: OpenConfig, i: int, c: ClosedConfig) -> OpenConfig:
    if not 1 <= i <= len(o.closed):
        raise ConfigError(f"closed slot {i} out of range 1..{len(o.closed)}")
    slot = o.closed[i - 1]
    glued = tuple(_glue(slot, iv) for iv in c.intervals)
    return OpenConfig(o.closed[: i - 1] + glued + o.closed[i:], o.distinguished)


def compose_open_open(o1: OpenConfig, o2: OpenConfig) -> OpenConfig:
    if o1.distinguished is None:
        raise ConfigError("no distinguished interval to glue into")
    slot = o1.distinguished
    dist = _glue(slot, o2.distinguished) if o2.distinguished else None
    return OpenConfig(o1.closed + tuple(_glue(slot, iv) for iv in o2.closed), dist)


def compose(x, i: int, y):
    """Colored composition; slot ``p + 1`` of an open configuration is the open one."""
    if isinstance(x, ClosedConfig):
        if not isinstance(y, ClosedConfig):
            raise ConfigError("closed configurations only accept closed inputs")
        return compose_closed(x, i, y)
    if isinstance(y, OpenConfig):
        if i != len(x.closed) + 1:
            raise ConfigError("open inputs go into the distinguished slot")
        return compose_open_open(x, y)
    return compose_open_closed(x, i, y)


def combine(x, y, w):
    """The convex combination ``(1-w) x + w y`` of two same-shape configurations."""
    w = as_rational(w)
    if type(x) is not type(y):
        raise ConfigError("cannot combine closed and open configurations")
    if isinstance(x, ClosedConfig):
        if x.arity != y.arity:
            raise ConfigError("arity mismatch")
        return ClosedConfig(tuple(_mix(p, q, w) for p, q in zip(x.intervals, y.intervals)))
    if x.arity != y.arity:
        raise ConfigError("arity mismatch")
    dist = _mix(x.distinguished, y.distinguished, w) if x.distinguished else None
    return OpenConfig(tuple(_mix(p, q, w) for p, q in zip(x.closed, y.closed)), dist)


def to_symmetric(o: OpenConfig) -> list:
    """Display form in ``[-1,1]``: each slot becomes a mirror pair, the last one central."""
    out = []
    for a, b in o.closed:
        out.append(((b - 1, a - 1), (1 - b, 1 - a)))
    if o.distinguished:
        a, _ = o.distinguished
        out.append(((a - 1, 1 - a),))
    return out


# ------------------------------------------------------------------ theta


def corolla_image(p: int, open_output: bool):
    if open_output:
        w = Fraction(1, p + 1)
        return OpenConfig(tuple((k * w, (k + 1) * w) for k in range(p)), (p * w, Fraction(1)))
    w = Fraction(1, p)
    return ClosedConfig(tuple((k * w, (k + 1) * w) for k in range(p)))


def _check_theta_input(t: Tree) -> Tree:
    t = trees.normalize(t)
    if isinstance(t, Node) and t.n_leaves == 0:
        raise TreeError("theta is defined on the non-unital operad (no delta_0)")
    if isinstance(t, Node) and any(
        isinstance(c, Node) and c.n_leaves == 0 for c in _all_nodes(t)
    ):
        raise TreeError("theta is defined on the non-unital operad (no delta_0)")
    return t


def _all_nodes(t):
    if isinstance(t, Node):
        yield t
        for _, c in t.children:
            yield from _all_nodes(c)


def theta(t: Tree):
    """Image of a normalized Act-infinity tree in the Swiss-cheese operad."""
    return _theta(_check_theta_input(t))


@lru_cache(maxsize=None)
def _theta(t: Tree):
    if isinstance(t, Leaf):
        return OPEN_UNIT if t.leaf_color is OPEN else CLOSED_UNIT
    if trees.is_corolla(t):
        p = sum(1 for _, c in t.children if c.leaf_color is CLOSED)
        return corolla_image(p, t.has_open)
    x, i, r, y = split_edge(t)
    return theta_via(x, i, r, y)


def theta_via(x: Tree, i: int, r, y: Tree):
    """``(1-r) theta(X o_i^0 Y) + r theta(X) o_i theta(Y)`` for this splitting."""
    r = as_rational(r)
    collapsed = trees.normalize(trees.graft(x, i, 0, y))
    glued = compose(_theta(trees.normalize(x)), i, _theta(trees.normalize(y)))
    if r == 1:
        return glued
    return combine(_theta(collapsed), glued, r)


def theta_printed(x: Tree, i: int, r, y: Tree):
    """The opposite weighting ``(1-r) theta(X) o_i theta(Y) + r theta(X o_i^0 Y)``."""
    r = as_rational(r)
    collapsed = trees.normalize(trees.graft(x, i, 0, y))
    glued = compose(_theta(trees.normalize(x)), i, _theta(trees.normalize(y)))
    return combine(glued, _theta(collapsed), r)


def theta_expanded(t: Tree):
    """Independent evaluation by expanding every edge weight over edge subsets.

    Each subset of internal edges is kept (weight ``r``) while the others are
    contracted (weight ``1 - r``); kept edges are glued freely.
    """
    t = _check_theta_input(t)
    edges = _edge_paths(t)
    total = None
    for keep in itertools.product((False, True), repeat=len(edges)):
        weight = Fraction(1)
        for (path, lab), k in zip(edges, keep):
            weight *= lab if k else 1 - lab
        if weight == 0:
            continue
        shape = _relabel(t, {p: (1 if k else 0) for (p, _), k in zip(edges, keep)})
        image = _free_glue(trees.normalize(shape))
        total = _scaled_sum(total, image, weight)
    return total


def _edge_paths(t, path=()):
    out = []
    if isinstance(t, Node):
        for k, (lab, c) in enumerate(t.children):
            if isinstance(c, Node):
                out.append((path + (k,), lab))
                out.extend(_edge_paths(c, path + (k,)))
    return out


def _relabel(t, new, path=()):
    if isinstance(t, Leaf):
        return t
    kids = []
    for k, (lab, c) in enumerate(t.children):
        p = path + (k,)
        kids.append((new[p] if isinstance(c, Node) else None, _relabel(c, new, p)))
    return Node(kids)


def _free_glue(t):
    # every edge is 1: compose corolla images vertex by vertex
    if isinstance(t, Leaf):
        return OPEN_UNIT if t.leaf_color is OPEN else CLOSED_UNIT
    p = sum(1 for _, c in t.children if not c.has_open)
    out = corolla_image(p, t.has_open)
    # graft children right to left so slot indices stay valid
    for k in range(len(t.children) - 1, -1, -1):
        _, c = t.children[k]
        if isinstance(c, Node):
            out = compose(out, k + 1, _free_glue(c))
    return out


def _coords(x):
    if isinstance(x, ClosedConfig):
        return [v for iv in x.intervals for v in iv]
    return [v for iv in x.closed + ((x.distinguished,) if x.distinguished else ()) for v in iv]


def _scaled_sum(acc, x, w):
    if acc is None:
        return (x, [w * v for v in _coords(x)])
    proto, vals = acc
    return (proto, [a + w * v for a, v in zip(vals, _coords(x))])


def expanded_value(acc):
    """Rebuild the configuration from an accumulated coordinate sum."""
    proto, vals = acc
    pairs = tuple(zip(vals[0::2], vals[1::2]))
    if isinstance(proto, ClosedConfig):
        return ClosedConfig(pairs)
    if proto.distinguished:
        return OpenConfig(pairs[:-1], pairs[-1])
    return OpenConfig(pairs, None)


def theta_oracle(t: Tree):
    return expanded_value(theta_expanded(t))


# -------------------------------------------------- piecewise-constant paths


@dataclass(frozen=True)
class PCPath:
    """Right-continuous step path on ``[0,1]``.

    ``values[k]`` holds on ``[breaks[k], breaks[k+1])`` and ``end`` at 1.
    """

    breaks: tuple
    values: tuple
    end: object

    def __post_init__(self):
        br = tuple(as_rational(b) for b in self.breaks)
        if br[0] != 0 or br[-1] != 1 or any(a >= b for a, b in zip(br, br[1:])):
            raise ConfigError("breakpoints must increase strictly from 0 to 1")
        if len(self.values) != len(br) - 1:
            raise ConfigError("one value per piece")
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "values", tuple(self.values))

    def __call__(self, t):
        t = as_rational(t)
        if t >= 1:
            return self.end
        for k in range(len(self.values)):
            if self.breaks[k] <= t < self.breaks[k + 1]:
                return self.values[k]
        raise ConfigError(f"time {t} outside [0,1]")

    @property
    def start(self):
        return self.values[0]

    def canonical(self) -> "PCPath":
        return _build([(self.breaks[k], self.breaks[k + 1], v) for k, v in enumerate(self.values)], self.end)


def _build(pieces, end) -> PCPath:
    merged = []
    for a, b, v in pieces:
        if a == b:
            continue
        if merged and merged[-1][2] == v:
            merged[-1] = (merged[-1][0], b, v)
        else:
            merged.append((a, b, v))
    breaks = (merged[0][0],) + tuple(b for _, b, _ in merged)
    return PCPath(breaks, tuple(v for _, _, v in merged), end)


def constant_loop(base) -> PCPath:
    return PCPath((0, 1), (base,), base)


def _run(slots, paths, base, end):
    pieces = []
    cursor = Fraction(0)
    for (a, b), path in zip(slots, paths):
        pieces.append((cursor, a, base))
        w = b - a
        for k, v in enumerate(path.values):
            pieces.append((a + w * path.breaks[k], a + w * path.breaks[k + 1], v))
        cursor = b
    pieces.append((cursor, Fraction(1), base))
    return _build(pieces, end)


def closed_action(c: ClosedConfig, loops: Sequence[PCPath], base) -> PCPath:
    """Run each loop through its little interval; the basepoint elsewhere."""
    if len(loops) != c.arity:
        raise ConfigError(f"expected {c.arity} loops, got {len(loops)}")
    return _run(c.intervals, loops, base, base)


def rho_action(o: OpenConfig, loops: Sequence[PCPath], rel: Optional[PCPath], base) -> PCPath:
    """As above, then the relative path through the interval containing 1."""
    if len(loops) != len(o.closed):
        raise ConfigError(f"expected {len(o.closed)} loops, got {len(loops)}")
    if o.distinguished is None:
        return _run(o.closed, loops, base, base)
    return _run(o.closed + (o.distinguished,), list(loops) + [rel], base, rel.end)


def act(config, paths: Sequence[PCPath], base) -> PCPath:
    if isinstance(config, ClosedConfig):
        return closed_action(config, paths, base)
    if config.distinguished is None:
        return rho_action(config, paths, None, base)
    return rho_action(config, paths[:-1], paths[-1], base)


# --------------------------------------------------------------- literals

_IV_RE = re.compile(r"\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]")


def _fmt_iv(iv) -> str:
    return f"[{format_rational(iv[0])},{format_rational(iv[1])}]"


def format_config(x) -> str:
    if isinstance(x, ClosedConfig):
        return "cl{" + ",".join(_fmt_iv(iv) for iv in x.intervals) + "}"
    dist = _fmt_iv(x.distinguished) if x.distinguished else ""
    return "op{" + ",".join(_fmt_iv(iv) for iv in x.closed) + ";" + dist + "}"


def _parse_ivs(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    out = []
    pos = 0
    for m in _IV_RE.finditer(text):
        gap = text[pos:m.start()].strip()
        if gap not in ("", ","):
            raise ConfigError(f"unexpected {gap!r} in interval list")
        out.append((parse_rational(m.group(1)), parse_rational(m.group(2))))
        pos = m.end()
    if text[pos:].strip():
        raise ConfigError(f"unexpected trailing {text[pos:]!r}")
    return out


def parse_config(text: str):
    s = text.strip()
    try:
        if s.startswith("cl{") and s.endswith("}"):
            return ClosedConfig(tuple(_parse_ivs(s[3:-1])))
        if s.startswith("op{") and s.endswith("}"):
            body = s[3:-1]
            if ";" not in body:
                raise ConfigError("open configurations separate the distinguished interval with ';'")
            head, _, tail = body.partition(";")
            dist = _parse_ivs(tail)
            if len(dist) > 1:
                raise ConfigError("at most one distinguished interval")
            return OpenConfig(tuple(_parse_ivs(head)), dist[0] if dist else None)
    except ValueError as exc:
        raise ConfigError(f"{exc} in {text!r}") from None
    raise ConfigError(f"configuration literal must be cl{{...}} or op{{...;...}}: {text!r}")


def format_pcpath(p: PCPath) -> str:
    pieces = " ".join(
        f"[{format_rational(p.breaks[k])},{format_rational(p.breaks[k + 1])}):{v}"
        for k, v in enumerate(p.values)
    )
    return f"{pieces} @1:{p.end}"


def parse_pcpath(text: str) -> PCPath:
    """``[0,1/2):* [1/2,1):a @1:a``."""
    body, _, end = text.rpartition("@1:")
    if not _:
        raise ConfigError("step path literal needs an '@1:<end>' value")
    breaks, values = [], []
    for tok in body.split():
        m = re.fullmatch(r"\[([^,]+),([^)]+)\):(.+)", tok)
        if not m:
            raise ConfigError(f"bad piece {tok!r}")
        a, b = parse_rational(m.group(1)), parse_rational(m.group(2))
        if breaks and breaks[-1] != a:
            raise ConfigError("pieces must be contiguous")
        if not breaks:
            breaks.append(a)
        breaks.append(b)
        values.append(m.group(3))
    return PCPath(tuple(breaks), tuple(values), end.strip())
