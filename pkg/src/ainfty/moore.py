"""Piecewise-affine Moore paths.

A path is a list of segments.  Each segment has a rational duration and a
skeleton: a value of the underlying space whose labels may be affine
functions of the local time.  The space object knows how to substitute a
time, normalize, reparameterize labels and print or parse skeletons, so the
same path machinery serves tree spaces, bar constructions and the cone.
"""

from __future__ import annotations

import json
from bisect import bisect_left
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .rational import (
    Affine,
    as_rational,
    format_rational,
    label_at,
    label_scaled,
    label_shifted,
    parse_rational,
)
from . import trees


class PathError(ValueError):
    pass


class TreeSpace:
    """Metric trees up to the collapse relations."""

    name = "tree"

    def normalize(self, value):
        return trees.normalize(value)

    def substitute(self, skeleton, s):
        return trees.at_time(skeleton, s)

    def map_labels(self, skeleton, fn: Callable):
        return trees.map_labels(skeleton, fn)

    def format(self, value) -> str:
        return trees.format_tree(value)

    def parse(self, text: str):
        return trees.parse_tree(text)


TREES = TreeSpace()


@dataclass(frozen=True)
class Segment:
    duration: Fraction
    skeleton: object


class Path:
    """A Moore path: ``eval(t)`` for ``t`` past the length returns the endpoint."""

    __slots__ = ("segments", "space", "unit_interval", "_ends")

    def __init__(self, segments: Iterable[Segment], space=TREES, unit_interval: bool = False):
        segs = tuple(segments)
        if not segs:
            raise PathError("a path needs at least one segment")
        for seg in segs:
            if seg.duration < 0:
                raise PathError("negative segment duration")
        self.segments = segs
        self.space = space
        # homotopy parameters live on [0,1]; Moore paths carry their own length
        self.unit_interval = unit_interval
        self._ends = None

    @classmethod
    def constant(cls, value, duration=0, space=TREES) -> "Path":
        return cls([Segment(as_rational(duration), value)], space)

    @classmethod
    def single(cls, skeleton, duration, space=TREES) -> "Path":
        return cls([Segment(as_rational(duration), skeleton)], space)

    @property
    def length(self) -> Fraction:
        return sum((s.duration for s in self.segments), Fraction(0))

    def breakpoints(self) -> list[Fraction]:
        out = [Fraction(0)]
        for seg in self.segments:
            out.append(out[-1] + seg.duration)
        return out

    def raw_at(self, t):
        t = as_rational(t)
        if t < 0:
            raise PathError("paths are evaluated at t >= 0")
        ends = self._ends
        if ends is None:
            ends = self._ends = self.breakpoints()[1:]
        k = bisect_left(ends, t)
        if k == len(ends):
            last = self.segments[-1]
            return self.space.substitute(last.skeleton, last.duration)
        return self.space.substitute(self.segments[k].skeleton, t - ends[k] + self.segments[k].duration)

    def __call__(self, t):
        return self.space.normalize(self.raw_at(t))

    eval = __call__

    @property
    def start(self):
        return self(0)

    @property
    def end(self):
        return self(self.length)

    def map(self, fn: Callable, space=None) -> "Path":
        """Apply ``fn`` to every skeleton (e.g. graft a fixed tree)."""
        return Path(
            [Segment(s.duration, fn(s.skeleton)) for s in self.segments],
            space or self.space,
            self.unit_interval,
        )

    def __mul__(self, other: "Path") -> "Path":
        return juxtapose(self, other)

    def __repr__(self):
        body = ", ".join(
            f"({format_rational(s.duration)}, {self.space.format(s.skeleton)})"
            for s in self.segments
        )
        return f"Path([{body}])"


def juxtapose(p: Path, q: Path, check: bool = True) -> Path:
    if check and p.end != q.start:
        raise PathError(
            f"endpoint mismatch: {p.space.format(p.end)} vs {q.space.format(q.start)}"
        )
    return Path(p.segments + q.segments, p.space)


def juxtapose_all(paths: Iterable[Path]) -> Path:
    paths = list(paths)
    out = paths[0]
    for q in paths[1:]:
        out = juxtapose(out, q)
    return out


def _shift_skeleton(space, skeleton, s):
    return space.map_labels(skeleton, lambda lab: label_shifted(lab, s))


def cut(p: Path, a, b) -> Path:
    """``p_[a,b]``: the path ``t -> p(t + a)`` of length ``b - a``."""
    a, b = as_rational(a), as_rational(b)
    if a < 0 or a >= b:
        raise PathError(f"cut needs 0 <= a < b, got a={a}, b={b}")
    return window(p, a, b)


def window(p: Path, a, b) -> Path:
    """Like :func:`cut` but allows the empty window ``a == b``."""
    a, b = as_rational(a), as_rational(b)
    if a < 0 or a > b:
        raise PathError(f"window needs 0 <= a <= b, got a={a}, b={b}")
    space = p.space
    total = p.length
    if a >= total:
        return Path.constant(p.end, b - a, space)
    stop = min(b, total)
    out = []
    lo = Fraction(0)
    for seg in p.segments:
        hi = lo + seg.duration
        a_loc, b_loc = max(a, lo), min(stop, hi)
        if a_loc < b_loc:
            out.append(Segment(b_loc - a_loc, _shift_skeleton(space, seg.skeleton, a_loc - lo)))
        lo = hi
    if not out:
        out.append(Segment(Fraction(0), p.raw_at(a)))
    if b > total:
        out.append(Segment(b - total, p.end))
    return Path(out, space)


def rescale(p: Path, duration) -> Path:
    """Reparameterize linearly onto ``[0, duration]``."""
    duration = as_rational(duration)
    total = p.length
    if duration < 0:
        raise PathError("negative duration")
    if duration == 0:
        return Path.constant(p.start, 0, p.space)
    if total == 0:
        return Path.constant(p.end, duration, p.space)
    k = total / duration
    space = p.space
    return Path(
        [
            Segment(seg.duration / k, space.map_labels(seg.skeleton, lambda lab: label_scaled(lab, k)))
            for seg in p.segments
        ],
        space,
    )


def reverse(p: Path) -> Path:
    space = p.space
    out = []
    for seg in reversed(p.segments):
        d = seg.duration
        # local time s on the reversed piece reads d - s on the original
        out.append(
            Segment(
                d,
                space.map_labels(
                    seg.skeleton,
                    lambda lab, d=d: Affine.make(lab.a + lab.b * d, -lab.b) if isinstance(lab, Affine) else lab,
                ),
            )
        )
    return Path(out, space, p.unit_interval)


def x_value(c, a, b) -> Fraction:
    """``x_{c;a,b} = a(c-b) / (b(c-a))`` for ``0 < a < b < c``."""
    c, a, b = as_rational(c), as_rational(a), as_rational(b)
    if not 0 < a < b < c:
        raise PathError("x_{c;a,b} needs 0 < a < b < c")
    return a * (c - b) / (b * (c - a))


def _check_unit(paths):
    for p in paths:
        if p.length != 1:
            raise PathError("star compositions take unit-length paths")
    for p, q in zip(paths, paths[1:]):
        if p.end != q.start:
            raise PathError("star composition needs matching endpoints")


def star(p1: Path, p2: Path, a) -> Path:
    """``p1 *^a p2``: ``p1`` on ``[0,a]``, ``p2`` on ``[a,1]``."""
    a = as_rational(a)
    if not 0 < a < 1:
        raise PathError("star needs 0 < a < 1")
    _check_unit([p1, p2])
    out = juxtapose(rescale(p1, a), rescale(p2, 1 - a))
    out.unit_interval = True
    return out


def star3(p1: Path, p2: Path, p3: Path, a, b) -> Path:
    a, b = as_rational(a), as_rational(b)
    if not 0 < a < b < 1:
        raise PathError("star3 needs 0 < a < b < 1")
    _check_unit([p1, p2, p3])
    out = juxtapose_all([rescale(p1, a), rescale(p2, b - a), rescale(p3, 1 - b)])
    out.unit_interval = True
    return out


# ---------------------------------------------------------------- equality

EXTRA_SAMPLES = 64


def sample_times(p: Path, q: Path, seed: int = 0, extra: int = EXTRA_SAMPLES) -> list[Fraction]:
    cuts = sorted(set(p.breakpoints()) | set(q.breakpoints()))
    times = set(cuts)
    for lo, hi in zip(cuts, cuts[1:]):
        times.add((lo + hi) / 2)
    total = p.length
    rng = random.Random(seed)
    for _ in range(extra):
        if total == 0:
            break
        times.add(total * Fraction(rng.randrange(1, 10007), 10007))
    return sorted(times)


def first_difference(p: Path, q: Path, seed: int = 0, extra: int = EXTRA_SAMPLES) -> Optional[Fraction]:
    """A time where the two paths differ, or ``None``; ``-1`` flags unequal lengths."""
    if p.length != q.length:
        return Fraction(-1)
    for t in sample_times(p, q, seed, extra):
        if p(t) != q(t):
            return t
    return None


def path_equal(p: Path, q: Path, seed: int = 0, extra: int = EXTRA_SAMPLES) -> bool:
    """Equal lengths and equal normal forms at every breakpoint, midpoint and ``extra`` random times."""
    return first_difference(p, q, seed, extra) is None


# ------------------------------------------------------------ serialization


def to_records(p: Path) -> list[dict]:
    return [
        {"duration": format_rational(s.duration), "value": p.space.format(s.skeleton)}
        for s in p.segments
    ]


def dumps(p: Path) -> str:
    return json.dumps(to_records(p))


def loads(text: str, space=TREES) -> Path:
    records = json.loads(text)
    return Path(
        [Segment(parse_rational(r["duration"]), space.parse(r["value"])) for r in records],
        space,
    )
