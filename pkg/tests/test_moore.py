import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ainfty import gen
from ainfty.moore import (
    Path,
    PathError,
    Segment,
    cut,
    dumps,
    juxtapose,
    loads,
    path_equal,
    rescale,
    reverse,
    star,
    star3,
    x_value,
)
from ainfty.rational import Affine
from ainfty.trees import corolla, graft, normalize

D2, D3 = corolla(2), corolla(3)
seeds = st.integers(0, 10**6)


def slide_right(duration=1):
    return Path.single(graft(D2, 2, Affine(1, -F(1, duration)), D2), duration)


def random_path(rng, pieces=3):
    """Chain of label slides on the fixed shape delta_2 o_1 delta_2."""
    segs, start = [], F(rng.randint(0, 4), 4)
    for _ in range(pieces):
        end = F(rng.randint(0, 4), 4)
        d = F(rng.randint(1, 4), 2)
        segs.append(Segment(d, graft(D2, 1, Affine.make(start, (end - start) / d), D2)))
        start = end
    return Path(segs)


def test_constant_path_moore_convention():
    c = Path.constant(D2)
    assert c.length == 0 and c(5) == D2


def test_slide_collapses_at_end():
    p = slide_right()
    assert p(1) == D3 and p(0) == normalize(graft(D2, 2, 1, D2))
    assert p(F(1, 3)) == graft(D2, 2, F(2, 3), D2)


def test_negative_time_rejected():
    with pytest.raises(PathError):
        slide_right()(-1)


@given(seeds, st.fractions(0, 6, max_denominator=7))
def test_juxtapose_evaluates_second_part(seed, s):
    rng = random.Random(seed)
    p = random_path(rng)
    # a slide back to the corolla, starting where p ends
    end_label = p.raw_at(p.length).children[0][0]
    tail = Path.single(graft(D2, 1, Affine.make(end_label, -end_label), D2), 1)
    pq = juxtapose(p, tail)
    assert pq.length == p.length + 1
    assert pq(p.length + min(s, 1)) == tail(min(s, 1))


def test_juxtapose_unit_and_mismatch():
    p = slide_right()
    assert path_equal(juxtapose(Path.constant(p.start), p), p)
    with pytest.raises(PathError):
        juxtapose(p, Path.constant(D2))


@given(seeds)
def test_juxtapose_associative(seed):
    rng = random.Random(seed)
    p = random_path(rng)
    a = cut(p, 0, p.length / 3)
    b = cut(p, p.length / 3, p.length / 2)
    c = cut(p, p.length / 2, p.length)
    left, right = juxtapose(juxtapose(a, b), c), juxtapose(a, juxtapose(b, c))
    for k in range(101):
        t = p.length * F(k, 100)
        assert left(t) == right(t) == p(t)


@given(seeds, st.fractions(0, 1, max_denominator=9), st.fractions(0, 1, max_denominator=9))
def test_cut_of_cut(seed, x, y):
    rng = random.Random(seed)
    p = random_path(rng)
    a, b = F(1, 2), p.length
    c, d = sorted([x * (b - a), y * (b - a)])
    if c == d:
        return
    lhs, rhs = cut(cut(p, a, b), c, d), cut(p, a + c, a + d)
    assert path_equal(lhs, rhs)


def test_cut_whole_and_past_end():
    p = random_path(random.Random(1))
    assert path_equal(cut(p, 0, p.length), p)
    tail = cut(p, p.length - 1, p.length + 2)
    assert tail.length == 3 and tail(2) == p.end and tail(3) == p.end
    with pytest.raises(PathError):
        cut(p, 1, 1)


def test_rescale_and_reverse():
    p = random_path(random.Random(2))
    r = rescale(p, 1)
    assert r.length == 1
    for k in range(11):
        assert r(F(k, 10)) == p(p.length * F(k, 10))
    back = reverse(p)
    for k in range(11):
        t = p.length * F(k, 10)
        assert back(t) == p(p.length - t)


def test_x_value():
    assert x_value(4, 1, 2) == F(1, 3)
    with pytest.raises(PathError):
        x_value(1, 2, 3)


def unit_path(rng):
    return rescale(random_path(rng), 1)


def test_star_prefix():
    a = unit_path(random.Random(5))
    const = Path.constant(a.end, 1)
    s = star(a, const, F(1, 3))
    for k in range(9):
        t = F(k, 24)
        assert s(t) == a(3 * t)
    with pytest.raises(PathError):
        star(a, const, 1)


@settings(max_examples=30)
@given(seeds, st.integers(1, 10), st.integers(1, 10))
def test_bracketing(seed, i, j):
    a, b = sorted([F(i, 12), F(12 + j, 24) if F(12 + j, 24) < 1 else F(23, 24)])
    if not a < b:
        return
    rng = random.Random(seed)
    p = unit_path(rng)
    # three consecutive unit paths through cuts of one path
    x1, x2, x3 = (rescale(cut(p, lo, hi), 1) for lo, hi in [(0, F(1, 3)), (F(1, 3), F(1, 2)), (F(1, 2), 1)])
    mid = star3(x1, x2, x3, a, b)
    assert path_equal(star(star(x1, x2, a / b), x3, b), mid)
    assert path_equal(star(x1, star(x2, x3, (b - a) / (1 - a)), a), mid)


@given(seeds)
def test_serialization_round_trip(seed):
    p = random_path(random.Random(seed))
    q = loads(dumps(p))
    assert q.segments == p.segments


def test_path_needs_segments():
    with pytest.raises(PathError):
        Path([])
    with pytest.raises(PathError):
        Path([Segment(F(-1), D2)])
