"""Seeded randomized verification suites with greedy counterexample shrinking.

Every suite draws cases from a per-case PRNG stream, checks an identity, and
on failure shrinks the case by replacing subtrees (and simplifying numbers)
while the failure persists.  Cases are flat dicts of named fields, each of a
known kind, so a minimized counterexample prints as literals and re-parses.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import bar, gen, operad_k, paths, swiss_cheese, trees
from .rational import format_rational, parse_rational
from .trees import DELTA_0, LEAF, Leaf, Node, Tree, equal_mod, normalize

ONE = Fraction(1)
DELTA_2 = trees.corolla(2)


class Invalid(Exception):
    """The case lies outside the suite's domain (used while shrinking)."""


class UnknownSuite(KeyError):
    pass


# ------------------------------------------------------------------ kernel


def _length_wrong_sign(t: Tree) -> Fraction:
    t = normalize(t)
    if t.n_leaves == 1:
        return Fraction(0)
    return 2 * (1 - sum(operad_k.comb_decompose(t).labels, Fraction(0)))


class Kernel:
    """The operations a suite may see; mutations swap one of them out."""

    def __init__(self, mutations=()):
        self.length = operad_k.length
        for name in mutations:
            try:
                MUTATIONS[name](self)
            except KeyError:
                raise UnknownSuite(f"unknown mutation {name!r}") from None


MUTATIONS: dict[str, Callable[[Kernel], None]] = {
    "length-sign": lambda k: setattr(k, "length", _length_wrong_sign),
}


# ------------------------------------------------------------- field kinds


def _fmt_config(x):
    return swiss_cheese.format_config(x)


KINDS = {
    "tree": (trees.format_tree, trees.parse_tree),
    "rational": (format_rational, parse_rational),
    "int": (str, int),
    "str": (str, str),
    "element": (bar.format_element, bar.parse_element),
    "config": (_fmt_config, swiss_cheese.parse_config),
    "paths": (
        lambda ps: " | ".join(swiss_cheese.format_pcpath(p) for p in ps),
        lambda s: [swiss_cheese.parse_pcpath(x) for x in s.split(" | ")] if s.strip() else [],
    ),
}


def _actions():
    return {"z2": bar.cyclic_action(2), "right-zero": bar.right_zero_action()}


# ------------------------------------------------------------------ suites


@dataclass
class Suite:
    name: str
    fields: dict  # field name -> kind
    generate: Callable[[random.Random], dict]
    check: Callable[[dict, Kernel], Optional[str]]
    doc: str = ""


SUITES: dict[str, Suite] = {}


def suite(name: str, fields: dict, doc: str = ""):
    def register(pair):
        generate, check = pair
        SUITES[name] = Suite(name, fields, generate, check, doc)
        return pair

    return register


def _closed_tree(rng, lo=1, hi=gen.DEFAULT_MAX_LEAVES):
    return gen.random_tree(rng, lo, hi)


def _label(rng, allow_zero=True):
    return gen.random_label(rng, allow_zero=allow_zero)


def _need(cond: bool, why: str = "outside the domain"):
    if not cond:
        raise Invalid(why)


def _closed(t: Tree, lo: int = 1):
    _need(not t.has_open and t.n_leaves >= lo, f"needs a closed tree with >= {lo} leaves")


# operad-axioms ------------------------------------------------------------


def _gen_operad(rng):
    u = _closed_tree(rng, 2, 4)
    t = _closed_tree(rng, 2, 4)
    s = _closed_tree(rng, 2, 4)
    kind = "comm" if rng.random() < 0.5 else "assoc"
    if kind == "assoc":
        i = rng.randint(1, u.n_leaves)
        j = rng.randint(i, i + t.n_leaves - 1)
    else:
        i = rng.randint(2, u.n_leaves)
        j = rng.randint(1, i - 1)
    return {"kind": kind, "U": u, "T": t, "S": s, "q": _label(rng), "r": _label(rng), "i": i, "j": j}


def _check_operad(c, k):
    u, t, s, q, r, i, j = (c[x] for x in "UTSqrij")
    for x in (u, t, s):
        _closed(x, 2)
    _need(0 <= q <= 1 and 0 <= r <= 1)
    _need(1 <= i <= u.n_leaves)
    if c["kind"] == "assoc":
        _need(i <= j <= i + t.n_leaves - 1)
        lhs = trees.graft(trees.graft(u, i, q, t), j, r, s)
        rhs = trees.graft(u, i, q, trees.graft(t, j - i + 1, r, s))
    elif c["kind"] == "comm":
        _need(1 <= j < i)
        lhs = trees.graft(trees.graft(u, i, q, t), j, r, s)
        rhs = trees.graft(trees.graft(u, j, r, s), i + s.n_leaves - 1, q, t)
    else:
        raise Invalid("kind must be assoc or comm")
    if not equal_mod(lhs, rhs):
        return f"{c['kind']}: {trees.format_tree(normalize(lhs))} != {trees.format_tree(normalize(rhs))}"
    return None


suite(
    "operad-axioms",
    {"kind": "str", "U": "tree", "T": "tree", "S": "tree", "q": "rational", "r": "rational", "i": "int", "j": "int"},
    "associativity and commutativity of grafting up to the collapse relations",
)((_gen_operad, _check_operad))


# shift-deshift --------------------------------------------------------------


def _gen_shift(rng):
    return {"T": _closed_tree(rng, 2)}


def _check_shift(c, k):
    t = c["T"]
    _closed(t, 2)
    t = normalize(t)
    a, b = trees.deshift(trees.shift(t)), trees.shift(trees.deshift(t))
    if a != t:
        return f"deshift(shift T) = {trees.format_tree(a)}"
    if b != t:
        return f"shift(deshift T) = {trees.format_tree(b)}"
    if trees.shift(t).n_leaves != t.n_leaves:
        return "shift changed the leaf count"
    return None


suite("shift-deshift", {"T": "tree"}, "shift and deshift are inverse")((_gen_shift, _check_shift))


# length ----------------------------------------------------------------------


def _gen_length(rng):
    return {"T": _closed_tree(rng, 2), "S": _closed_tree(rng, 2), "r": _label(rng)}


def _check_length(c, k):
    t, s, r = c["T"], c["S"], c["r"]
    _closed(t, 2)
    _closed(s, 2)
    _need(0 <= r <= 1)
    lhs = k.length(normalize(trees.graft(t, 1, r, s)))
    rhs = k.length(t) + k.length(s) + 2 * r - 2
    if lhs != rhs:
        return f"l(T o_1^r S) = {format_rational(lhs)} but l(T) + l(S) + 2r - 2 = {format_rational(rhs)}"
    for n in (2, 3):
        if k.length(trees.corolla(n)) != 2:
            return f"l(delta_{n}) != 2"
    return None


suite("length", {"T": "tree", "S": "tree", "r": "rational"}, "additivity of the length")(
    (_gen_length, _check_length)
)


# normalize-confluence ----------------------------------------------------------


def _gen_confluence(rng):
    return {"T": gen.random_raw_tree(rng), "schedule": rng.randrange(10**6)}


def _check_confluence(c, k):
    t = c["T"]
    canon = normalize(t)
    other = trees.normalize_randomly(t, random.Random(c["schedule"]))
    if other != canon:
        return f"random schedule gives {trees.format_tree(other)}, canonical {trees.format_tree(canon)}"
    if normalize(canon) != canon:
        return "normalize is not idempotent"
    return None


suite("normalize-confluence", {"T": "tree", "schedule": "int"}, "rewrite order does not matter")(
    (_gen_confluence, _check_confluence)
)


# path families -------------------------------------------------------------------


def _fmt(t):
    return trees.format_tree(t)


def _check_sigma(c, k):
    t = c["T"]
    _closed(t, 2)
    t = normalize(t)
    p = paths.sigma(t)
    want0 = normalize(trees.graft(DELTA_2, 2, ONE, trees.deshift(t)))
    want1 = normalize(trees.graft(DELTA_2, 1, ONE, t))
    if p.start != want0:
        return f"sigma(0) = {_fmt(p.start)}, expected {_fmt(want0)}"
    if p.end != want1:
        return f"sigma(l) = {_fmt(p.end)}, expected {_fmt(want1)}"
    if p.length != k.length(t):
        return f"|sigma| = {format_rational(p.length)} but l(T) = {format_rational(k.length(t))}"
    return None


suite("sigma-endpoints", {"T": "tree"}, "endpoints and length of sigma")(
    (lambda rng: {"T": _closed_tree(rng, 2)}, _check_sigma)
)


def _check_gamma(c, k):
    t = c["T"]
    _closed(t, 1)
    t = normalize(t)
    p = paths.gamma(t)
    want0 = normalize(trees.graft(t, 1, ONE, DELTA_2))
    want1 = normalize(trees.graft(DELTA_2, 2, ONE, t))
    if p.length != 1:
        return "gamma is not parameterized by [0,1]"
    if p.start != want0:
        return f"gamma(0) = {_fmt(p.start)}, expected {_fmt(want0)}"
    if p.end != want1:
        return f"gamma(1) = {_fmt(p.end)}, expected {_fmt(want1)}"
    return None


suite("gamma-endpoints", {"T": "tree"}, "endpoints of gamma")(
    (lambda rng: {"T": _closed_tree(rng, 1)}, _check_gamma)
)


def _check_lambda(c, k):
    t = c["T"]
    _closed(t, 2)
    t = normalize(t)
    p = paths.lambda_path(t)
    erased = trees.degeneracy(trees.deshift(t), t.n_leaves)
    want0 = normalize(trees.graft(DELTA_2, 2, ONE, erased))
    if p.start != want0:
        return f"lambda(0) = {_fmt(p.start)}, expected {_fmt(want0)}"
    if p.end != t:
        return f"lambda(end) = {_fmt(p.end)}, expected {_fmt(t)}"
    return None


suite("lambda-endpoints", {"T": "tree"}, "endpoints of lambda")(
    (lambda rng: {"T": _closed_tree(rng, 2)}, _check_lambda)
)


# bar-confluence ------------------------------------------------------------------


def _bar_label(rng):
    return rng.choice([Fraction(0), Fraction(1, 2), ONE, ONE, gen.random_label(rng, True)])


def _gen_bar(rng):
    name = rng.choice(["z2", "right-zero"])
    action = _actions()[name]
    right = rng.choice(["star", "monoid"])
    left = rng.choice(["star", "monoid", "set"])
    while True:
        t = trees.map_labels(gen.random_raw_tree(rng), lambda _: _bar_label(rng))
        if t.n_leaves >= 2:
            break
    n = t.n_leaves
    q = bar.STAR if right == "star" else rng.choice(action.elements)
    p = {"star": bar.STAR, "monoid": rng.choice(action.elements), "set": rng.choice(action.left_set)}[left]
    mid = gen.random_word(rng, action.elements, n - 2)
    el = bar.BarElement(t, (q, *mid, p))
    return {"monoid": name, "right": right, "left": left, "element": el, "schedule": rng.randrange(10**6)}


def _check_bar(c, k):
    try:
        action = _actions()[c["monoid"]]
    except KeyError:
        raise Invalid("unknown monoid") from None
    el = c["element"]
    try:
        ctx = bar.BarContext(action, c["right"], c["left"])
        ctx.check_labels(el)
    except bar.BarError as exc:
        raise Invalid(str(exc)) from None
    canon = ctx.normalize(el)
    other = ctx.normalize_randomly(el, random.Random(c["schedule"]))
    if other != canon:
        return f"random schedule gives {bar.format_element(other)}, canonical {bar.format_element(canon)}"
    if ctx.normalize(canon) != canon:
        return "bar normal form is not idempotent"
    return None


suite(
    "bar-confluence",
    {"monoid": "str", "right": "str", "left": "str", "element": "element", "schedule": "int"},
    "bar normal forms do not depend on the rewrite order",
)((_gen_bar, _check_bar))


# theta-validity --------------------------------------------------------------------


def _gen_theta(rng):
    t = _closed_tree(rng, 2)
    if rng.random() < 0.5:
        t = gen.open_variant(t)
    return {"T": t}


def _check_theta(c, k):
    t = c["T"]
    _need(t.n_leaves >= 2, "theta needs at least one vertex")
    try:
        got = swiss_cheese.theta(t)
    except swiss_cheese.ConfigError as exc:
        return f"theta produced an invalid configuration: {exc}"
    want = swiss_cheese.theta_oracle(t)
    if got != want:
        return f"theta = {_fmt_config(got)} but the expanded formula gives {_fmt_config(want)}"
    return None


suite("theta-validity", {"T": "tree"}, "theta is valid and agrees with its expanded formula")(
    (_gen_theta, _check_theta)
)


# sc-axioms ------------------------------------------------------------------------------


def _slots(x) -> list:
    """Colors of the inputs of a configuration: 'cl' or 'op'."""
    if isinstance(x, swiss_cheese.ClosedConfig):
        return ["cl"] * x.arity
    return ["cl"] * len(x.closed) + (["op"] if x.distinguished else [])


def _random_of(rng, color):
    if color == "cl":
        return gen.random_closed_config(rng, 3)
    return gen.random_open_config(rng, 2, distinguished=rng.random() < 0.85)


def _gen_sc(rng):
    x = _random_of(rng, rng.choice(["cl", "op"]))
    while not _slots(x):
        x = _random_of(rng, "op")
    kind = "interchange" if len(_slots(x)) >= 2 and rng.random() < 0.4 else "assoc"
    if kind == "assoc":
        i = rng.randint(1, len(_slots(x)))
        y = _random_of(rng, _slots(x)[i - 1])
        while not _slots(y):
            y = _random_of(rng, _slots(x)[i - 1])
        j = rng.randint(i, i + len(_slots(y)) - 1)
        z = _random_of(rng, _slots(y)[j - i])
    else:
        i = rng.randint(2, len(_slots(x)))
        j = rng.randint(1, i - 1)
        y = _random_of(rng, _slots(x)[i - 1])
        z = _random_of(rng, _slots(x)[j - 1])
    return {"kind": kind, "x": x, "y": y, "z": z, "i": i, "j": j}


def _check_sc(c, k):
    x, y, z, i, j = c["x"], c["y"], c["z"], c["i"], c["j"]
    comp = swiss_cheese.compose
    try:
        if c["kind"] == "assoc":
            _need(i <= j <= i + len(_slots(y)) - 1)
            lhs = comp(comp(x, i, y), j, z)
            rhs = comp(x, i, comp(y, j - i + 1, z))
        else:
            _need(j < i)
            lhs = comp(comp(x, i, y), j, z)
            rhs = comp(comp(x, j, z), i + len(_slots(z)) - 1, y)
    except swiss_cheese.ConfigError as exc:
        raise Invalid(str(exc)) from None
    if lhs != rhs:
        return f"{c['kind']}: {_fmt_config(lhs)} != {_fmt_config(rhs)}"
    if comp(x, 1, swiss_cheese.CLOSED_UNIT if _slots(x)[0] == "cl" else swiss_cheese.OPEN_UNIT) != x:
        return "the unit configuration is not a right unit"
    return None


suite(
    "sc-axioms",
    {"kind": "str", "x": "config", "y": "config", "z": "config", "i": "int", "j": "int"},
    "colored operad axioms of the interval configurations",
)((_gen_sc, _check_sc))


# sc-action ---------------------------------------------------------------------------------

SC_POINTS = ("*", "a", "b")
SC_ENDS = ("*", "a")


def _gen_sc_action(rng):
    x = gen.random_open_config(rng, 2)
    i = rng.randint(1, len(_slots(x)))
    color = _slots(x)[i - 1]
    y = _random_of(rng, color) if color == "cl" else gen.random_open_config(rng, 2)
    n = len(_slots(x)) + len(_slots(y)) - 1
    loops = [gen.random_step_path(rng, SC_POINTS, "*") for _ in range(n - 1)]
    loops.append(gen.random_step_path(rng, SC_POINTS, "*", end=rng.choice(SC_ENDS)))
    return {"x": x, "i": i, "y": y, "loops": loops}


def _check_sc_action(c, k):
    x, i, y, loops = c["x"], c["i"], c["y"], c["loops"]
    try:
        _need(1 <= i <= len(_slots(x)))
        whole = swiss_cheese.act(swiss_cheese.compose(x, i, y), loops, "*")
        m = len(_slots(y))
        inner = swiss_cheese.act(y, loops[i - 1:i - 1 + m], "*")
        outer = swiss_cheese.act(x, loops[:i - 1] + [inner] + loops[i - 1 + m:], "*")
    except swiss_cheese.ConfigError as exc:
        raise Invalid(str(exc)) from None
    if whole.canonical() != outer.canonical():
        return f"{swiss_cheese.format_pcpath(whole)} != {swiss_cheese.format_pcpath(outer)}"
    if whole.start != "*" or whole.end != loops[-1].end:
        return "the action moved the basepoint or the endpoint"
    return None


suite(
    "sc-action",
    {"x": "config", "i": "int", "y": "config", "loops": "paths"},
    "the step-path action respects composition",
)((_gen_sc_action, _check_sc_action))


# ------------------------------------------------------------------ driver


def encode(suite_name: str, case: dict) -> dict:
    kinds = SUITES[suite_name].fields
    return {name: KINDS[kind][0](case[name]) for name, kind in kinds.items()}


def decode(suite_name: str, literals: dict) -> dict:
    kinds = get_suite(suite_name).fields
    return {name: KINDS[kind][1](literals[name]) for name, kind in kinds.items()}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}") from None


def run_case(s: Suite, case: dict, kernel: Kernel, strict: bool = True) -> Optional[str]:
    """The failure message, or ``None``.  Off-domain cases fail only when ``strict``."""
    try:
        return s.check(case, kernel)
    except Invalid as exc:
        if strict:
            return f"generated case outside the domain: {exc}"
        raise
    except Exception as exc:  # a crash is a failure too
        if not strict:
            raise Invalid(str(exc)) from None
        return f"{type(exc).__name__}: {exc}"


def _tree_size(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + sum(_tree_size(c) + (0 if lab is None else _label_cost(lab)) for lab, c in t.children)


def _label_cost(q) -> int:
    q = Fraction(q)
    return 0 if q == 1 else q.denominator + abs(q.numerator)


def _size(value) -> int:
    if isinstance(value, Tree):
        return _tree_size(value)
    if isinstance(value, Fraction):
        return _label_cost(value)
    if isinstance(value, bool):
        return 0
    if isinstance(value, int):
        return abs(value)
    if isinstance(value, bar.BarElement):
        return _tree_size(value.tree)
    return 0


def case_size(case: dict) -> int:
    return sum(_size(v) for v in case.values())


def _node_paths(t: Tree, path=()):
    if isinstance(t, Node):
        yield path, t
        for k, (_, c) in enumerate(t.children):
            yield from _node_paths(c, path + (k,))


def tree_candidates(t: Tree):
    """Smaller trees: subtrees, subtrees replaced by leaves, dropped leaves, unit labels."""
    if isinstance(t, Leaf):
        return
    for _, c in t.children:
        if isinstance(c, Node):
            yield c
    for path, node in _node_paths(t):
        for k, (lab, c) in enumerate(node.children):
            def swap(kids, k=k, c=c):
                kids[k] = (None, Leaf(c.color))
                return Node(kids)

            def drop(kids, k=k):
                del kids[k]
                return Node(kids)

            def unit(kids, k=k, c=c):
                kids[k] = (ONE, c)
                return Node(kids)

            if isinstance(c, Node) and c.n_leaves:
                yield trees.replace_children(t, path, swap)
            if len(node.children) >= 3 or (len(node.children) == 2 and isinstance(c, Node) and not c.n_leaves):
                if not (isinstance(c, Leaf) and c.color is trees.OPEN):
                    yield trees.replace_children(t, path, drop)
            if lab is not None and lab != 1:
                yield trees.replace_children(t, path, unit)


def value_candidates(value):
    if isinstance(value, Tree):
        yield from tree_candidates(value)
    elif isinstance(value, Fraction):
        for q in (ONE, Fraction(1, 2), Fraction(0)):
            if q != value:
                yield q
    elif isinstance(value, int) and not isinstance(value, bool):
        for v in (0, 1, value // 2, value - 1):
            if 0 <= v < value:
                yield v
    elif isinstance(value, bar.BarElement):
        labels = value.labels
        for t in tree_candidates(value.tree):
            if t.n_leaves == len(labels):
                yield bar.BarElement(t, labels)
            elif 2 <= t.n_leaves < len(labels):
                yield bar.BarElement(t, labels[: t.n_leaves - 1] + labels[-1:])


def shrink(s: Suite, case: dict, kernel: Kernel, max_steps: int = 500) -> dict:
    """Greedy: take the first strictly smaller variant that still fails."""
    current = dict(case)
    for _ in range(max_steps):
        best = case_size(current)
        for name in s.fields:
            for cand in value_candidates(current[name]):
                trial = dict(current, **{name: cand})
                if case_size(trial) >= best:
                    continue
                try:
                    failed = run_case(s, trial, kernel, strict=False) is not None
                except Invalid:
                    failed = False
                if failed:
                    current = trial
                    break
            else:
                continue
            break
        else:
            return current
    return current


@dataclass
class CaseFailure:
    index: int
    message: str
    original: dict
    minimized: dict
    minimized_message: str
    shrunk: bool = True


@dataclass
class VerificationReport:
    suite: str
    seed: int
    cases: int
    mutations: tuple = ()
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        # wall time is left out so that reports are byte-reproducible
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "mutations": list(self.mutations),
            "failures": [
                {
                    "case": f.index,
                    "message": f.message,
                    "original": f.original,
                    "minimized": f.minimized,
                    "minimized_message": f.minimized_message,
                    "shrunk": f.shrunk,
                }
                for f in self.failures
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self, limit: int = 3) -> str:
        head = f"suite {self.suite} seed {self.seed} cases {self.cases} failures {len(self.failures)}"
        if self.mutations:
            head += " mutations " + ",".join(self.mutations)
        lines = [head]
        for f in self.failures[:limit]:
            lines.append(f"FAIL case {f.index}: {f.message}")
            tag = "minimized" if f.shrunk else "case (not shrunk)"
            lines.append(f"  {tag}: " + " ".join(f"{k}={v}" for k, v in f.minimized.items()))
            lines.append(f"  reason: {f.minimized_message}")
        if len(self.failures) > limit:
            lines.append(f"... {len(self.failures) - limit} more")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def generate_case(suite_name: str, seed: int, index: int) -> dict:
    return get_suite(suite_name).generate(gen.rng_for(suite_name, seed, index))


def verify(
    suite_name: str,
    seed: int = 0,
    cases: int = 100,
    mutations=(),
    shrink_limit: int = 10,
) -> VerificationReport:
    """Run ``cases`` seeded cases; the first ``shrink_limit`` failures get minimized."""
    s = get_suite(suite_name)
    kernel = Kernel(mutations)
    report = VerificationReport(suite_name, seed, cases, tuple(mutations))
    started = time.perf_counter()
    for index in range(cases):
        case = generate_case(suite_name, seed, index)
        message = run_case(s, case, kernel)
        if message is None:
            continue
        shrunk = len(report.failures) < shrink_limit
        small = shrink(s, case, kernel) if shrunk else case
        small_message = run_case(s, small, kernel) or message
        report.failures.append(
            CaseFailure(index, message, encode(suite_name, case), encode(suite_name, small), small_message, shrunk)
        )
    report.wall_time = time.perf_counter() - started
    return report


def reproduce(suite_name: str, literals: dict, mutations=()) -> Optional[str]:
    """Re-run a printed counterexample."""
    s = get_suite(suite_name)
    return run_case(s, decode(suite_name, literals), Kernel(mutations))


def suite_names() -> list[str]:
    return sorted(SUITES)
