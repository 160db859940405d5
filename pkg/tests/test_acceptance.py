"""The fifteen acceptance criteria.

Each test carries ``@pytest.mark.criterion(n)``; the conftest hook prints one
PASS/FAIL line per criterion at the end of the run.
"""

import contextlib
import io
import itertools
import random
import shlex
from fractions import Fraction as F
from pathlib import Path as FsPath

import pytest

from ainfty import bar, cli, gen, moore, operad_k, paths, swiss_cheese as sc, trees, verify
from ainfty.moore import juxtapose, path_equal, star, star3, window, x_value
from ainfty.paths import edge_splits, gamma, graft_path, lambda_path, root_valence, sigma
from ainfty.rational import Affine
from ainfty.trees import DELTA_1, LEAF, Node, corolla, degeneracy, deshift, equal_mod, graft, normalize

ONE = F(1)
HALF = F(1, 2)
DELTA_2 = corolla(2)
L = operad_k.length
GOLDEN = FsPath(__file__).parent / "golden"

criterion = pytest.mark.criterion


def small_trees(lo, hi, labels=(HALF, ONE)):
    return [t for n in range(lo, hi + 1) for t in gen.labeled_trees(n, labels)]


def assert_suite(name, cases, seed=0):
    report = verify.verify(name, seed=seed, cases=cases)
    assert report.ok, report.to_text()
    assert report.cases == cases


# ---------------------------------------------------------------- 1


@criterion(1)
def test_operad_relations_random():
    assert_suite("operad-axioms", 10_000)


@criterion(1)
def test_operad_relations_all_small_shapes():
    shapes = [s for n in range(2, 5) for s in gen.all_shapes(n)]
    q = r = HALF
    checked = 0
    for u, t, s in itertools.product(shapes, repeat=3):
        for i in range(1, u.n_leaves + 1):
            ut = graft(u, i, q, t)
            for j in range(i, i + t.n_leaves):
                checked += 1
                assert equal_mod(graft(ut, j, r, s), graft(u, i, q, graft(t, j - i + 1, r, s)))
            for j in range(1, i):
                checked += 1
                assert equal_mod(graft(ut, j, r, s), graft(graft(u, j, r, s), i + s.n_leaves - 1, q, t))
    assert checked > 40_000


# ---------------------------------------------------------------- 2


@criterion(2)
def test_shift_deshift_inverse():
    rng = random.Random(2)
    for _ in range(10_000):
        t = gen.random_tree(rng, 1)
        assert trees.deshift(trees.shift(t)) == t
        assert trees.shift(trees.deshift(t)) == t


# ---------------------------------------------------------------- 3


def catalan_by_recurrence(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[k] * c[m - k] for k in range(m + 1)))
    return c[n]


@criterion(3)
@pytest.mark.parametrize("n, expected", [(3, (2, 1)), (4, (5, 5, 1)), (5, (14, 21, 9, 1))])
def test_f_vectors(n, expected):
    assert operad_k.f_vector(n) == expected


@criterion(3)
@pytest.mark.parametrize("n", range(2, 9))
def test_vertex_counts_are_catalan(n):
    vertices = operad_k.f_vector(n)[0]
    assert vertices == catalan_by_recurrence(n - 1)
    if n == 8:
        assert vertices == 429


# ---------------------------------------------------------------- 4


@criterion(4)
def test_length_values():
    assert L(DELTA_1) == 0
    for n in range(2, 10):
        assert L(corolla(n)) == 2


@criterion(4)
def test_length_additivity():
    assert_suite("length", 5_000)


# ---------------------------------------------------------------- 5


def check_sigma_tree(t):
    p = sigma(t)
    assert p.length == L(t)
    assert p.start == normalize(graft(DELTA_2, 2, ONE, deshift(t)))
    assert p.end == normalize(graft(DELTA_2, 1, ONE, t))
    for t1, i, r, t2 in edge_splits(t):
        if i > 1:
            assert path_equal(p, graft_path(sigma(t1), i, r, t2))
        else:
            head = graft_path(window(sigma(t2), 0, L(t2) + r - 1), t2.n_leaves + 1, r, deshift(t1))
            tail = graft_path(window(sigma(t1), 1 - r, L(t1)), 1, r, t2)
            assert path_equal(p, juxtapose(head, tail, check=False))


@criterion(5)
def test_sigma_all_small_trees():
    for t in small_trees(2, 5):
        check_sigma_tree(t)


@criterion(5)
def test_sigma_random_larger_trees():
    rng = random.Random(5)
    for _ in range(1_000):
        check_sigma_tree(gen.random_tree(rng, 6, 7))


# ---------------------------------------------------------------- 6


def gamma_splice_value(t, u, s, time):
    """gamma(T o_1^u S)(time), assembled from gamma(S) and gamma(T)."""
    l = L(normalize(graft(t, 1, u, s)))
    first_end = (L(s) + u - 1) / l
    if time <= first_end:
        return normalize(graft(t, 1, u, gamma(s).raw_at(l * time / L(s))))
    c = (L(s) + 2 * u - 2) / l
    return normalize(graft(gamma(t).raw_at((time - c) / (1 - c)), 2, u, s))


@criterion(6)
def test_gamma_endpoints_and_relations():
    for t in [LEAF] + small_trees(2, 5):
        g = gamma(t)
        assert g.length == 1
        assert g.start == normalize(graft(t, 1, ONE, DELTA_2))
        assert g.end == normalize(graft(DELTA_2, 2, ONE, t))
        for t1, i, r, t2 in edge_splits(t):
            if i > 1:
                assert path_equal(g, graft_path(gamma(t1), i + 1, r, t2))
            else:
                for time in moore.sample_times(g, g, extra=8):
                    assert g(time) == gamma_splice_value(t1, r, t2, time)


@criterion(6)
def test_gamma_degeneracy_avatar():
    for t in [LEAF] + small_trees(2, 5):
        g = gamma(t)
        for k in range(9):
            assert equal_mod(degeneracy(g(F(k, 8)), 1), t)


# ---------------------------------------------------------------- 7


@criterion(7)
def test_lambda_clauses():
    for t in small_trees(2, 5):
        lam = lambda_path(t)
        erased_t = degeneracy(deshift(t), t.n_leaves)
        assert lam.start == normalize(graft(DELTA_2, 2, ONE, erased_t))
        assert lam.end == t
        if root_valence(t) > 2:
            assert lam.length == L(t) - 1
        for t1, i, r, t2 in edge_splits(t):
            if i > 1:
                # the clause is stated for plain composition; labeled grafts keep it on wide roots
                if r == 1 or root_valence(t1) > 2:
                    assert path_equal(lam, graft_path(lambda_path(t1), i, r, t2))
                continue
            erased = degeneracy(deshift(t1), t1.n_leaves)
            if r == 1:
                want = juxtapose(
                    graft_path(sigma(t2), t2.n_leaves + 1, ONE, erased),
                    graft_path(lambda_path(t1), 1, ONE, t2),
                    check=False,
                )
                assert path_equal(lam, want)
            if root_valence(t1) > 2:
                want = juxtapose(
                    graft_path(window(sigma(t2), 0, L(t2) + r - 1), t2.n_leaves + 1, r, erased),
                    graft_path(window(lambda_path(t1), 1 - r, L(t1) - 1), 1, r, t2),
                    check=False,
                )
                assert path_equal(lam, want)


@criterion(7)
def test_lambda_case_boundaries():
    pieces = [LEAF] + small_trees(2, 4)
    checked = 0
    for t1, t2 in itertools.product(pieces, repeat=2):
        if t1.n_leaves + t2.n_leaves > 5:
            continue
        for w in (F(1, 3), HALF, ONE):
            for zero_u in (True, False):
                if (t1 is LEAF and zero_u) or (t2 is LEAF and not zero_u):
                    continue
                u, v = (F(0), w) if zero_u else (w, F(0))
                tree = Node([(None if t1 is LEAF else u, t1), (None if t2 is LEAF else v, t2)])
                checked += 1
                assert path_equal(paths.lambda_binary_root(t1, u, t2, v), lambda_path(normalize(tree)))
    assert checked > 100


# ---------------------------------------------------------------- 8


def random_unit_paths(rng, count):
    """Paths ``t -> shape with labels (1-t) v_k + t v_{k+1}``, chained end to start."""
    shape = gen.random_shape(rng, rng.randint(3, 4))
    m = shape.n_internal
    vectors = [[gen.random_label(rng, allow_zero=True) for _ in range(m)] for _ in range(count + 1)]
    out = []
    for k in range(count):
        it = iter(zip(vectors[k], vectors[k + 1]))
        skeleton = trees.map_labels(shape, lambda _: (lambda a, b: Affine.make(a, b - a))(*next(it)))
        out.append(moore.Path.single(skeleton, 1))
    return out


def random_times(rng, count=64):
    return [F(rng.randint(0, 240), 240) for _ in range(count)]


def sorted_fractions(rng, k, denominator=60):
    return sorted(F(x, denominator) for x in rng.sample(range(1, denominator), k))


@criterion(8)
def test_bracketing_identity():
    rng = random.Random(8)
    for _ in range(1_000):
        p1, p2, p3 = random_unit_paths(rng, 3)
        times = random_times(rng)
        a, b = sorted_fractions(rng, 2)
        forms = [
            star(star(p1, p2, a / b), p3, b),
            star3(p1, p2, p3, a, b),
            star(p1, star(p2, p3, (b - a) / (1 - a)), a),
        ]
        a1, a2, a3, c = sorted_fractions(rng, 4)
        fond = [
            star(star(p1, p2, x_value(c, a1, a2)), p3, x_value(c, a2, a3)),
            star3(p1, p2, p3, x_value(c, a1, a3), x_value(c, a2, a3)),
            star(p1, star(p2, p3, x_value(c - a1, a2 - a1, a3 - a1)), x_value(c, a1, a3)),
        ]
        for group in (forms, fond):
            assert len({f.length for f in group}) == 1
            for t in times:
                assert group[0](t) == group[1](t) == group[2](t)


@criterion(8)
def test_homotopy_splice():
    action = bar.cyclic_action(2)
    ctx = bar.BarContext(action, "monoid", "set")
    h = bar.h_homotopy
    rng = random.Random(88)
    for _ in range(1_000):
        t3, t2, t1 = (gen.random_tree(rng, 2, 3) for _ in range(3))
        t32, t21 = normalize(graft(t3, 1, ONE, t2)), normalize(graft(t2, 1, ONE, t1))
        whole = normalize(graft(t32, 1, ONE, t1))
        labels = gen.random_word(rng, action.elements, whole.n_leaves - 1) + (rng.choice(action.left_set),)
        a = x_value(L(whole), L(t1), L(t1) + L(t2))
        reduced = (action.product(labels[: t1.n_leaves]),) + labels[t1.n_leaves:]
        for _ in range(64):
            t, u = F(rng.randint(0, 24), 24), F(rng.randint(0, 24), 24)
            if u <= a:
                rhs = h(ctx, t32, t1, labels, t, u / a)
            else:
                rhs = h(ctx, t3, t2, reduced, t, (u - a) / (1 - a))
            assert h(ctx, t3, t21, labels, t, u) == rhs


# ---------------------------------------------------------------- 9


def random_bar_element(rng, action, right, left):
    while True:
        t = trees.map_labels(
            gen.random_raw_tree(rng),
            lambda _: rng.choice([F(0), HALF, ONE, ONE, gen.random_label(rng, True)]),
        )
        if t.n_leaves >= 2:
            break
    q = bar.STAR if right == "star" else rng.choice(action.elements)
    p = {"star": bar.STAR, "monoid": rng.choice(action.elements), "set": rng.choice(action.left_set)}[left]
    return bar.BarElement(t, (q, *gen.random_word(rng, action.elements, t.n_leaves - 2), p))


@criterion(9)
@pytest.mark.parametrize("action", [bar.cyclic_action(2), bar.right_zero_action()], ids=["z2", "right-zero"])
def test_bar_confluence(action):
    rng = random.Random(9)
    for k in range(500):
        right, left = rng.choice(["star", "monoid"]), rng.choice(["star", "monoid", "set"])
        ctx = bar.BarContext(action, right, left)
        el = random_bar_element(rng, action, right, left)
        canon = ctx.normalize(el)
        for schedule in range(10):
            assert ctx.normalize_randomly(el, random.Random(1000 * k + schedule)) == canon


@criterion(9)
@pytest.mark.parametrize("action", [bar.cyclic_action(2), bar.right_zero_action()], ids=["z2", "right-zero"])
def test_retraction(action):
    ctx = bar.BarContext(action, "monoid", "set")
    for p in action.left_set:
        assert bar.retract(ctx, bar.embed(ctx, p)) == p
    rng = random.Random(99)
    for _ in range(500):
        el = random_bar_element(rng, action, "monoid", "set")
        value = bar.retract(ctx, el)
        assert bar.retract(ctx, ctx.normalize(el)) == value
        step = el
        for _ in range(4):
            sites = ctx.rewrite_sites(step)
            if not sites:
                break
            step = ctx.rewrite_step(step, rng.choice(sites))
            assert bar.retract(ctx, step) == value


# ---------------------------------------------------------------- 10


Z2 = bar.cyclic_action(2)
BZ2 = bar.BarContext(Z2, "star", "star")


@criterion(10)
def test_usual_map_loops_close():
    base = BZ2.basepoint()
    for t in small_trees(2, 5):
        for xs in itertools.product(Z2.elements, repeat=t.n_leaves - 1):
            loop = bar.f_n(BZ2, t, xs)
            assert loop.start == base and loop.end == base
    for x in Z2.elements:
        loop = bar.usual_map(BZ2, x)
        assert loop.length == 2 and loop.start == base and loop.end == base


@criterion(10)
def test_a_infinity_map_relations():
    rng = random.Random(10)
    for rho, tau in itertools.product(small_trees(2, 4), repeat=2):
        r, s = rho.n_leaves, tau.n_leaves
        xs = gen.random_word(rng, Z2.elements, r + s - 2)
        for j in range(1, r):
            lhs = bar.f_n(BZ2, normalize(graft(rho, j + 1, ONE, tau)), xs)
            inner = Z2.product(xs[j - 1:j - 1 + s])
            rhs = bar.f_n(BZ2, rho, xs[:j - 1] + (inner,) + xs[j - 1 + s:])
            assert path_equal(lhs, rhs, extra=8)
        lhs = bar.f_n(BZ2, normalize(graft(rho, 1, ONE, tau)), xs)
        rhs = juxtapose(bar.f_n(BZ2, tau, xs[:s - 1]), bar.f_n(BZ2, rho, xs[s - 1:]))
        assert path_equal(lhs, rhs, extra=8)


# ---------------------------------------------------------------- 11


@criterion(11)
def test_alpha_formulas():
    ctx = bar.BarContext(Z2, "monoid", "set")
    orbits = ctx.retarget(right="star")
    checked = 0
    for t in small_trees(2, 4):
        for xs in itertools.product(Z2.elements, repeat=t.n_leaves - 1):
            for p in Z2.left_set:
                el = bar.BarElement(t, xs + (p,))
                a = bar.alpha(ctx, el)
                assert a(0) == orbits.normalize(bar.BarElement(DELTA_2, (bar.STAR, ctx.N(xs, p))))
                assert a(1) == orbits.normalize(bar.BarElement(t, (bar.STAR,) + xs[1:] + (p,)))
                if t.n_leaves == 2:
                    labels = (bar.STAR, xs[0], p)
                    want = moore.Path(
                        [
                            moore.Segment(HALF, bar.BarElement(graft(DELTA_2, 2, Affine(1, -2), DELTA_2), labels)),
                            moore.Segment(HALF, bar.BarElement(graft(DELTA_2, 1, Affine(0, 2), DELTA_2), labels)),
                        ],
                        orbits,
                    )
                    assert path_equal(a, want)
                checked += 1
    assert checked == 540


# ---------------------------------------------------------------- 12


CONE = bar.cone_context(Z2)


def equivariance_pairs():
    trees_by_size = {n: gen.labeled_trees(n) for n in range(2, 5)}
    for a, b in itertools.product(range(2, 5), repeat=2):
        pairs = list(itertools.product(trees_by_size[a], trees_by_size[b]))
        yield from pairs


@criterion(12)
def test_equivariance_clauses():
    rng = random.Random(12)
    fe = lambda t, xs, p: bar.f_equivariant(CONE, t, xs, p)
    checked = 0
    for tau, rho in equivariance_pairs():
        i, j = tau.n_leaves - 1, rho.n_leaves - 1
        xs = gen.random_word(rng, Z2.elements, i + j - 1)
        p = rng.choice(Z2.left_set)
        for k in range(1, i + 2):
            lhs = fe(normalize(graft(tau, k, ONE, rho)), xs, p)
            if k == 1:
                rhs = juxtapose(bar.f_n(CONE, rho, xs[:j]), fe(tau, xs[j:], p))
            elif k <= i:
                inner = Z2.product(xs[k - 2:k + j - 1])
                rhs = fe(tau, xs[:k - 2] + (inner,) + xs[k + j - 1:], p)
            else:
                rhs = fe(tau, xs[:i - 1], Z2.act(Z2.product(xs[i - 1:]), p))
            checked += 1
            assert path_equal(lhs, rhs, extra=4)
    assert checked > 3_000


@criterion(12)
def test_gamma_p_starts_at_apex():
    apex = CONE.normalize(bar.BarElement(DELTA_2, (bar.STAR, bar.APEX)))
    for p in Z2.left_set:
        g = bar.gamma_p(CONE, p)
        assert g(0) == apex
        assert g(1) == CONE.normalize(bar.BarElement(DELTA_2, (bar.STAR, bar.ConePoint(p, ONE))))
        assert bar.f_equivariant(CONE, DELTA_2, (), p).end == g(1)


@criterion(12)
@pytest.mark.xfail(strict=True, reason="the apex sits at cone height 0, so gamma_p ends at p, not at the apex")
def test_gamma_p_ends_at_apex():
    apex = CONE.normalize(bar.BarElement(DELTA_2, (bar.STAR, bar.APEX)))
    for p in Z2.left_set:
        assert bar.gamma_p(CONE, p)(1) == apex


# ---------------------------------------------------------------- 13


@criterion(13)
def test_sc_operad_axioms():
    assert_suite("sc-axioms", 5_000)


POINTS, ENDS = ("*", "a", "b"), ("*", "a")


def step_loops(cuts, end_values):
    """Every step path from ``*`` whose jumps lie in ``cuts``."""
    out = []
    for k in range(len(cuts) + 1):
        for chosen in itertools.combinations(cuts, k):
            for values in itertools.product(POINTS, repeat=k):
                for end in end_values:
                    out.append(sc.PCPath((0, *chosen, 1), ("*", *values), end))
    return out


def parse_configs(*literals):
    return [sc.parse_config(s) for s in literals]


SC_CLOSED = parse_configs("cl{[0,1/2]}", "cl{[1/4,3/4]}", "cl{[0,1/3],[1/2,1]}")
SC_OPEN = parse_configs("op{;[1/2,1]}", "op{[0,1/3];[1/2,1]}", "op{[1/4,1/2];}", "op{[1/6,1/3],[1/2,2/3];[5/6,1]}")


def slots(x):
    return verify._slots(x)


@criterion(13)
def test_sc_action_exhaustive():
    rich = {c: step_loops((F(1, 4), HALF, F(3, 4)), e) for c, e in (("cl", ("*",)), ("op", ENDS))}
    lean = {c: step_loops((HALF,), e) for c, e in (("cl", ("*",)), ("op", ENDS))}
    checked = 0
    for x in SC_OPEN:
        for i, color in enumerate(slots(x), 1):
            for y in SC_CLOSED if color == "cl" else SC_OPEN:
                colors = slots(x)[: i - 1] + slots(y) + slots(x)[i:]
                family = rich if len(colors) <= 2 else lean
                whole_config = sc.compose(x, i, y)
                m = len(slots(y))
                for loops in itertools.product(*(family[c] for c in colors)):
                    loops = list(loops)
                    whole = sc.act(whole_config, loops, "*")
                    inner = sc.act(y, loops[i - 1:i - 1 + m], "*")
                    stepwise = sc.act(x, loops[: i - 1] + [inner] + loops[i - 1 + m:], "*")
                    assert whole.canonical() == stepwise.canonical()
                    assert whole.start == "*"
                    assert whole.end == (loops[-1].end if colors[-1] == "op" else "*")
                    checked += 1
    assert checked > 10_000


# ---------------------------------------------------------------- 14


@criterion(14)
@pytest.mark.parametrize("n", range(2, 8))
def test_theta_corollas(n):
    w = F(1, n)
    assert sc.theta(corolla(n)) == sc.ClosedConfig(tuple((k * w, (k + 1) * w) for k in range(n)))
    w = F(1, n + 1)
    want = sc.OpenConfig(tuple((k * w, (k + 1) * w) for k in range(n)), (n * w, ONE))
    assert sc.theta(corolla(n + 1, trees.OPEN)) == want


@criterion(14)
def test_theta_well_defined():
    checked = 0
    for t in small_trees(2, 5, (F(1, 3), ONE)):
        for variant in (t, gen.open_variant(t)):
            value = sc.theta(variant)
            for x, i, r, y in edge_splits(variant):
                assert sc.theta_via(x, i, r, y) == value
                checked += 1
    assert checked > 1_000


@criterion(14)
def test_theta_validity():
    assert_suite("theta-validity", 10_000)


@criterion(14)
def test_theta_collapse_boundary():
    for t in small_trees(2, 4):
        for variant in (t, gen.open_variant(t)):
            for x, i, r, y in edge_splits(variant):
                collapsed = normalize(graft(x, i, 0, y))
                assert sc.theta_via(x, i, 0, y) == sc.theta(collapsed)
                assert sc.theta_via(x, i, ONE, y) == sc.compose(sc.theta(x), i, sc.theta(y))


# ---------------------------------------------------------------- 15


def run_cli(line):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(shlex.split(line))
    return code, out.getvalue()


def run_script():
    chunks = []
    for line in (GOLDEN / "commands.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        code, text = run_cli(line)
        chunks.append(f"$ {line}\n[exit {code}]\n{text}")
    return "".join(chunks)


@criterion(15)
def test_cli_golden_script():
    commands = [l for l in (GOLDEN / "commands.txt").read_text().splitlines() if l.strip() and not l.startswith("#")]
    assert len(commands) == 20
    first, second = run_script(), run_script()
    assert first == second
    assert first == (GOLDEN / "outputs.txt").read_text()


@criterion(15)
def test_planted_mutation_is_caught_and_minimized():
    report = verify.verify("length", seed=0, cases=50, mutations=("length-sign",))
    assert not report.ok
    failure = report.failures[0]
    assert failure.shrunk
    small, big = (verify.case_size(verify.decode("length", c)) for c in (failure.minimized, failure.original))
    assert small <= big and failure.minimized != failure.original
    literals = failure.minimized
    assert literals["T"] == "(* *)" and literals["S"] == "(* *)"
    assert verify.reproduce("length", literals, ("length-sign",)) is not None
    assert verify.reproduce("length", literals) is None
    code, text = run_cli("verify length --mutate length-sign --cases 50")
    assert code == 1 and "(* *)" in text
