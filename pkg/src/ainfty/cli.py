"""Command-line front end.

Exit status: 0 on success, 1 when a verification finds failures, 2 on usage
or parse errors.  Output is deterministic for identical arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import bar, moore, operad_k, paths, svg, swiss_cheese, trees, verify
from .rational import format_rational, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUILTIN_ACTIONS = {"z2": lambda: bar.cyclic_action(2), "right-zero": bar.right_zero_action}


class UsageError(Exception):
    pass


def load_action(spec: str) -> bar.FiniteAction:
    """A builtin name or a JSON file with ``elements``, ``unit``, ``mul``..."""
    if spec in BUILTIN_ACTIONS:
        return BUILTIN_ACTIONS[spec]()
    if not os.path.exists(spec):
        raise UsageError(f"no such monoid file or builtin: {spec!r} (builtins: {', '.join(BUILTIN_ACTIONS)})")
    try:
        return bar.FiniteAction.load(spec)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{spec}: not valid JSON: {exc}") from None


# ----------------------------------------------------------------- output


class Out:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text: str, data=None, picture=None):
        if self.fmt == "json":
            payload = data if data is not None else {"result": text}
            self.stream.write(json.dumps(payload, sort_keys=True) + "\n")
        elif self.fmt == "svg":
            if picture is None:
                raise UsageError("this command has no picture; use --format text or json")
            self.stream.write(picture() if callable(picture) else picture)
        else:
            self.stream.write(text + "\n")


def _tree(text: str) -> trees.Tree:
    return trees.parse_tree(text)


def _q(text: str) -> Fraction:
    return parse_rational(text)


def _fmt(t) -> str:
    return trees.format_tree(t)


# ------------------------------------------------------------------- tree


def cmd_tree(args, out: Out):
    op = args.op
    if op == "normalize":
        t = trees.normalize(_tree(args.tree))
    elif op == "graft":
        t = trees.graft(_tree(args.tree), args.index, _q(args.label), _tree(args.other))
        if not args.raw:
            t = trees.normalize(t)
    elif op == "shift":
        t = trees.shift(_tree(args.tree))
    elif op == "deshift":
        t = trees.deshift(_tree(args.tree))
    elif op == "compose":
        t = operad_k.compose_k(_tree(args.tree), args.index, _tree(args.other))
    elif op == "degeneracy":
        t = trees.degeneracy(_tree(args.tree), args.index)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(op)
    out.emit(_fmt(t), {"tree": _fmt(t), "leaves": t.n_leaves}, lambda: svg.render_tree(t))


# ---------------------------------------------------------------------- k


def cmd_k(args, out: Out):
    if args.op == "faces":
        n = args.n
        if not 2 <= n <= operad_k.MAX_FACE_ARITY:
            raise UsageError(f"faces are enumerated for 2 <= n <= {operad_k.MAX_FACE_ARITY}")
        fv = operad_k.f_vector(n)
        lines = [f"K_{n} f-vector: " + " ".join(map(str, fv))]
        if args.list:
            for face in operad_k.enumerate_faces(n):
                lines.append(f"  dim {operad_k.face_dimension(face)}: {trees.format_tree(face, with_labels=False)}")
        faces = [trees.format_tree(f, with_labels=False) for f in operad_k.enumerate_faces(n)] if args.list else None
        data = {"n": n, "f_vector": list(fv), "vertices": fv[0]}
        if faces is not None:
            data["faces"] = faces
        out.emit("\n".join(lines), data)
    elif args.op == "length":
        t = _tree(args.tree)
        lv = operad_k.length(t)
        out.emit(format_rational(lv), {"tree": _fmt(trees.normalize(t)), "length": format_rational(lv)})
    elif args.op == "comb":
        t = trees.normalize(_tree(args.tree))
        comb = operad_k.comb_decompose(t)
        factors = [_fmt(f) for f in comb.factors]
        labels = [format_rational(u) for u in comb.labels]
        lines = [f"T{k + 1} = {f}" for k, f in enumerate(factors)]
        lines += [f"u{k + 1} = {u}" for k, u in enumerate(labels)]
        out.emit("\n".join(lines), {"factors": factors, "labels": labels})


# ------------------------------------------------------------------- path


FAMILIES = {"sigma": paths.sigma, "gamma": paths.gamma, "lambda": paths.lambda_path}


def _emit_path(path: moore.Path, at: Optional[list], out: Out):
    fmt = path.space.format
    if at:
        times = [_q(t) for t in at]
        values = [path(t) for t in times]
        text = "\n".join(
            (f"t={format_rational(t)}: " if len(times) > 1 else "") + fmt(v) for t, v in zip(times, values)
        )
        data = {"values": [{"t": format_rational(t), "value": fmt(v)} for t, v in zip(times, values)]}
        out.emit(text, data, lambda: svg.render_path_snapshot(path, times))
        return
    records = moore.to_records(path)
    lines = [f"length {format_rational(path.length)}"]
    lines += [f"  [{r['duration']}] {r['value']}" for r in records]
    lines += [f"start {fmt(path.start)}", f"end {fmt(path.end)}"]
    data = {
        "length": format_rational(path.length),
        "segments": records,
        "start": fmt(path.start),
        "end": fmt(path.end),
    }
    out.emit("\n".join(lines), data, lambda: svg.render_path_snapshot(path, path.breakpoints()))


def cmd_path(args, out: Out):
    if args.op == "eval":
        text = open(args.path).read() if os.path.exists(args.path) else args.path
        try:
            path = moore.loads(text)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"bad path document: {exc}") from None
    else:
        if not args.tree:
            raise UsageError("--tree is required")
        path = FAMILIES[args.op](_tree(args.tree))
    _emit_path(path, args.at, out)


# -------------------------------------------------------------------- bar


def _context(args, right, left) -> bar.BarContext:
    action = load_action(args.monoid)
    return bar.BarContext(action, getattr(args, "right", None) or right, getattr(args, "left", None) or left)


def _element(ctx: bar.BarContext, text: str) -> bar.BarElement:
    el = bar.parse_element(text)
    ctx.check_labels(el)
    return el


def cmd_bar(args, out: Out):
    op = args.op
    if op == "normalize":
        ctx = _context(args, "star", "star")
        el = ctx.normalize(_element(ctx, args.element))
        lit = bar.format_element(el)
        out.emit(lit, {"element": lit, "context": repr(ctx)}, lambda: svg.render_tree(el.tree, caption=lit))
    elif op == "usual-map":
        ctx = _context(args, "star", "star")
        if args.x not in ctx.action.elements:
            raise UsageError(f"{args.x!r} is not a monoid element")
        path = bar.usual_map(ctx, args.x)
        _emit_path(path, args.at, out)
    elif op == "retract":
        ctx = _context(args, "monoid", "set")
        el = _element(ctx, args.element)
        value = bar.retract(ctx, el)
        out.emit(bar.format_value(value), {"element": bar.format_element(el), "retract": bar.format_value(value)})
    elif op == "alpha":
        ctx = _context(args, "monoid", "set")
        _emit_path(bar.alpha(ctx, _element(ctx, args.element)), args.at, out)
    elif op == "beta":
        ctx = _context(args, "monoid", "set")
        _emit_path(bar.beta(ctx, _element(ctx, args.element)), args.at, out)
    elif op == "validate-im":
        action = load_action(args.monoid)
        if not action.left_set:
            raise UsageError("validate-im needs a left action set")
        report = bar.validate_iwase_mimura(action, max_leaves=args.max_leaves)
        lines = [f"checked {report.checked} instances, {len(report.violations)} violations"]
        lines += report.violations[:10]
        lines.append("OK" if report.ok else "FAILED")
        out.emit("\n".join(lines), {"checked": report.checked, "violations": report.violations, "ok": report.ok})
        return EXIT_OK if report.ok else EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------- sc


def _config_or_tree(text: str):
    text = text.strip()
    if text.startswith(("cl{", "op{")):
        return swiss_cheese.parse_config(text)
    return _tree(text)


def cmd_sc(args, out: Out):
    op = args.op
    if op == "compose":
        x = swiss_cheese.compose(
            swiss_cheese.parse_config(args.config), args.index, swiss_cheese.parse_config(args.other)
        )
        lit = swiss_cheese.format_config(x)
        out.emit(lit, {"config": lit}, lambda: svg.render_config(x))
    elif op == "theta":
        t = _tree(args.tree)
        x = swiss_cheese.theta(t)
        lit = swiss_cheese.format_config(x)
        out.emit(lit, {"tree": _fmt(trees.normalize(t)), "config": lit}, lambda: svg.render_config(x))
    elif op == "rho":
        x = swiss_cheese.parse_config(args.config)
        loops = [swiss_cheese.parse_pcpath(p) for p in args.path or []]
        result = swiss_cheese.act(x, loops, args.base)
        lit = swiss_cheese.format_pcpath(result)
        out.emit(lit, {"config": swiss_cheese.format_config(x), "path": lit})
    elif op == "render":
        obj = _config_or_tree(args.object)
        if isinstance(obj, trees.Tree) and args.theta:
            obj = swiss_cheese.theta(obj)
        sys.stdout.write(svg.render(obj))


# ----------------------------------------------------------------- verify


def cmd_verify(args, out: Out):
    names = verify.suite_names() if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        report = verify.verify(name, args.seed, args.cases, tuple(args.mutate or ()))
        reports.append(report)
        print(f"{name}: {report.wall_time:.3f}s", file=sys.stderr)
    if out.fmt == "json":
        payload = [r.to_dict() for r in reports]
        out.emit("", payload[0] if len(payload) == 1 else payload)
    else:
        out.emit("\n".join(r.to_text() for r in reports))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "svg"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cases", type=int, default=100)

    parser = argparse.ArgumentParser(prog="ainfty", description="Metric trees, A-infinity actions and intervals.")
    sub = parser.add_subparsers(dest="group", required=True)

    def leaf(group_sub, name, help_text):
        return group_sub.add_parser(name, parents=[common], help=help_text)

    # tree
    g = sub.add_parser("tree", help="metric tree operations").add_subparsers(dest="op", required=True)
    for name in ("normalize", "shift", "deshift"):
        leaf(g, name, f"{name} a tree literal").add_argument("tree")
    p = leaf(g, "graft", "graft S onto leaf i of T with edge label r")
    p.add_argument("tree")
    p.add_argument("index", type=int)
    p.add_argument("label")
    p.add_argument("other")
    p.add_argument("--raw", action="store_true", help="skip normalization")
    p = leaf(g, "compose", "operadic composition T o_i S (edge label 1)")
    p.add_argument("tree")
    p.add_argument("index", type=int)
    p.add_argument("other")
    p = leaf(g, "degeneracy", "erase leaf i by grafting the stub")
    p.add_argument("tree")
    p.add_argument("index", type=int)
    # k
    g = sub.add_parser("k", help="associahedra").add_subparsers(dest="op", required=True)
    p = leaf(g, "faces", "f-vector of K_n")
    p.add_argument("n", type=int)
    p.add_argument("--list", action="store_true")
    leaf(g, "length", "the length l(T)").add_argument("tree")
    leaf(g, "comb", "comb decomposition").add_argument("tree")
    # path
    g = sub.add_parser("path", help="Moore path families").add_subparsers(dest="op", required=True)
    for name in ("sigma", "gamma", "lambda"):
        p = leaf(g, name, f"the {name} path of a tree")
        p.add_argument("tree_pos", nargs="?", metavar="tree")
        p.add_argument("--tree")
        p.add_argument("--at", action="append")
    p = leaf(g, "eval", "evaluate a serialized path")
    p.add_argument("path", help="JSON file or inline JSON")
    p.add_argument("--at", action="append")
    # bar
    g = sub.add_parser("bar", help="two-sided bar constructions").add_subparsers(dest="op", required=True)

    def bar_leaf(name, help_text, element=True):
        p = leaf(g, name, help_text)
        p.add_argument("--monoid", default="z2", help="builtin (z2, right-zero) or JSON file")
        p.add_argument("--right", choices=["star", "monoid", "set"])
        p.add_argument("--left", choices=["star", "monoid", "set", "cone"])
        if element:
            p.add_argument("element")
        return p

    bar_leaf("normalize", "normal form of an element")
    p = bar_leaf("usual-map", "the loop f(x)", element=False)
    p.add_argument("--element", dest="x", required=True)
    p.add_argument("--at", action="append")
    bar_leaf("retract", "the retraction B(X,X,P) -> P")
    bar_leaf("alpha", "the contraction onto the homotopy orbits").add_argument("--at", action="append")
    bar_leaf("beta", "the path into the cone").add_argument("--at", action="append")
    p = bar_leaf("validate-im", "check an action's structure-map conditions", element=False)
    p.add_argument("--max-leaves", type=int, default=4)
    # sc
    g = sub.add_parser("sc", help="interval configurations").add_subparsers(dest="op", required=True)
    p = leaf(g, "compose", "colored composition x o_i y")
    p.add_argument("config")
    p.add_argument("index", type=int)
    p.add_argument("other")
    leaf(g, "theta", "the configuration of a tree").add_argument("tree")
    p = leaf(g, "rho", "act on step paths")
    p.add_argument("config")
    p.add_argument("--path", action="append", help="step path literal, once per slot")
    p.add_argument("--base", default="*")
    p = leaf(g, "render", "SVG of a configuration or tree")
    p.add_argument("object")
    p.add_argument("--theta", action="store_true", help="render theta of a tree literal")
    # verify
    p = sub.add_parser("verify", parents=[common], help="run a randomized verification suite")
    p.add_argument("suite", help="suite name or 'all': " + ", ".join(verify.suite_names()))
    p.add_argument("--mutate", action="append", choices=sorted(verify.MUTATIONS))
    return parser


HANDLERS = {"tree": cmd_tree, "k": cmd_k, "path": cmd_path, "bar": cmd_bar, "sc": cmd_sc, "verify": cmd_verify}

USER_ERRORS = (
    UsageError,
    trees.TreeSyntaxError,
    trees.TreeError,
    moore.PathError,
    bar.BarError,
    bar.ActionError,
    swiss_cheese.ConfigError,
    verify.UnknownSuite,
    ValueError,
    OSError,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.group == "path" and args.op != "eval" and args.tree_pos and not args.tree:
        args.tree = args.tree_pos
    try:
        code = HANDLERS[args.group](args, Out(args.format))
    except USER_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    return code or EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
