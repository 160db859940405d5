"""Deterministic SVG pictures of trees, interval configurations and path snapshots.

Coordinates are rounded to two decimals and attributes are emitted in a
fixed order, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .rational import format_label, format_rational
from .trees import OPEN, Leaf, Node, Tree

LEAF_GAP = 40
LEVEL = 50
MARGIN = 20


def _n(x) -> str:
    s = f"{float(x):.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _doc(width, height, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" '
        f'viewBox="0 0 {_n(width)} {_n(height)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _line(x1, y1, x2, y2, cls="edge") -> str:
    return f'<line class="{cls}" x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" stroke="black"/>'


def _text(x, y, s, size=11) -> str:
    return f'<text x="{_n(x)}" y="{_n(y)}" font-size="{size}" text-anchor="middle">{escape(s)}</text>'


def _depth(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max((_depth(c) for _, c in t.children), default=0)


def _tree_parts(t: Tree, ox: float, oy: float) -> tuple[list[str], float, float]:
    """Elements for ``t`` with its root at the bottom; returns (parts, width, height)."""
    width = max(t.n_leaves, 1) * LEAF_GAP
    depth = _depth(t)
    height = (depth + 1) * LEVEL
    parts: list[str] = []
    cursor = [0]

    def place(node, level):
        # returns the x of this vertex (or leaf top)
        y_here = oy + height - (level + 1) * LEVEL
        if isinstance(node, Leaf):
            x = ox + (cursor[0] + 0.5) * LEAF_GAP
            cursor[0] += 1
            return x, y_here
        if not node.children:
            x = ox + (cursor[0] + 0.25) * LEAF_GAP
            parts.append(f'<circle cx="{_n(x)}" cy="{_n(y_here)}" r="3" fill="black"/>')
            return x, y_here
        tops = []
        for lab, c in node.children:
            tops.append((lab, c, place(c, level + 1)))
        x = sum(p[0] for _, _, p in tops) / len(tops)
        for lab, c, (cx, cy) in tops:
            if isinstance(c, Leaf):
                cy = oy + height - depth * LEVEL - LEVEL
                cls = "open-leaf" if c.color is OPEN else "leaf"
                parts.append(_line(x, y_here, cx, cy + LEVEL / 2, cls))
            else:
                parts.append(_line(x, y_here, cx, cy))
                if lab is not None:
                    parts.append(_text((x + cx) / 2 + 8, (y_here + cy) / 2, format_label(lab), 10))
        parts.append(f'<circle cx="{_n(x)}" cy="{_n(y_here)}" r="2.5" fill="black"/>')
        return x, y_here

    rx, ry = place(t, 0) if isinstance(t, Node) else (ox + LEAF_GAP / 2, oy + height - LEVEL)
    parts.append(_line(rx, ry, rx, oy + height, "root"))
    return parts, width, height


def render_tree(t: Tree, caption: str = "") -> str:
    parts, w, h = _tree_parts(t, MARGIN, MARGIN)
    extra = 20 if caption else 0
    if caption:
        parts.append(_text(MARGIN + w / 2, MARGIN + h + 15, caption))
    return _doc(w + 2 * MARGIN, h + 2 * MARGIN + extra, parts)


def render_path_snapshot(path, times: Sequence, space_format=None) -> str:
    """Trees ``path(t)`` for each ``t`` side by side, captioned with ``t``."""
    body, x, tallest = [], MARGIN, 0
    for t in times:
        value = path(t)
        tree = getattr(value, "tree", value)
        parts, w, h = _tree_parts(tree, x, MARGIN)
        body += parts
        body.append(_text(x + w / 2, MARGIN + h + 15, f"t={format_rational(Fraction(t))}"))
        x += w + MARGIN
        tallest = max(tallest, h)
    return _doc(x, tallest + 2 * MARGIN + 20, body)


CONFIG_WIDTH = 400
CONFIG_HEIGHT = 60


def render_config(x, caption: str = "") -> str:
    """The unit interval as an outer box with one filled box per little interval."""
    from .swiss_cheese import ClosedConfig, format_config

    ivs = list(x.intervals) if isinstance(x, ClosedConfig) else list(x.closed)
    dist = None if isinstance(x, ClosedConfig) else x.distinguished
    w, h = CONFIG_WIDTH, CONFIG_HEIGHT
    parts = [
        f'<rect class="unit" x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="black"/>'
    ]

    def box(iv, cls, fill, label):
        a, b = iv
        x0 = MARGIN + w * a
        parts.append(
            f'<rect class="{cls}" x="{_n(x0 + 1)}" y="{_n(MARGIN + 8)}" width="{_n(w * (b - a) - 2)}" '
            f'height="{_n(h - 16)}" fill="{fill}" stroke="black"/>'
        )
        parts.append(_text(x0 + w * (b - a) / 2, MARGIN + h / 2 + 4, label))

    for k, iv in enumerate(ivs, 1):
        box(iv, "closed", "#dde8f5", str(k))
    if dist is not None:
        box(dist, "distinguished", "#f5e3d0", "op")
    for q in sorted({e for iv in ivs + ([dist] if dist else []) for e in iv} | {Fraction(0), Fraction(1)}):
        parts.append(_text(MARGIN + w * q, MARGIN + h + 14, format_rational(q), 9))
    parts.append(_text(MARGIN + w / 2, MARGIN + h + 32, caption or format_config(x)))
    return _doc(w + 2 * MARGIN, h + 2 * MARGIN + 30, parts)


def render(obj, **kwargs) -> str:
    from .swiss_cheese import ClosedConfig, OpenConfig

    if isinstance(obj, (ClosedConfig, OpenConfig)):
        return render_config(obj, **kwargs)
    if isinstance(obj, Tree):
        return render_tree(obj, **kwargs)
    tree = getattr(obj, "tree", None)
    if isinstance(tree, Tree):
        return render_tree(tree, **kwargs)
    raise TypeError(f"cannot render {type(obj).__name__}")
