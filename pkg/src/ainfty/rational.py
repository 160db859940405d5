"""Exact rationals and affine label functions ``a + b*t``."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    """Lowest terms, integers without a denominator."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Affine:
    """The function ``t -> a + b*t`` of a local time parameter."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = as_rational(a)
        self.b = as_rational(b)

    @staticmethod
    def make(a, b):
        """Return a plain rational when the slope vanishes."""
        b = as_rational(b)
        if b == 0:
            return as_rational(a)
        return Affine(a, b)

    def at(self, t) -> Fraction:
        return self.a + self.b * t

    def shifted(self, s) -> "Affine | Fraction":
        # t -> f(t + s)
        return Affine.make(self.a + self.b * s, self.b)

    def scaled(self, k) -> "Affine | Fraction":
        # t -> f(t * k)
        return Affine.make(self.a, self.b * k)

    def __eq__(self, other):
        return isinstance(other, Affine) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash(("affine", self.a, self.b))

    def __repr__(self):
        return f"Affine({self.a}, {self.b})"

    def __str__(self):
        return format_label(self)


Label = Union[Fraction, Affine]


def label_at(label, t):
    return label.at(t) if isinstance(label, Affine) else label


def label_shifted(label, s):
    return label.shifted(s) if isinstance(label, Affine) else label


def label_scaled(label, k):
    return label.scaled(k) if isinstance(label, Affine) else label


def format_label(label) -> str:
    if not isinstance(label, Affine):
        return format_rational(label)
    b = label.b
    slope = ("-" if b < 0 else "+") + format_rational(abs(b)) + "*t"
    return format_rational(label.a) + slope


_AFFINE_RE = re.compile(
    r"^\s*([+-]?\d+(?:/\d+)?)?\s*(?:([+-])\s*(\d+(?:/\d+)?)?\s*\*?\s*t)?\s*$"
)


def parse_label(text: str):
    """Parse ``r`` or ``a+b*t`` / ``a-b*t`` / ``a+t`` / ``-t``."""
    text = text.strip()
    if "t" not in text:
        return parse_rational(text)
    m = _AFFINE_RE.match(text)
    if m is None:
        # bare leading slope such as "2*t" or "t"
        m2 = re.match(r"^\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*t\s*$", text)
        if m2 is None:
            raise ValueError(f"not an affine label: {text!r}")
        sign, mag = m2.group(1), m2.group(2)
        b = parse_rational(mag) if mag else Fraction(1)
        return Affine.make(0, -b if sign == "-" else b)
    a_txt, sign, mag = m.group(1), m.group(2), m.group(3)
    a = parse_rational(a_txt) if a_txt else Fraction(0)
    if sign is None:
        raise ValueError(f"not an affine label: {text!r}")
    b = parse_rational(mag) if mag else Fraction(1)
    return Affine.make(a, -b if sign == "-" else b)
