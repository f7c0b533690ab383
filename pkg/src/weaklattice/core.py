"""The bicyclic monoid with an adjoined zero.

Elements of the bicyclic monoid are pairs of naturals ``(a, b)``; the
adjoined zero is the singleton :data:`ZERO`.  Coordinates are plain Python
ints, so there is no overflow anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ZeroHasNoClass(ValueError):
    """Raised when the group congruence class of the zero is requested."""


@dataclass(frozen=True)
class Zero:
    def __repr__(self) -> str:
        return "0"

    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True, order=True)
class Pair:
    a: int
    b: int

    def __post_init__(self) -> None:
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("pair coordinates must be integers")
        if self.a < 0 or self.b < 0:
            raise ValueError(f"pair coordinates must be natural, got ({self.a},{self.b})")

    def __repr__(self) -> str:
        return f"({self.a},{self.b})"

    __str__ = __repr__


ZERO = Zero()
ONE = Pair(0, 0)

Element = Union[Zero, Pair]


def multiply(x: Element, y: Element) -> Element:
    if isinstance(x, Zero) or isinstance(y, Zero):
        return ZERO
    a, b = x.a, x.b
    c, d = y.a, y.b
    if b <= c:
        return Pair(a + c - b, d)
    return Pair(a, d + b - c)


def invert(x: Element) -> Element:
    if isinstance(x, Zero):
        return ZERO
    return Pair(x.b, x.a)


def is_idempotent(x: Element) -> bool:
    return isinstance(x, Zero) or x.a == x.b


def sigma_class(x: Element) -> int:
    """Index ``k`` of the class ``[k] = {(a, b) : a - b = k}`` containing ``x``."""
    if isinstance(x, Zero):
        raise ZeroHasNoClass("the zero does not belong to any sigma-class")
    return x.a - x.b


_PAIR_RE = re.compile(r"^\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def parse_element(text: str) -> Element:
    """Parse ``0`` or ``(a,b)``."""
    if text.strip() == "0":
        return ZERO
    match = _PAIR_RE.match(text)
    if match is None:
        raise ValueError(f"cannot parse element {text!r}; expected '0' or '(a,b)'")
    return Pair(int(match.group(1)), int(match.group(2)))


def format_element(x: Element) -> str:
    return str(x)
