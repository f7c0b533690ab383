"""Finitely represented shift-invariant filters on omega.

Every filter here has a countable base indexed by small Python values
(``int`` levels, ``(position, level)`` pairs, or pairs of sub-indices).
Base elements are described by :class:`Expr` trees whose leaves are
cofinite sets ``omega - [0, k]`` and factorial-interval sets

    F(A, k) = union over n in A of [n! - n + k, n! + n - k].

Containment between two such trees is decided exactly: points below the
first "clean" factorial window are enumerated, and above it every window
``[n! - n, n! + n]`` is handled symbolically through the Boolean cells of
the leaf sets (see :func:`element_subset`).
"""

from __future__ import annotations

import enum
import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterator, Union

import numpy as np

from . import omegasets as osets
from .omegasets import OmegaSet


class InvalidIndex(ValueError):
    pass


class ImproperBase(ValueError):
    pass


class NotInfinite(ValueError):
    pass


# -- factorials and points --------------------------------------------

_FACT = [1]
for _i in range(1, 32):
    _FACT.append(_FACT[-1] * _i)


def factorial(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


# windows [n! - n, n! + n] are pairwise disjoint from n = 4 on; all smaller
# windows live inside [0, 9]
_FIRST_CLEAN = 4
_CLEAN_START = 20
_TABLE_N = 31  # window tables cover every m up to 31!


@dataclass(frozen=True, order=True)
class WindowPoint:
    """The natural number ``n! + offset`` with ``n >= 4`` and ``|offset| <= n``."""

    n: int
    offset: int

    def value(self) -> int:
        return factorial(self.n) + self.offset

    def to_json(self) -> Any:
        if self.n <= 40:
            return self.value()
        return {"factorial": self.n, "offset": self.offset}


Point = Union[int, WindowPoint]


def point_value(p: Point) -> int:
    return p.value() if isinstance(p, WindowPoint) else p


def point_json(p: Point) -> Any:
    return p.to_json() if isinstance(p, WindowPoint) else p


def _fac_member(aset: OmegaSet, k: int, m: Point) -> bool:
    if isinstance(m, WindowPoint):
        n = m.n
        return n >= k and abs(m.offset) <= n - k and aset.contains(n)
    return _fac_int(aset.contains, k, m)


def _fac_int(contains, k: int, m: int) -> bool:
    if m < _CLEAN_START:
        if m < 0:
            return False
        for n in range(k, _FIRST_CLEAN):
            f = _FACT[n]
            if f - n + k <= m <= f + n - k and contains(n):
                return True
        return False
    if m > _FACT[-1]:
        while _FACT[-1] < m:
            factorial(len(_FACT))
    n = bisect_left(_FACT, m)
    # the nearer of the two neighbouring factorials is the only candidate
    if m - _FACT[n - 1] < _FACT[n] - m:
        n -= 1
    return n >= k and abs(m - _FACT[n]) <= n - k and contains(n)


def _cof_member(k: int, m: Point) -> bool:
    if isinstance(m, WindowPoint):
        if k.bit_length() < m.n:
            return True
        return m.value() > k
    return m > k


# -- base element expressions -----------------------------------------

class Expr:
    """A base element: a set of naturals built from cofinite and factorial leaves."""


@dataclass(frozen=True)
class Cof(Expr):
    """``omega - [0, k]``; ``k = -1`` is all of omega."""

    k: int


@dataclass(frozen=True)
class Empty(Expr):
    pass


@dataclass(frozen=True)
class Fac(Expr):
    aset: OmegaSet
    k: int


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr


def member(e: Expr, m: Point) -> bool:
    if isinstance(e, Fac):
        return _fac_member(e.aset, e.k, m)
    if isinstance(e, Cof):
        return _cof_member(e.k, m)
    if isinstance(e, Or):
        return member(e.left, m) or member(e.right, m)
    if isinstance(e, And):
        return member(e.left, m) and member(e.right, m)
    return False


def _cutoffs(e: Expr) -> Iterator[int]:
    if isinstance(e, Cof):
        yield e.k
    elif isinstance(e, (Or, And)):
        yield from _cutoffs(e.left)
        yield from _cutoffs(e.right)


def _leaves(e: Expr) -> Iterator[OmegaSet]:
    if isinstance(e, Fac):
        yield e.aset
    elif isinstance(e, (Or, And)):
        yield from _leaves(e.left)
        yield from _leaves(e.right)


def _gaps(e: Expr) -> bool:
    if isinstance(e, Cof):
        return True
    if isinstance(e, Or):
        return _gaps(e.left) or _gaps(e.right)
    if isinstance(e, And):
        return _gaps(e.left) and _gaps(e.right)
    return False


def _level(e: Expr, inside: dict[OmegaSet, bool]) -> int | None:
    """Inner radius offset of ``e`` on a clean window: ``[n!-n+L, n!+n-L]``; None if empty."""
    if isinstance(e, Cof):
        return 0
    if isinstance(e, Fac):
        return e.k if inside[e.aset] else None
    if isinstance(e, Or):
        a, b = _level(e.left, inside), _level(e.right, inside)
        if a is None:
            return b
        return a if b is None else min(a, b)
    if isinstance(e, And):
        a, b = _level(e.left, inside), _level(e.right, inside)
        if a is None or b is None:
            return None
        return max(a, b)
    return None


@lru_cache(maxsize=200_000)
def element_subset(e1: Expr, e2: Expr) -> Point | None:
    """Decide ``e1 <= e2``; returns None if contained, else a point of ``e1 - e2``."""
    return shifted_subset(e1, e2, 0)


@lru_cache(maxsize=200_000)
def shifted_subset(e1: Expr, e2: Expr, s: int) -> Point | None:
    """Decide ``s + e1 <= e2`` (points falling below 0 are dropped).

    Returns None if contained, else a point ``x`` of ``e1`` with ``x + s`` outside ``e2``.
    """
    shift = abs(s)
    cut = max(max(_cutoffs(e1), default=-1), max(_cutoffs(e2), default=-1), 9)
    n0 = _FIRST_CLEAN
    while factorial(n0) - n0 - shift <= cut:
        n0 += 1
    for x in range(factorial(n0) - n0):
        if member(e1, x) and x + s >= 0 and not member(e2, x + s):
            return x
    # e2 holds every gap point exactly when it holds everything past the cutoffs
    if _gaps(e2):
        return None
    if _gaps(e1):
        return factorial(n0) + n0 + 1 + shift
    leaves = list(dict.fromkeys(itertools.chain(_leaves(e1), _leaves(e2))))
    for bits in itertools.product((False, True), repeat=len(leaves)):
        inside = dict(zip(leaves, bits))
        l1 = _level(e1, inside)
        if l1 is None:
            continue
        l2 = _level(e2, inside)
        # the edge of the e1 window moves outward by |s|
        if l2 is not None and l2 <= l1 - shift:
            continue
        ins = [t for t, b in inside.items() if b]
        outs = [t for t, b in inside.items() if not b]
        n = osets.cell_element_at_least(ins, outs, max(n0, l1))
        if n is not None:
            return WindowPoint(n, (n - l1) if s > 0 else (l1 - n))
    return None


def elements_disjoint(e1: Expr, e2: Expr) -> Point | None:
    """None when disjoint, else a common point."""
    return element_subset(And(e1, e2), Empty())


# -- filters ------------------------------------------------------------

class CharacterTag(enum.Enum):
    COUNTABLE = "countable"


class SIFilter:
    """Common surface of the filter variants."""

    kind: str

    def element(self, idx) -> Expr:
        raise NotImplementedError

    def validate_index(self, idx) -> None:
        raise NotImplementedError

    def base_member(self, idx, m: Point) -> bool:
        self.validate_index(idx)
        return member(self.element(idx), m)

    def index_at(self, level: int):
        """A decreasing chain of base indices, cofinal in the base."""
        raise NotImplementedError

    def indices(self, bound: int) -> list:
        """Every base index whose levels are at most ``bound``."""
        return [self.index_at(t) for t in range(bound + 1)]

    def shift_witness(self, idx, n: int):
        raise NotImplementedError

    def escape_index(self, k: int):
        raise NotImplementedError

    def common_index(self, a, b):
        """An index whose element lies inside both ``element(a)`` and ``element(b)``."""
        raise NotImplementedError

    def normal_form(self) -> "SIFilter | Top":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _check_level(k) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise InvalidIndex(f"expected a natural level, got {k!r}")


@dataclass(frozen=True)
class Frechet(SIFilter):
    kind = "frechet"

    def element(self, idx: int) -> Expr:
        return Cof(idx)

    def validate_index(self, idx) -> None:
        _check_level(idx)

    def index_at(self, level: int) -> int:
        return level

    def shift_witness(self, idx: int, n: int) -> int:
        self.validate_index(idx)
        return idx + abs(n)

    def escape_index(self, k: int) -> int:
        return k

    def common_index(self, a: int, b: int) -> int:
        return max(a, b)

    def normal_form(self) -> SIFilter:
        return self

    def to_json(self) -> dict:
        return {"kind": "frechet"}

    def __repr__(self) -> str:
        return "Frechet"


@dataclass(frozen=True)
class FactorialInduced(SIFilter):
    """The filter with base ``F(A, k)``, ``k`` in omega."""

    aset: OmegaSet
    kind = "factorial"

    def __post_init__(self) -> None:
        if not self.aset.is_infinite:
            raise NotInfinite(f"factorial filter needs an infinite set, got {self.aset!r}")

    def element(self, idx: int) -> Expr:
        return Fac(self.aset, idx)

    def base_member(self, idx, m: Point) -> bool:
        """Membership of ``m`` in ``F(A, idx)``; ``m`` may be an integer array."""
        if type(idx) is not int or idx < 0:
            _check_level(idx)
        if isinstance(m, np.ndarray):
            return self._member_array(idx, m)
        if type(m) is int:
            if 0 <= m <= _FACT[_TABLE_N]:
                table = self._tables.get(idx) or self._table(idx)
                i = bisect_right(table[0], m) - 1
                return i >= 0 and m <= table[1][i]
            return _fac_int(self._contains, idx, m)
        return _fac_member(self.aset, idx, m)

    @cached_property
    def _contains(self):
        return lru_cache(maxsize=4096)(self.aset.contains)

    @cached_property
    def _tables(self) -> dict:
        return {}

    def _table(self, k: int) -> tuple[list[int], list[int]]:
        """Merged windows of level ``k`` for ``n <= 31``, as sorted starts and ends."""
        spans = sorted((_FACT[n] - n + k, _FACT[n] + n - k)
                       for n in range(k, _TABLE_N + 1) if self._contains(n))
        los: list[int] = []
        his: list[int] = []
        for lo, hi in spans:
            if his and lo <= his[-1] + 1:
                his[-1] = max(his[-1], hi)
            else:
                los.append(lo)
                his.append(hi)
        self._tables[k] = (los, his)
        return self._tables[k]

    def _member_array(self, k: int, m: np.ndarray) -> np.ndarray:
        los, his = self._tables.get(k) or self._table(k)
        # int64 points stay below 21! - 21, so later windows never matter
        keep = [i for i, hi in enumerate(his) if hi < 2**63]
        lo = np.array([los[i] for i in keep], dtype=np.int64)
        hi = np.array([his[i] for i in keep], dtype=np.int64)
        m = np.asarray(m, dtype=np.int64)
        pos = np.searchsorted(lo, m, side="right") - 1
        found = pos >= 0
        out = np.zeros(m.shape, dtype=bool)
        out[found] = m[found] <= hi[pos[found]]
        return out

    def validate_index(self, idx) -> None:
        _check_level(idx)

    def index_at(self, level: int) -> int:
        return level

    def shift_witness(self, idx: int, n: int) -> int:
        self.validate_index(idx)
        return idx + abs(n)

    def escape_index(self, k: int) -> int:
        return k + 1

    def common_index(self, a: int, b: int) -> int:
        return max(a, b)

    def normal_form(self) -> SIFilter:
        return self

    def to_json(self) -> dict:
        return {"kind": "factorial", "set": self.aset.to_json()}

    def __repr__(self) -> str:
        return f"F[{self.aset!r}]"


def _intersection_closure(gens: tuple[OmegaSet, ...]) -> tuple[OmegaSet, ...]:
    closed: list[OmegaSet] = []
    for g in gens:
        if g not in closed:
            closed.append(g)
    grew = True
    while grew:
        grew = False
        for a, b in itertools.combinations(list(closed), 2):
            c = osets.intersect(a, b)
            if c not in closed:
                closed.append(c)
                grew = True
    return tuple(closed)


@dataclass(frozen=True)
class FilterInduced(SIFilter):
    """``F_G`` for the filter ``G`` generated by ``generators`` and the cofinite sets.

    Base positions index the closure of the generators under intersection.
    """

    generators: tuple[OmegaSet, ...]
    kind = "filter-induced"

    def __post_init__(self) -> None:
        if not self.generators:
            raise ImproperBase("filter base must be nonempty")
        for g in self.generators:
            if not g.is_infinite:
                raise NotInfinite(f"base set {g!r} is finite")
        for s in self.base:
            if not s.is_infinite:
                raise ImproperBase("an intersection of base sets is finite")

    @cached_property
    def base(self) -> tuple[OmegaSet, ...]:
        return _intersection_closure(self.generators)

    @cached_property
    def least_position(self) -> int:
        smallest = self.base[0]
        for s in self.base[1:]:
            smallest = osets.intersect(smallest, s)
        return self.base.index(smallest)

    def element(self, idx) -> Expr:
        i, k = idx
        return Fac(self.base[i], k)

    def validate_index(self, idx) -> None:
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise InvalidIndex(f"expected (position, level), got {idx!r}")
        i, k = idx
        if not isinstance(i, int) or not 0 <= i < len(self.base):
            raise InvalidIndex(f"base position {i!r} out of range")
        _check_level(k)

    def index_at(self, level: int) -> tuple[int, int]:
        return (self.least_position, level)

    def indices(self, bound: int) -> list:
        return [(i, t) for t in range(bound + 1) for i in range(len(self.base))]

    def shift_witness(self, idx, n: int):
        self.validate_index(idx)
        return (idx[0], idx[1] + abs(n))

    def escape_index(self, k: int):
        return (self.least_position, k + 1)

    def common_index(self, a, b):
        both = osets.intersect(self.base[a[0]], self.base[b[0]])
        return (self.base.index(both), max(a[1], b[1]))

    def normal_form(self) -> SIFilter:
        return FactorialInduced(self.base[self.least_position])

    def to_json(self) -> dict:
        return {"kind": "filter-induced", "base": [g.to_json() for g in self.generators]}

    def __repr__(self) -> str:
        return "F_G[" + ", ".join(repr(g) for g in self.generators) + "]"


@dataclass(frozen=True)
class MeetOf(SIFilter):
    """Family intersection; base elements are unions of the two sides."""

    left: SIFilter
    right: SIFilter
    kind = "meet"

    def element(self, idx) -> Expr:
        return Or(self.left.element(idx[0]), self.right.element(idx[1]))

    def validate_index(self, idx) -> None:
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise InvalidIndex(f"expected a pair of sub-indices, got {idx!r}")
        self.left.validate_index(idx[0])
        self.right.validate_index(idx[1])

    def index_at(self, level: int):
        return (self.left.index_at(level), self.right.index_at(level))

    def shift_witness(self, idx, n: int):
        return (self.left.shift_witness(idx[0], n), self.right.shift_witness(idx[1], n))

    def escape_index(self, k: int):
        return (self.left.escape_index(k), self.right.escape_index(k))

    def common_index(self, a, b):
        return (self.left.common_index(a[0], b[0]), self.right.common_index(a[1], b[1]))

    def normal_form(self) -> SIFilter:
        return meet_filters(self.left.normal_form(), self.right.normal_form())

    def to_json(self) -> dict:
        return {"kind": "meet", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class JoinOf(SIFilter):
    """Filter generated by both sides; base elements are intersections.

    Construction refuses improper joins; use :func:`join_filters` to get the
    top sentinel instead.
    """

    left: SIFilter
    right: SIFilter
    kind = "join"

    def __post_init__(self) -> None:
        if isinstance(_join_normal(self.left.normal_form(), self.right.normal_form()), Top):
            raise ImproperBase("join of these filters is improper")

    def element(self, idx) -> Expr:
        return And(self.left.element(idx[0]), self.right.element(idx[1]))

    def validate_index(self, idx) -> None:
        if not (isinstance(idx, tuple) and len(idx) == 2):
            raise InvalidIndex(f"expected a pair of sub-indices, got {idx!r}")
        self.left.validate_index(idx[0])
        self.right.validate_index(idx[1])

    def index_at(self, level: int):
        return (self.left.index_at(level), self.right.index_at(level))

    def shift_witness(self, idx, n: int):
        return (self.left.shift_witness(idx[0], n), self.right.shift_witness(idx[1], n))

    def escape_index(self, k: int):
        return (self.left.escape_index(k), self.right.escape_index(k))

    def common_index(self, a, b):
        return (self.left.common_index(a[0], b[0]), self.right.common_index(a[1], b[1]))

    def normal_form(self) -> SIFilter:
        return _join_normal(self.left.normal_form(), self.right.normal_form())

    def to_json(self) -> dict:
        return {"kind": "join", "left": self.left.to_json(), "right": self.right.to_json()}


class Top:
    """The attached top element ``1``; also the result of an improper join."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Top"

    def __reduce__(self):
        return (Top, ())


TOP = Top()


# -- constructors -------------------------------------------------------

def frechet() -> Frechet:
    return Frechet()


def factorial_filter(aset: OmegaSet) -> FactorialInduced:
    return FactorialInduced(aset)


def from_filter_base(base) -> FilterInduced:
    gens = tuple(base)
    for g in gens:
        if not g.is_infinite:
            raise NotInfinite(f"base set {g!r} is finite")
    for a, b in itertools.combinations(gens, 2):
        if not osets.intersect(a, b).is_infinite:
            raise ImproperBase(f"base sets {a!r} and {b!r} are almost disjoint")
    return FilterInduced(gens)


def character(f: SIFilter) -> CharacterTag:
    # every base here is indexed by finitely many positions times omega
    return CharacterTag.COUNTABLE


# -- lattice operations ---------------------------------------------------

def _generators(f: SIFilter) -> tuple[OmegaSet, ...]:
    if isinstance(f, FactorialInduced):
        return (f.aset,)
    return f.generators


def meet_filters(f: SIFilter, g: SIFilter, normalize: bool = True) -> SIFilter:
    if not normalize:
        return MeetOf(f, g)
    f, g = f.normal_form() if isinstance(f, (MeetOf, JoinOf)) else f, g.normal_form() if isinstance(g, (MeetOf, JoinOf)) else g
    if isinstance(f, Frechet) or isinstance(g, Frechet):
        return Frechet()
    if isinstance(f, FactorialInduced) and isinstance(g, FactorialInduced):
        return FactorialInduced(osets.union(f.aset, g.aset))
    return FilterInduced(tuple(osets.union(a, b) for a in _generators(f) for b in _generators(g)))


def _join_normal(f: SIFilter, g: SIFilter) -> "SIFilter | Top":
    if isinstance(f, Frechet):
        return g
    if isinstance(g, Frechet):
        return f
    both = osets.intersect(f.aset, g.aset)
    if not both.is_infinite:
        return TOP
    return FactorialInduced(both)


def join_filters(f: SIFilter, g: SIFilter, normalize: bool = True) -> "SIFilter | Top":
    if not normalize:
        if isinstance(_join_normal(f.normal_form(), g.normal_form()), Top):
            return TOP
        return JoinOf(f, g)
    if isinstance(f, (MeetOf, JoinOf)):
        f = f.normal_form()
    if isinstance(g, (MeetOf, JoinOf)):
        g = g.normal_form()
    if isinstance(f, Top) or isinstance(g, Top):
        return TOP
    if isinstance(f, Frechet):
        return g
    if isinstance(g, Frechet):
        return f
    if isinstance(f, FactorialInduced) and isinstance(g, FactorialInduced):
        return _join_normal(f, g)
    if isinstance(_join_normal(f.normal_form(), g.normal_form()), Top):
        return TOP
    return FilterInduced(_generators(f) + _generators(g))


# -- base containment and enumeration -----------------------------------

def base_subset(f: SIFilter, i, g: SIFilter, j) -> bool:
    """``element(f, i)`` is contained in ``element(g, j)``."""
    f.validate_index(i)
    g.validate_index(j)
    return element_subset(f.element(i), g.element(j)) is None


def base_elements(f: SIFilter, idx, upper: int) -> list[int]:
    """Sorted members of a base element that are ``<= upper``."""
    f.validate_index(idx)
    return sorted(_expr_elements(f.element(idx), upper))


def _expr_elements(e: Expr, upper: int) -> set[int]:
    if isinstance(e, Cof):
        return set(range(max(e.k + 1, 0), upper + 1))
    if isinstance(e, Fac):
        out: set[int] = set()
        n = e.k
        while True:
            fn = factorial(n)
            lo, hi = fn - n + e.k, fn + n - e.k
            if lo > upper and n >= _FIRST_CLEAN:
                break
            if lo <= hi and e.aset.contains(n):
                out.update(range(max(lo, 0), min(hi, upper) + 1))
            n += 1
        return out
    if isinstance(e, Or):
        return _expr_elements(e.left, upper) | _expr_elements(e.right, upper)
    if isinstance(e, And):
        return _expr_elements(e.left, upper) & _expr_elements(e.right, upper)
    return set()


def element_mask(e: Expr, upper: int) -> np.ndarray:
    """Boolean membership array of ``e`` over ``0..upper``."""
    out = np.zeros(upper + 1, dtype=bool)
    if isinstance(e, Cof):
        out[max(e.k + 1, 0):] = True
    elif isinstance(e, Fac):
        n = e.k
        while True:
            fn = factorial(n)
            lo, hi = fn - n + e.k, fn + n - e.k
            if lo > upper and n >= _FIRST_CLEAN:
                break
            if lo <= hi and e.aset.contains(n):
                out[max(lo, 0):hi + 1] = True
            n += 1
    elif isinstance(e, Or):
        out = element_mask(e.left, upper) | element_mask(e.right, upper)
    elif isinstance(e, And):
        out = element_mask(e.left, upper) & element_mask(e.right, upper)
    return out


# -- order ---------------------------------------------------------------

class Verdict(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"
    UNKNOWN = "Unknown"


@dataclass
class OrderVerdict:
    """Outcome of a comparison plus the evidence for it.

    ``certificates`` may hold:

    * ``le``: list of ``(f_index, g_index)`` with ``element(g) <= element(f)``,
      covering every ``f`` index up to ``bound`` (so ``f <= g``);
    * ``ge``: the same with roles swapped;
    * ``not_le``: ``{"index": e, "samples": [(g_index, point)]}`` where each
      point lies in the ``g`` element but outside ``element(f, e)``;
    * ``not_ge``: symmetric;
    * ``disjoint``: ``(f_index, g_index)`` with disjoint elements.
    """

    verdict: Verdict
    bound: int | None = None
    certificates: dict[str, Any] = field(default_factory=dict)

    @property
    def le(self) -> bool:
        return self.verdict in (Verdict.LESS, Verdict.EQUAL)

    @property
    def ge(self) -> bool:
        return self.verdict in (Verdict.GREATER, Verdict.EQUAL)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict.value}
        if self.verdict is Verdict.UNKNOWN:
            out["bound"] = self.bound
        certs = {}
        for key, val in self.certificates.items():
            if key in ("le", "ge"):
                certs[key] = [[_idx_json(a), _idx_json(b)] for a, b in val]
            elif key in ("not_le", "not_ge"):
                certs[key] = {
                    "index": _idx_json(val["index"]),
                    "samples": [[_idx_json(i), point_json(p)] for i, p in val["samples"]],
                }
            elif key == "disjoint":
                certs[key] = [_idx_json(val[0]), _idx_json(val[1])]
            else:
                certs[key] = val
        out["certificates"] = certs
        return out


def _idx_json(idx):
    if isinstance(idx, tuple):
        return [_idx_json(i) for i in idx]
    return idx


def _normal_le(f: SIFilter, g: SIFilter) -> bool:
    """Exact ``f <= g`` on normal forms."""
    if isinstance(f, Frechet):
        return True
    if isinstance(g, Frechet):
        return False
    # F_A <= F_B iff B is almost contained in A
    return osets.almost_subset(g.aset, f.aset)


def refine_index(coarse: SIFilter, idx, fine: SIFilter, max_level: int):
    """Least fine index (by level, then position) whose element sits inside ``element(coarse, idx)``."""
    target = coarse.element(idx)
    positions = _positions(fine)
    for pos in positions:
        lo, hi = 0, max_level
        if element_subset(fine.element(_at(fine, pos, hi)), target) is not None:
            continue
        while lo < hi:
            mid = (lo + hi) // 2
            if element_subset(fine.element(_at(fine, pos, mid)), target) is None:
                hi = mid
            else:
                lo = mid + 1
        return _at(fine, pos, lo)
    return None


def _positions(f: SIFilter) -> list:
    if isinstance(f, FilterInduced):
        return list(range(len(f.base)))
    return [None]


def _at(f: SIFilter, pos, level: int):
    if pos is None:
        return f.index_at(level)
    return (pos, level)


def _refinement_map(coarse: SIFilter, fine: SIFilter, bound: int) -> list:
    entries = []
    limit = 2 * bound + 16
    for idx in coarse.indices(bound):
        hit = refine_index(coarse, idx, fine, limit)
        if hit is None:
            raise AssertionError(f"no refinement of {idx!r} in {fine!r} below level {limit}")
        entries.append((idx, hit))
    return entries


def _smallest_index(f: SIFilter):
    return f.index_at(0)


def _nondominating(f: SIFilter, g: SIFilter, bound: int) -> dict:
    """Evidence that ``f <= g`` fails: points of g-elements escaping one f-element."""
    e = _smallest_index(f)
    target = f.element(e)
    samples = []
    for gi in g.indices(bound):
        p = element_subset(g.element(gi), target)
        if p is None:
            raise AssertionError(f"{g!r} element {gi!r} lies inside {f!r} element {e!r}")
        samples.append((gi, p))
    return {"index": e, "samples": samples}


def _disjoint_pair(f: SIFilter, g: SIFilter, start: int, limit: int):
    for k in range(start, limit + 1):
        i, j = f.index_at(k), g.index_at(k)
        if elements_disjoint(f.element(i), g.element(j)) is None:
            return (i, j)
    return None


def compare_filters(f: SIFilter, g: SIFilter, bound: int = 40) -> OrderVerdict:
    """Decide the order between two filters, with certificates."""
    v = _compare_cached(f, g, bound)
    return OrderVerdict(v.verdict, v.bound, dict(v.certificates))


@lru_cache(maxsize=16_384)
def _compare_cached(f: SIFilter, g: SIFilter, bound: int) -> OrderVerdict:
    try:
        nf, ng = f.normal_form(), g.normal_form()
    except (AttributeError, NotImplementedError):
        return OrderVerdict(Verdict.UNKNOWN, bound)
    le = _normal_le(nf, ng)
    ge = _normal_le(ng, nf)
    certs: dict[str, Any] = {}
    if le:
        certs["le"] = _refinement_map(f, g, bound)
    if ge:
        certs["ge"] = _refinement_map(g, f, bound)
    if le and ge:
        return OrderVerdict(Verdict.EQUAL, bound, certs)
    if le:
        certs["not_ge"] = _nondominating(g, f, bound)
        return OrderVerdict(Verdict.LESS, bound, certs)
    if ge:
        certs["not_le"] = _nondominating(f, g, bound)
        return OrderVerdict(Verdict.GREATER, bound, certs)
    both = osets.intersect(nf.aset, ng.aset)
    if not both.is_infinite:
        start = max(both.elements(), default=-1) + 1
        pair = _disjoint_pair(f, g, start, start + _FIRST_CLEAN + 1)
        if pair is None:
            raise AssertionError("almost disjoint sets without disjoint base elements")
        certs["disjoint"] = pair
    else:
        certs["not_le"] = _nondominating(f, g, bound)
        certs["not_ge"] = _nondominating(g, f, bound)
    return OrderVerdict(Verdict.INCOMPARABLE, bound, certs)


def verify_certificates(f: SIFilter, g: SIFilter, v: OrderVerdict) -> bool:
    """Re-check every certificate in ``v`` through the base oracles."""
    c = v.certificates
    for a, b in c.get("le", []):
        if not base_subset(g, b, f, a):
            return False
    for a, b in c.get("ge", []):
        if not base_subset(f, b, g, a):
            return False
    for key, (mine, other) in (("not_le", (f, g)), ("not_ge", (g, f))):
        if key in c:
            e = c[key]["index"]
            for oi, p in c[key]["samples"]:
                if not other.base_member(oi, p) or mine.base_member(e, p):
                    return False
    if "disjoint" in c:
        i, j = c["disjoint"]
        if elements_disjoint(f.element(i), g.element(j)) is not None:
            return False
    expected = {
        Verdict.EQUAL: {"le", "ge"},
        Verdict.LESS: {"le", "not_ge"},
        Verdict.GREATER: {"ge", "not_le"},
    }.get(v.verdict)
    if expected is not None:
        return expected <= set(c)
    if v.verdict is Verdict.INCOMPARABLE:
        return "disjoint" in c or {"not_le", "not_ge"} <= set(c)
    return True


# -- JSON -----------------------------------------------------------------

def filter_from_json(data: dict) -> SIFilter:
    kind = data.get("kind")
    if kind == "frechet":
        return Frechet()
    if kind == "factorial":
        return FactorialInduced(OmegaSet.from_json(data["set"]))
    if kind == "filter-induced":
        return from_filter_base([OmegaSet.from_json(s) for s in data["base"]])
    if kind == "meet":
        return MeetOf(filter_from_json(data["left"]), filter_from_json(data["right"]))
    if kind == "join":
        return JoinOf(filter_from_json(data["left"]), filter_from_json(data["right"]))
    raise ValueError(f"unknown filter kind {kind!r}")


# -- functional surface ---------------------------------------------------

def base_member(f: SIFilter, idx, m: Point) -> bool:
    return f.base_member(idx, m)


def shift_witness(f: SIFilter, idx, n: int):
    return f.shift_witness(idx, n)


def base_escape_index(f: SIFilter, k: int):
    return f.escape_index(k)
