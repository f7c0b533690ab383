"""Weak shift-continuous topologies on the bicyclic monoid with zero.

A weak topology is stored as a pair ``(left, right)`` where each slot is
either :data:`TOP` or a filter.  The left slot is the filter of row traces,
the right slot the filter of column traces.  A basic neighborhood of the
zero is fixed by :class:`NbhdParams` ``(n, m, li, ri)``::

    N = {0} u {(a, b) : (a > n or b in L) and (b > m or a in R)}

with ``L = element(left, li)`` and ``R = element(right, ri)`` (empty for a
``TOP`` slot).  Every nonzero point is isolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Union

from . import filters as flt
from .core import Element, Zero
from .filters import (
    TOP,
    And,
    Cof,
    Empty,
    Expr,
    OrderVerdict,
    Point,
    SIFilter,
    Top,
    Verdict,
    element_subset,
    point_json,
)

SifOne = Union[Top, SIFilter]


class InvalidParams(ValueError):
    pass


class BoundExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class WeakTopology:
    left: SifOne
    right: SifOne

    def to_json(self) -> dict:
        return {"left": sif_to_json(self.left), "right": sif_to_json(self.right)}

    def __repr__(self) -> str:
        return f"tau({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class NbhdParams:
    n: int
    m: int
    li: Any = None
    ri: Any = None

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "li": _idx_json(self.li), "ri": _idx_json(self.ri)}


def _idx_json(idx):
    if isinstance(idx, tuple):
        return [_idx_json(i) for i in idx]
    return idx


def sif_to_json(x: SifOne) -> dict:
    if isinstance(x, Top):
        return {"kind": "top"}
    return {"kind": "filter", "filter": x.to_json()}


def sif_from_json(data: dict) -> SifOne:
    if data.get("kind") == "top":
        return TOP
    if data.get("kind") == "filter":
        return flt.filter_from_json(data["filter"])
    # a bare filter descriptor is accepted too
    return flt.filter_from_json(data)


def topology_from_json(data: dict) -> WeakTopology:
    return WeakTopology(sif_from_json(data["left"]), sif_from_json(data["right"]))


# -- constructors --------------------------------------------------------

def tau_min() -> WeakTopology:
    return WeakTopology(TOP, TOP)


def tau_c() -> WeakTopology:
    return WeakTopology(flt.Frechet(), flt.Frechet())


def tau_L() -> WeakTopology:
    return WeakTopology(TOP, flt.Frechet())


def tau_R() -> WeakTopology:
    return WeakTopology(flt.Frechet(), TOP)


def from_pair(x: SifOne, y: SifOne) -> WeakTopology:
    return WeakTopology(x, y)


# -- neighborhoods -------------------------------------------------------

def validate_params(t: WeakTopology, p: NbhdParams) -> None:
    for cut in (p.n, p.m):
        if not isinstance(cut, int) or isinstance(cut, bool) or cut < 0:
            raise InvalidParams(f"cutoffs must be natural, got {p.n!r}, {p.m!r}")
    for slot, idx, name in ((t.left, p.li, "li"), (t.right, p.ri, "ri")):
        if isinstance(slot, Top):
            if idx is not None:
                raise InvalidParams(f"{name} given for a Top slot")
        else:
            if idx is None:
                raise InvalidParams(f"{name} required for a filter slot")
            try:
                slot.validate_index(idx)
            except flt.InvalidIndex as exc:
                raise InvalidParams(f"{name}: {exc}") from exc


def _slot_expr(slot: SifOne, idx) -> Expr:
    return Empty() if isinstance(slot, Top) else slot.element(idx)


def _above(cut: int, x: Point) -> bool:
    return flt._cof_member(cut, x)


def member_coords(t: WeakTopology, p: NbhdParams, a: Point, b: Point) -> bool:
    """Membership of the nonzero point ``(a, b)``; coordinates may be symbolic."""
    lok = _above(p.n, a) or (not isinstance(t.left, Top) and t.left.base_member(p.li, b))
    if not lok:
        return False
    return _above(p.m, b) or (not isinstance(t.right, Top) and t.right.base_member(p.ri, a))


def nbhd_member(t: WeakTopology, p: NbhdParams, e: Element) -> bool:
    validate_params(t, p)
    if isinstance(e, Zero):
        return True
    return member_coords(t, p, e.a, e.b)


def default_params(t: WeakTopology, level: int) -> NbhdParams:
    """Params with both cutoffs and both filter levels equal to ``level``."""
    li = None if isinstance(t.left, Top) else t.left.index_at(level)
    ri = None if isinstance(t.right, Top) else t.right.index_at(level)
    return NbhdParams(level, level, li, ri)


def escape_params(t: WeakTopology, a: int, b: int) -> NbhdParams:
    """Params whose neighborhood excludes the point ``(a, b)``."""
    li = None if isinstance(t.left, Top) else t.left.escape_index(b)
    ri = None if isinstance(t.right, Top) else t.right.escape_index(a)
    return NbhdParams(a, b, li, ri)


# -- traces ---------------------------------------------------------------

@dataclass(frozen=True)
class Trace:
    """Row or column trace of a basic neighborhood, as a membership oracle."""

    topology: WeakTopology
    params: NbhdParams
    side: str
    i: int

    def __contains__(self, x: Point) -> bool:
        if self.side == "row":
            return member_coords(self.topology, self.params, self.i, x)
        return member_coords(self.topology, self.params, x, self.i)

    def expr(self) -> Expr:
        if self.side == "row":
            return row_expr(self.topology, self.params, self.i)
        return column_expr(self.topology, self.params, self.i)

    def upto(self, upper: int) -> list[int]:
        return [x for x in range(upper + 1) if x in self]


def filter_trace(t: WeakTopology, side: str, i: int, p: NbhdParams) -> Trace:
    if side not in ("row", "column"):
        raise ValueError(f"side must be 'row' or 'column', got {side!r}")
    validate_params(t, p)
    return Trace(t, p, side, i)


def row_expr(t: WeakTopology, p: NbhdParams, a: int) -> Expr:
    """The set ``{b : (a, b) in N}`` for a concrete row ``a``."""
    x = Cof(-1) if a > p.n else _slot_expr(t.left, p.li)
    in_r = not isinstance(t.right, Top) and t.right.base_member(p.ri, a)
    y = Cof(-1) if in_r else Cof(p.m)
    return And(x, y)


def column_expr(t: WeakTopology, p: NbhdParams, b: int) -> Expr:
    """The set ``{a : (a, b) in N}`` for a concrete column ``b``."""
    in_l = not isinstance(t.left, Top) and t.left.base_member(p.li, b)
    x = Cof(-1) if in_l else Cof(p.n)
    y = Cof(-1) if b > p.m else _slot_expr(t.right, p.ri)
    return And(x, y)


# -- neighborhood containment ---------------------------------------------

def nbhd_subset(t1: WeakTopology, p1: NbhdParams, t2: WeakTopology, p2: NbhdParams):
    """Decide ``N1 <= N2`` exactly; returns None or a point of ``N1 - N2``.

    A point outside ``N2`` sits in a row ``a <= n2`` missing ``L2`` or in a
    column ``b <= m2`` missing ``R2``, so only finitely many rows and columns
    need to be compared; each is a containment of element expressions.
    """
    l2 = _slot_expr(t2.left, p2.li)
    seen: dict[Expr, Any] = {}
    for a in range(p2.n + 1):
        e = row_expr(t1, p1, a)
        if e not in seen:
            seen[e] = element_subset(e, l2)
        if seen[e] is not None:
            return (a, seen[e])
    r2 = _slot_expr(t2.right, p2.ri)
    seen = {}
    for b in range(p2.m + 1):
        e = column_expr(t1, p1, b)
        if e not in seen:
            seen[e] = element_subset(e, r2)
        if seen[e] is not None:
            return (seen[e], b)
    return None


@dataclass
class Refinement:
    """Outcome of :func:`refinement_witness`.

    ``evidence`` pairs each sampled coarse neighborhood with a fine one inside
    it.  On failure, ``failure`` names the coarse neighborhood and a point that
    lies in every fine candidate up to ``limit`` but outside the coarse one.
    """

    holds: bool
    evidence: list[tuple[NbhdParams, NbhdParams]] = field(default_factory=list)
    failure: dict | None = None
    limit: int = 0

    def to_json(self) -> dict:
        out: dict[str, Any] = {"holds": self.holds, "limit": self.limit}
        out["evidence"] = [[c.to_json(), f.to_json()] for c, f in self.evidence]
        if self.failure is not None:
            out["failure"] = {
                "coarse": self.failure["coarse"].to_json(),
                "point": [point_json(x) for x in self.failure["point"]],
            }
        return out


def sample_params(t: WeakTopology, bound: int) -> list[NbhdParams]:
    cuts = sorted({0, 1, 7, bound})
    levels = sorted({0, 1, 5, bound})
    lis = [None] if isinstance(t.left, Top) else _sample_indices(t.left, levels)
    ris = [None] if isinstance(t.right, Top) else _sample_indices(t.right, levels)
    return [NbhdParams(n, m, li, ri) for n in cuts for m in cuts for li in lis for ri in ris]


def _sample_indices(f: SIFilter, levels: Iterable[int]) -> list:
    out = []
    for k in levels:
        if isinstance(f, flt.FilterInduced):
            found = [(i, k) for i in range(len(f.base))]
        else:
            found = [f.index_at(k)]
        out.extend(idx for idx in found if idx not in out)
    return out


def candidate(t: WeakTopology, p: NbhdParams, level: int) -> NbhdParams:
    li = None if isinstance(t.left, Top) else t.left.index_at(level)
    ri = None if isinstance(t.right, Top) else t.right.index_at(level)
    return NbhdParams(max(p.n, level), max(p.m, level), li, ri)


def refinement_witness(coarse: WeakTopology, fine: WeakTopology, bound: int = 40) -> Refinement:
    """Search for fine neighborhoods inside the sampled coarse ones.

    Fine candidates ``q_t`` shrink as ``t`` grows, so the largest candidate
    is tried first; a point escaping it escapes every smaller ``t`` too.  On
    success the least working ``t`` is reported.
    """
    if bound < 0:
        raise BoundExhausted("bound must be natural")
    limit = bound + 8
    result = Refinement(True, limit=limit)
    for p in sample_params(coarse, bound):
        top = candidate(fine, p, limit)
        bad = nbhd_subset(fine, top, coarse, p)
        if bad is not None:
            if member_coords(coarse, p, *bad) or not member_coords(fine, top, *bad):
                raise BoundExhausted(f"containment witness {bad!r} failed to re-verify")
            return Refinement(False, result.evidence, {"coarse": p, "point": bad}, limit)
        lo, hi = 0, limit
        while lo < hi:
            mid = (lo + hi) // 2
            if nbhd_subset(fine, candidate(fine, p, mid), coarse, p) is None:
                hi = mid
            else:
                lo = mid + 1
        result.evidence.append((p, candidate(fine, p, lo)))
    return result


# -- order and lattice -----------------------------------------------------

def compare_sif(x: SifOne, y: SifOne, bound: int = 40) -> OrderVerdict:
    if isinstance(x, Top) and isinstance(y, Top):
        return OrderVerdict(Verdict.EQUAL, bound)
    if isinstance(x, Top):
        return OrderVerdict(Verdict.GREATER, bound)
    if isinstance(y, Top):
        return OrderVerdict(Verdict.LESS, bound)
    return flt.compare_filters(x, y, bound)


def combine(v1: Verdict, v2: Verdict) -> Verdict:
    """Product order of two component verdicts."""
    if Verdict.UNKNOWN in (v1, v2):
        return Verdict.UNKNOWN
    if Verdict.INCOMPARABLE in (v1, v2):
        return Verdict.INCOMPARABLE
    if v1 is Verdict.EQUAL:
        return v2
    if v2 is Verdict.EQUAL or v1 is v2:
        return v1
    return Verdict.INCOMPARABLE


def compare_topologies(t1: WeakTopology, t2: WeakTopology, bound: int = 40) -> OrderVerdict:
    left = compare_sif(t1.left, t2.left, bound)
    right = compare_sif(t1.right, t2.right, bound)
    verdict = combine(left.verdict, right.verdict)
    certs = {"left": left.to_json(), "right": right.to_json()}
    return OrderVerdict(verdict, bound, certs)


def _join_sif(x: SifOne, y: SifOne) -> SifOne:
    if isinstance(x, Top) or isinstance(y, Top):
        return TOP
    return flt.join_filters(x, y)


def _meet_sif(x: SifOne, y: SifOne) -> SifOne:
    if isinstance(x, Top):
        return y
    if isinstance(y, Top):
        return x
    return flt.meet_filters(x, y)


def join_topologies(t1: WeakTopology, t2: WeakTopology) -> WeakTopology:
    return WeakTopology(_join_sif(t1.left, t2.left), _join_sif(t1.right, t2.right))


def meet_topologies(t1: WeakTopology, t2: WeakTopology) -> WeakTopology:
    return WeakTopology(_meet_sif(t1.left, t2.left), _meet_sif(t1.right, t2.right))


def transpose(t: WeakTopology) -> WeakTopology:
    """Image of ``t`` under inversion ``(a, b) -> (b, a)``."""
    return WeakTopology(t.right, t.left)


def same_topology(t1: WeakTopology, t2: WeakTopology, bound: int = 40) -> bool:
    return compare_topologies(t1, t2, bound).verdict is Verdict.EQUAL

