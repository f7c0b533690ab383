"""Decidable descriptors for subsets of omega.

A descriptor is a finite union of residue classes (the *periodic part*)
adjusted by a finite include set and a finite exclude set.  Every Boolean
question the filter layer asks (is ``s \\ t`` finite? is ``s & t`` finite?)
reduces to covering a residue class by finitely many others, which
:func:`_uncovered` decides by splitting along prime factors.  Nothing ever
enumerates residues modulo a large lcm, so tower sets with moduli like
``2**128`` stay cheap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Iterator, Sequence

# residue sets are expanded to a canonical period only below this lcm
_EXPAND_LIMIT = 4096

Class = tuple[int, int]  # (residue, modulus), 0 <= residue < modulus


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _compatible(c1: Class, c2: Class) -> bool:
    return (c1[0] - c2[0]) % gcd(c1[1], c2[1]) == 0


def _crt(c1: Class, c2: Class) -> Class | None:
    """Intersection of two residue classes, or None when disjoint."""
    r1, m1 = c1
    r2, m2 = c2
    g = gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    m2g = m2 // g
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2g)) % m2g if m2g > 1 else 0
    l = m1 * m2g
    return ((r1 + m1 * t) % l, l)


def _contains_class(outer: Class, inner: Class) -> bool:
    return inner[1] % outer[1] == 0 and inner[0] % outer[1] == outer[0]


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


def _uncovered(target: Class, classes: Sequence[Class]) -> Class | None:
    """A subclass of ``target`` disjoint from every class in ``classes``.

    Returns None when ``classes`` cover ``target`` completely.
    """
    rel = [c for c in classes if _compatible(target, c)]
    if not rel:
        return target
    r, d = target
    for c in rel:
        if d % c[1] == 0:
            return None
    # split along a prime dividing the finest relevant refinement
    finest = min(rel, key=lambda c: _lcm(d, c[1]))
    p = _smallest_prime_factor(_lcm(d, finest[1]) // d)
    for t in range(p):
        hit = _uncovered((r + d * t, d * p), rel)
        if hit is not None:
            return hit
    return None


def _reduce_classes(classes: Iterable[Class]) -> tuple[Class, ...]:
    cls = {(r % m, m) for r, m in classes}
    if not cls:
        return ()
    lcm = reduce(_lcm, (m for _, m in cls), 1)
    if lcm <= _EXPAND_LIMIT:
        residues = set()
        for r, m in cls:
            residues.update(range(r, lcm, m))
        period = lcm
        for d in range(1, lcm + 1):
            if lcm % d == 0 and all((x + d) % lcm in residues for x in residues):
                period = d
                break
        return tuple(sorted({(x % period, period) for x in residues}))
    changed = True
    while changed:
        changed = False
        by_mod: dict[int, set[int]] = {}
        for r, m in cls:
            by_mod.setdefault(m, set()).add(r)
        for m, rs in by_mod.items():
            p = _smallest_prime_factor(m) if m > 1 else 1
            if p == 1:
                continue
            q = m // p
            for r in list(rs):
                sibs = {(r % q) + q * t for t in range(p)}
                if sibs <= rs:
                    cls -= {(s, m) for s in sibs}
                    cls.add((r % q, q))
                    changed = True
                    break
            if changed:
                break
    pruned = {c for c in cls if not any(o != c and _contains_class(o, c) for o in cls)}
    return tuple(sorted(pruned, key=lambda c: (c[1], c[0])))


class Relation(enum.Enum):
    EQUAL_STAR = "EqualStar"
    ALMOST_SUBSET = "AlmostSubset"
    ALMOST_SUPERSET = "AlmostSuperset"
    ALMOST_DISJOINT = "AlmostDisjoint"
    OVERLAPPING = "Overlapping"


@dataclass(frozen=True)
class SetRelation:
    kind: Relation
    s_minus_t: frozenset[int] | None
    t_minus_s: frozenset[int] | None
    intersection: frozenset[int] | None


_HASH_PROBES = tuple(range(64)) + tuple(2**k for k in range(6, 200)) + tuple(3**k for k in range(4, 80))


@dataclass(frozen=True, eq=False)
class OmegaSet:
    """``(union of classes | include) - exclude`` in canonical form.

    Build instances with :meth:`from_progressions` or the helpers below; the
    constructor assumes its arguments are already canonical.
    """

    classes: tuple[Class, ...]
    include: frozenset[int] = field(default_factory=frozenset)
    exclude: frozenset[int] = field(default_factory=frozenset)

    # -- construction -------------------------------------------------
    @classmethod
    def _build(cls, classes: Iterable[Class], candidates: Iterable[int], member) -> "OmegaSet":
        reduced = _reduce_classes(classes)
        inc, exc = set(), set()
        for x in set(candidates):
            if x < 0:
                continue
            periodic = any(x % m == r for r, m in reduced)
            inside = member(x)
            if inside and not periodic:
                inc.add(x)
            elif periodic and not inside:
                exc.add(x)
        return cls(reduced, frozenset(inc), frozenset(exc))

    @classmethod
    def from_progressions(
        cls,
        progressions: Iterable[tuple[int, int]] = (),
        include: Iterable[int] = (),
        exclude: Iterable[int] = (),
    ) -> "OmegaSet":
        progs = [(int(s), int(d)) for s, d in progressions]
        for s, d in progs:
            if d < 1:
                raise ValueError(f"progression step must be >= 1, got {d}")
            if s < 0:
                raise ValueError(f"progression start must be natural, got {s}")
        inc = frozenset(int(x) for x in include)
        exc = frozenset(int(x) for x in exclude)
        if any(x < 0 for x in inc | exc):
            raise ValueError("include/exclude entries must be natural")
        candidates = set(inc) | set(exc)
        for s, d in progs:
            candidates.update(range(s % d, s, d))

        def member(x: int) -> bool:
            if x in exc:
                return False
            return x in inc or any(x >= s and (x - s) % d == 0 for s, d in progs)

        return cls._build(((s % d, d) for s, d in progs), candidates, member)

    # -- basic queries ------------------------------------------------
    def contains(self, m: int) -> bool:
        if m < 0 or m in self.exclude:
            return False
        if m in self.include:
            return True
        return any(m % mod == r for r, mod in self.classes)

    __contains__ = contains

    @property
    def is_infinite(self) -> bool:
        return bool(self.classes)

    @property
    def size(self) -> int | None:
        """Cardinality when finite, None when infinite."""
        return None if self.classes else len(self.include)

    def elements(self) -> list[int]:
        if self.classes:
            raise ValueError("set is infinite")
        return sorted(self.include)

    def iter_upto(self, upper: int) -> Iterator[int]:
        for x in range(upper + 1):
            if self.contains(x):
                yield x

    def progressions(self) -> list[tuple[int, int]]:
        return [(r, m) for r, m in self.classes]

    # -- equality -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OmegaSet):
            return NotImplemented
        if (self.classes, self.include, self.exclude) == (other.classes, other.include, other.exclude):
            return True
        d1 = cell([self], [other])
        d2 = cell([other], [self])
        return not d1.infinite and not d1.elements and not d2.infinite and not d2.elements

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        # equal denotations agree at every probe point
        return hash(tuple(self.contains(x) for x in _HASH_PROBES))

    def __repr__(self) -> str:
        parts = [f"{r}+{m}i" if m > 1 else (f"[{r},inf)" if r else "omega") for r, m in self.classes]
        if self.include:
            parts.append("{" + ",".join(map(str, sorted(self.include))) + "}")
        text = " | ".join(parts) if parts else "{}"
        if self.exclude:
            text += " - {" + ",".join(map(str, sorted(self.exclude))) + "}"
        return f"OmegaSet({text})"

    def to_json(self) -> dict:
        return {
            "progressions": [{"start": r, "step": m} for r, m in self.classes],
            "include": sorted(self.include),
            "exclude": sorted(self.exclude),
        }

    @classmethod
    def from_json(cls, data: dict) -> "OmegaSet":
        progs = [(p["start"], p["step"]) for p in data.get("progressions", [])]
        return cls.from_progressions(progs, data.get("include", []), data.get("exclude", []))


@dataclass(frozen=True)
class Cell:
    """Result of :func:`cell`: either infinite, or the exact finite members."""

    infinite: bool
    elements: frozenset[int]
    witness_class: Class | None = None


def cell(ins: Sequence[OmegaSet], outs: Sequence[OmegaSet]) -> Cell:
    """Decide the Boolean cell ``(all of ins) - (any of outs)``."""
    inter: list[Class] = [(0, 1)]
    for s in ins:
        inter = [c for a in inter for b in s.classes if (c := _crt(a, b)) is not None]
    out_classes = [c for s in outs for c in s.classes]
    for c in inter:
        hit = _uncovered(c, out_classes)
        if hit is not None:
            return Cell(True, frozenset(), hit)
    candidates = set()
    for s in ins:
        candidates |= s.include
    for s in outs:
        candidates |= s.exclude
    members = {
        x for x in candidates
        if all(s.contains(x) for s in ins) and not any(s.contains(x) for s in outs)
    }
    return Cell(False, frozenset(members))


def cell_element_at_least(ins: Sequence[OmegaSet], outs: Sequence[OmegaSet], lower: int) -> int | None:
    """Least-effort member of the cell that is ``>= lower``; None if there is none."""
    c = cell(ins, outs)
    if not c.infinite:
        big = [x for x in c.elements if x >= lower]
        return min(big) if big else None
    r, d = c.witness_class
    x = r + d * max(0, -(-(lower - r) // d))
    finite = sum(len(s.include) + len(s.exclude) for s in (*ins, *outs))
    for _ in range(finite + 2):
        if all(s.contains(x) for s in ins) and not any(s.contains(x) for s in outs):
            return x
        x += d
    raise AssertionError("uncovered class exhausted by finitely many exceptions")


# -- set algebra ------------------------------------------------------

def union(s: OmegaSet, t: OmegaSet) -> OmegaSet:
    return OmegaSet._build(
        s.classes + t.classes,
        s.include | s.exclude | t.include | t.exclude,
        lambda x: s.contains(x) or t.contains(x),
    )


def intersect(s: OmegaSet, t: OmegaSet) -> OmegaSet:
    classes = [c for a in s.classes for b in t.classes if (c := _crt(a, b)) is not None]
    return OmegaSet._build(
        classes,
        s.include | s.exclude | t.include | t.exclude,
        lambda x: s.contains(x) and t.contains(x),
    )


def shift(s: OmegaSet, n: int) -> OmegaSet:
    """The set ``{n + x : x in s}`` clipped to omega."""
    classes = [((r + n) % m, m) for r, m in s.classes]
    candidates = {x + n for x in s.include | s.exclude if x + n >= 0}
    if n > 0:
        candidates.update(range(n))
    return OmegaSet._build(classes, candidates, lambda y: y - n >= 0 and s.contains(y - n))


def relate(s: OmegaSet, t: OmegaSet) -> SetRelation:
    sd = cell([s], [t])
    td = cell([t], [s])
    it = cell([s, t], [])
    fin = lambda c: None if c.infinite else c.elements  # noqa: E731
    if not sd.infinite and not td.infinite:
        kind = Relation.EQUAL_STAR
    elif not sd.infinite:
        kind = Relation.ALMOST_SUBSET
    elif not td.infinite:
        kind = Relation.ALMOST_SUPERSET
    elif not it.infinite:
        kind = Relation.ALMOST_DISJOINT
    else:
        kind = Relation.OVERLAPPING
    return SetRelation(kind, fin(sd), fin(td), fin(it))


def almost_subset(s: OmegaSet, t: OmegaSet) -> bool:
    """``s`` is contained in ``t`` up to a finite set."""
    return not cell([s], [t]).infinite


# -- named sets -------------------------------------------------------

def omega() -> OmegaSet:
    return OmegaSet.from_progressions([(0, 1)])


def empty() -> OmegaSet:
    return OmegaSet(())


def residue(modulus: int, r: int) -> OmegaSet:
    return OmegaSet.from_progressions([(r % modulus, modulus)])


def evens() -> OmegaSet:
    return residue(2, 0)


def odds() -> OmegaSet:
    return residue(2, 1)


def multiples(k: int) -> OmegaSet:
    return residue(k, 0)


def interval(a: int, b: int | None = None) -> OmegaSet:
    """``[a, b]``, or ``[a, inf)`` when ``b`` is None."""
    if b is None:
        return OmegaSet.from_progressions([(a, 1)])
    return OmegaSet.from_progressions([], range(a, b + 1))


def ad_family(m: int) -> list[OmegaSet]:
    """``m`` pairwise disjoint infinite sets: the residue classes mod ``m``."""
    if m < 1:
        raise ValueError("ad_family needs m >= 1")
    return [residue(m, r) for r in range(m)]


def tower(m: int, base: int = 2) -> list[OmegaSet]:
    """Multiples of ``base**j`` for ``j = 1..m``; a strictly almost-decreasing chain."""
    if m < 1 or base < 2:
        raise ValueError("tower needs m >= 1 and base >= 2")
    return [multiples(base ** j) for j in range(1, m + 1)]
