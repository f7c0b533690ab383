"""Bounded, certificate-producing checks and finite chain/antichain builders.

Every check returns a :class:`CheckReport`.  A ``Fail`` verdict always
carries a concrete counterexample that can be re-checked through the public
membership oracles.  Searches run in a fixed order, so reports are
deterministic for fixed inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from . import filters as flt
from . import omegasets as osets
from .core import Pair
from .filters import TOP, Top, Verdict, factorial
from .topologies import (
    NbhdParams,
    WeakTopology,
    compare_sif,
    compare_topologies,
    escape_params,
    from_pair,
    member_coords,
    refinement_witness,
    transpose,
)

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"


@dataclass
class CheckReport:
    check: str
    inputs: dict
    params: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "inputs": self.inputs,
            "params": self.params,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _describe(t: WeakTopology) -> dict:
    return {"topology": t.to_json()}


def _slot_json(x) -> dict:
    if isinstance(x, Top):
        return {"kind": "top"}
    return {"kind": "filter", "filter": x.to_json()}


def _idx(i):
    return list(_idx(j) for j in i) if isinstance(i, tuple) else i


# -- negative control -------------------------------------------------------

@dataclass(frozen=True)
class RawBase:
    """Radius-0 factorial base ``{n! : n >= k}``; deliberately not shift-invariant.

    It offers the membership surface of a filter so the checks can run on it,
    but it is not an :class:`~weaklattice.filters.SIFilter`.
    """

    kind = "raw-factorials"

    def validate_index(self, idx) -> None:
        if not isinstance(idx, int) or idx < 0:
            raise flt.InvalidIndex(f"expected a natural level, got {idx!r}")

    def base_member(self, idx: int, m) -> bool:
        if isinstance(m, flt.WindowPoint):
            return m.n >= idx and m.offset == 0
        n = idx
        while factorial(n) < m:
            n += 1
        return factorial(n) == m

    def index_at(self, level: int) -> int:
        return level

    def shift_witness(self, idx: int, n: int) -> int:
        return idx + abs(n)

    def escape_index(self, k: int) -> int:
        return k + 1

    def shift_failure(self, src: int, dst: int, s: int):
        """A point of ``element(src)`` whose shift by ``s`` leaves ``element(dst)``."""
        for n in range(src, src + 6):
            x = factorial(n)
            if x + s >= 0 and not self.base_member(dst, x + s):
                return x
        return None

    def mask(self, idx: int, upper: int) -> np.ndarray:
        out = np.zeros(upper + 1, dtype=bool)
        n = idx
        while factorial(n) <= upper:
            out[factorial(n)] = True
            n += 1
        return out

    def to_json(self) -> dict:
        return {"kind": "raw-factorials"}

    def __repr__(self) -> str:
        return "RawFactorials"


RAW_BASE = RawBase()


@lru_cache(maxsize=4096)
def _mask(slot, idx, upper: int) -> np.ndarray:
    if isinstance(slot, RawBase):
        return slot.mask(idx, upper)
    return flt.element_mask(slot.element(idx), upper)


# -- filter shift-invariance ------------------------------------------------

def shift_counterexample(f, idx, n: int, upper: int = 10**6):
    """First ``m <= upper`` in the witness element with ``m + n`` outside ``element(idx)``."""
    w = f.shift_witness(idx, n)
    have = _mask(f, w, upper)
    want = _mask(f, idx, upper)
    ms = np.flatnonzero(have)
    ms = ms[ms + n >= 0]
    inside = ms + n <= upper
    ok = np.ones(len(ms), dtype=bool)
    ok[inside] = want[ms[inside] + n]
    for j in np.flatnonzero(~inside):
        ok[j] = f.base_member(idx, int(ms[j]) + n)
    bad = np.flatnonzero(~ok)
    if len(bad):
        m = int(ms[bad[0]])
        return {"index": _idx(idx), "shift": n, "witness_index": _idx(w), "m": m, "point": m + n}
    return None


def check_filter_shift(f, levels=range(9), shifts=(0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5), upper: int = 10**6) -> CheckReport:
    witnesses = []
    for k in levels:
        idx = f.index_at(k)
        for n in shifts:
            bad = shift_counterexample(f, idx, n, upper)
            if bad is not None:
                return CheckReport(
                    "filter-shift", {"filter": _slot_json(f)},
                    {"upper": upper}, FAIL, witnesses, bad,
                )
            witnesses.append({"index": _idx(idx), "shift": n, "witness_index": _idx(f.shift_witness(idx, n))})
    return CheckReport("filter-shift", {"filter": _slot_json(f)}, {"upper": upper}, PASS, witnesses)


# -- shift continuity --------------------------------------------------------

def _slot_mask(slot, idx, upper: int) -> np.ndarray:
    if isinstance(slot, Top):
        return np.zeros(upper + 1, dtype=bool)
    return _mask(slot, idx, upper)


def _nbhd_grid(t: WeakTopology, p: NbhdParams, upper: int) -> np.ndarray:
    """``grid[a, b]`` is membership of ``(a, b)``, both coordinates ``<= upper``."""
    coords = np.arange(upper + 1)
    lmask = _slot_mask(t.left, p.li, upper)
    rmask = _slot_mask(t.right, p.ri, upper)
    lok = (coords > p.n)[:, None] | lmask[None, :]
    rok = (coords > p.m)[None, :] | rmask[:, None]
    return lok & rok


def _image_grids(target: np.ndarray) -> dict[str, np.ndarray]:
    """For each generator translation ``g``, ``img[c, d]`` is membership of ``g(c, d)``.

    ``target`` covers coordinates up to ``cap + 1``; the images cover ``cap``.
    """
    size = target.shape[0] - 1
    left_01 = np.empty((size, size), dtype=bool)
    left_01[1:] = target[: size - 1, :size]          # (c-1, d)
    left_01[0] = target[0, 1 : size + 1]              # (0, d+1)
    right_10 = np.empty((size, size), dtype=bool)
    right_10[:, 2:] = target[:size, 1 : size - 1]     # (c, d-1)
    right_10[:, 1] = target[:size, 0]                 # (c, 0)
    right_10[:, 0] = target[1 : size + 1, 0]          # (c+1, 0)
    return {
        "(0,1)*x": left_01,
        "(1,0)*x": target[1 : size + 1, :size],       # (c+1, d)
        "x*(0,1)": target[:size, 1 : size + 1],       # (c, d+1)
        "x*(1,0)": right_10,
    }


_MOVES = {
    "(0,1)*x": lambda c, d: (c - 1, d) if c >= 1 else (0, d + 1),
    "(1,0)*x": lambda c, d: (c + 1, d),
    "x*(0,1)": lambda c, d: (c, d + 1),
    "x*(1,0)": lambda c, d: (c + 1, 0) if d == 0 else (c, max(d - 1, 0)),
}


def _shift_params(t: WeakTopology, p: NbhdParams, s: int) -> NbhdParams:
    li = None if isinstance(t.left, Top) else t.left.shift_witness(p.li, s)
    ri = None if isinstance(t.right, Top) else t.right.shift_witness(p.ri, s)
    return NbhdParams(p.n + s, p.m + s, li, ri)


def _targets(t: WeakTopology, depth: int) -> list[NbhdParams]:
    cuts = sorted({0, 1, depth // 2, depth})
    lis = [None] if isinstance(t.left, Top) else [t.left.index_at(k) for k in cuts]
    ris = [None] if isinstance(t.right, Top) else [t.right.index_at(k) for k in cuts]
    return [NbhdParams(n, m, li, ri) for n in cuts for m in cuts for li in lis for ri in ris]


def _slot_shift_failure(slot, src, dst):
    """A point ``x`` of ``element(src)`` with some ``x + s`` (``s`` in 1, -1, 0) outside ``element(dst)``."""
    if isinstance(slot, Top):
        return None
    for s in (1, -1, 0):
        if isinstance(slot, RawBase):
            x = slot.shift_failure(src, dst, s)
        else:
            x = flt.shifted_subset(slot.element(src), slot.element(dst), s)
        if x is not None:
            return x, s
    return None


def _witness_failure(t: WeakTopology, p: NbhdParams, q: NbhdParams, cap: int):
    for side, slot, src, dst in (("left", t.left, q.li, p.li), ("right", t.right, q.ri, p.ri)):
        bad = _slot_shift_failure(slot, src, dst)
        if bad is not None:
            x, s = bad
            return {"kind": "slot-shift", "side": side, "index": _idx(src), "point": flt.point_json(x),
                    "shift": s, "image": flt.point_json(_moved(x, s))}
    source = _nbhd_grid(t, q, cap)
    images = _image_grids(_nbhd_grid(t, p, cap + 1))
    for name, img in images.items():
        bad = np.argwhere(source & ~img)
        if len(bad):
            c, d = (int(v) for v in bad[0])
            return {"kind": "grid", "case": name, "point": [c, d], "image": list(_MOVES[name](c, d))}
    return None


def _moved(x, s: int):
    if isinstance(x, flt.WindowPoint):
        return flt.WindowPoint(x.n, x.offset + s)
    return x + s


def check_shift_continuity(t: WeakTopology, depth: int = 10) -> CheckReport:
    """Shift-continuity at the zero for the four generator translations.

    For each sampled target ``p`` the witness is ``p`` with both cutoffs
    raised by one and both filter indices replaced by their shift witnesses
    for ``|n| = 1``.  Membership is compared on the full grid of coordinates
    up to ``max(depth, 28) * (depth + 2)``.  Beyond that cap every coordinate
    exceeds the cutoffs, so only the slot elements matter; their shifts by
    ``-1, 0, +1`` are decided exactly.
    """
    cap = max(depth, 28) * (depth + 2)
    params = {"depth": depth, "cap": cap}
    witnesses = []
    for p in _targets(t, depth):
        q = _shift_params(t, p, 1)
        bad = _witness_failure(t, p, q, cap)
        if bad is None:
            witnesses.append({"target": p.to_json(), "witness": q.to_json()})
            continue
        # the uniform witness failed; look for any other candidate up to depth
        found = None
        for s in range(2, depth + 2):
            q2 = _shift_params(t, p, s)
            if _witness_failure(t, p, q2, cap) is None:
                found = q2
                break
        if found is None:
            bad["target"] = p.to_json()
            return CheckReport("shift-continuity", _describe(t), params, FAIL, witnesses, bad)
        witnesses.append({"target": p.to_json(), "witness": found.to_json()})
    return CheckReport("shift-continuity", _describe(t), params, PASS, witnesses)


# -- Hausdorff -----------------------------------------------------------------

def check_hausdorff(t: WeakTopology, point_bound: int = 20) -> CheckReport:
    witnesses = []
    for a, b in itertools.product(range(point_bound + 1), repeat=2):
        p = escape_params(t, a, b)
        if member_coords(t, p, a, b):
            return CheckReport(
                "hausdorff", _describe(t), {"point_bound": point_bound}, FAIL, witnesses,
                {"point": [a, b], "params": p.to_json()},
            )
        witnesses.append({"point": [a, b], "params": p.to_json()})
    return CheckReport("hausdorff", _describe(t), {"point_bound": point_bound}, PASS, witnesses)


# -- inversion -----------------------------------------------------------------

def check_inversion_continuity(t: WeakTopology, depth: int = 10) -> CheckReport:
    """Inversion is continuous iff the transposed topology is the same one."""
    params = {"depth": depth}
    verdict = compare_sif(t.left, t.right, max(depth, 1)).verdict
    if verdict is Verdict.UNKNOWN:
        return CheckReport("inversion-continuity", _describe(t), params, UNKNOWN)
    if verdict is Verdict.EQUAL:
        return CheckReport(
            "inversion-continuity", _describe(t), params, PASS,
            [{"left_vs_right": verdict.value}],
        )
    # preimages of t-neighborhoods under inversion are neighborhoods of the transpose
    ref = refinement_witness(transpose(t), t, depth)
    if ref.holds:
        return CheckReport("inversion-continuity", _describe(t), params, UNKNOWN,
                           [{"left_vs_right": verdict.value, "refinement": "not refuted"}])
    coarse = ref.failure["coarse"]
    nbhd = NbhdParams(coarse.m, coarse.n, coarse.ri, coarse.li)
    a, b = ref.failure["point"]
    return CheckReport(
        "inversion-continuity", _describe(t), params, FAIL,
        [{"left_vs_right": verdict.value}],
        {
            "neighborhood": nbhd.to_json(),
            "point": [flt.point_json(a), flt.point_json(b)],
            "note": "point lies in every tried neighborhood but its inverse is outside the given one",
        },
    )


# -- sigma-classes ---------------------------------------------------------------

def sigma_point(p: NbhdParams, k: int, bound: int) -> Pair:
    c = max(p.n, p.m, bound) + 1
    return Pair(c + k, c) if k >= 0 else Pair(c, c - k)


def check_sigma_accumulation(t: WeakTopology, k: int, bound: int = 40) -> CheckReport:
    from .topologies import sample_params

    params = {"k": k, "bound": bound}
    witnesses = []
    for p in sample_params(t, bound):
        x = sigma_point(p, k, bound)
        if not member_coords(t, p, x.a, x.b):
            return CheckReport("sigma-accumulation", _describe(t), params, UNKNOWN, witnesses,
                               {"params": p.to_json()})
        witnesses.append({"params": p.to_json(), "point": str(x)})
    return CheckReport("sigma-accumulation", _describe(t), params, PASS, witnesses)


# -- tau_L / tau_R identities -----------------------------------------------------

def _mul(a, b, c, d):
    le = b <= c
    return np.where(le, a + c - b, a), np.where(le, d, d + b - c)


def check_tauL_identities(bound: int = 10, cap: int | None = None, square_cap: int = 50) -> CheckReport:
    """The inclusions ``(i,j) A_{n+j} <= A_n``, ``A_n (i,j) <= A_n``, ``A_n A_n <= A_n``.

    ``A_n`` is the set of pairs with first coordinate above ``n``; ``B_n``
    uses the second coordinate and satisfies the mirrored inclusions.  Pairs
    are enumerated with coordinates up to ``cap``; past the cap the relevant
    coordinate only grows, which covers the tail.
    """
    cap = cap if cap is not None else max(bound, 28) * (bound + 2)
    params = {"bound": bound, "cap": cap, "square_cap": square_cap}
    k, m = np.meshgrid(np.arange(cap + 1), np.arange(cap + 1), indexing="ij")
    k, m = k.ravel(), m.ravel()
    checked = 0
    for i, j, n in itertools.product(range(bound + 1), repeat=3):
        cases = (
            ("(i,j)A_{n+j} in A_n", k > n + j, lambda: _mul(i, j, k, m), 0),
            ("A_n(i,j) in A_n", k > n, lambda: _mul(k, m, i, j), 0),
            ("B_{n+i}(i,j) in B_n", m > n + i, lambda: _mul(k, m, i, j), 1),
            ("(i,j)B_n in B_n", m > n, lambda: _mul(i, j, k, m), 1),
        )
        for name, sel, prod, coord in cases:
            out = prod()[coord]
            bad = np.flatnonzero(sel & (out <= n))
            checked += 1
            if len(bad):
                x = int(bad[0])
                return CheckReport("tauL-identities", {}, params, FAIL, [],
                                   {"case": name, "i": i, "j": j, "n": n, "element": [int(k[x]), int(m[x])]})
    s = np.arange(square_cap + 1)
    a, b, c, d = (x.ravel() for x in np.meshgrid(s, s, s, s, indexing="ij", sparse=False))
    pa, pb = _mul(a, b, c, d)
    for n in range(min(bound, square_cap) + 1):
        for name, sel, out in (
            ("A_n A_n in A_n", (a > n) & (c > n), pa),
            ("B_n B_n in B_n", (b > n) & (d > n), pb),
        ):
            bad = np.flatnonzero(sel & (out <= n))
            checked += 1
            if len(bad):
                x = int(bad[0])
                return CheckReport("tauL-identities", {}, params, FAIL, [],
                                   {"case": name, "n": n, "factors": [[int(a[x]), int(b[x])], [int(c[x]), int(d[x])]]})
    return CheckReport("tauL-identities", {}, params, PASS,
                       [{"inclusions_checked": checked, "tail": "the constrained coordinate of a product never drops below that of the constrained factor minus the fixed element's shift"}])


# -- antichains and chains ----------------------------------------------------------

@dataclass
class Family:
    topologies: list[WeakTopology]
    reports: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _family_filter(s: osets.OmegaSet, flavor: str):
    if flavor == "filter-induced":
        return flt.from_filter_base([s])
    return flt.factorial_filter(s)


def build_antichain(m: int, flavor: str = "residues", bound: int = 40) -> Family:
    """``m`` topologies ``tau(F_A, Frechet)`` over the residue classes mod ``m``."""
    if flavor not in ("residues", "filter-induced"):
        raise ValueError(f"unknown antichain flavor {flavor!r}")
    if m < 1:
        raise ValueError("antichain size must be positive")
    sets = osets.ad_family(m)
    fs = [_family_filter(s, flavor) for s in sets]
    tops = [from_pair(f, flt.Frechet()) for f in fs]
    reports = []
    for r, s in itertools.combinations(range(m), 2):
        v = flt.compare_filters(fs[r], fs[s], bound)
        ok = v.verdict is Verdict.INCOMPARABLE and "disjoint" in v.certificates
        if ok:
            i, j = v.certificates["disjoint"]
            ok = flt.elements_disjoint(fs[r].element(i), fs[s].element(j)) is None
        right = compare_sif(tops[r].right, tops[s].right, bound).verdict
        reports.append(CheckReport(
            "antichain-pair",
            {"left": r, "right": s, "modulus": m},
            {"bound": bound},
            PASS if ok and right is Verdict.EQUAL else FAIL,
            [{"verdict": Verdict.INCOMPARABLE.value if ok else v.verdict.value,
              "disjoint": [_idx(x) for x in v.certificates.get("disjoint", ())]}],
        ))
    return Family(tops, reports)


def build_chain(m: int, flavor: str = "tower", bound: int = 40) -> Family:
    """A strictly increasing chain of length ``m`` from the tower ``2^j N``."""
    if flavor not in ("tower", "filter-chain"):
        raise ValueError(f"unknown chain flavor {flavor!r}")
    if m < 1:
        raise ValueError("chain length must be positive")
    sets = osets.tower(m, 2)
    if flavor == "tower":
        fs = [flt.factorial_filter(s) for s in sets]
    else:
        fs = [flt.from_filter_base(sets[: j + 1]) for j in range(m)]
    tops = [from_pair(f, TOP) for f in fs]
    reports = []
    for j in range(m - 1):
        v = compare_topologies(tops[j], tops[j + 1], bound)
        fv = flt.compare_filters(fs[j], fs[j + 1], bound)  # cached by the call above
        ok = v.verdict is Verdict.LESS and fv.verdict is Verdict.LESS
        first = fv.certificates["le"][0] if ok else None
        reports.append(CheckReport(
            "chain-step",
            {"lower": j, "upper": j + 1},
            {"bound": bound, "flavor": flavor},
            PASS if ok else FAIL,
            [{"verdict": v.verdict.value,
              "least_refinement": [_idx(x) for x in first] if first else None}],
        ))
    return Family(tops, reports)


SUITES = ("continuity", "hausdorff", "inversion", "accumulation")


def run_suite(t: WeakTopology, suite: str = "all", depth: int = 10, point_bound: int = 20,
              bound: int = 40) -> list[CheckReport]:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name == "continuity":
            out.append(check_shift_continuity(t, depth))
        elif name == "hausdorff":
            out.append(check_hausdorff(t, point_bound))
        elif name == "inversion":
            out.append(check_inversion_continuity(t, depth))
        elif name == "accumulation":
            for k in (-2, 0, 2):
                out.append(check_sigma_accumulation(t, k, bound))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out


# -- row and column traces ------------------------------------------------------------

def check_trace_equality(t: WeakTopology, side: str = "row", lines: int = 5, levels: int = 8) -> CheckReport:
    """Traces along any two rows (or columns) generate the same filter.

    For lines ``i, j`` and a target neighborhood at level ``l``, the witness
    neighborhood raises everything by ``s = |i - j|``.  Its trace along ``j``
    must lie inside the target's trace along ``i``, both as is and after
    shifting by ``i - j``.
    """
    from .topologies import column_expr, default_params, row_expr

    line_expr = row_expr if side == "row" else column_expr
    params = {"side": side, "lines": lines, "levels": levels}
    witnesses = []
    for i, j in itertools.product(range(lines + 1), repeat=2):
        s = abs(i - j)
        for level in range(levels + 1):
            p = default_params(t, level)
            q = _shift_params(t, p, s)
            target, source = line_expr(t, p, i), line_expr(t, q, j)
            for shift in sorted({0, i - j}):
                bad = flt.shifted_subset(source, target, shift)
                if bad is not None:
                    return CheckReport("trace-equality", _describe(t), params, FAIL, witnesses, {
                        "lines": [i, j], "target": p.to_json(), "witness": q.to_json(),
                        "shift": shift, "point": flt.point_json(bad),
                    })
            witnesses.append({"lines": [i, j], "level": level, "witness": q.to_json()})
    return CheckReport("trace-equality", _describe(t), params, PASS, witnesses)
