import itertools
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cofinite_mask, interval_mask, interval_set, omega_pred, residue_pred
from weaklattice import filters as flt
from weaklattice import omegasets as osets
from weaklattice.filters import (
    TOP,
    And,
    Cof,
    Empty,
    Fac,
    Or,
    Verdict,
    WindowPoint,
    compare_filters,
    element_subset,
    shifted_subset,
    verify_certificates,
)

UPPER = 6000  # past 7! + 7, so windows up to n = 7 are fully enumerated

SETS = {
    "omega": (osets.omega(), omega_pred),
    "evens": (osets.evens(), residue_pred(2, 0)),
    "odds": (osets.odds(), residue_pred(2, 1)),
    "mult4": (osets.multiples(4), residue_pred(4, 0)),
    "mod3_1": (osets.residue(3, 1), residue_pred(3, 1)),
    "not_mult3": (osets.union(osets.residue(3, 1), osets.residue(3, 2)), lambda n: n % 3 != 0),
}


def oracle_mask(e, upper=UPPER):
    """Independent evaluation of an element expression."""
    if isinstance(e, Cof):
        return cofinite_mask(e.k, upper)
    if isinstance(e, Fac):
        return interval_mask(e.aset.contains, e.k, upper)
    if isinstance(e, Or):
        return oracle_mask(e.left, upper) | oracle_mask(e.right, upper)
    if isinstance(e, And):
        return oracle_mask(e.left, upper) & oracle_mask(e.right, upper)
    return np.zeros(upper + 1, dtype=bool)


leaf_sets = st.sampled_from([s for s, _ in SETS.values()])
leaves = st.one_of(
    st.builds(Cof, st.integers(-1, 12)),
    st.builds(Fac, leaf_sets, st.integers(0, 6)),
)
exprs = st.recursive(leaves, lambda sub: st.one_of(st.builds(Or, sub, sub), st.builds(And, sub, sub)), max_leaves=4)


# -- membership ----------------------------------------------------------------

@pytest.mark.parametrize("f,k,m,expected", [
    ("omega", 0, 6, True),
    ("omega", 2, 23, True),
    ("evens", 0, 6, False),
])
def test_base_member_examples(f, k, m, expected):
    assert flt.factorial_filter(SETS[f][0]).base_member(k, m) is expected


def test_frechet_member():
    f = flt.Frechet()
    assert not f.base_member(5, 5)
    assert f.base_member(5, 6)


@pytest.mark.parametrize("name", list(SETS))
def test_base_member_against_intervals(name):
    s, pred = SETS[name]
    f = flt.factorial_filter(s)
    for k in range(9):
        want = interval_mask(pred, k, 50_000)
        got = np.array([f.base_member(k, m) for m in range(50_001)])
        assert np.array_equal(got, want), (name, k)
        assert np.array_equal(f.base_member(k, np.arange(50_001)), want), (name, k)


def test_array_membership_near_large_factorials():
    f = flt.factorial_filter(osets.evens())
    ms = np.array([factorial(n) + d for n in (18, 19, 20) for d in range(-21, 22)], dtype=np.int64)
    assert np.array_equal(f.base_member(3, ms), np.array([f.base_member(3, int(m)) for m in ms]))
    assert np.array_equal(f.base_member(0, np.array([-5, 2**62])), np.array([False, False]))


def test_window_points_agree_with_integers():
    f = flt.factorial_filter(osets.evens())
    for n in range(4, 12):
        for off in range(-n, n + 1):
            for k in range(5):
                assert f.base_member(k, WindowPoint(n, off)) == f.base_member(k, factorial(n) + off)


def test_invalid_index():
    with pytest.raises(flt.InvalidIndex):
        flt.Frechet().base_member(-1, 3)
    with pytest.raises(flt.InvalidIndex):
        flt.factorial_filter(osets.omega()).base_member("x", 3)


def test_factorial_needs_infinite_set():
    with pytest.raises(flt.NotInfinite):
        flt.factorial_filter(osets.interval(0, 9))


# -- containment decisions -------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(exprs, exprs)
def test_element_subset_sound(e1, e2):
    got = element_subset(e1, e2)
    m1, m2 = oracle_mask(e1), oracle_mask(e2)
    brute = np.flatnonzero(m1 & ~m2)
    if got is None:
        assert len(brute) == 0
    else:
        assert flt.member(e1, got) and not flt.member(e2, got)
        if len(brute):
            # the exact answer must agree with an explicit finite witness
            assert got is not None


@settings(max_examples=300, deadline=None)
@given(exprs, exprs, st.integers(-4, 4))
def test_shifted_subset_sound(e1, e2, s):
    got = shifted_subset(e1, e2, s)
    m1, m2 = oracle_mask(e1), oracle_mask(e2, UPPER + 5)
    xs = np.flatnonzero(m1)
    xs = xs[xs + s >= 0]
    brute = xs[~m2[xs + s]]
    if got is None:
        assert len(brute) == 0
    else:
        moved = flt.WindowPoint(got.n, got.offset + s) if isinstance(got, WindowPoint) else got + s
        assert flt.member(e1, got) and not flt.member(e2, moved)


def test_gap_witness():
    # a cofinite set is never inside a factorial element
    x = element_subset(Cof(3), Fac(osets.omega(), 0))
    assert not flt.member(Fac(osets.omega(), 0), x) and x > 3


# -- shift invariance, escape, directedness ----------------------------------------------

def test_shift_witness_examples():
    f = flt.factorial_filter(osets.evens())
    assert f.shift_witness(3, -2) == 5
    assert flt.Frechet().shift_witness(4, 3) == 7
    assert f.shift_witness(3, 0) == 3


def test_shift_witness_sampled_to_ten_factorial():
    upper = factorial(10)
    pred = residue_pred(2, 0)
    have = interval_mask(pred, 5, upper)
    want = interval_mask(pred, 3, upper + 2)
    ms = np.flatnonzero(have)
    assert want[ms - 2].all()


@pytest.mark.parametrize("name", list(SETS))
def test_escape_index(name):
    f = flt.factorial_filter(SETS[name][0])
    for k in range(51):
        idx = f.escape_index(k)
        assert not any(f.base_member(idx, m) for m in range(k + 1))
    assert f.escape_index(5) == 6
    assert flt.Frechet().escape_index(0) == 0


def test_escape_of_meet():
    g = flt.MeetOf(flt.factorial_filter(osets.evens()), flt.Frechet())
    idx = g.escape_index(3)
    assert idx == (4, 3)
    assert not any(g.base_member(idx, m) for m in range(4))
    assert element_subset(g.element(idx), Cof(3)) is None


@pytest.mark.parametrize("name", list(SETS))
def test_directedness(name):
    f = flt.factorial_filter(SETS[name][0])
    for a, b in itertools.product(range(6), repeat=2):
        c = f.common_index(a, b)
        assert flt.base_subset(f, c, f, a) and flt.base_subset(f, c, f, b)


# -- order ------------------------------------------------------------------------

def F(name):
    return flt.factorial_filter(SETS[name][0])


def test_compare_examples():
    assert compare_filters(F("mult4"), F("evens")).verdict is Verdict.GREATER
    assert compare_filters(F("evens"), F("evens")).verdict is Verdict.EQUAL
    assert compare_filters(flt.Frechet(), F("omega")).verdict is Verdict.LESS


def test_evens_odds_disjoint_at_least_level():
    v = compare_filters(F("evens"), F("odds"))
    assert v.verdict is Verdict.INCOMPARABLE
    assert v.certificates["disjoint"] == (2, 2)
    # at level 1 both elements hold the point 1, from the windows of 1 and 2
    lvl1 = interval_set(residue_pred(2, 0), 1, 100) & interval_set(residue_pred(2, 1), 1, 100)
    assert lvl1 == {1}
    assert not interval_set(residue_pred(2, 0), 2, 10**5) & interval_set(residue_pred(2, 1), 2, 10**5)


def test_overlapping_is_incomparable_with_checked_samples():
    v = compare_filters(F("mod3_1"), F("evens"))
    assert v.verdict is Verdict.INCOMPARABLE
    assert {"not_le", "not_ge"} <= set(v.certificates)
    for key, (mine, other) in (("not_le", ("mod3_1", "evens")), ("not_ge", ("evens", "mod3_1"))):
        cert = v.certificates[key]
        for idx, p in cert["samples"][:12]:
            x = p.value() if isinstance(p, WindowPoint) else p
            assert x in interval_set(SETS[other][1], idx, x + 1)
            assert x not in interval_set(SETS[mine][1], cert["index"], x + 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(SETS)), st.sampled_from(list(SETS)))
def test_certificates_verify(a, b):
    v = compare_filters(F(a), F(b), bound=12)
    assert verify_certificates(F(a), F(b), v)
    swapped = compare_filters(F(b), F(a), bound=12).verdict
    mirror = {Verdict.LESS: Verdict.GREATER, Verdict.GREATER: Verdict.LESS}
    assert swapped is mirror.get(v.verdict, v.verdict)


def test_least_refinement_index():
    v = compare_filters(F("evens"), F("mult4"))
    for coarse, fine in v.certificates["le"]:
        assert fine == coarse
    v = compare_filters(F("omega"), flt.from_filter_base([osets.interval(4)]))
    assert v.verdict is Verdict.EQUAL


def test_unknown_for_unnormalizable():
    class Odd(flt.SIFilter):
        def normal_form(self):
            raise NotImplementedError

    assert compare_filters(Odd(), flt.Frechet()).verdict is Verdict.UNKNOWN


# -- filter bases ---------------------------------------------------------------------

def test_from_filter_base_examples():
    f = flt.from_filter_base([osets.interval(4)])
    assert f.base_member((0, 2), 23)
    with pytest.raises(flt.ImproperBase):
        flt.from_filter_base([osets.evens(), osets.odds()])
    with pytest.raises(flt.NotInfinite):
        flt.from_filter_base([osets.interval(0, 3)])


def test_filter_base_chain():
    t = osets.tower(3)
    g1 = flt.from_filter_base(t[:1])
    g2 = flt.from_filter_base(t[:2])
    v = compare_filters(g1, g2)
    assert v.verdict is Verdict.LESS
    assert verify_certificates(g1, g2, v)


def test_closure_uses_all_intersections():
    sets = [osets.residue(2, 0), osets.residue(3, 0), osets.residue(5, 0)]
    f = flt.from_filter_base(sets)
    assert osets.multiples(30) in f.base
    assert f.normal_form() == flt.FactorialInduced(osets.multiples(30))


def test_character():
    for f in (F("evens"), flt.Frechet(), flt.from_filter_base(osets.tower(3))):
        assert flt.character(f) is flt.CharacterTag.COUNTABLE


# -- lattice operations ---------------------------------------------------------------

def mutual(f, g, levels=8):
    for k in range(levels + 1):
        fi = flt.refine_index(f, f.index_at(k), g, 40)
        gi = flt.refine_index(g, g.index_at(k), f, 40)
        if fi is None or gi is None:
            return False
    return True


def test_meet_and_join_examples():
    assert flt.meet_filters(F("evens"), F("odds")) == F("omega")
    assert flt.meet_filters(flt.Frechet(), F("evens")) == flt.Frechet()
    assert flt.join_filters(F("evens"), F("mult4")) == F("mult4")
    assert flt.join_filters(F("evens"), F("odds")) is TOP
    assert flt.join_filters(F("evens"), flt.Frechet()) == F("evens")


def test_meet_elements_match_union():
    lazy = flt.meet_filters(F("evens"), F("odds"), normalize=False)
    for k in range(13):
        got = oracle_mask(lazy.element((k, k)))
        assert np.array_equal(got, interval_mask(omega_pred, k, UPPER))


def test_join_of_filter_bases_rewrite():
    g = flt.from_filter_base([osets.evens(), osets.multiples(3)])
    h = flt.from_filter_base([osets.multiples(5)])
    merged = flt.join_filters(g, h)
    lazy = flt.JoinOf(g, h)
    assert isinstance(merged, flt.FilterInduced)
    assert mutual(merged, lazy)
    assert compare_filters(merged, lazy).verdict is Verdict.EQUAL
    # brute: the intersection of the least elements equals the merged least element
    for k in range(6):
        a = oracle_mask(lazy.element(((g.least_position, k), (0, k))), 5000)
        b = interval_mask(residue_pred(30, 0), k, 5000)
        assert np.array_equal(a, b)


def test_improper_join_construction():
    with pytest.raises(flt.ImproperBase):
        flt.JoinOf(F("evens"), F("odds"))
    assert flt.join_filters(F("evens"), F("odds"), normalize=False) is TOP


AD6 = osets.ad_family(6)
LATTICE_POOL = [flt.factorial_filter(x) for x in AD6] + [
    flt.factorial_filter(osets.union(AD6[i], AD6[j])) for i, j in ((0, 1), (0, 3), (2, 4), (1, 3))
]


@pytest.mark.parametrize("a,b", list(itertools.combinations_with_replacement(range(len(LATTICE_POOL)), 2)))
def test_lattice_laws_on_residues(a, b):
    f, g = LATTICE_POOL[a], LATTICE_POOL[b]
    meet, join = flt.meet_filters, flt.join_filters
    assert meet(f, g) == meet(g, f)
    assert meet(f, f) == f and join(f, f) == f
    j = join(f, g)
    assert j == join(g, f)
    if j is not TOP:
        assert meet(f, j) == f
    assert join(f, meet(f, g)) == f


def test_json_round_trip():
    for f in (flt.Frechet(), F("evens"), flt.from_filter_base(osets.tower(2)),
              flt.MeetOf(F("evens"), flt.Frechet()), flt.JoinOf(F("evens"), F("mult4"))):
        assert flt.filter_from_json(f.to_json()).to_json() == f.to_json()
