import json
from math import factorial

import pytest

from conftest import components, corpus_filters, corpus_topologies
from oracles import bicyclic, interval_set
from weaklattice import filters as flt
from weaklattice import omegasets as osets
from weaklattice.core import Pair
from weaklattice.filters import TOP
from weaklattice.topologies import NbhdParams, from_pair, member_coords, tau_c, tau_L, tau_min, tau_R
from weaklattice.verify import (
    FAIL,
    PASS,
    RAW_BASE,
    build_antichain,
    build_chain,
    check_filter_shift,
    check_hausdorff,
    check_inversion_continuity,
    check_shift_continuity,
    check_sigma_accumulation,
    check_tauL_identities,
    check_trace_equality,
    run_suite,
)

F_OMEGA = flt.factorial_filter(osets.omega())
F_EVENS = flt.factorial_filter(osets.evens())
F_ODDS = flt.factorial_filter(osets.odds())


def is_factorial(x):
    return any(factorial(n) == x for n in range(30))


@pytest.mark.parametrize("t", [tau_min(), tau_c(), tau_L(), tau_R(), from_pair(F_OMEGA, F_OMEGA)])
def test_shift_continuity_passes(t):
    r = check_shift_continuity(t, 6)
    assert r.verdict == PASS
    assert r.witnesses


def test_shift_continuity_witness_shape():
    r = check_shift_continuity(tau_min(), 10)
    for w in r.witnesses:
        assert w["witness"]["n"] == w["target"]["n"] + 1


def test_impostor_fails_shift_continuity():
    r = check_shift_continuity(from_pair(RAW_BASE, TOP), 10)
    assert r.verdict == FAIL
    ce = r.counterexample
    x, image = ce["point"], ce["image"]
    assert is_factorial(x) and not is_factorial(image) and image == x + ce["shift"]


def test_impostor_fails_filter_shift():
    r = check_filter_shift(RAW_BASE, upper=10**4)
    assert r.verdict == FAIL
    ce = r.counterexample
    assert is_factorial(ce["m"]) and ce["point"] == ce["m"] + 1 and not is_factorial(ce["point"])


@pytest.mark.parametrize("name", ["F_omega", "F_evens", "F_mult4"])
def test_filter_shift_passes(name):
    f = corpus_filters()[name]
    assert check_filter_shift(f, levels=range(4), upper=10**4).verdict == PASS


def test_hausdorff():
    for t in (tau_c(), from_pair(F_EVENS, TOP)):
        r = check_hausdorff(t, 20)
        assert r.verdict == PASS
        for w in r.witnesses:
            p = NbhdParams(w["params"]["n"], w["params"]["m"],
                           _tup(w["params"]["li"]), _tup(w["params"]["ri"]))
            assert not member_coords(t, p, *w["point"])
    r = check_hausdorff(from_pair(F_EVENS, F_ODDS), 0)
    assert r.witnesses[0]["params"] == {"n": 0, "m": 0, "li": 1, "ri": 1}


def _tup(x):
    return tuple(_tup(i) for i in x) if isinstance(x, list) else x


def test_inversion_continuity():
    assert check_inversion_continuity(from_pair(F_OMEGA, F_OMEGA)).verdict == PASS
    assert check_inversion_continuity(tau_min()).verdict == PASS
    t = from_pair(F_EVENS, F_ODDS)
    r = check_inversion_continuity(t)
    assert r.verdict == FAIL
    ce = r.counterexample
    p = ce["neighborhood"]
    p = NbhdParams(p["n"], p["m"], _tup(p["li"]), _tup(p["ri"]))
    a, b = ce["point"]
    # the inverse of the point misses the neighborhood
    assert not member_coords(t, p, b, a)


def test_sigma_accumulation_examples():
    r = check_sigma_accumulation(tau_min(), 2, 100)
    assert r.verdict == PASS
    assert any(w["point"] == "(103,101)" for w in r.witnesses)
    r = check_sigma_accumulation(from_pair(F_OMEGA, TOP), -3, 50)
    assert r.verdict == PASS
    assert any(w["point"] == "(51,54)" for w in r.witnesses)
    for t in corpus_topologies().values():
        assert check_sigma_accumulation(t, 0, 10).verdict == PASS


def test_tauL_identities():
    assert bicyclic((2, 3), (9, 7)) == (8, 7)
    r = check_tauL_identities(4, square_cap=12)
    assert r.verdict == PASS


def test_trace_equality():
    assert check_trace_equality(from_pair(F_OMEGA, TOP)).verdict == PASS
    assert check_trace_equality(from_pair(F_EVENS, F_EVENS), side="column", lines=3, levels=4).verdict == PASS


def test_antichain():
    fam = build_antichain(2)
    assert len(fam.topologies) == 2 and len(fam.reports) == 1 and fam.passed
    assert fam.topologies[0].left == F_EVENS
    single = build_antichain(1)
    assert len(single.topologies) == 1 and single.reports == []
    assert build_antichain(4, "filter-induced").passed


def test_chain():
    fam = build_chain(5)
    assert len(fam.topologies) == 5 and len(fam.reports) == 4 and fam.passed
    assert build_chain(1).reports == []
    assert build_chain(4, "filter-chain").passed


def test_run_suite_and_reports_are_json():
    for r in run_suite(from_pair(F_EVENS, flt.Frechet()), depth=4, point_bound=5, bound=8):
        # the two slots differ, so only inversion fails
        assert r.verdict == (FAIL if r.check == "inversion-continuity" else PASS)
        json.dumps(r.to_json())
    with pytest.raises(ValueError):
        run_suite(tau_min(), "nope")


def test_reports_deterministic():
    a = check_shift_continuity(from_pair(F_EVENS, TOP), 4).to_json()
    b = check_shift_continuity(from_pair(F_EVENS, TOP), 4).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_interval_oracle_sanity():
    assert interval_set(lambda n: True, 0, 10) == set(range(0, 10))
    assert 23 in interval_set(lambda n: True, 2, 30)
