import pytest

from weaklattice import filters as flt
from weaklattice import omegasets as osets
from weaklattice.filters import TOP
from weaklattice.topologies import from_pair


def corpus_filters():
    return {
        "F_omega": flt.factorial_filter(osets.omega()),
        "F_evens": flt.factorial_filter(osets.evens()),
        "F_odds": flt.factorial_filter(osets.odds()),
        "F_mult4": flt.factorial_filter(osets.multiples(4)),
    }


def components():
    """The six slot values used across the topology checks."""
    fs = corpus_filters()
    return {"Top": TOP, "Frechet": flt.Frechet(), **fs}


def corpus_topologies():
    comps = components()
    return {f"({x},{y})": from_pair(comps[x], comps[y]) for x in comps for y in comps}


@pytest.fixture
def filters_corpus():
    return corpus_filters()


@pytest.fixture
def slots():
    return components()
