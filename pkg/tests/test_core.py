import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bicyclic
from weaklattice.core import (
    ONE,
    ZERO,
    Pair,
    ZeroHasNoClass,
    format_element,
    invert,
    is_idempotent,
    multiply,
    parse_element,
    sigma_class,
)

SMALL = [ZERO] + [Pair(a, b) for a in range(7) for b in range(7)]
pairs = st.builds(Pair, st.integers(0, 10**30), st.integers(0, 10**30))
elements = st.one_of(st.just(ZERO), pairs)


def as_tuple(x):
    return None if x is ZERO else (x.a, x.b)


def test_multiplication_examples():
    assert multiply(Pair(2, 3), Pair(9, 4)) == Pair(8, 4)
    assert multiply(Pair(2, 5), Pair(1, 4)) == Pair(2, 8)
    assert multiply(Pair(0, 1), Pair(1, 0)) == ONE
    assert multiply(Pair(1, 0), Pair(0, 1)) == Pair(1, 1)


def test_matches_word_model():
    for x, y in itertools.product(SMALL, repeat=2):
        assert as_tuple(multiply(x, y)) == bicyclic(as_tuple(x), as_tuple(y))


def test_associative_exhaustive():
    for x, y, z in itertools.product(SMALL, repeat=3):
        assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(elements, elements, elements)
def test_associative_large(x, y, z):
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(elements)
def test_identity_and_zero(x):
    assert multiply(ONE, x) == x == multiply(x, ONE)
    assert multiply(ZERO, x) == ZERO == multiply(x, ZERO)


@given(elements)
def test_inverse_axioms(x):
    y = invert(x)
    assert multiply(multiply(x, y), x) == x
    assert multiply(multiply(y, x), y) == y
    assert invert(y) == x


@given(elements, elements)
def test_inversion_reverses_products(x, y):
    assert invert(multiply(x, y)) == multiply(invert(y), invert(x))


@given(elements, elements)
def test_idempotents_commute(x, y):
    e, f = multiply(x, invert(x)), multiply(y, invert(y))
    assert is_idempotent(e) and is_idempotent(f)
    assert multiply(e, f) == multiply(f, e)


def test_idempotents_are_diagonal():
    for x in SMALL:
        assert is_idempotent(x) == (multiply(x, x) == x)


def test_sigma_additive():
    grid = [Pair(a, b) for a in range(9) for b in range(9)]
    for x, y in itertools.product(grid, repeat=2):
        assert sigma_class(multiply(x, y)) == sigma_class(x) + sigma_class(y)


def test_sigma_of_zero():
    with pytest.raises(ZeroHasNoClass):
        sigma_class(ZERO)


def test_pair_validation():
    with pytest.raises(ValueError):
        Pair(-1, 0)
    with pytest.raises(TypeError):
        Pair(1.5, 0)


@pytest.mark.parametrize("text,value", [("0", ZERO), ("(2,9)", Pair(2, 9)), (" ( 3 , 4 ) ", Pair(3, 4))])
def test_parse(text, value):
    assert parse_element(text) == value
    assert parse_element(format_element(value)) == value


@pytest.mark.parametrize("text", ["", "(1)", "(-1,2)", "1,2", "(a,b)"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_element(text)
