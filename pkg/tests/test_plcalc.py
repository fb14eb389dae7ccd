from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from depthcalc.errors import ValidationError
from depthcalc.plcalc import (
    PLFunction, compose, equals, evaluate, inverse, pointwise_max, precompose_scale,
)

F = Fraction

slopes = st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8)
lengths = st.fractions(min_value=F(1, 4), max_value=6, max_denominator=4)


@st.composite
def pl_functions(draw, start_zero=True):
    pieces = draw(st.lists(st.tuples(lengths, slopes), max_size=4))
    start = 0 if start_zero else draw(st.fractions(min_value=0, max_value=3, max_denominator=4))
    return PLFunction.from_slopes(pieces, draw(slopes), start)


points = st.fractions(min_value=0, max_value=30, max_denominator=12)


def test_evaluate_example():
    f = PLFunction(((0, 0), (1, 1)), F(1, 2))
    assert evaluate(f, 2) == F(3, 2)
    assert f(F(1, 2)) == F(1, 2)


def test_rejects_bad_input():
    with pytest.raises(ValidationError):
        PLFunction(((1, 0),), 1)
    with pytest.raises(ValidationError):
        PLFunction(((0, 0), (1, 0)), 1)
    with pytest.raises(ValidationError):
        PLFunction(((0, 0),), 0)
    with pytest.raises(ValidationError):
        evaluate(PLFunction.identity(), -1)
    with pytest.raises(ValidationError):
        precompose_scale(PLFunction.identity(), 0)


def test_canonical_merges_collinear_breakpoints():
    f = PLFunction(((0, 0), (1, 1), (2, 2)), 1)
    assert f == PLFunction.identity()
    assert hash(f) == hash(PLFunction.identity())


def test_max_of_crossing_lines():
    f = PLFunction.from_slopes([(2, 2)], F(1, 2))   # 2x then slow
    g = PLFunction.linear(1)
    m = pointwise_max([f, g])
    assert m(1) == 2
    assert m(10) == 10
    # they cross where 4 + (x-2)/2 = x, at x = 6
    assert m(6) == 6 and m.slope_at(6) == 1


@given(pl_functions(), pl_functions(), pl_functions(), points)
def test_compose_associative(f, g, h, x):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f, g)(x) == f(g(x))


@given(pl_functions(), points)
def test_inverse_involution(f, x):
    g = inverse(f)
    assert inverse(g) == f
    assert g(f(x)) == x
    assert compose(f, g) == PLFunction.identity()


@given(pl_functions(), pl_functions(), points)
def test_max_commutative_idempotent(f, g, x):
    m = pointwise_max([f, g])
    assert equals(m, pointwise_max([g, f]))
    assert pointwise_max([f, f]) == f
    assert m(x) == max(f(x), g(x))


@given(pl_functions(), st.integers(1, 6), points)
def test_precompose_scale(f, e, x):
    assert precompose_scale(f, e)(x) == f(e * x)


@settings(max_examples=50)
@given(pl_functions(), points, points)
def test_monotone(f, a, b):
    if a < b:
        assert f(a) < f(b)
