import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchkast.ring import (
    NotDivisible,
    Poly,
    RingMatrix,
    RingParseError,
    add,
    bareiss_det,
    determinant,
    evaluate,
    exact_div,
    format_poly,
    mul,
    neg,
    parse_poly,
)

x, y = Poly.var("x"), Poly.var("y")


def test_add_inverse_is_zero():
    assert add(x, neg(x)).is_zero()
    assert add(x, neg(x)).terms == {}


def test_product_of_conjugates():
    assert mul(x + 1, x - 1) == x * x - 1


def test_integer_product():
    assert mul(2, 3) == Poly.const(6)


def test_exact_div_polynomial():
    assert exact_div(x * x - 1, x - 1) == x + 1


def test_exact_div_rejects_remainder():
    with pytest.raises(NotDivisible):
        exact_div(6, 4)


def test_exact_div_zero_numerator():
    assert exact_div(0, x + 3).is_zero()


def test_exact_div_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_div(x, 0)


def test_evaluate_examples():
    assert evaluate(x + 2 * y, {"x": 1, "y": 1}) == 3
    assert evaluate(Poly.const(7), {}) == 7
    assert evaluate(x * y, {"x": 0, "y": 5}) == 0


def test_evaluate_missing_variable():
    with pytest.raises(KeyError):
        evaluate(x, {})


def test_determinant_small_examples():
    a = Poly.var("a")
    assert determinant(RingMatrix.from_lists([[a]])) == a
    assert determinant(RingMatrix.from_lists([[1, 1], [1, 1]])).is_zero()
    assert determinant(RingMatrix.from_lists([[0, 1], [-1, 0]])) == Poly.const(1)


def test_format_parse_round_trip():
    p = 3 * x * x * y - 2 * y + 7
    assert parse_poly(format_poly(p)) == p
    assert format_poly(Poly.const(0)) == "0"


def test_parse_errors():
    with pytest.raises(RingParseError):
        parse_poly("3 +* x")


def _cofactor(rows):
    n = len(rows)
    if n == 0:
        return Poly.const(1)
    total = Poly.const(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Poly.const(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


entry = st.one_of(
    st.integers(-4, 4).map(Poly.const),
    st.sampled_from(["a", "b", "c"]).map(Poly.var),
)


@st.composite
def square(draw, max_n=5, elems=entry):
    n = draw(st.integers(1, max_n))
    return [[draw(elems) for _ in range(n)] for _ in range(n)]


@settings(max_examples=60, deadline=None)
@given(square())
def test_determinant_matches_cofactor(rows):
    assert determinant(RingMatrix.from_lists(rows)) == _cofactor(rows)


@settings(max_examples=60, deadline=None)
@given(square(elems=st.integers(-9, 9)))
def test_bareiss_matches_cofactor(rows):
    assert bareiss_det(rows) == _cofactor(rows).constant_value()


@settings(max_examples=40, deadline=None)
@given(square(), st.data())
def test_row_swap_negates(rows, data):
    if len(rows) < 2:
        return
    i, j = data.draw(st.lists(st.integers(0, len(rows) - 1), min_size=2, max_size=2, unique=True))
    swapped = list(rows)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    d = determinant(RingMatrix.from_lists(rows))
    assert determinant(RingMatrix.from_lists(swapped)) == -d


small_poly = st.lists(
    st.tuples(st.integers(-5, 5), st.integers(0, 2), st.integers(0, 2)), max_size=4
).map(lambda ts: sum((c * x**i * y**j for c, i, j in ts), Poly.const(0)))


@settings(max_examples=80, deadline=None)
@given(small_poly, small_poly)
def test_exact_div_inverts_mul(a, b):
    if b.is_zero():
        return
    assert exact_div(a * b, b) == a


@settings(max_examples=80, deadline=None)
@given(small_poly)
def test_text_round_trip(p):
    assert parse_poly(format_poly(p)) == p
