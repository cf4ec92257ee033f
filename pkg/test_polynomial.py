#!/usr/bin/env python3
"""
Test Sparse Polynomials - exact arithmetic, derivatives and the dump format
"""

import sys
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from modules import DimensionError, DomainError, IndexOutOfRangeError, ResourceLimitError
from modules.polynomial import SparsePoly, coeff, partial_derivative, poly_add, poly_mul, poly_pow


def P(M):
    return SparsePoly.parse("+".join(["1"] + [f"x{r}" for r in range(1, M + 1)]), M)


def small_polys(M=2):
    exponents = st.tuples(*[st.integers(0, 3)] * M)
    return st.dictionaries(exponents, st.integers(-5, 5), max_size=5).map(lambda t: SparsePoly(M, t))


def test_additive_inverse_is_empty():
    x1 = SparsePoly.variable(1, 1)
    total = poly_add(x1, -x1)
    assert total.is_zero()
    assert len(total) == 0


def test_like_terms_merge():
    a = SparsePoly.parse("1 + x2", 2)
    b = SparsePoly.parse("x2", 2)
    assert poly_add(a, b) == SparsePoly.parse("1 + 2*x2", 2)


def test_P_plus_Q_cancels_odd_terms():
    Q = SparsePoly.parse("1 - x1 + x2", 2)
    assert poly_add(P(2), Q) == SparsePoly.parse("2 + 2*x2", 2)


def test_mismatched_dimensions_rejected():
    with pytest.raises(DimensionError):
        poly_add(SparsePoly.one(1), SparsePoly.one(2))
    with pytest.raises(DimensionError):
        poly_mul(SparsePoly.one(1), SparsePoly.one(2))


def test_products():
    assert poly_mul(SparsePoly.parse("1 + x1"), SparsePoly.parse("1 - x1")) == SparsePoly.parse("1 - x1^2")
    assert poly_mul(P(2), P(2)) == SparsePoly.parse("1 + 2*x1 + 2*x2 + x1^2 + 2*x1*x2 + x2^2")
    assert coeff(poly_pow(P(2), 3), (2, 1)) == 3


def test_powers():
    assert poly_pow(SparsePoly.parse("1 + x1"), 0) == SparsePoly.one(1)
    assert coeff(poly_pow(SparsePoly.parse("1 + x1"), 4), (2,)) == 6
    even = (poly_pow(P(1), 6) + poly_pow(SparsePoly.parse("1 - x1"), 6)).exact_divide(2)
    assert coeff(even, (2,)) == 15
    assert coeff(even, (3,)) == 0


def test_power_guard():
    with pytest.raises(ResourceLimitError):
        poly_pow(P(3), 40, max_terms=100)


def test_coefficients():
    assert coeff(SparsePoly.parse("1 + 3*x1*x2"), (1, 1)) == 3
    assert coeff(SparsePoly.parse("1 + 3*x1*x2"), (2, 0)) == 0
    for ell in (2, 10, 60):
        assert coeff(poly_pow(SparsePoly.parse("1 + x1"), ell), (ell // 2,)) == comb(ell, ell // 2)


def test_derivatives():
    assert partial_derivative(SparsePoly.parse("x2^2"), 2) == SparsePoly.parse("2*x2")
    assert partial_derivative(SparsePoly.parse("6*x2"), 1).is_zero()
    T3 = SparsePoly.parse("6*x2 + 30*x1*x3")
    assert partial_derivative(T3, 3) == SparsePoly.parse("30*x1", 3)
    with pytest.raises(IndexOutOfRangeError):
        partial_derivative(T3, 4)


def test_large_coefficients_stay_exact():
    power = poly_pow(SparsePoly.parse("1 + x1"), 200)
    assert coeff(power, (100,)) == comb(200, 100)


def test_evaluate_is_exact():
    poly = SparsePoly.parse("1 + 6*x1^2 + x1^4")
    assert poly.evaluate([1]) == 8
    assert poly.evaluate([Fraction(1, 2)]) == Fraction(41, 16)


def test_substitute_signs_turns_P_into_Q():
    assert P(3).substitute_signs() == SparsePoly.parse("1 - x1 + x2 - x3")


def test_dump_format():
    poly = SparsePoly.parse("3*x1*x2 + 1 + x2")
    assert poly.dump() == "1\t0,0\n1\t0,1\n3\t1,1\n"
    assert SparsePoly.parse_dump(poly.dump()) == poly


def test_parse_errors():
    with pytest.raises(DomainError):
        SparsePoly.parse("1 + y")
    with pytest.raises(DomainError):
        SparsePoly.parse("")
    with pytest.raises(IndexOutOfRangeError):
        SparsePoly.parse("x3", 2)


def test_zero_coefficients_never_stored():
    poly = SparsePoly(2, {(0, 0): 0, (1, 0): 2})
    assert dict(poly.terms) == {(1, 0): 2}


@given(small_polys(), small_polys())
@settings(max_examples=50, deadline=None)
def test_product_is_convolution(a, b):
    product = poly_mul(a, b)
    for w in {tuple(x + y for x, y in zip(u, v)) for u in a.terms for v in b.terms}:
        expected = sum(a.coeff(u) * b.coeff(tuple(x - y for x, y in zip(w, u)))
                       for u in a.terms if all(x <= y for x, y in zip(u, w)))
        assert product.coeff(w) == expected


@given(small_polys(), st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_power_matches_repeated_product(a, n):
    expected = SparsePoly.one(2)
    for _ in range(n):
        expected = poly_mul(expected, a)
    assert poly_pow(a, n) == expected


@given(small_polys(3))
@settings(max_examples=50, deadline=None)
def test_mixed_partials_commute(a):
    assert a.partial_derivative(1).partial_derivative(3) == a.partial_derivative(3).partial_derivative(1)
