#!/usr/bin/env python3
"""
Test PWEF - SPC pseudoweight enumerator construction, S-set membership and log-domain evaluation
"""

import itertools
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from modules import DomainError, IndexOutOfRangeError, ResourceLimitError
from modules.polynomial import SparsePoly
from modules.pwef import (PwefSpec, SignedLogValue, build_B, build_P, build_Q, build_T, eval_B, eval_d2B,
                          eval_dB, membership_S, multinomial, support_contains)


def T_closed_form(M, k):
    """The printed closed forms of T^(2), T^(3), T^(4)"""
    text = {
        2: f"{k}*x2",
        3: f"{k}*x2 + {k * (k - 1)}*x1*x3",
        4: f"{k}*x2 + {k * (k - 1)}*x1*x3 + {k}*x4 + {k * (k - 1)}*x2*x4 + {k * (k - 1) * (k - 2) // 2}*x1^2*x4",
    }[M]
    return SparsePoly.parse(text, M)


def test_spec_validation():
    with pytest.raises(DomainError):
        PwefSpec(0, 4)
    with pytest.raises(DomainError):
        PwefSpec(2, 1)
    with pytest.raises(DomainError):
        PwefSpec(9, 4)


def test_P_and_Q():
    assert build_P(PwefSpec(1, 4)) == SparsePoly.parse("1 + x1")
    assert build_P(PwefSpec(3, 4)) == SparsePoly.parse("1 + x1 + x2 + x3")
    assert build_P(PwefSpec(3, 4)).evaluate([1, 1, 1]) == 4
    assert build_Q(PwefSpec(2, 4)) == SparsePoly.parse("1 - x1 + x2")
    assert build_Q(PwefSpec(1, 4)).evaluate([1]) == 0
    for M in range(1, 6):
        spec = PwefSpec(M, 4)
        assert build_Q(spec) == build_P(spec).substitute_signs()


def test_T_examples():
    assert build_T(PwefSpec(1, 6)).is_zero()
    assert build_T(PwefSpec(2, 6)) == SparsePoly.parse("6*x2")
    assert build_T(PwefSpec(3, 6)) == SparsePoly.parse("6*x2 + 30*x1*x3")
    assert build_T(PwefSpec(4, 3)) == SparsePoly.parse("3*x2 + 6*x1*x3 + 3*x4 + 6*x2*x4 + 3*x1^2*x4")


@pytest.mark.parametrize("M", [2, 3, 4])
@pytest.mark.parametrize("k", [3, 6, 10])
def test_T_matches_closed_forms(M, k):
    assert build_T(PwefSpec(M, k)) == T_closed_form(M, k)


@pytest.mark.parametrize("M", [2, 3, 4, 5])
def test_T_recursion_consistency(M):
    assert build_T(PwefSpec(M, 7)).restrict_last_to_zero() == build_T(PwefSpec(M - 1, 7))


def test_B_examples():
    assert build_B(PwefSpec(1, 4)) == SparsePoly.parse("1 + 6*x1^2 + x1^4")
    B = build_B(PwefSpec(2, 3))
    assert B.coeff((2, 1)) == 3
    assert B.coeff((0, 1)) == 0
    for M in (1, 2, 3):
        for k in (2, 5):
            assert build_B(PwefSpec(M, k)).coeff((0,) * M) == 1


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("k", range(2, 9))
def test_B_coefficients_follow_S_set(M, k):
    spec = PwefSpec(M, k)
    B = build_B(spec)
    for u in itertools.product(range(k + 1), repeat=M):
        if sum(u) > k:
            continue
        expected = multinomial(k, u) if membership_S(u, spec) else 0
        assert B.coeff(u) == expected, u
    assert all(c > 0 for _, c in B.items())


def test_B_expansion_guard():
    with pytest.raises(ResourceLimitError):
        build_B(PwefSpec(8, 200), max_terms=1000)


def test_membership_examples():
    spec = PwefSpec(2, 6)
    assert membership_S((2, 0), spec)
    assert not membership_S((0, 1), spec)
    assert not membership_S((1, 0), spec)
    assert membership_S((0, 2), spec)
    assert membership_S((2, 1), spec)
    assert not membership_S((4, 3), spec)


def test_multinomial():
    assert multinomial(6, (1, 2)) == 6 * 10
    assert multinomial(3, (2, 1)) == 3
    assert multinomial(3, (2, 2)) == 0


def test_signed_log_value():
    value = SignedLogValue.from_float(-2.5)
    assert value.sign == -1
    assert value.value == pytest.approx(-2.5, rel=1e-12)
    assert SignedLogValue.from_float(3.0).add(SignedLogValue.from_float(-3.0)).sign == 0
    assert SignedLogValue.from_float(3.0).subtract_float(1.0).value == pytest.approx(2.0, rel=1e-12)
    assert SignedLogValue(1, 1000.0).value == math.inf


def test_eval_examples():
    spec = PwefSpec(1, 6)
    assert eval_B(spec, [1.0]).value == pytest.approx(32.0, rel=1e-12)
    assert eval_dB(spec, [1.0], 1).value == pytest.approx(96.0, rel=1e-12)
    assert eval_B(PwefSpec(3, 5), [1e-9, 1e-9, 1e-9]).value == pytest.approx(1.0, rel=1e-6)


def test_eval_at_all_ones_matches_exact():
    spec = PwefSpec(2, 3)
    exact = build_B(spec).evaluate([1, 1])
    assert exact == sum(multinomial(3, u) for u in itertools.product(range(4), repeat=2)
                        if sum(u) <= 3 and membership_S(u, spec))
    assert eval_B(spec, [1.0, 1.0]).value == pytest.approx(float(exact), rel=1e-10)


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("k", [3, 6, 10])
def test_eval_B_matches_rational_evaluation(M, k):
    spec = PwefSpec(M, k)
    B = build_B(spec)
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = rng.uniform(0.05, 3.0, size=M)
        exact = B.evaluate([Fraction(v) for v in x])
        assert eval_B(spec, x).value == pytest.approx(float(exact), rel=1e-10)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_eval_derivatives_match_exact(M):
    spec = PwefSpec(M, 6)
    B = build_B(spec)
    x = [0.4 + 0.3 * r for r in range(M)]
    point = [Fraction(v) for v in x]
    for r in range(1, M + 1):
        exact = B.partial_derivative(r).evaluate(point)
        assert eval_dB(spec, x, r).value == pytest.approx(float(exact), rel=1e-10)
        for s in range(1, M + 1):
            exact2 = B.partial_derivative(r).partial_derivative(s).evaluate(point)
            assert eval_d2B(spec, x, r, s).value == pytest.approx(float(exact2), rel=1e-9, abs=1e-9)


def test_eval_dB_matches_finite_difference():
    spec = PwefSpec(3, 7)
    rng = np.random.default_rng(11)
    for _ in range(10):
        x = rng.uniform(0.1, 2.0, size=3)
        for r in range(1, 4):
            h = 1e-6 * x[r - 1]
            up, down = x.copy(), x.copy()
            up[r - 1] += h
            down[r - 1] -= h
            fd = (eval_B(spec, up).value - eval_B(spec, down).value) / (2 * h)
            assert eval_dB(spec, x, r).value == pytest.approx(fd, rel=1e-6)


def test_derivative_of_T_part():
    spec = PwefSpec(2, 6)
    assert build_T(spec).partial_derivative(2) == SparsePoly.constant(2, 6)


def test_large_k_does_not_overflow():
    value = eval_B(PwefSpec(2, 100_000), [0.5, 0.5])
    assert value.sign == 1
    assert value.log_magnitude == pytest.approx(100_000 * math.log(2.0) - math.log(2.0), rel=1e-12)


def test_Q_vanishing_is_flagged():
    value = eval_B(PwefSpec(1, 6), [1.0])
    assert value.q_vanished


def test_eval_domain_errors():
    spec = PwefSpec(2, 4)
    with pytest.raises(DomainError):
        eval_B(spec, [1.0, 0.0])
    with pytest.raises(DomainError):
        eval_B(spec, [1.0])
    with pytest.raises(IndexOutOfRangeError):
        eval_dB(spec, [1.0, 1.0], 3)


def test_support():
    spec = PwefSpec(1, 5)
    assert support_contains(spec, [2.0])
    assert not support_contains(spec, [4.0])
    assert not support_contains(spec, [0.0])
    assert support_contains(PwefSpec(1, 6), [5.5])


def test_eval_on_a_face():
    # x2 = 0 leaves the degree-1 enumerator; x1 = 0 leaves (1+x)^k - kx
    x = 0.3
    face_one = eval_B(PwefSpec(2, 6), [x, 0.0], allow_zero=True)
    assert face_one.value == pytest.approx(eval_B(PwefSpec(1, 6), [x]).value, rel=1e-12)
    face_two = eval_B(PwefSpec(2, 6), [0.0, x], allow_zero=True)
    assert face_two.value == pytest.approx((1 + x) ** 6 - 6 * x, rel=1e-12)
    assert eval_dB(PwefSpec(2, 6), [0.0, x], 2, allow_zero=True).value == pytest.approx(
        6 * (1 + x) ** 5 - 6, rel=1e-12)
    with pytest.raises(DomainError):
        eval_B(PwefSpec(2, 6), [0.0, 0.0], allow_zero=True)
    with pytest.raises(DomainError):
        eval_B(PwefSpec(2, 6), [-0.1, 0.3], allow_zero=True)


def test_support_on_faces():
    spec = PwefSpec(2, 6)
    assert not support_contains(spec, [0.0, 0.12])
    assert support_contains(spec, [0.0, 0.12], allow_zero=True)
    assert support_contains(spec, [0.12, 0.0], allow_zero=True)
    assert not support_contains(spec, [0.0, 0.0], allow_zero=True)
    assert not support_contains(spec, [0.0, 6.0], allow_zero=True)
    assert not support_contains(PwefSpec(1, 5), [4.5], allow_zero=True)
