"""
PWEF Evaluation - Log-domain numeric evaluation of B^(M) and its partial derivatives
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from modules import DomainError, IndexOutOfRangeError
from .spc_enumerator import PwefSpec, build_T

# Below this |Q(x)| the Q-power term is dropped and the result is flagged
Q_VANISH_THRESHOLD = 1e-300


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign and natural log of its magnitude"""
    sign: int
    log_magnitude: float
    q_vanished: bool = False

    @classmethod
    def zero(cls, q_vanished: bool = False) -> "SignedLogValue":
        return cls(0, -math.inf, q_vanished)

    @classmethod
    def from_float(cls, value: float, q_vanished: bool = False) -> "SignedLogValue":
        if value == 0:
            return cls.zero(q_vanished)
        return cls(1 if value > 0 else -1, math.log(abs(value)), q_vanished)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def scaled(self, log_factor: float) -> "SignedLogValue":
        """Multiply by exp(log_factor)"""
        if self.sign == 0:
            return self
        return SignedLogValue(self.sign, self.log_magnitude + log_factor, self.q_vanished)

    def add(self, other: "SignedLogValue") -> "SignedLogValue":
        flag = self.q_vanished or other.q_vanished
        if other.sign == 0:
            return SignedLogValue(self.sign, self.log_magnitude, flag)
        if self.sign == 0:
            return SignedLogValue(other.sign, other.log_magnitude, flag)

        big, small = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        delta = small.log_magnitude - big.log_magnitude
        if big.sign == small.sign:
            return SignedLogValue(big.sign, big.log_magnitude + math.log1p(math.exp(delta)), flag)
        remainder = -math.expm1(delta)
        if remainder <= 0.0:
            return SignedLogValue.zero(flag)
        return SignedLogValue(big.sign, big.log_magnitude + math.log(remainder), flag)

    def subtract_float(self, value: float) -> "SignedLogValue":
        return self.add(SignedLogValue.from_float(-value))


@dataclass(frozen=True)
class _PQ:
    log_p: float
    log_abs_q: float
    sign_q: int
    q_vanished: bool


@lru_cache(maxsize=None)
def _t_table(spec: PwefSpec) -> Tuple[np.ndarray, np.ndarray]:
    T = build_T(spec)
    if T.is_zero():
        return np.zeros((0, spec.M), dtype=np.int64), np.zeros(0)
    exponents = np.array([e for e, _ in T.items()], dtype=np.int64)
    coefficients = np.array([float(c) for _, c in T.items()])
    return exponents, coefficients


def _check_point(spec: PwefSpec, x: Sequence[float], allow_zero: bool = False) -> np.ndarray:
    point = np.asarray(x, dtype=float)
    if point.shape != (spec.M,):
        raise DomainError(f"evaluation point must have {spec.M} coordinates, got shape {point.shape}")
    if not np.all(np.isfinite(point)):
        raise DomainError(f"evaluation point must be finite, got {point.tolist()}")
    if allow_zero:
        if np.any(point < 0) or not np.any(point > 0):
            raise DomainError(f"evaluation point must be nonnegative and nonzero, got {point.tolist()}")
    elif np.any(point <= 0):
        raise DomainError(f"evaluation point must be strictly positive, got {point.tolist()}")
    return point


def _check_index(spec: PwefSpec, r: int) -> None:
    if not 1 <= r <= spec.M:
        raise IndexOutOfRangeError(f"variable index {r} outside 1..{spec.M}")


def _pq(point: np.ndarray) -> _PQ:
    signs = np.array([(-1) ** r for r in range(1, len(point) + 1)], dtype=float)
    p = 1.0 + math.fsum(point)
    q = 1.0 + math.fsum(signs * point)
    if abs(q) < Q_VANISH_THRESHOLD:
        return _PQ(math.log(p), -math.inf, 0, True)
    return _PQ(math.log(p), math.log(abs(q)), 1 if q > 0 else -1, False)


def _half_power_sum(pq: _PQ, n: int, eps: int) -> SignedLogValue:
    """(P^n + eps*Q^n)/2 in signed-log form"""
    if n == 0:
        return SignedLogValue(1, 0.0, pq.q_vanished) if eps > 0 else SignedLogValue.zero(pq.q_vanished)
    p_term = SignedLogValue(1, n * pq.log_p)
    if pq.sign_q == 0:
        q_term = SignedLogValue.zero(True)
    else:
        q_term = SignedLogValue(eps * pq.sign_q ** n, n * pq.log_abs_q)
    return p_term.add(q_term).scaled(-math.log(2.0))


def _t_value(spec: PwefSpec, point: np.ndarray, indices: Sequence[int] = ()) -> float:
    """T^(M) or one of its partial derivatives (variables given 0-based) at a point"""
    exponents, coefficients = _t_table(spec)
    if not len(coefficients):
        return 0.0
    exponents = exponents.copy()
    coefficients = coefficients.copy()
    for i in indices:
        factor = exponents[:, i]
        keep = factor > 0
        coefficients = coefficients[keep] * factor[keep]
        exponents = exponents[keep]
        exponents[:, i] -= 1
    if not len(coefficients):
        return 0.0
    monomials = np.prod(point[np.newaxis, :] ** exponents, axis=1)
    return math.fsum(coefficients * monomials)


def eval_B(spec: PwefSpec, x: Sequence[float], allow_zero: bool = False) -> SignedLogValue:
    """B^(M)(x) without expanding the k-th powers

    With allow_zero, coordinates may be 0: the value is then B restricted to the
    face of the remaining variables.
    """
    point = _check_point(spec, x, allow_zero)
    half = _half_power_sum(_pq(point), spec.k, 1)
    return half.subtract_float(_t_value(spec, point))


def eval_dB(spec: PwefSpec, x: Sequence[float], r: int, allow_zero: bool = False) -> SignedLogValue:
    """dB^(M)/dx_r = k/2 [P^(k-1) + (-1)^r Q^(k-1)] - dT/dx_r"""
    point = _check_point(spec, x, allow_zero)
    _check_index(spec, r)
    half = _half_power_sum(_pq(point), spec.k - 1, (-1) ** r).scaled(math.log(spec.k))
    return half.subtract_float(_t_value(spec, point, (r - 1,)))


def eval_d2B(spec: PwefSpec, x: Sequence[float], r: int, s: int, allow_zero: bool = False) -> SignedLogValue:
    """d2B^(M)/dx_r dx_s = k(k-1)/2 [P^(k-2) + (-1)^(r+s) Q^(k-2)] - d2T/dx_r dx_s"""
    point = _check_point(spec, x, allow_zero)
    _check_index(spec, r)
    _check_index(spec, s)
    half = _half_power_sum(_pq(point), spec.k - 2, (-1) ** (r + s))
    half = half.scaled(math.log(spec.k) + math.log(spec.k - 1))
    return half.subtract_float(_t_value(spec, point, (r - 1, s - 1)))


def support_contains(spec: PwefSpec, xi: Sequence[float], allow_zero: bool = False) -> bool:
    """Whether xi lies in the interior of the Newton polytope of B^(M)

    With allow_zero, zero coordinates select a face and xi is tested against the
    relative interior of that face.
    """
    values = np.asarray(xi, dtype=float)
    if values.shape != (spec.M,):
        return False
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        return False
    if not (np.any(values > 0) if allow_zero else np.all(values > 0)):
        return False
    if values.sum() >= spec.k:
        return False
    if spec.k % 2 and values[0::2].sum() >= spec.k - 1:
        return False
    return True
