"""
SPC Enumerator - Exact degree-M pseudoweight enumerating function of the single parity-check code
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from modules import DomainError, ResourceLimitError
from modules.polynomial import SparsePoly

MAX_COVER_DEGREE = 8
MAX_CHECK_DEGREE = 10**6
# (P^(M))^k has C(k+M, M) terms; exact expansion is for small k only
MAX_EXPANSION_TERMS = 2_000_000


@dataclass(frozen=True)
class PwefSpec:
    """Cover degree M and SPC length k"""
    M: int
    k: int

    def __post_init__(self):
        if not isinstance(self.M, int) or not 1 <= self.M <= MAX_COVER_DEGREE:
            raise DomainError(f"cover degree M must be an integer in 1..{MAX_COVER_DEGREE}, got {self.M!r}")
        if not isinstance(self.k, int) or not 2 <= self.k <= MAX_CHECK_DEGREE:
            raise DomainError(f"SPC length k must be an integer in 2..{MAX_CHECK_DEGREE}, got {self.k!r}")


def multinomial(k: int, parts: Sequence[int]) -> int:
    """k! / ((k - sum(parts))! prod(parts!)), zero when the parts exceed k"""
    if any(p < 0 for p in parts):
        return 0
    remaining = k
    result = 1
    for p in parts:
        if p > remaining:
            return 0
        result *= math.comb(remaining, p)
        remaining -= p
    return result


def build_P(spec: PwefSpec) -> SparsePoly:
    """1 + x_1 + ... + x_M"""
    M = spec.M
    terms = {(0,) * M: 1}
    for r in range(M):
        exponent = [0] * M
        exponent[r] = 1
        terms[tuple(exponent)] = 1
    return SparsePoly(M, terms)


def build_Q(spec: PwefSpec) -> SparsePoly:
    """1 - x_1 + x_2 - x_3 + ..."""
    M = spec.M
    terms = {(0,) * M: 1}
    for r in range(1, M + 1):
        exponent = [0] * M
        exponent[r - 1] = 1
        terms[tuple(exponent)] = (-1) ** r
    return SparsePoly(M, terms)


def _exclusion_vectors(length: int, M: int) -> Iterator[Tuple[int, ...]]:
    """Vectors v >= 0 of the given length with sum r*v_r < M and sum_{r odd} v_r + M even"""
    def extend(prefix: List[int], weight: int) -> Iterator[Tuple[int, ...]]:
        r = len(prefix) + 1
        if r > length:
            odd_count = sum(prefix[i - 1] for i in range(1, length + 1, 2))
            if (odd_count + M) % 2 == 0:
                yield tuple(prefix)
            return
        v = 0
        while weight + r * v < M:
            yield from extend(prefix + [v], weight + r * v)
            v += 1

    yield from extend([], 0)


@lru_cache(maxsize=None)
def build_T(spec: PwefSpec) -> SparsePoly:
    """Exclusion term T^(M): pseudoweights of the SPC code that fail the cone condition"""
    M, k = spec.M, spec.k
    terms = {}
    for m in range(2, M + 1):
        for v in _exclusion_vectors(m - 1, m):
            coefficient = multinomial(k, (1,) + v)
            if not coefficient:
                continue
            exponent = list(v) + [0] * (M - m + 1)
            exponent[m - 1] = 1
            key = tuple(exponent)
            terms[key] = terms.get(key, 0) + coefficient
    return SparsePoly(M, terms)


@lru_cache(maxsize=32)
def build_B(spec: PwefSpec, max_terms: int = MAX_EXPANSION_TERMS) -> SparsePoly:
    """B^(M) = ((P^(M))^k + (Q^(M))^k)/2 - T^(M), fully expanded"""
    expected_terms = math.comb(spec.k + spec.M, spec.M)
    if expected_terms > max_terms:
        raise ResourceLimitError(
            f"expanding B^({spec.M}) for k={spec.k} needs {expected_terms} terms (limit {max_terms})"
        )
    p_power = build_P(spec).power(spec.k, max_terms=max_terms)
    q_power = build_Q(spec).power(spec.k, max_terms=max_terms)
    return (p_power + q_power).exact_divide(2) - build_T(spec)


def membership_S(u: Sequence[int], spec: PwefSpec) -> bool:
    """Whether a pseudoweight vector is realised by some pseudocodeword of the SPC code"""
    if len(u) != spec.M:
        raise DomainError(f"pseudoweight vector has length {len(u)}, expected {spec.M}")
    if any(value < 0 for value in u) or sum(u) > spec.k:
        return False
    if sum(u[r - 1] for r in range(1, spec.M + 1, 2)) % 2:
        return False
    top = max((r for r in range(1, spec.M + 1) if u[r - 1]), default=0)
    if top and u[top - 1] == 1:
        # a single largest entry must be balanced by the rest of the check
        if top > sum(r * u[r - 1] for r in range(1, top)):
            return False
    return True
