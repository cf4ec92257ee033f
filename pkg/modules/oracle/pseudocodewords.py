"""
Pseudocodewords - Brute-force pseudocodeword enumeration through the fundamental cone
"""

import itertools
import logging
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from modules import DimensionError, DomainError, ResourceLimitError, UndefinedWeightError

logger = logging.getLogger(__name__)

Pseudocodeword = Tuple[int, ...]
PseudoweightVector = Tuple[int, ...]

MAX_SCAN_VECTORS = 10**7
# rows per vectorised block of the exhaustive scan
BLOCK_ROWS = 1 << 16


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Binary m x n parity-check matrix stored row by row"""
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows:
            raise DomainError("parity-check matrix needs at least one row")
        width = len(self.rows[0])
        for j, row in enumerate(self.rows):
            if len(row) != width:
                raise DimensionError(f"row {j} has length {len(row)}, expected {width}")
            if any(v not in (0, 1) for v in row):
                raise DomainError(f"row {j} is not binary: {row}")
            if not any(row):
                raise DomainError(f"row {j} has empty support")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ParityCheckMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def spc(cls, k: int) -> "ParityCheckMatrix":
        """Single parity-check code of length k"""
        if not isinstance(k, int) or k < 1:
            raise DomainError(f"SPC length must be a positive integer, got {k!r}")
        return cls(((1,) * k,))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    @property
    def supports(self) -> List[Tuple[int, ...]]:
        """I_j = {i : H[j][i] = 1}"""
        return [tuple(i for i, v in enumerate(row) if v) for row in self.rows]

    @property
    def edges(self) -> List[Tuple[int, int]]:
        """Tanner-graph edges (check j, variable i) in row-major order"""
        return [(j, i) for j, support in enumerate(self.supports) for i in support]

    def __str__(self) -> str:
        return "\n".join("".join(str(v) for v in row) for row in self.rows)


def _check_vector(z: Sequence[int], H: Optional[ParityCheckMatrix] = None) -> Tuple[int, ...]:
    values = tuple(int(v) for v in z)
    if H is not None and len(values) != H.n:
        raise DimensionError(f"vector has length {len(values)}, matrix has {H.n} columns")
    return values


def awgn_pseudoweight(z: Sequence[int]) -> float:
    """(sum z_i)^2 / sum z_i^2"""
    values = _check_vector(z)
    if any(v < 0 for v in values):
        raise DomainError(f"pseudocodeword entries must be nonnegative, got {values}")
    squares = sum(v * v for v in values)
    if squares == 0:
        raise UndefinedWeightError("AWGN-pseudoweight of the all-zero vector is undefined")
    return float(Fraction(sum(values) ** 2, squares))


def in_fundamental_cone(z: Sequence[int], H: ParityCheckMatrix) -> bool:
    """Every entry of every check is at most the sum of the others"""
    values = _check_vector(z, H)
    if any(v < 0 for v in values):
        return False
    for support in H.supports:
        local = [values[i] for i in support]
        if 2 * max(local) > sum(local):
            return False
    return True


def is_pseudocodeword(z: Sequence[int], H: ParityCheckMatrix) -> bool:
    """Integer point of the fundamental cone with even check sums"""
    values = _check_vector(z, H)
    if not in_fundamental_cone(values, H):
        return False
    return all(sum(values[i] for i in support) % 2 == 0 for support in H.supports)


def type_of(z: Sequence[int], M: int) -> PseudoweightVector:
    """u_r = number of entries equal to r"""
    values = _check_vector(z)
    if any(v < 0 or v > M for v in values):
        raise DomainError(f"entries of {values} must lie in 0..{M}")
    counts = Counter(values)
    return tuple(counts.get(r, 0) for r in range(1, M + 1))


def type_counts(words: Set[Pseudocodeword], M: int) -> Dict[PseudoweightVector, int]:
    """Multiset of types over a set of pseudocodewords"""
    return dict(Counter(type_of(z, M) for z in words))


def _resolve_threads(threads: Optional[int]) -> int:
    return max(1, threads or os.cpu_count() or 1)


BlockFilter = Callable[[np.ndarray], np.ndarray]


def _scan(H: ParityCheckMatrix, radix: int, keep: BlockFilter, threads: Optional[int],
          limit: int) -> Set[Pseudocodeword]:
    """Exhaustive scan of {0..radix-1}^n, split across threads by a prefix of z"""
    n = H.n
    total = radix ** n
    if total > limit:
        raise ResourceLimitError(f"exhaustive scan of {radix}^{n} = {total} vectors exceeds the limit {limit}")

    suffix_length = min(n, int(math.log(BLOCK_ROWS) / math.log(radix)))
    prefix_length = n - suffix_length
    suffix = np.array(list(itertools.product(range(radix), repeat=suffix_length)), dtype=np.int64)
    suffix = suffix.reshape(-1, suffix_length)

    def scan_prefix(prefix: Tuple[int, ...]) -> List[Pseudocodeword]:
        head = np.broadcast_to(np.array(prefix, dtype=np.int64), (len(suffix), prefix_length))
        block = np.hstack((head, suffix))
        return [tuple(int(v) for v in row) for row in block[keep(block)]]

    prefixes = list(itertools.product(range(radix), repeat=prefix_length))
    found: Set[Pseudocodeword] = set()
    with ThreadPoolExecutor(max_workers=_resolve_threads(threads)) as executor:
        for words in executor.map(scan_prefix, prefixes):
            found.update(words)
    logger.debug(f"Scanned {total} vectors over {len(prefixes)} prefixes, kept {len(found)}")
    return found


def _pseudocodeword_filter(H: ParityCheckMatrix) -> BlockFilter:
    supports = [np.array(s) for s in H.supports]

    def keep(block: np.ndarray) -> np.ndarray:
        mask = np.ones(len(block), dtype=bool)
        for support in supports:
            local = block[:, support]
            sums = local.sum(axis=1)
            mask &= (sums % 2 == 0) & (2 * local.max(axis=1) <= sums)
        return mask

    return keep


def enumerate_pseudocodewords(H: ParityCheckMatrix, M: int, threads: Optional[int] = None,
                              limit: int = MAX_SCAN_VECTORS) -> Set[Pseudocodeword]:
    """All z in {0..M}^n that lie in the fundamental cone with even check sums"""
    if not isinstance(M, int) or M < 1:
        raise DomainError(f"cover degree must be a positive integer, got {M!r}")
    return _scan(H, M + 1, _pseudocodeword_filter(H), threads, limit)


def enumerate_codewords(H: ParityCheckMatrix, threads: Optional[int] = None,
                        limit: int = MAX_SCAN_VECTORS) -> Set[Pseudocodeword]:
    """Binary words with z H^T = 0 mod 2"""
    matrix = H.matrix

    def keep(block: np.ndarray) -> np.ndarray:
        return np.all((block @ matrix.T) % 2 == 0, axis=1)

    return _scan(H, 2, keep, threads, limit)
