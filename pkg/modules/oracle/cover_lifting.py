"""
Cover Lifting - Degree-M pseudocodewords as projections of M-cover codewords
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Set, Tuple

import numpy as np

from modules import DomainError, ResourceLimitError
from .pseudocodewords import ParityCheckMatrix, Pseudocodeword, _resolve_threads

logger = logging.getLogger(__name__)

MAX_COVER_WORK = 10**8

Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class CoverAssignment:
    """One permutation of the M copies per base-graph edge, in ParityCheckMatrix.edges order

    Copy a of check j is joined to copy permutations[e][a] of variable i for edge e = (j, i).
    """
    M: int
    permutations: Tuple[Permutation, ...]

    def __post_init__(self):
        identity = tuple(range(self.M))
        for e, perm in enumerate(self.permutations):
            if tuple(sorted(perm)) != identity:
                raise DomainError(f"edge {e} carries {perm}, not a permutation of 0..{self.M - 1}")


def lift_parity_check(H: ParityCheckMatrix, assignment: CoverAssignment) -> ParityCheckMatrix:
    """Parity-check matrix of the M-cover: row j*M + a, column i*M + pi_e(a)"""
    edges = H.edges
    if len(assignment.permutations) != len(edges):
        raise DomainError(f"assignment has {len(assignment.permutations)} permutations for {len(edges)} edges")
    M = assignment.M
    lifted = np.zeros((H.m * M, H.n * M), dtype=np.int64)
    for (j, i), perm in zip(edges, assignment.permutations):
        for a in range(M):
            lifted[j * M + a, i * M + perm[a]] = 1
    return ParityCheckMatrix.from_rows(lifted.tolist())


def _assignment_space(H: ParityCheckMatrix, M: int, fix_identity: bool) -> List[List[Permutation]]:
    """Permutation choices per edge; with fix_identity the first edge of every check is pinned"""
    all_perms = list(itertools.permutations(range(M)))
    identity = [tuple(range(M))]
    choices = []
    seen_checks = set()
    for j, _ in H.edges:
        if fix_identity and j not in seen_checks:
            choices.append(identity)
        else:
            choices.append(all_perms)
        seen_checks.add(j)
    return choices


def cover_work(H: ParityCheckMatrix, M: int, fix_identity: bool = False) -> int:
    """(number of cover assignments) * 2^(Mn)"""
    free_edges = len(H.edges) - (H.m if fix_identity else 0)
    return math.factorial(M) ** free_edges * 2 ** (M * H.n)


def enumerate_cover_codewords(H: ParityCheckMatrix, M: int, threads: Optional[int] = None,
                              fix_identity: bool = False,
                              limit: int = MAX_COVER_WORK) -> Set[Pseudocodeword]:
    """Project every codeword of every M-cover to z_i = number of ones among the copies of i

    Multiplicities are discarded. The default loop is fully exhaustive; fix_identity
    pins one permutation per check, which relabels the copies of that check only.
    """
    if not isinstance(M, int) or M < 1:
        raise DomainError(f"cover degree must be a positive integer, got {M!r}")
    work = cover_work(H, M, fix_identity)
    if work > limit:
        raise ResourceLimitError(f"cover enumeration needs {work} word checks (limit {limit})")

    n_lifted = M * H.n
    words = np.array(list(itertools.product((0, 1), repeat=n_lifted)), dtype=np.int64)
    projections = words.reshape(len(words), H.n, M).sum(axis=2)
    choices = _assignment_space(H, M, fix_identity)

    def lifted_projections(first: Permutation) -> Set[Pseudocodeword]:
        found: Set[Pseudocodeword] = set()
        for rest in itertools.product(*choices[1:]):
            lifted = lift_parity_check(H, CoverAssignment(M, (first,) + rest)).matrix
            mask = np.all((words @ lifted.T) % 2 == 0, axis=1)
            for row in np.unique(projections[mask], axis=0):
                found.add(tuple(int(v) for v in row))
        return found

    result: Set[Pseudocodeword] = set()
    with ThreadPoolExecutor(max_workers=_resolve_threads(threads)) as executor:
        for found in executor.map(lifted_projections, choices[0]):
            result.update(found)
    logger.debug(f"Cover enumeration over {work} word checks produced {len(result)} projections")
    return result


def iter_assignments(H: ParityCheckMatrix, M: int, fix_identity: bool = False) -> Iterator[CoverAssignment]:
    for perms in itertools.product(*_assignment_space(H, M, fix_identity)):
        yield CoverAssignment(M, perms)
