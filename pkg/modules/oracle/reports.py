"""
Verification Reports - Cross-checks between independent pseudocodeword enumerations
"""

import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from modules.polynomial import SparsePoly
from modules.pwef import PwefSpec, build_B, membership_S, multinomial
from .cover_lifting import MAX_COVER_WORK, enumerate_cover_codewords
from .lemma_check import Rational, verify_lemma_asymptotics
from .pseudocodewords import (MAX_SCAN_VECTORS, ParityCheckMatrix, enumerate_pseudocodewords,
                              type_counts)

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """Outcome of comparing two methods on one instance"""
    instance: Dict[str, Any]
    method_a: str
    method_b: str
    agree: bool
    mismatches: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "instance": self.instance,
            "method_a": self.method_a,
            "method_b": self.method_b,
            "agree": self.agree,
            "mismatches": self.mismatches,
        }
        if self.details:
            result["details"] = self.details
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def predicted_type_counts(spec: PwefSpec) -> Dict[tuple, int]:
    """C(k; u) for every u the S-set conditions admit"""
    counts = {}
    for u in itertools.product(range(spec.k + 1), repeat=spec.M):
        if sum(u) <= spec.k and membership_S(u, spec):
            counts[u] = multinomial(spec.k, u)
    return counts


def verify_s_set(k: int, M: int, threads: Optional[int] = None,
                 limit: int = MAX_SCAN_VECTORS) -> VerificationReport:
    """S-set prediction against cone+parity enumeration of the length-k SPC code

    The expanded B^(M) coefficients must match the prediction too.
    """
    start = time.time()
    spec = PwefSpec(M, k)
    predicted = predicted_type_counts(spec)
    observed = type_counts(enumerate_pseudocodewords(ParityCheckMatrix.spc(k), M, threads, limit), M)

    mismatches = []
    for u in sorted(set(predicted) | set(observed)):
        a, b = predicted.get(u, 0), observed.get(u, 0)
        if a != b:
            mismatches.append({"type": list(u), "s_set": a, "cone_parity": b})

    B = build_B(spec)
    for u in sorted(set(predicted) | set(B.terms)):
        if predicted.get(u, 0) != B.coeff(u):
            mismatches.append({"type": list(u), "s_set": predicted.get(u, 0), "pwef": B.coeff(u)})

    logger.info(f"s-set check k={k}, M={M}: {len(mismatches)} mismatches in {time.time() - start:.3f}s")
    return VerificationReport(
        instance={"code": f"SPC({k})", "k": k, "M": M},
        method_a="s-set",
        method_b="cone-parity",
        agree=not mismatches,
        mismatches=mismatches,
        details={"types": len(predicted)},
    )


def verify_cover(H: ParityCheckMatrix, M: int, threads: Optional[int] = None,
                 fix_identity: bool = False, limit: int = MAX_COVER_WORK) -> VerificationReport:
    """Projected M-cover codewords against cone+parity enumeration"""
    start = time.time()
    from_covers = enumerate_cover_codewords(H, M, threads, fix_identity, limit)
    from_cone = enumerate_pseudocodewords(H, M, threads)
    mismatches = (
        [{"z": list(z), "in": "cover"} for z in sorted(from_covers - from_cone)]
        + [{"z": list(z), "in": "cone-parity"} for z in sorted(from_cone - from_covers)]
    )
    logger.info(f"cover check M={M}: {len(mismatches)} mismatches in {time.time() - start:.3f}s")
    return VerificationReport(
        instance={"H": [list(row) for row in H.rows], "M": M, "fix_identity": fix_identity},
        method_a="cover",
        method_b="cone-parity",
        agree=not mismatches,
        mismatches=mismatches,
        details={"pseudocodewords": len(from_cone)},
    )


def verify_lemma(R: SparsePoly, xi: Sequence[Rational], ell_max: int) -> VerificationReport:
    """Exact coefficients of R^l against the saddle-point limit"""
    report = verify_lemma_asymptotics(R, xi, ell_max)
    mismatches = []
    if report.status == "ok" and not report.monotone:
        mismatches.append({"reason": "gap does not shrink", "gaps": {str(l): g for l, g in report.gaps.items()}})
    return VerificationReport(
        instance={"R": str(R), "xi": [str(v) for v in report.xi], "ell_max": ell_max},
        method_a="exact-coefficients",
        method_b="saddle-point",
        agree=not mismatches,
        mismatches=mismatches,
        details=report.to_dict(),
    )
