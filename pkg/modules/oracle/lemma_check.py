"""
Lemma Check - Exact coefficient growth of R^l against the saddle-point limit
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

import numpy as np
from scipy.special import logsumexp, softmax

from modules import DomainError, SolverFailure
from modules.polynomial import SparsePoly
from modules.solver import convex_newton

logger = logging.getLogger(__name__)

Rational = Union[int, str, Fraction]


@dataclass
class LemmaReport:
    """Finite-l values (1/l) log Coeff[R^l, x^(xi l)] next to the limit log R(x0) - sum xi log x0"""
    polynomial: str
    xi: List[Fraction]
    ell_max: int
    status: str
    x0: List[float] = field(default_factory=list)
    limit: float = math.nan
    values: Dict[int, float] = field(default_factory=dict)
    gaps: Dict[int, float] = field(default_factory=dict)
    skipped: List[int] = field(default_factory=list)
    monotone: bool = True

    @property
    def final_gap(self) -> float:
        if not self.gaps:
            return math.nan
        return self.gaps[max(self.gaps)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "polynomial": self.polynomial,
            "xi": [str(v) for v in self.xi],
            "ell_max": self.ell_max,
            "status": self.status,
            "x0": self.x0,
            "limit": self.limit,
            "values": {str(ell): v for ell, v in self.values.items()},
            "gaps": {str(ell): v for ell, v in self.gaps.items()},
            "skipped": self.skipped,
            "monotone": self.monotone,
            "final_gap": self.final_gap,
        }


def _parse_xi(xi: Sequence[Rational], M: int) -> List[Fraction]:
    if len(xi) != M:
        raise DomainError(f"xi has {len(xi)} entries for a polynomial in {M} variables")
    try:
        values = [Fraction(v) for v in xi]
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"xi entries must be rationals: {e}") from e
    if any(v <= 0 for v in values):
        raise DomainError(f"xi entries must be positive, got {[str(v) for v in values]}")
    return values


def saddle_point(R: SparsePoly, xi: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    """Positive x0 with x_r dR/dx_r = xi_r R, by Newton on log R(e^y) - xi.y"""
    exponents = np.array([e for e, _ in R.items()], dtype=float)
    log_coefficients = np.array([math.log(c) for _, c in R.items()])
    target = np.asarray(xi, dtype=float)

    def objective(y):
        log_terms = log_coefficients + exponents @ y
        weights = softmax(log_terms)
        mean = weights @ exponents
        centered = exponents - mean
        covariance = (centered * weights[:, np.newaxis]).T @ centered
        return float(logsumexp(log_terms) - target @ y), mean - target, covariance

    def residual_norm(y, grad):
        return float(np.max(np.abs(grad / target)))

    result = convex_newton(objective, np.zeros(R.M), residual_norm, tol, max_iterations=200)
    if not result.converged:
        raise SolverFailure(f"no saddle point for xi={list(target)} (residual {result.residual:.3e}); "
                            f"xi must lie inside the Newton polytope of R",
                            last_iterate=np.exp(result.x).tolist())
    return np.exp(result.x)


def verify_lemma_asymptotics(R: SparsePoly, xi: Sequence[Rational], ell_max: int,
                             wiggle: float = 1.0) -> LemmaReport:
    """Track (1/l) log Coeff[R^l, x^(xi l)] along every l up to ell_max with xi l integral

    Gaps may grow between consecutive l by at most wiggle * log(l)/l before the
    sequence counts as non-monotone.
    """
    if R.is_zero() or any(c < 0 for _, c in R.items()):
        raise DomainError("R must be a nonzero polynomial with nonnegative coefficients")
    ratios = _parse_xi(xi, R.M)
    if not isinstance(ell_max, int) or ell_max < 1:
        raise DomainError(f"ell_max must be a positive integer, got {ell_max!r}")

    step = math.lcm(*(v.denominator for v in ratios))
    ells = list(range(step, ell_max + 1, step))
    if not ells:
        raise DomainError(f"ell_max={ell_max} is below the smallest l={step} making xi*l integral")

    report = LemmaReport(polynomial=str(R), xi=ratios, ell_max=ell_max, status="ok")
    cap = [int(v * ells[-1]) for v in ratios]
    R_step = R.power(step, cap=cap)
    power = SparsePoly.one(R.M)
    for ell in ells:
        power = power.multiply(R_step, cap=cap)
        c = power.coeff(tuple(int(v * ell) for v in ratios))
        if c == 0:
            report.skipped.append(ell)
            continue
        report.values[ell] = math.log(c) / ell

    if not report.values:
        report.status = "empty"
        logger.info(f"All coefficients of {R}^l at xi*l vanish for l <= {ell_max}")
        return report

    x0 = saddle_point(R, [float(v) for v in ratios])
    report.x0 = x0.tolist()
    log_terms = [math.log(c) + sum(e * math.log(x) for e, x in zip(exponent, x0)) for exponent, c in R.items()]
    report.limit = float(logsumexp(log_terms)) - sum(float(v) * math.log(x) for v, x in zip(ratios, x0))

    report.gaps = {ell: report.limit - value for ell, value in report.values.items()}
    evaluated = sorted(report.gaps)
    report.monotone = all(
        report.gaps[b] <= report.gaps[a] + wiggle * math.log(a) / a
        for a, b in zip(evaluated, evaluated[1:])
    )
    return report
