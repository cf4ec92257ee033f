"""
Thresholds - alpha*_M = inf{alpha > 0 : G_M(alpha) >= 0} by coarse scan and bisection
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from modules import NoThresholdError, PseudoweightError, SolverFailure
from modules.solver import EnsembleParams, SolverConfig, StationaryPoint
from .curves import GrowthConfig, GrowthCurve, first_upward_bracket, growth_rate, sweep

logger = logging.getLogger(__name__)

FOUND = "found"
NO_THRESHOLD = "no_threshold"
FAILED = "failed"


@dataclass
class ThresholdResult:
    """Outcome of a threshold search, including the scan it was bracketed from"""
    params: EnsembleParams
    status: str
    alpha_star: Optional[float] = None
    G_at_star: Optional[float] = None
    bracket: Optional[List[float]] = None
    later_crossings: List[float] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j": self.params.j,
            "k": self.params.k,
            "M": self.params.M,
            "status": self.status,
            "alpha_star": self.alpha_star,
            "G_at_star": self.G_at_star,
            "bracket": self.bracket,
            "later_crossings": self.later_crossings,
            "summary": self.summary,
            "reason": self.reason,
        }


def _scan_summary(curve: GrowthCurve) -> Dict[str, Any]:
    values = [p.G for p in curve.points]
    return {
        "scan_min": curve.metadata.get("alpha_min"),
        "scan_max": curve.metadata.get("alpha_max"),
        "points": len(curve.entries),
        "solved": len(values),
        "failed": len(curve.failures),
        "min_G": min(values),
        "max_G": max(values),
        "all_nonnegative": all(v >= 0 for v in values),
        "all_negative": all(v < 0 for v in values),
    }


def _crossings(curve: GrowthCurve) -> List[int]:
    """Indices i where entries i and i+1 are both solved and G changes sign between them"""
    entries = curve.entries
    found = []
    for i in range(len(entries) - 1):
        a, b = entries[i], entries[i + 1]
        if isinstance(a, StationaryPoint) and isinstance(b, StationaryPoint) and (a.G < 0) != (b.G < 0):
            found.append(i)
    return found


def _bisect(params: EnsembleParams, low: StationaryPoint, high: StationaryPoint,
            config: SolverConfig) -> StationaryPoint:
    """Shrink [low, high] with G(low) < 0 <= G(high) until |G| or the interval is small"""
    while high.alpha - low.alpha > config.tol_threshold:
        middle = 0.5 * (low.alpha + high.alpha)
        seed = low if abs(low.G) <= abs(high.G) else high
        point = growth_rate(params, middle, seed=seed, config=config)
        if abs(point.G) <= config.threshold_g_tol:
            return point
        if point.G < 0:
            low = point
        else:
            high = point
    return low if abs(low.G) <= abs(high.G) else high


def threshold_search(params: EnsembleParams, config: Optional[SolverConfig] = None,
                     growth_config: Optional[GrowthConfig] = None,
                     threads: Optional[int] = None) -> ThresholdResult:
    """Bracket the first upward sign change of G_M on the coarse scan, then bisect it"""
    config = config or SolverConfig()
    growth_config = growth_config or GrowthConfig()
    start_time = time.time()

    curve = sweep(params, growth_config.scan_min, growth_config.scan_max, growth_config.scan_points,
                  config, growth_config, threads)
    summary = _scan_summary(curve)
    crossing_alphas = [0.5 * (curve.entries[i].alpha + curve.entries[i + 1].alpha) for i in _crossings(curve)]

    index = first_upward_bracket(curve)
    if index is None:
        reason = "G >= 0 at every scanned point" if summary["all_nonnegative"] else \
            "G < 0 at every scanned point" if summary["all_negative"] else "no upward sign change"
        return ThresholdResult(params, NO_THRESHOLD, later_crossings=crossing_alphas,
                               summary=summary, reason=reason)
    if index == -1:
        return ThresholdResult(params, FAILED, later_crossings=crossing_alphas, summary=summary,
                               reason="the first sign change lies across failed grid points")

    low, high = curve.entries[index], curve.entries[index + 1]
    try:
        point = _bisect(params, low, high, config)
    except PseudoweightError as e:
        return ThresholdResult(params, FAILED, bracket=[low.alpha, high.alpha],
                               later_crossings=crossing_alphas, summary=summary, reason=str(e))

    first = 0.5 * (low.alpha + high.alpha)
    later = [a for a in crossing_alphas if a > first]
    logger.info(f"Threshold for {params}: alpha*={point.alpha:.10g} "
                f"(G={point.G:.3e}) in {time.time() - start_time:.2f}s")
    return ThresholdResult(params, FOUND, alpha_star=point.alpha, G_at_star=point.G,
                           bracket=[low.alpha, high.alpha], later_crossings=later, summary=summary)


def threshold(params: EnsembleParams, config: Optional[SolverConfig] = None,
              growth_config: Optional[GrowthConfig] = None,
              threads: Optional[int] = None) -> float:
    """alpha*_M, or NoThresholdError / SolverFailure when it cannot be bracketed"""
    result = threshold_search(params, config, growth_config, threads)
    if result.status == FOUND:
        return result.alpha_star
    if result.status == NO_THRESHOLD:
        raise NoThresholdError(f"no threshold for {params}: {result.reason}", summary=result.summary)
    raise SolverFailure(f"threshold search failed for {params}: {result.reason}")


@dataclass
class GoodnessBound:
    """Thresholds over several cover degrees and their minimum"""
    thresholds: Dict[int, ThresholdResult]

    @property
    def bound(self) -> Optional[float]:
        found = [r.alpha_star for r in self.thresholds.values() if r.status == FOUND]
        return min(found) if found else None

    @property
    def candidate(self) -> bool:
        """Every requested degree has a positive threshold"""
        return all(r.status == FOUND and r.alpha_star > 0 for r in self.thresholds.values())


def asymptotically_good_bound(j: int, k: int, degrees: Sequence[int],
                              config: Optional[SolverConfig] = None,
                              growth_config: Optional[GrowthConfig] = None,
                              threads: Optional[int] = None) -> GoodnessBound:
    """min over M of alpha*_M for a (j,k)-regular ensemble"""
    results = {}
    for M in degrees:
        results[M] = threshold_search(EnsembleParams(j, k, M), config, growth_config, threads)
    return GoodnessBound(results)
