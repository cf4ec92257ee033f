"""
Growth Curves - G_M(alpha) over an alpha grid with continuation-seeded solves
"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Union

import numpy as np

from modules import DomainError, PseudoweightError, SweepError
from modules.solver import (EnsembleParams, SolverConfig, StationaryPoint, solve_M1, solve_full,
                            unconstrained_maximum)

logger = logging.getLogger(__name__)


@dataclass
class GrowthConfig:
    """Grid and threading settings for sweeps and threshold scans"""
    scan_min: float = 1e-3
    scan_max: float = 0.99
    scan_points: int = 200
    seed_stride: int = 4
    threads: Optional[int] = None

    @classmethod
    def from_dict(cls, values: Optional[Dict[str, Any]]) -> "GrowthConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in (values or {}).items() if key in known})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class GridFailure:
    """A grid point whose solve did not converge"""
    alpha: float
    reason: str


GridEntry = Union[StationaryPoint, GridFailure]


@dataclass
class GrowthCurve:
    """Solved grid in increasing alpha, failures kept in place"""
    params: EnsembleParams
    entries: List[GridEntry]
    alpha_star: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def points(self) -> List[StationaryPoint]:
        return [e for e in self.entries if isinstance(e, StationaryPoint)]

    @property
    def failures(self) -> List[GridFailure]:
        return [e for e in self.entries if isinstance(e, GridFailure)]

    @property
    def complete(self) -> bool:
        return not self.failures

    def maximum(self) -> StationaryPoint:
        return max(self.points, key=lambda p: p.G)


def first_upward_bracket(curve: GrowthCurve) -> Optional[int]:
    """Index of the first solved negative point whose right neighbour is solved and nonnegative

    Returns -1 when the first nonnegative solved point is separated from the last
    negative one by failed grid points.
    """
    last_negative: Optional[int] = None
    for i, entry in enumerate(curve.entries):
        if not isinstance(entry, StationaryPoint):
            continue
        if entry.G < 0:
            last_negative = i
            continue
        if last_negative is None:
            continue
        return last_negative if last_negative == i - 1 else -1
    return None


def grid_threshold(curve: GrowthCurve) -> Optional[float]:
    """First upward zero of G on the grid, linear between the bracketing points"""
    index = first_upward_bracket(curve)
    if index is None or index < 0:
        return None
    low, high = curve.entries[index], curve.entries[index + 1]
    return low.alpha + (high.alpha - low.alpha) * (-low.G) / (high.G - low.G)


def growth_rate(params: EnsembleParams, alpha: float, seed: Optional[StationaryPoint] = None,
                config: Optional[SolverConfig] = None) -> StationaryPoint:
    """G_M(alpha) in nats, closed form at M = 1"""
    if params.M == 1:
        return solve_M1(params, alpha, config)
    return solve_full(params, alpha, seed=seed, config=config)


def _resolve_threads(threads: Optional[int]) -> int:
    return max(1, threads or os.cpu_count() or 1)


def _solve_entry(params: EnsembleParams, alpha: float, seed: Optional[StationaryPoint],
                 config: SolverConfig) -> GridEntry:
    try:
        return growth_rate(params, alpha, seed=seed, config=config)
    except PseudoweightError as e:
        logger.warning(f"Grid point alpha={alpha:.10g} failed for {params}: {e}")
        return GridFailure(alpha, str(e))


def _prepass_order(anchor_index: int, indices: List[int]) -> List[int]:
    """Pre-pass indices walked outward from the one nearest the anchor"""
    start = min(range(len(indices)), key=lambda i: (abs(indices[i] - anchor_index), i))
    order = [indices[start]]
    left, right = start - 1, start + 1
    while left >= 0 or right < len(indices):
        if right < len(indices):
            order.append(indices[right])
            right += 1
        if left >= 0:
            order.append(indices[left])
            left -= 1
    return order


def sweep(params: EnsembleParams, alpha_min: float, alpha_max: float, steps: int,
          config: Optional[SolverConfig] = None,
          growth_config: Optional[GrowthConfig] = None,
          threads: Optional[int] = None) -> GrowthCurve:
    """Solve G_M on a uniform grid of `steps` points in [alpha_min, alpha_max]

    For M >= 2 a serial pre-pass walks every seed_stride-th grid point outward
    from the unconstrained maximiser, each solve seeded by the previous one; the
    remaining points are then solved in parallel from their nearest pre-pass
    neighbour, so the result does not depend on completion order.
    """
    config = config or SolverConfig()
    growth_config = growth_config or GrowthConfig()
    if not isinstance(steps, int) or steps < 2:
        raise DomainError(f"a sweep needs at least 2 steps, got {steps!r}")
    if not 0 < alpha_min < alpha_max <= 1:
        raise DomainError(f"a sweep needs 0 < alpha_min < alpha_max <= 1, got [{alpha_min!r}, {alpha_max!r}]")

    start_time = time.time()
    alphas = [float(a) for a in np.linspace(alpha_min, alpha_max, steps)]
    workers = _resolve_threads(threads if threads is not None else growth_config.threads)
    entries: List[Optional[GridEntry]] = [None] * steps
    metadata: Dict[str, Any] = {
        "solver": config.to_dict(),
        "alpha_min": alpha_min,
        "alpha_max": alpha_max,
        "steps": steps,
    }

    if params.M == 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            entries = list(executor.map(lambda a: _solve_entry(params, a, None, config), alphas))
    else:
        try:
            anchor: Optional[StationaryPoint] = unconstrained_maximum(params, config)
        except PseudoweightError as e:
            logger.warning(f"No unconstrained maximum for {params} ({e}); seeding from multi-start")
            anchor = None
        if anchor is not None:
            metadata["alpha_hat"] = anchor.alpha
            metadata["unconstrained_G"] = anchor.G
            anchor_index = int(np.argmin([abs(a - anchor.alpha) for a in alphas]))
        else:
            anchor_index = steps // 2

        stride = max(1, growth_config.seed_stride)
        prepass = sorted(set(range(0, steps, stride)) | {steps - 1})
        order = _prepass_order(anchor_index, prepass)
        solved: Dict[int, StationaryPoint] = {}
        for index in order:
            neighbours = [i for i in solved if abs(i - index) <= stride]
            seed = solved[min(neighbours, key=lambda i: (abs(i - index), i))] if neighbours else anchor
            entry = _solve_entry(params, alphas[index], seed, config)
            entries[index] = entry
            if isinstance(entry, StationaryPoint):
                solved[index] = entry

        def fill(index: int) -> GridEntry:
            seed = None
            if solved:
                seed = solved[min(solved, key=lambda i: (abs(i - index), i))]
            return _solve_entry(params, alphas[index], seed, config)

        remaining = [i for i in range(steps) if entries[i] is None]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for index, entry in zip(remaining, executor.map(fill, remaining)):
                entries[index] = entry

    curve = GrowthCurve(params, list(entries), metadata=metadata)
    if not curve.points:
        raise SweepError(f"every grid point failed for {params} on [{alpha_min}, {alpha_max}]")
    curve.alpha_star = grid_threshold(curve)
    if curve.failures:
        logger.warning(f"{len(curve.failures)} of {steps} grid points failed for {params}")
    logger.info(f"Sweep of {steps} points for {params} finished in {time.time() - start_time:.2f}s")
    return curve
