"""
Single Cover - Closed-form growth rate of the weight distribution (M = 1)
"""

import logging
import math
from typing import Optional

import numpy as np
import scipy.optimize

from modules import DomainError, SolverFailure
from .inner import objective_value, tilted_moments
from .params import EnsembleParams, SolverConfig, StationaryPoint, check_alpha
from .stationary import stationary_residual

logger = logging.getLogger(__name__)

MAX_BRACKET_DOUBLINGS = 1100


def solve_M1(params: EnsembleParams, alpha: float, config: Optional[SolverConfig] = None) -> StationaryPoint:
    """Bisect alpha[(1+x)^k + (1-x)^k] = x[(1+x)^(k-1) - (1-x)^(k-1)] for x0, then evaluate G_1"""
    config = config or SolverConfig()
    if params.M != 1:
        raise DomainError(f"solve_M1 needs M = 1, got M = {params.M}")
    alpha = check_alpha(alpha, upper_inclusive=False)
    j, k = params.j, params.k
    if k % 2 and k * alpha >= k - 1:
        raise DomainError(f"alpha={alpha!r} exceeds the largest weight fraction (k-1)/k of an odd-length check")

    spec = params.pwef

    def excess(x: float) -> float:
        _, rho, _ = tilted_moments(spec, np.array([math.log(x)]))
        return float(rho[0]) - k * alpha

    low = 1e-12
    while excess(low) >= 0:
        low *= 1e-6
        if low < 1e-300:
            raise SolverFailure(f"could not bracket x0 from below at alpha={alpha!r}")
    high = 1.0
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if excess(high) > 0:
            break
        high *= 2.0
    else:
        raise SolverFailure(f"could not bracket x0 from above at alpha={alpha!r}", last_iterate=[high])

    x0 = scipy.optimize.bisect(excess, low, high, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)

    q = np.array([alpha])
    y = np.array([math.log(x0)])
    log_b, _, _ = tilted_moments(spec, y)
    # the Lagrange row is redundant at M = 1; solve it for lambda anyway
    lam = ((j - 1) * math.log(alpha / (1.0 - alpha)) - j * y[0]) / alpha
    residual = float(np.max(np.abs(stationary_residual(params, alpha, q, [x0], lam))))
    logger.debug(f"M=1 closed form at alpha={alpha:.6g}: x0={x0:.17g}, residual {residual:.2e}")

    return StationaryPoint(
        alpha=alpha,
        q=(alpha,),
        x0=(float(x0),),
        lam=lam,
        G=objective_value(params, q, y, log_b),
        residual=residual,
        method="closed-form",
    )
