"""
Inner Solve - x0(q) from x_r dB/dx_r = k q_r B and the objective f(q)
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from modules import DomainError, SolverFailure
from modules.pwef import PwefSpec, eval_B, eval_dB, eval_d2B, support_contains
from .newton import convex_newton
from .params import EnsembleParams, SolverConfig, entropy_h, type_support

logger = logging.getLogger(__name__)


def tilted_moments(spec: PwefSpec, y: np.ndarray, hessian: bool = False,
                   support: Optional[Sequence[int]] = None) -> Tuple[float, np.ndarray, Optional[np.ndarray]]:
    """log B, rho_r = x_r B_r / B and optionally d(rho)/dy at x = exp(y)

    rho is the mean exponent vector of B's terms weighted by x, so it is the
    gradient of log B(exp(y)) and the Hessian below is its covariance.

    support lists the 0-based coordinates y stands for; every other x_r is 0 and
    rho and the Hessian come back restricted to the support.
    """
    M = spec.M
    index = np.arange(M) if support is None else np.asarray(support, dtype=int)
    face = index.size < M
    x = np.zeros(M)
    x[index] = np.exp(y)
    B = eval_B(spec, x, allow_zero=face)
    if B.sign <= 0:
        raise DomainError(f"B^({M}) is not positive at x={x.tolist()}")

    rho = np.zeros(index.size)
    for a, r in enumerate(index):
        d = eval_dB(spec, x, int(r) + 1, allow_zero=face)
        if d.sign:
            rho[a] = d.sign * math.exp(y[a] + d.log_magnitude - B.log_magnitude)

    if not hessian:
        return B.log_magnitude, rho, None

    H = np.diag(rho) - np.outer(rho, rho)
    for a, r in enumerate(index):
        for b in range(a, index.size):
            d2 = eval_d2B(spec, x, int(r) + 1, int(index[b]) + 1, allow_zero=face)
            if not d2.sign:
                continue
            value = d2.sign * math.exp(y[a] + y[b] + d2.log_magnitude - B.log_magnitude)
            H[a, b] += value
            if b != a:
                H[b, a] += value
    return B.log_magnitude, rho, H


def check_type(params: EnsembleParams, q: Sequence[float]) -> np.ndarray:
    """Validate a type vector; zero entries are allowed and put q on a face of the simplex"""
    values = np.asarray(q, dtype=float)
    if values.shape != (params.M,):
        raise DomainError(f"type vector must have {params.M} entries, got shape {values.shape}")
    if not np.all(np.isfinite(values)) or np.any(values < 0) or not np.any(values > 0) or values.sum() >= 1:
        raise DomainError(f"type vector needs q_r >= 0, some q_r > 0 and sum q < 1, got {values.tolist()}")
    if not support_contains(params.pwef, params.k * values, allow_zero=True):
        raise DomainError(f"k*q = {(params.k * values).tolist()} lies outside the support of B^({params.M})")
    return values


def solve_x0(params: EnsembleParams, q: Sequence[float],
             config: Optional[SolverConfig] = None,
             start: Optional[Sequence[float]] = None) -> np.ndarray:
    """Unique x0 with x_r dB/dx_r = k q_r B, via Newton in log x

    x0_r is positive where q_r is and 0 elsewhere.
    """
    config = config or SolverConfig()
    values = check_type(params, q)
    spec = params.pwef
    support = type_support(values)
    index = np.asarray(support, dtype=int)
    target = params.k * values[index]

    def objective(y):
        log_b, rho, hess = tilted_moments(spec, y, hessian=True, support=support)
        return log_b - float(target @ y), rho - target, hess

    def residual_norm(y, grad):
        return float(np.max(np.abs(grad / target)))

    starts = []
    if start is not None:
        warm = np.asarray(start, dtype=float)
        if warm.shape == (params.M,) and np.all(warm[index] > 0):
            starts.append(np.log(warm[index]))
    starts.append(np.zeros(index.size))
    starts.append(np.log(values[index] / (1.0 - values.sum())))

    def full(y):
        x = np.zeros(params.M)
        x[index] = np.exp(y)
        return x

    best = None
    for y0 in starts:
        result = convex_newton(objective, y0, residual_norm, config.tol_inner,
                               max_iterations=config.max_iterations,
                               max_halvings=config.max_halvings,
                               step_cap=config.step_cap)
        if result.converged:
            return full(result.x)
        if best is None or result.residual < best.residual:
            best = result
        logger.debug(f"Inner solve from {full(y0).tolist()} stopped at residual {result.residual:.3e}")

    raise SolverFailure(
        f"inner solve for q={values.tolist()} did not converge (best residual {best.residual:.3e})",
        last_iterate=full(best.x).tolist(),
        starts=[full(y0).tolist() for y0 in starts],
    )


def objective_value(params: EnsembleParams, q: np.ndarray, y: np.ndarray, log_b: float) -> float:
    """f from log B and y = log x0, both taken over the support of q only"""
    j, k = params.j, params.k
    return j / k * log_b - j * float(q @ y) - (j - 1) * entropy_h(q)


def f_of_q(params: EnsembleParams, q: Sequence[float],
           config: Optional[SolverConfig] = None,
           x0: Optional[Sequence[float]] = None) -> float:
    """f(q) = (j/k) log B(x0) - j sum q_r log x0_r - (j-1) h(q), with 0 log 0 = 0"""
    values = check_type(params, q)
    point = np.asarray(x0, dtype=float) if x0 is not None else solve_x0(params, values, config)
    index = np.asarray(type_support(values), dtype=int)
    log_b = eval_B(params.pwef, point, allow_zero=True).log_magnitude
    return objective_value(params, values[index], np.log(point[index]), log_b)


def grad_f(params: EnsembleParams, q: Sequence[float],
           config: Optional[SolverConfig] = None,
           x0: Optional[Sequence[float]] = None) -> np.ndarray:
    """Gradient of f; x0's own dependence on q drops out at the inner solution"""
    values = check_type(params, q)
    if np.any(values == 0):
        raise DomainError(f"f is not differentiable on the boundary of the simplex, got q={values.tolist()}")
    point = np.asarray(x0, dtype=float) if x0 is not None else solve_x0(params, values, config)
    return -params.j * np.log(point) + (params.j - 1) * np.log(values / (1.0 - values.sum()))
