"""
Newton Engines - Damped Newton iterations shared by the inner, full and lemma solves
"""

import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
import scipy.linalg

from modules import PseudoweightError

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4


@dataclass
class NewtonResult:
    """Outcome of a Newton run"""
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool


def _solve_linear(matrix: np.ndarray, rhs: np.ndarray, symmetric: bool = False) -> np.ndarray:
    try:
        step = scipy.linalg.solve(matrix, rhs, assume_a='sym' if symmetric else 'gen')
        if np.all(np.isfinite(step)):
            return step
    except (scipy.linalg.LinAlgError, ValueError):
        pass
    step, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
    return step


def _cap(step: np.ndarray, step_cap: float) -> np.ndarray:
    largest = float(np.max(np.abs(step))) if step.size else 0.0
    if largest > step_cap:
        return step * (step_cap / largest)
    return step


def convex_newton(objective: Callable[[np.ndarray], Tuple[float, np.ndarray, np.ndarray]],
                  y0: np.ndarray,
                  residual_norm: Callable[[np.ndarray, np.ndarray], float],
                  tol: float,
                  max_iterations: int = 60,
                  max_halvings: int = 12,
                  step_cap: float = 4.0) -> NewtonResult:
    """Minimise a smooth convex function given (value, gradient, Hessian)

    Steps are backtracked until the Armijo condition holds or the residual drops;
    the second test keeps progress going once the objective is flat to rounding.
    """
    y = np.array(y0, dtype=float)
    value, grad, hess = objective(y)
    residual = residual_norm(y, grad)

    for iteration in range(max_iterations + 1):
        if residual <= tol:
            return NewtonResult(y, residual, iteration, True)
        if iteration == max_iterations:
            break

        step = _solve_linear(hess, -grad, symmetric=True)
        slope = float(grad @ step)
        if not np.all(np.isfinite(step)) or slope >= 0:
            step, slope = -grad, -float(grad @ grad)
        step = _cap(step, step_cap)
        slope = float(grad @ step)

        t = 1.0
        for _ in range(max_halvings + 1):
            candidate = y + t * step
            try:
                new_value, new_grad, new_hess = objective(candidate)
                new_residual = residual_norm(candidate, new_grad)
            except (PseudoweightError, FloatingPointError, OverflowError, ValueError):
                t *= 0.5
                continue
            if np.isfinite(new_value) and (new_value <= value + ARMIJO_C * t * slope or new_residual < residual):
                y, value, grad, hess, residual = candidate, new_value, new_grad, new_hess, new_residual
                break
            t *= 0.5
        else:
            logger.debug(f"Line search stalled at iteration {iteration}, residual {residual:.3e}")
            return NewtonResult(y, residual, iteration, False)

    return NewtonResult(y, residual, max_iterations, False)


def fd_jacobian(residual: Callable[[np.ndarray], np.ndarray], z: np.ndarray, step: float) -> np.ndarray:
    """Central finite-difference Jacobian"""
    columns = []
    for i in range(z.size):
        offset = np.zeros_like(z)
        offset[i] = step
        columns.append((residual(z + offset) - residual(z - offset)) / (2.0 * step))
    return np.column_stack(columns)


def damped_newton(residual: Callable[[np.ndarray], np.ndarray],
                  z0: np.ndarray,
                  tol: float,
                  max_iterations: int = 60,
                  max_halvings: int = 12,
                  fd_step: float = 1e-6,
                  step_cap: float = 4.0) -> NewtonResult:
    """Solve residual(z) = 0 with an FD Jacobian and Armijo backtracking on |F|^2/2"""
    z = np.array(z0, dtype=float)
    try:
        F = residual(z)
    except (PseudoweightError, FloatingPointError, OverflowError, ValueError) as e:
        logger.debug(f"Residual undefined at the start point: {e}")
        return NewtonResult(z, np.inf, 0, False)
    if not np.all(np.isfinite(F)):
        return NewtonResult(z, np.inf, 0, False)
    norm = float(np.max(np.abs(F)))

    for iteration in range(max_iterations + 1):
        if norm <= tol:
            return NewtonResult(z, norm, iteration, True)
        if iteration == max_iterations:
            break

        try:
            J = fd_jacobian(residual, z, fd_step)
        except (PseudoweightError, FloatingPointError, OverflowError, ValueError) as e:
            logger.debug(f"Jacobian undefined at iteration {iteration}: {e}")
            return NewtonResult(z, norm, iteration, False)
        step = _cap(_solve_linear(J, -F), step_cap)

        merit = 0.5 * float(F @ F)
        t = 1.0
        for _ in range(max_halvings + 1):
            candidate = z + t * step
            try:
                F_new = residual(candidate)
            except (PseudoweightError, FloatingPointError, OverflowError, ValueError):
                t *= 0.5
                continue
            if np.all(np.isfinite(F_new)) and 0.5 * float(F_new @ F_new) <= (1.0 - 2.0 * ARMIJO_C * t) * merit:
                z, F = candidate, F_new
                norm = float(np.max(np.abs(F)))
                break
            t *= 0.5
        else:
            logger.debug(f"Line search stalled at iteration {iteration}, residual {norm:.3e}")
            return NewtonResult(z, norm, iteration, False)

    return NewtonResult(z, norm, max_iterations, False)
