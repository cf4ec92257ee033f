"""
Stationary System - The Lagrange equations on every face of the type simplex, multi-start solves
and the unconstrained maximum

A face is a support S of 1..M with q_r = 0 and x0_r = 0 off S. Restricted to S the
system has 2|S|+1 equations; the full simplex is the face S = 1..M.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize
from scipy.special import softmax

from modules import PseudoweightError, SolverFailure
from .inner import check_type, f_of_q, grad_f, objective_value, solve_x0, tilted_moments
from .newton import damped_newton
from .params import (EnsembleParams, SolverConfig, StationaryPoint, alpha_of_q, check_alpha,
                     g_of_q, grad_g, type_support)

logger = logging.getLogger(__name__)

# Converged points closer than this in q are the same stationary point
DISTINCT_Q_TOL = 1e-7
VERTEX_START_SPREAD = 0.1

Support = Tuple[int, ...]


def faces(M: int) -> List[Support]:
    """Every nonempty 0-based support of 1..M, the full simplex first"""
    return [support for size in range(M, 0, -1)
            for support in itertools.combinations(range(M), size)]


def _q_from_s(s: np.ndarray) -> np.ndarray:
    return softmax(np.concatenate(([0.0], s)))[1:]


def _s_from_q(q: np.ndarray) -> np.ndarray:
    return np.log(q / (1.0 - q.sum()))


def _embed(M: int, support: Support, values: np.ndarray) -> np.ndarray:
    full = np.zeros(M)
    full[list(support)] = values
    return full


def _rows(params: EnsembleParams, alpha: float, y: np.ndarray, q: np.ndarray,
          s: np.ndarray, lam: float, support: Support) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    _, rho, _ = tilted_moments(params.pwef, y, support=support)
    q_full = _embed(params.M, support, q)
    inner = rho - params.k * q
    lagrange = (params.j - 1) * s - params.j * y - lam * grad_g(q_full, alpha)[list(support)]
    return inner, lagrange, q_full


def _residual(params: EnsembleParams, alpha: float, y: np.ndarray, q: np.ndarray,
              s: np.ndarray, lam: float, support: Support) -> np.ndarray:
    inner, lagrange, q_full = _rows(params, alpha, y, q, s, lam, support)
    # |g(q)| = sum r^2 q_r |alpha(q) - alpha| <= M^2 |alpha(q) - alpha|
    constraint = params.M ** 2 * (alpha_of_q(q_full) - alpha)
    return np.concatenate((inner, lagrange, [constraint]))


def stationary_residual(params: EnsembleParams, alpha: float, q: Sequence[float],
                        x0: Sequence[float], lam: float) -> np.ndarray:
    """The 2|S|+1 equations at (x0, q, lambda) on the support S of q

    Rows are x_r B_r/B - k q_r, then (j-1) log(q_r/(1-sum q)) - j log x0_r - lambda dg/dq_r,
    then g(q), each for r in S.
    """
    values = np.asarray(q, dtype=float)
    support = type_support(values)
    index = list(support)
    y = np.log(np.asarray(x0, dtype=float)[index])
    q_s = values[index]
    s = np.log(q_s / (1.0 - values.sum()))
    inner, lagrange, _ = _rows(params, alpha, y, q_s, s, lam, support)
    return np.concatenate((inner, lagrange, [g_of_q(values, alpha)]))


def _unpack(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    n = (z.size - 1) // 2
    return z[:n], z[n:2 * n], float(z[2 * n])


def _residual_z(params: EnsembleParams, alpha: float, z: np.ndarray, support: Support) -> np.ndarray:
    y, s, lam = _unpack(z)
    return _residual(params, alpha, y, _q_from_s(s), s, lam, support)


def _lambda_estimate(params: EnsembleParams, alpha: float, q_full: np.ndarray,
                     y: np.ndarray, support: Support) -> float:
    gradient = grad_g(q_full, alpha)[list(support)]
    q_s = q_full[list(support)]
    rhs = (params.j - 1) * np.log(q_s / (1.0 - q_full.sum())) - params.j * y
    return float(gradient @ rhs) / float(gradient @ gradient)


def _start_vector(params: EnsembleParams, alpha: float, q: np.ndarray, config: SolverConfig,
                  x0: Optional[Sequence[float]] = None, lam: Optional[float] = None) -> np.ndarray:
    support = type_support(q)
    index = list(support)
    x0 = solve_x0(params, q, config) if x0 is None else np.asarray(x0, dtype=float)
    y = np.log(x0[index])
    if lam is None:
        lam = _lambda_estimate(params, alpha, q, y, support)
    return np.concatenate((y, np.log(q[index] / (1.0 - q.sum())), [lam]))


def _point_from_vector(params: EnsembleParams, alpha: float, z: np.ndarray, residual: float,
                       method: str, support: Support) -> StationaryPoint:
    y, s, lam = _unpack(z)
    q = _q_from_s(s)
    log_b, _, _ = tilted_moments(params.pwef, y, support=support)
    return StationaryPoint(
        alpha=float(alpha),
        q=tuple(float(v) for v in _embed(params.M, support, q)),
        x0=tuple(float(v) for v in _embed(params.M, support, np.exp(y))),
        lam=lam,
        G=objective_value(params, q, y, log_b),
        residual=residual,
        method=method,
        metadata={"support": [r + 1 for r in support]},
    )


def _newton(params: EnsembleParams, alpha: float, z0: np.ndarray, config: SolverConfig,
            support: Optional[Support] = None, method: str = "full") -> Optional[StationaryPoint]:
    support = tuple(range(params.M)) if support is None else support
    result = damped_newton(lambda z: _residual_z(params, alpha, z, support), z0, config.tol_outer,
                           max_iterations=config.max_iterations,
                           max_halvings=config.max_halvings,
                           fd_step=config.fd_step,
                           step_cap=config.step_cap)
    if not result.converged:
        return None
    point = _point_from_vector(params, alpha, result.x, result.residual, method, support)
    q = np.asarray(point.q)[list(support)]
    x0 = np.asarray(point.x0)[list(support)]
    if np.any(x0 <= 0) or not np.all(np.isfinite(x0)):
        return None
    # a coordinate this small means the point sits on a lower face, which has its own solve
    if len(support) > 1 and float(q.min()) < config.q_floor:
        logger.debug(f"Rejecting point on support {[r + 1 for r in support]} with q={q.tolist()}")
        return None
    return point


def _seed_vector(params: EnsembleParams, seed: StationaryPoint) -> Tuple[np.ndarray, Support]:
    q = np.asarray(seed.q, dtype=float)
    support = type_support(q)
    index = list(support)
    y = np.log(np.asarray(seed.x0, dtype=float)[index])
    return np.concatenate((y, np.log(q[index] / (1.0 - q.sum())), [seed.lam])), support


def multistart_types(params: EnsembleParams, alpha: float, config: SolverConfig,
                     support: Optional[Support] = None) -> List[np.ndarray]:
    """Deterministic start types on the face of support, all lying on alpha(q) = alpha

    One start near each vertex of the face, then random directions:
    config.multistart of them on the full simplex and config.face_multistart on a
    lower face. Each direction d is scaled by alpha/alpha(d), which keeps it on the
    constraint because alpha(c d) = c alpha(d).
    """
    M = params.M
    support = tuple(range(M)) if support is None else tuple(support)
    n = len(support)
    directions = []
    for a in range(n):
        d = np.full(n, VERTEX_START_SPREAD / n)
        d[a] += 1.0 - VERTEX_START_SPREAD
        directions.append(d)
    if n > 1:
        count = config.multistart if n == M else config.face_multistart
        rng = np.random.default_rng([config.seed, n, *support])
        directions.extend(rng.dirichlet(np.ones(n)) for _ in range(count))

    starts = []
    for d in directions:
        q = _embed(M, support, d * (alpha / alpha_of_q(_embed(M, support, d))))
        try:
            check_type(params, q)
        except PseudoweightError:
            continue
        if not any(np.max(np.abs(q - other)) <= DISTINCT_Q_TOL for other in starts):
            starts.append(q)
    return starts


def _distinct(points: List[StationaryPoint]) -> List[StationaryPoint]:
    unique: List[StationaryPoint] = []
    for point in points:
        q = np.asarray(point.q)
        if not any(np.max(np.abs(q - np.asarray(other.q))) <= DISTINCT_Q_TOL for other in unique):
            unique.append(point)
    return sorted(unique, key=lambda p: -p.G)


def _solve_faces(params: EnsembleParams, alpha: float, config: SolverConfig,
                 seed: Optional[StationaryPoint] = None,
                 skip_seeded_face: bool = False) -> Tuple[List[StationaryPoint], List[list]]:
    converged = []
    attempted = []
    seeded = None
    if seed is not None:
        attempted.append(list(seed.q))
        z0, seeded = _seed_vector(params, seed)
        point = _newton(params, alpha, z0, config, seeded)
        if point is not None:
            converged.append(point)
        else:
            logger.debug(f"Continuation from alpha={seed.alpha:.6g} stalled at alpha={alpha:.6g}")
            seeded = None

    for support in faces(params.M):
        if skip_seeded_face and support == seeded:
            continue
        for q in multistart_types(params, alpha, config, support):
            attempted.append(q.tolist())
            try:
                z0 = _start_vector(params, alpha, q, config)
            except PseudoweightError as e:
                logger.debug(f"Skipping start {q.tolist()}: {e}")
                continue
            point = _newton(params, alpha, z0, config, support)
            if point is not None:
                converged.append(point)
    return _distinct(converged), attempted


def solve_all(params: EnsembleParams, alpha: float, config: Optional[SolverConfig] = None,
              seed: Optional[StationaryPoint] = None) -> List[StationaryPoint]:
    """Every distinct stationary point reached from the start schedule on every face, best G first"""
    config = config or SolverConfig()
    alpha = check_alpha(alpha)
    points, _ = _solve_faces(params, alpha, config, seed)
    return points


def tied_points(points: Sequence[StationaryPoint], tol: float = 1e-9) -> List[StationaryPoint]:
    """Points whose G is within tol of the best one"""
    if not points:
        return []
    best = max(p.G for p in points)
    return [p for p in points if p.G >= best - tol]


def solve_full(params: EnsembleParams, alpha: float, seed: Optional[StationaryPoint] = None,
               config: Optional[SolverConfig] = None) -> StationaryPoint:
    """Largest f over the stationary points of every face at alpha

    With a seed, the seed's own face is solved by continuation from it and the
    remaining faces by the multi-start schedule; metadata["support"] names the
    face of the returned point.
    """
    config = config or SolverConfig()
    alpha = check_alpha(alpha)

    points, attempted = _solve_faces(params, alpha, config, seed, skip_seeded_face=True)
    if not points:
        raise SolverFailure(f"no start converged for {params} at alpha={alpha!r}", starts=attempted)
    if len(points) > 1:
        logger.debug(f"{len(points)} stationary points at alpha={alpha:.6g}, G range "
                     f"[{points[-1].G:.6g}, {points[0].G:.6g}]")
    return points[0]


def unconstrained_maximum(params: EnsembleParams, config: Optional[SolverConfig] = None) -> StationaryPoint:
    """Maximiser of f over the open simplex, read back as a stationary point at its own alpha"""
    config = config or SolverConfig()
    M = params.M
    warm = {"x0": None}

    def negative_f(s):
        q = _q_from_s(s)
        try:
            x0 = solve_x0(params, q, config, start=warm["x0"])
        except PseudoweightError:
            return np.inf, np.zeros_like(s)
        warm["x0"] = x0
        value = f_of_q(params, q, x0=x0)
        gq = grad_f(params, q, x0=x0)
        # dq_r/ds_t = q_r (delta_rt - q_t)
        gs = q * gq - q * float(q @ gq)
        return -value, -gs

    s0 = np.zeros(M)
    result = scipy.optimize.minimize(negative_f, s0, jac=True, method="BFGS",
                                     options={"gtol": 1e-10, "maxiter": 500})
    if not np.isfinite(result.fun):
        raise SolverFailure(f"unconstrained maximisation of f failed for {params}: {result.message}",
                            last_iterate=_q_from_s(result.x).tolist())

    q_hat = _q_from_s(result.x)
    alpha_hat = alpha_of_q(q_hat)
    x0 = solve_x0(params, q_hat, config, start=warm["x0"])
    z0 = np.concatenate((np.log(x0), result.x, [0.0]))
    point = _newton(params, alpha_hat, z0, config, method="unconstrained")
    if point is None:
        logger.warning(f"Polishing the unconstrained maximum at alpha={alpha_hat:.6g} did not converge")
        residual = float(np.max(np.abs(stationary_residual(params, alpha_hat, q_hat, x0, 0.0))))
        point = StationaryPoint(alpha_hat, tuple(q_hat.tolist()), tuple(x0.tolist()), 0.0,
                                -float(result.fun), residual, "unconstrained")
    logger.info(f"Unconstrained maximum of f for {params}: G={point.G:.10g} at alpha={point.alpha:.10g}")
    return point


@dataclass
class LagrangeCheck:
    """Finite-difference gradient of f against lambda * grad g"""
    fd_gradient: np.ndarray
    expected: np.ndarray
    relative_error: float
    ok: bool


def lagrange_gradient_check(params: EnsembleParams, point: StationaryPoint,
                            config: Optional[SolverConfig] = None,
                            step: float = 1e-4, rtol: float = 1e-5) -> LagrangeCheck:
    """Compare central differences of f_of_q with lambda * grad g at a returned point

    Each coordinate of the point's support is perturbed by step * q_r, so a face
    point is checked within its face; the error is measured against the larger of
    the two gradients or 1.
    """
    config = config or SolverConfig()
    q = np.asarray(point.q, dtype=float)
    support = list(type_support(q))
    fd = np.zeros(len(support))
    for a, r in enumerate(support):
        h = step * q[r]
        up, down = q.copy(), q.copy()
        up[r] += h
        down[r] -= h
        f_up = f_of_q(params, up, x0=solve_x0(params, up, config, start=point.x0))
        f_down = f_of_q(params, down, x0=solve_x0(params, down, config, start=point.x0))
        fd[a] = (f_up - f_down) / (2.0 * h)

    expected = point.lam * grad_g(q, point.alpha)[support]
    scale = max(float(np.max(np.abs(expected))), float(np.max(np.abs(fd))), 1.0)
    error = float(np.max(np.abs(fd - expected))) / scale
    return LagrangeCheck(fd, expected, error, error <= rtol)
