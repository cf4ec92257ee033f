"""
Solver Module - Stationarity system of the degree-M pseudoweight growth rate
"""

from .newton import NewtonResult, convex_newton, damped_newton, fd_jacobian
from .params import (EnsembleParams, SolverConfig, StationaryPoint, alpha_of_q, entropy_h,
                     g_of_q, grad_g)
from .inner import f_of_q, grad_f, solve_x0, tilted_moments
from .stationary import (LagrangeCheck, faces, lagrange_gradient_check, multistart_types, solve_all,
                         solve_full, stationary_residual, tied_points, unconstrained_maximum)
from .single_cover import solve_M1

__all__ = [
    'NewtonResult', 'convex_newton', 'damped_newton', 'fd_jacobian',
    'EnsembleParams', 'SolverConfig', 'StationaryPoint', 'alpha_of_q', 'entropy_h', 'g_of_q', 'grad_g',
    'f_of_q', 'grad_f', 'solve_x0', 'tilted_moments',
    'LagrangeCheck', 'faces', 'lagrange_gradient_check', 'multistart_types', 'solve_all', 'solve_full',
    'stationary_residual', 'tied_points', 'unconstrained_maximum',
    'solve_M1'
]
