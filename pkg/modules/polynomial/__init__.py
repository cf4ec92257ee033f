"""
Polynomial Module - Exact sparse multivariate polynomial arithmetic
"""

from .sparse_poly import (
    SparsePoly, Exponent, poly_add, poly_mul, poly_pow, coeff, partial_derivative
)

__all__ = ['SparsePoly', 'Exponent', 'poly_add', 'poly_mul', 'poly_pow', 'coeff', 'partial_derivative']
