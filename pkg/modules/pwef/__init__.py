"""
PWEF Module - Pseudoweight enumerating function of the single parity-check code
"""

from .spc_enumerator import (
    PwefSpec, multinomial, build_P, build_Q, build_T, build_B, membership_S
)
from .evaluation import SignedLogValue, eval_B, eval_dB, eval_d2B, support_contains

__all__ = [
    'PwefSpec', 'multinomial', 'build_P', 'build_Q', 'build_T', 'build_B', 'membership_S',
    'SignedLogValue', 'eval_B', 'eval_dB', 'eval_d2B', 'support_contains'
]
