"""
Oracle Module - Brute-force ground truth for pseudocodeword counts and coefficient asymptotics
"""

from .pseudocodewords import (ParityCheckMatrix, Pseudocodeword, PseudoweightVector, awgn_pseudoweight,
                              enumerate_codewords, enumerate_pseudocodewords, in_fundamental_cone,
                              is_pseudocodeword, type_counts, type_of)
from .cover_lifting import (CoverAssignment, cover_work, enumerate_cover_codewords, iter_assignments,
                            lift_parity_check)
from .lemma_check import LemmaReport, saddle_point, verify_lemma_asymptotics
from .reports import (VerificationReport, predicted_type_counts, verify_cover, verify_lemma,
                      verify_s_set)

__all__ = [
    'ParityCheckMatrix', 'Pseudocodeword', 'PseudoweightVector', 'awgn_pseudoweight',
    'enumerate_codewords', 'enumerate_pseudocodewords', 'in_fundamental_cone', 'is_pseudocodeword',
    'type_counts', 'type_of',
    'CoverAssignment', 'cover_work', 'enumerate_cover_codewords', 'iter_assignments', 'lift_parity_check',
    'LemmaReport', 'saddle_point', 'verify_lemma_asymptotics',
    'VerificationReport', 'predicted_type_counts', 'verify_cover', 'verify_lemma', 'verify_s_set'
]
