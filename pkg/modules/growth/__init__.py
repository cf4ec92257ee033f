"""
Growth Module - Growth-rate curves G_M(alpha) and the thresholds alpha*_M
"""

from .curves import GridFailure, GrowthConfig, GrowthCurve, grid_threshold, growth_rate, sweep
from .thresholds import (GoodnessBound, ThresholdResult, asymptotically_good_bound, threshold,
                         threshold_search)
from .export import curve_to_csv, curve_to_dict, curve_to_json, gnuplot_script, unit_scale

__all__ = [
    'GridFailure', 'GrowthConfig', 'GrowthCurve', 'grid_threshold', 'growth_rate', 'sweep',
    'GoodnessBound', 'ThresholdResult', 'asymptotically_good_bound', 'threshold', 'threshold_search',
    'curve_to_csv', 'curve_to_dict', 'curve_to_json', 'gnuplot_script', 'unit_scale'
]
