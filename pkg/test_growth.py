#!/usr/bin/env python3
"""
Test Growth - sweeps, threshold bisection and curve export
"""

import csv
import io
import json
import math
import sys
from pathlib import Path

import pytest

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from modules import DomainError, NoThresholdError, SweepError
from modules.growth import (GridFailure, GrowthConfig, asymptotically_good_bound, curve_to_csv, curve_to_dict,
                            curve_to_json, gnuplot_script, grid_threshold, growth_rate, sweep, threshold,
                            threshold_search, unit_scale)
from modules.growth.export import csv_header
from modules.growth.thresholds import FOUND, NO_THRESHOLD
from modules.solver import EnsembleParams, solve_M1, unconstrained_maximum

GALLAGER_36 = 0.0227


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="module")
def curve_36():
    return sweep(EnsembleParams(3, 6, 1), 0.01, 0.99, 99, threads=2)


def test_growth_config_from_dict():
    config = GrowthConfig.from_dict({"scan_points": 50, "other": 1})
    assert config.scan_points == 50
    assert config.to_dict()["scan_min"] == 1e-3


def test_growth_rate_uses_closed_form_at_degree_one():
    point = growth_rate(EnsembleParams(3, 6, 1), 0.5)
    assert point.method == "closed-form"
    assert point.G == pytest.approx(0.5 * math.log(2.0), abs=1e-12)


def test_sweep_validation():
    params = EnsembleParams(3, 6, 1)
    with pytest.raises(DomainError):
        sweep(params, 0.1, 0.5, 1)
    with pytest.raises(DomainError):
        sweep(params, 0.5, 0.1, 10)
    with pytest.raises(DomainError):
        sweep(params, 0.0, 0.5, 10)


def test_single_cover_sweep(curve_36):
    assert curve_36.complete
    assert len(curve_36.entries) == 99
    alphas = [p.alpha for p in curve_36.points]
    assert alphas == sorted(alphas)
    assert alphas[0] == pytest.approx(0.01) and alphas[-1] == pytest.approx(0.99)

    signs = [p.G >= 0 for p in curve_36.points]
    changes = [i for i in range(len(signs) - 1) if signs[i] != signs[i + 1]]
    # even k: the all-ones word is a codeword and the curve is symmetric about 1/2
    assert len(changes) == 2
    left, right = curve_36.points[changes[0]], curve_36.points[changes[0] + 1]
    assert left.G < 0 <= right.G
    assert left.alpha < GALLAGER_36 < right.alpha
    left, right = curve_36.points[changes[1]], curve_36.points[changes[1] + 1]
    assert left.alpha < 1 - GALLAGER_36 < right.alpha

    peak = curve_36.maximum()
    assert peak.alpha == pytest.approx(0.5, abs=1e-9)
    assert peak.G == pytest.approx(0.3466, abs=1e-4)


def test_sweep_keeps_failures_in_place():
    curve = sweep(EnsembleParams(3, 6, 1), 0.5, 1.0, 3, threads=1)
    assert isinstance(curve.entries[-1], GridFailure)
    assert not curve.complete
    assert len(curve.points) == 2
    rows = read_rows(curve_to_csv(curve))
    assert rows[-1]["status"] == "failed"
    assert rows[-1]["alpha"] == "1"
    assert rows[-1]["G_nats"] == "nan"
    assert rows[0]["status"] == "ok"


def test_sweep_with_no_solvable_point():
    with pytest.raises(SweepError):
        sweep(EnsembleParams(3, 5, 1), 0.85, 1.0, 3, threads=1)


def test_degree_two_sweep():
    params = EnsembleParams(3, 6, 2)
    curve = sweep(params, 0.2, 0.5, 5, growth_config=GrowthConfig(seed_stride=2), threads=2)
    assert curve.complete
    assert all(p.residual <= 1e-9 for p in curve.points)
    assert "alpha_hat" in curve.metadata
    assert curve.maximum().G <= curve.metadata["unconstrained_G"] + 1e-9


def test_sweep_maximum_matches_unconstrained_maximum():
    params = EnsembleParams(3, 6, 2)
    peak = unconstrained_maximum(params)
    curve = sweep(params, peak.alpha - 0.02, peak.alpha + 0.02, 5, threads=2)
    assert curve.complete
    assert curve.metadata["alpha_hat"] == pytest.approx(peak.alpha, abs=1e-12)
    best = curve.maximum()
    assert best.alpha == pytest.approx(peak.alpha, abs=1e-12)
    assert abs(best.G - curve.metadata["unconstrained_G"]) <= 1e-6
    assert all(p.G <= peak.G + 1e-9 for p in curve.points)


def test_grid_threshold_from_first_upward_bracket(curve_36):
    assert curve_36.alpha_star == pytest.approx(grid_threshold(curve_36))
    assert 0.02 < curve_36.alpha_star < 0.03
    positive = sweep(EnsembleParams(3, 6, 1), 0.3, 0.6, 4, threads=1)
    assert positive.alpha_star is None


def test_sweep_is_deterministic():
    params = EnsembleParams(3, 6, 2)
    first = curve_to_csv(sweep(params, 0.2, 0.6, 5, threads=1))
    second = curve_to_csv(sweep(params, 0.2, 0.6, 5, threads=3))
    assert first == second


def test_csv_format(curve_36):
    text = curve_to_csv(curve_36)
    lines = text.splitlines()
    assert lines[0] == "alpha,G_nats,q_1,x0_1,lambda,residual,status"
    assert len(lines) == 100
    assert text.endswith("\n") and "\r" not in text
    assert csv_header(2) == ["alpha", "G_nats", "q_1", "q_2", "x0_1", "x0_2", "lambda", "residual", "status"]
    assert text == curve_to_csv(curve_36)


def test_csv_in_bits(curve_36):
    rows = read_rows(curve_to_csv(curve_36, units="bits"))
    middle = next(r for r in rows if abs(float(r["alpha"]) - 0.5) < 1e-9)
    assert float(middle["G_bits"]) == pytest.approx(0.5, abs=1e-12)
    assert unit_scale("nats") == 1.0
    with pytest.raises(DomainError):
        unit_scale("dB")


def test_json_export(curve_36):
    data = json.loads(curve_to_json(curve_36))
    assert (data["j"], data["k"], data["M"]) == (3, 6, 1)
    assert len(data["points"]) == 99
    assert "lambda" in data["points"][0]
    assert data["alpha_star"] == pytest.approx(GALLAGER_36, abs=1e-3)
    assert curve_to_dict(curve_36, "bits")["units"] == "bits"


def test_gnuplot_script():
    script = gnuplot_script("growth.csv", 2, "(3,6)-regular")
    assert "set datafile separator ','" in script
    assert "plot 'growth.csv' using 1:2 with lines title 'M=2'" in script
    assert "G_2(alpha) [nats]" in script


def test_single_cover_threshold():
    result = threshold_search(EnsembleParams(3, 6, 1))
    assert result.status == FOUND
    assert result.alpha_star == pytest.approx(GALLAGER_36, abs=5e-4)
    assert result.bracket[0] < result.alpha_star < result.bracket[1]
    assert abs(result.G_at_star) < 1e-5
    assert len(result.later_crossings) == 1
    assert result.later_crossings[0] == pytest.approx(1 - GALLAGER_36, abs=0.01)
    assert result.to_dict()["status"] == "found"
    assert threshold(EnsembleParams(3, 6, 1)) == pytest.approx(result.alpha_star, abs=1e-12)


def test_no_threshold_in_positive_range():
    growth_config = GrowthConfig(scan_min=0.3, scan_max=0.9, scan_points=10)
    result = threshold_search(EnsembleParams(3, 6, 1), growth_config=growth_config)
    assert result.status == NO_THRESHOLD
    assert result.summary["all_nonnegative"]
    with pytest.raises(NoThresholdError) as excinfo:
        threshold(EnsembleParams(3, 6, 1), growth_config=growth_config)
    assert excinfo.value.exit_code == 0
    assert excinfo.value.summary["points"] == 10


def test_goodness_bound_single_degree():
    bound = asymptotically_good_bound(3, 6, [1])
    assert bound.candidate
    assert bound.bound == pytest.approx(GALLAGER_36, abs=5e-4)


@pytest.mark.slow
@pytest.mark.parametrize("j,k", [(3, 6), (4, 8)])
def test_higher_cover_degrees_lower_the_threshold(j, k):
    # G_M >= G_1 pointwise: the x1-only face of B^(M) is the degree-1 enumerator,
    # and the x2-only face counts stopping sets, which outnumber codewords at small alpha
    bound = asymptotically_good_bound(j, k, [1, 2, 3])
    values = [bound.thresholds[M].alpha_star for M in (1, 2, 3)]
    assert all(bound.thresholds[M].status == FOUND for M in (1, 2, 3))
    assert all(v > 0 for v in values)
    assert values[1] < values[0] and values[2] < values[0]
    assert bound.bound == min(values)


def test_degree_two_beats_codewords_at_small_alpha():
    params = EnsembleParams(3, 6, 2)
    point = growth_rate(params, 0.02)
    assert point.G > 0 > solve_M1(EnsembleParams(3, 6, 1), 0.02).G
