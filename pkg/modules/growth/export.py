"""
Curve Export - CSV, JSON and gnuplot renderings of growth curves
"""

import csv
import io
import json
import math
from typing import Any, Dict, List, Optional

from modules import DomainError
from modules.solver import StationaryPoint
from .curves import GrowthCurve

UNITS = ("nats", "bits")


def unit_scale(units: str) -> float:
    """Divisor turning nats into the requested unit"""
    if units == "nats":
        return 1.0
    if units == "bits":
        return math.log(2.0)
    raise DomainError(f"units must be one of {UNITS}, got {units!r}")


def _format(value: float) -> str:
    return "nan" if value is None or math.isnan(value) else f"{value:.17g}"


def csv_header(M: int, units: str = "nats") -> List[str]:
    return (["alpha", f"G_{units}"]
            + [f"q_{r}" for r in range(1, M + 1)]
            + [f"x0_{r}" for r in range(1, M + 1)]
            + ["lambda", "residual", "status"])


def curve_to_csv(curve: GrowthCurve, units: str = "nats") -> str:
    """One row per grid point, 17 significant digits, failed rows filled with nan"""
    scale = unit_scale(units)
    M = curve.params.M
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(csv_header(M, units))
    for entry in curve.entries:
        if isinstance(entry, StationaryPoint):
            writer.writerow([_format(entry.alpha), _format(entry.G / scale)]
                            + [_format(v) for v in entry.q]
                            + [_format(v) for v in entry.x0]
                            + [_format(entry.lam), _format(entry.residual), "ok"])
        else:
            writer.writerow([_format(entry.alpha)] + ["nan"] * (2 * M + 3) + ["failed"])
    return buffer.getvalue()


def _finite(value: Optional[float]) -> Optional[float]:
    return None if value is None or not math.isfinite(value) else value


def curve_to_dict(curve: GrowthCurve, units: str = "nats") -> Dict[str, Any]:
    scale = unit_scale(units)
    rows = []
    for entry in curve.entries:
        if isinstance(entry, StationaryPoint):
            row = entry.to_dict()
            row["G"] = entry.G / scale
            row["status"] = "ok"
        else:
            row = {"alpha": entry.alpha, "status": "failed", "reason": entry.reason}
        rows.append(row)
    return {
        "j": curve.params.j,
        "k": curve.params.k,
        "M": curve.params.M,
        "units": units,
        "alpha_star": _finite(curve.alpha_star),
        "metadata": curve.metadata,
        "points": rows,
    }


def curve_to_json(curve: GrowthCurve, units: str = "nats") -> str:
    return json.dumps(curve_to_dict(curve, units), indent=2, sort_keys=True) + "\n"


def gnuplot_script(data_file: str, M: int, title: str, units: str = "nats") -> str:
    """Plot script for a CSV written by curve_to_csv"""
    return "\n".join([
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set title '{title}'",
        "set xlabel 'alpha'",
        f"set ylabel 'G_{M}(alpha) [{units}]'",
        "set grid",
        "set xzeroaxis",
        f"plot '{data_file}' using 1:2 with lines title 'M={M}'",
        "",
    ])
