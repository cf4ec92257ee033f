#!/usr/bin/env python3
"""
Reproduce the growth-rate curves and thresholds of the (3,6) and (4,8) ensembles for M = 1, 2, 3
"""

import sys
import time
from pathlib import Path

import click

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.logger import Logger
from modules import PseudoweightError
from modules.growth import curve_to_csv, gnuplot_script, sweep, threshold_search
from modules.growth.thresholds import FOUND
from modules.solver import EnsembleParams

ENSEMBLES = ((3, 6), (4, 8))
DEGREES = (1, 2, 3)


def reproduce_ensemble(j: int, k: int, out_dir: Path, steps: int, logger: Logger) -> dict:
    """Write one CSV and gnuplot script per M, return the thresholds"""
    log = logger.get_logger("reproduce")
    thresholds = {}
    for M in DEGREES:
        params = EnsembleParams(j, k, M)
        start = time.time()
        curve = sweep(params, 0.01, 0.99, steps)
        data_file = out_dir / f"growth_j{j}_k{k}_M{M}.csv"
        data_file.write_text(curve_to_csv(curve), encoding="utf-8")
        data_file.with_suffix(".gp").write_text(
            gnuplot_script(data_file.name, M, f"({j},{k})-regular, M={M}"), encoding="utf-8")
        logger.log_performance(f"sweep {params}", time.time() - start)

        try:
            result = threshold_search(params)
        except PseudoweightError as e:
            log.error(f"Threshold search failed for {params}: {e}")
            thresholds[M] = None
            continue
        thresholds[M] = result.alpha_star if result.status == FOUND else None
    return thresholds


@click.command()
@click.option("--out-dir", type=click.Path(file_okay=False), default="figures", show_default=True)
@click.option("--steps", type=int, default=99, show_default=True)
@click.option("-v", "--verbose", is_flag=True)
def main(out_dir, steps, verbose):
    logger = Logger("PWG", level="INFO" if verbose else "WARNING")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    consistent = True
    for j, k in ENSEMBLES:
        thresholds = reproduce_ensemble(j, k, out, steps, logger)
        for M, value in thresholds.items():
            click.echo(f"({j},{k}) M={M} alpha_star={value:.8g}" if value is not None
                       else f"({j},{k}) M={M} alpha_star=none")
        values = [thresholds[M] for M in DEGREES]
        # the x1-only face of B^(M) is B^(1), so no higher degree can exceed alpha*_1
        if None in values or not all(value < values[0] for value in values[1:]):
            consistent = False
            click.echo(f"({j},{k}) higher-degree thresholds do not lie below alpha*_1")
    sys.exit(0 if consistent else 1)


if __name__ == "__main__":
    main()
