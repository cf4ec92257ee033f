#!/usr/bin/env python3
"""
PWG - Pseudoweight Growth
Degree-M AWGN-pseudoweight growth rates of regular LDPC ensembles, command-line entry point
"""

import functools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Tuple

import click

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from core.config_manager import ConfigManager
from core.logger import Logger
from modules import DimensionError, DomainError, NoThresholdError, PseudoweightError
from modules.growth import (GrowthConfig, asymptotically_good_bound, curve_to_csv, curve_to_json,
                            gnuplot_script, sweep, threshold_search, unit_scale)
from modules.growth.thresholds import FAILED, FOUND
from modules.oracle import ParityCheckMatrix, verify_cover, verify_lemma, verify_s_set
from modules.polynomial import SparsePoly
from modules.pwef import PwefSpec, build_B, build_P, build_Q, build_T
from modules.solver import EnsembleParams, SolverConfig, solve_all, tied_points

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    """Everything one subcommand needs, validated before any computation"""
    subcommand: str
    j: Optional[int] = None
    k: Optional[int] = None
    M: Optional[int] = None
    alpha_min: Optional[float] = None
    alpha_max: Optional[float] = None
    steps: Optional[int] = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    growth: GrowthConfig = field(default_factory=GrowthConfig)
    output: Optional[str] = None
    output_format: str = "csv"
    units: str = "nats"
    verbosity: int = 0
    threads: Optional[int] = None

    @property
    def params(self) -> EnsembleParams:
        return EnsembleParams(self.j, self.k, self.M)

    def validate(self) -> None:
        if self.j is not None:
            EnsembleParams(self.j, self.k, self.M)
        if self.alpha_min is not None:
            if not 0 < self.alpha_min < self.alpha_max <= 1:
                raise DomainError(f"alpha range needs 0 < min < max <= 1, got {self.alpha_min}:{self.alpha_max}")
            if self.steps < 2:
                raise DomainError(f"alpha range needs at least 2 steps, got {self.steps}")
        unit_scale(self.units)
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"output format must be csv or json, got {self.output_format!r}")
        for name in ("tol_inner", "tol_outer", "tol_threshold"):
            if getattr(self.solver, name) <= 0:
                raise DomainError(f"{name} must be positive")


class PWGApplication:
    """Owns logging, configuration and the defaults every subcommand starts from"""

    def __init__(self, config_file: Optional[str] = "config.yaml", log_file: Optional[str] = None):
        self.config_file = config_file
        self.log_file = log_file
        self.logger: Optional[Logger] = None
        self.config_manager: Optional[ConfigManager] = None
        self.solver_config = SolverConfig()
        self.growth_config = GrowthConfig()

    def initialize(self, verbosity: int = 0) -> bool:
        """Load configuration and set up logging; False when the configuration is invalid"""
        self.logger = Logger("PWG", log_file=self.log_file)
        main_log = self.logger.get_logger("main")

        self.config_manager = ConfigManager(self.config_file)
        if not self.config_manager.load_config():
            main_log.error(f"Failed to load configuration from {self.config_file}")
            return False

        if verbosity > 1:
            level = "DEBUG"
        elif verbosity == 1:
            level = "INFO"
        elif verbosity < 0:
            level = "ERROR"
        else:
            level = self.config_manager.get("core.log_level", "WARNING")
        self.logger.set_level(level)

        issues = self.config_manager.validate_config()
        if issues["errors"]:
            main_log.error(f"Configuration errors: {issues['errors']}")
            return False
        if issues["warnings"]:
            main_log.warning(f"Configuration warnings: {issues['warnings']}")

        self.solver_config = SolverConfig.from_dict(self.config_manager.get_module_config("solver"))
        self.growth_config = GrowthConfig.from_dict(self.config_manager.get_module_config("growth"))
        main_log.debug(f"Solver configuration: {self.solver_config}")
        return True

    def run_config(self, subcommand: str, verbosity: int = 0, threads: Optional[int] = None,
                   tolerances: Optional[dict] = None, **values: Any) -> RunConfig:
        threads = threads or self.config_manager.get("core.threads") or self.growth_config.threads
        if values.get("units") is None:
            values["units"] = self.config_manager.get("units", "nats")
        if values.get("output_format") is None:
            values["output_format"] = self.config_manager.get("output_format", "csv")
        run = RunConfig(
            subcommand=subcommand,
            solver=self.solver_config.with_overrides(**(tolerances or {})),
            growth=self.growth_config,
            verbosity=verbosity,
            threads=threads,
            **{key: value for key, value in values.items() if value is not None},
        )
        run.validate()
        return run


def handle_errors(command: Callable) -> Callable:
    """Map domain exceptions onto the stable exit codes"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except NoThresholdError as e:
            click.echo(f"no_threshold {json.dumps(e.summary, sort_keys=True)}")
            ctx.exit(EXIT_OK)
        except PseudoweightError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(e.exit_code)
    return wrapper


def parse_alpha_range(ctx, param, value: Optional[str]) -> Optional[Tuple[float, float, int]]:
    if value is None:
        return None
    parts = value.split(":")
    try:
        low, high, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise click.BadParameter(f"expected min:max:steps, got {value!r}")
    if len(parts) != 3:
        raise click.BadParameter(f"expected min:max:steps, got {value!r}")
    return low, high, steps


def parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}")


def write_output(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def ensemble_options(command: Callable) -> Callable:
    command = click.option("--M", "M", type=int, required=True, help="Cover degree")(command)
    command = click.option("--k", "k", type=int, required=True, help="Check-node degree")(command)
    command = click.option("--j", "j", type=int, required=True, help="Variable-node degree")(command)
    return command


def tolerance_options(command: Callable) -> Callable:
    command = click.option("--tol-threshold", type=float, default=None, help="Threshold bisection width")(command)
    command = click.option("--tol-outer", type=float, default=None, help="Full-system residual tolerance")(command)
    command = click.option("--tol-inner", type=float, default=None, help="Inner-solve relative tolerance")(command)
    return command


threads_option = click.option("--threads", type=click.IntRange(min=1), envvar="PSEUDOWEIGHT_THREADS",
                              default=None, help="Worker threads (env PSEUDOWEIGHT_THREADS)")


@click.group()
@click.option("--config", "config_file", default="config.yaml", show_default=True, help="Configuration file")
@click.option("--log-file", default=None, help="Also log to this rotating file")
@click.option("-v", "--verbose", count=True, help="More log output (-vv for debug)")
@click.option("-q", "--quiet", is_flag=True, help="Only log errors")
@click.pass_context
def cli(ctx, config_file, log_file, verbose, quiet):
    """Degree-M AWGN-pseudoweight growth rates of (j,k)-regular LDPC ensembles"""
    app = PWGApplication(config_file, log_file)
    verbosity = -1 if quiet else verbose
    if not app.initialize(verbosity):
        click.echo("error: invalid configuration", err=True)
        ctx.exit(EXIT_USAGE)
    ctx.obj = {"app": app, "verbosity": verbosity}


@cli.command()
@click.option("--M", "M", type=int, required=True, help="Cover degree")
@click.option("--k", "k", type=int, required=True, help="SPC length")
@click.option("--part", type=click.Choice(["B", "T", "P", "Q"]), default="B", show_default=True)
@click.option("--coeff", default=None, help="Print one coefficient, exponent given as u1,...,uM")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def pwef(ctx, M, k, part, coeff, output):
    """Exact pseudoweight enumerating function of the SPC code"""
    spec = PwefSpec(M, k)
    builders = {"B": build_B, "T": build_T, "P": build_P, "Q": build_Q}
    poly: SparsePoly = builders[part](spec)
    if coeff is not None:
        exponent = parse_int_list(coeff)
        if len(exponent) != M:
            raise DimensionError(f"--coeff needs {M} entries, got {len(exponent)}")
        write_output(f"{poly.coeff(exponent)}\n", output)
    else:
        write_output(poly.dump(), output)


@cli.group()
def verify():
    """Cross-check enumerations against brute-force oracles"""


def _emit_report(ctx, report, output: Optional[str]) -> None:
    write_output(report.to_json() + "\n", output)
    ctx.exit(EXIT_OK if report.agree else EXIT_DISAGREE)


@verify.command("s-set")
@click.option("--M", "M", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@threads_option
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def verify_s_set_command(ctx, M, k, threads, output):
    """S-set coefficients against the cone+parity scan of the SPC code"""
    app = ctx.obj["app"]
    start = time.time()
    report = verify_s_set(k, M, threads, app.config_manager.get_module_config("oracle").get(
        "max_scan_vectors", 10**7))
    app.logger.log_performance("verify s-set", time.time() - start)
    _emit_report(ctx, report, output)


@verify.command("cover")
@click.option("--M", "M", type=int, required=True)
@click.option("--k", "k", type=int, default=None, help="Use the length-k SPC code")
@click.option("--H", "H", default=None, help="Rows of a parity-check matrix, e.g. 1100,0111")
@click.option("--fix-identity", is_flag=True, default=None, help="Pin one permutation per check")
@threads_option
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def verify_cover_command(ctx, M, k, H, fix_identity, threads, output):
    """Projected M-cover codewords against the cone+parity scan"""
    app = ctx.obj["app"]
    if (k is None) == (H is None):
        raise click.UsageError("give exactly one of --k and --H")
    if H is not None:
        matrix = ParityCheckMatrix.from_rows([[int(c) for c in row] for row in H.split(",")])
    else:
        matrix = ParityCheckMatrix.spc(k)
    oracle_config = app.config_manager.get_module_config("oracle")
    if fix_identity is None:
        fix_identity = bool(oracle_config.get("fix_identity", False))
    start = time.time()
    report = verify_cover(matrix, M, threads, fix_identity, oracle_config.get("max_cover_work", 10**8))
    app.logger.log_performance("verify cover", time.time() - start)
    _emit_report(ctx, report, output)


@verify.command("lemma")
@click.option("--R", "R", required=True, help="Polynomial with nonnegative coefficients, e.g. 1+x1")
@click.option("--xi", required=True, help="Comma-separated rationals, e.g. 1/2")
@click.option("--ell-max", type=int, required=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def verify_lemma_command(ctx, R, xi, ell_max, output):
    """Exact coefficient growth of R^l against the saddle-point limit"""
    report = verify_lemma(SparsePoly.parse(R), xi.split(","), ell_max)
    _emit_report(ctx, report, output)


@cli.command()
@ensemble_options
@click.option("--alpha", "alpha_range", required=True, callback=parse_alpha_range, help="min:max:steps")
@click.option("--units", type=click.Choice(["nats", "bits"]), default=None)
@click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.option("--gnuplot", is_flag=True, help="Also write <output>.gp")
@tolerance_options
@threads_option
@click.pass_context
@handle_errors
def growth(ctx, j, k, M, alpha_range, units, output_format, output, gnuplot,
           tol_inner, tol_outer, tol_threshold, threads):
    """G_M(alpha) over a uniform alpha grid"""
    app: PWGApplication = ctx.obj["app"]
    if gnuplot and not output:
        raise click.UsageError("--gnuplot needs --output")
    alpha_min, alpha_max, steps = alpha_range
    run = app.run_config("growth", ctx.obj["verbosity"], threads,
                         {"tol_inner": tol_inner, "tol_outer": tol_outer, "tol_threshold": tol_threshold},
                         j=j, k=k, M=M, alpha_min=alpha_min, alpha_max=alpha_max, steps=steps,
                         units=units, output_format=output_format, output=output)

    start = time.time()
    curve = sweep(run.params, run.alpha_min, run.alpha_max, run.steps, run.solver, run.growth, run.threads)
    app.logger.log_performance(f"growth sweep {run.params}", time.time() - start)

    text = curve_to_json(curve, run.units) if run.output_format == "json" else curve_to_csv(curve, run.units)
    write_output(text, run.output)
    if gnuplot:
        script = gnuplot_script(run.output, M, f"({j},{k})-regular, M={M}", run.units)
        write_output(script, str(Path(run.output).with_suffix(".gp")))
    ctx.exit(EXIT_OK if curve.complete else EXIT_NUMERICAL)


@cli.command()
@ensemble_options
@click.option("--scan", "scan_range", default=None, callback=parse_alpha_range,
              help="Coarse scan min:max:points")
@tolerance_options
@threads_option
@click.option("--json", "as_json", is_flag=True, help="Print the full search result as JSON")
@click.pass_context
@handle_errors
def threshold(ctx, j, k, M, scan_range, tol_inner, tol_outer, tol_threshold, threads, as_json):
    """alpha*_M = inf{alpha > 0 : G_M(alpha) >= 0}"""
    app: PWGApplication = ctx.obj["app"]
    run = app.run_config("threshold", ctx.obj["verbosity"], threads,
                         {"tol_inner": tol_inner, "tol_outer": tol_outer, "tol_threshold": tol_threshold},
                         j=j, k=k, M=M)
    growth_config = run.growth
    if scan_range is not None:
        growth_config = GrowthConfig(scan_range[0], scan_range[1], scan_range[2],
                                     growth_config.seed_stride, growth_config.threads)

    start = time.time()
    result = threshold_search(run.params, run.solver, growth_config, run.threads)
    app.logger.log_performance(f"threshold {run.params}", time.time() - start)

    if as_json:
        click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    elif result.status == FOUND:
        click.echo(f"alpha_star={result.alpha_star:.8g}")
    elif result.status == FAILED:
        click.echo(f"error: {result.reason}", err=True)
    else:
        click.echo(f"no_threshold {json.dumps(result.summary, sort_keys=True)}")
    ctx.exit(EXIT_NUMERICAL if result.status == FAILED else EXIT_OK)


@cli.command()
@ensemble_options
@click.option("--alpha", type=float, required=True)
@click.option("--ties", is_flag=True, help="List every stationary point tied with the best")
@tolerance_options
@click.pass_context
@handle_errors
def point(ctx, j, k, M, alpha, ties, tol_inner, tol_outer, tol_threshold):
    """Stationary points of the Lagrange system at one alpha, best first"""
    app: PWGApplication = ctx.obj["app"]
    run = app.run_config("point", ctx.obj["verbosity"], None,
                         {"tol_inner": tol_inner, "tol_outer": tol_outer, "tol_threshold": tol_threshold},
                         j=j, k=k, M=M)
    points = solve_all(run.params, alpha, run.solver)
    if not points:
        click.echo(f"error: no stationary point found at alpha={alpha}", err=True)
        ctx.exit(EXIT_NUMERICAL)
    chosen = tied_points(points) if ties else points[:1]
    click.echo(json.dumps([p.to_dict() for p in chosen], indent=2))


@cli.command()
@click.option("--j", "j", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--degrees", default="1,2,3", show_default=True, help="Cover degrees M to include")
@threads_option
@click.pass_context
@handle_errors
def bound(ctx, j, k, degrees, threads):
    """Minimum threshold over several cover degrees"""
    app: PWGApplication = ctx.obj["app"]
    result = asymptotically_good_bound(j, k, parse_int_list(degrees), app.solver_config,
                                       app.growth_config, threads)
    for M, outcome in sorted(result.thresholds.items()):
        value = f"{outcome.alpha_star:.8g}" if outcome.status == FOUND else outcome.status
        click.echo(f"M={M} alpha_star={value}")
    click.echo(f"bound={result.bound:.8g}" if result.bound is not None else "bound=none")
    failed = any(outcome.status == FAILED for outcome in result.thresholds.values())
    ctx.exit(EXIT_NUMERICAL if failed else EXIT_OK)


if __name__ == "__main__":
    cli()
