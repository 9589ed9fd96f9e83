"""`probe` command line: scenario runner, parameter sweeps, oracle suite.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
4 oracle/acceptance check failed.
"""

import sys

import click

from .config import ConfigError, scenario_from_dict
from .metrology import PlateauError
from .oracle import ConvergenceError
from .quadrature import DEFAULT_REL_TOL, QuadratureError
from .reservoirs import ModelValidationError
from .scenarios import run as run_scenario

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECK_FAILED = 4


def _execute(scenario, jobs, tol):
    try:
        paths, meta = run_scenario(scenario, jobs=jobs, rel_tol=tol)
    except (QuadratureError, ConvergenceError, PlateauError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    for p in paths:
        click.echo(p)
    if meta.get("oracle_all_passed") is False:
        click.echo("oracle suite FAILED", err=True)
        sys.exit(EXIT_CHECK_FAILED)


@click.group()
def main():
    """Dephasing-qubit probe of quantum reservoirs."""


@main.command("run")
@click.argument("config", type=click.Path())
@click.option("--out", "out_dir", default=None, help="Output directory (overrides config).")
@click.option("--jobs", default=1, show_default=True, help="Worker processes for sweep grids.")
@click.option("--tol", default=DEFAULT_REL_TOL, show_default=True,
              help="Relative quadrature tolerance.")
def run_cmd(config, out_dir, jobs, tol):
    """Run a scenario described by a JSON CONFIG file."""
    import json
    try:
        with open(config) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        click.echo(f"config error: config file not found: {config}", err=True)
        sys.exit(EXIT_CONFIG)
    except json.JSONDecodeError as exc:
        click.echo(f"config error: {config} is not valid JSON: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if out_dir is not None and isinstance(raw, dict):
        raw["out_dir"] = out_dir
    try:
        scenario = scenario_from_dict(raw)
    except (ConfigError, ModelValidationError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _execute(scenario, jobs, tol)


@main.command("oracle-suite")
@click.option("--seed", default=7, show_default=True, help="RNG seed for the random reservoirs.")
@click.option("--out", "out_dir", default="out", show_default=True, help="Output directory.")
def oracle_cmd(seed, out_dir):
    """Run the brute-force oracle suite and write its JSON report."""
    try:
        scenario = scenario_from_dict(
            {"kind": "oracle-suite", "seed": seed, "out_dir": out_dir})
    except ConfigError as exc:  # pragma: no cover - static config
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _execute(scenario, jobs=1, tol=DEFAULT_REL_TOL)


@main.command("sweep")
@click.option("--param", type=click.Choice(["aB"]), default="aB", show_default=True,
              help="Swept parameter.")
@click.option("--from", "from_m", type=float, required=True,
              help="Sweep start (meters).")
@click.option("--to", "to_m", type=float, required=True, help="Sweep end (meters).")
@click.option("--points", type=int, required=True, help="Number of grid points.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Optional base scenario JSON (model, time grid, chi, nu).")
@click.option("--out", "out_dir", default="out", show_default=True, help="Output directory.")
@click.option("--jobs", default=1, show_default=True)
@click.option("--tol", default=DEFAULT_REL_TOL, show_default=True)
def sweep_cmd(param, from_m, to_m, points, config_path, out_dir, jobs, tol):
    """Sweep the condensate scattering length over a uniform grid."""
    import json

    import numpy as np

    raw = {"kind": "sweep"}
    if config_path is not None:
        try:
            with open(config_path) as fh:
                raw.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        raw["kind"] = "sweep"
    raw["out_dir"] = out_dir
    if points < 1:
        click.echo("config error: --points must be >= 1", err=True)
        sys.exit(EXIT_CONFIG)
    raw["aB_m"] = [float(v) for v in np.linspace(from_m, to_m, points)]
    try:
        scenario = scenario_from_dict(raw)
    except (ConfigError, ModelValidationError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _execute(scenario, jobs, tol)


if __name__ == "__main__":  # pragma: no cover
    main()
