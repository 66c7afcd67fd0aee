"""Command line: ``nctorus list`` and ``nctorus run <scenario>``."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import GOLDEN, ConfigurationError
from .scenarios import REGISTRY, ScenarioConfig, list_scenarios, run_scenario


@click.group()
@click.version_option(package_name="artifact", prog_name="nctorus")
def main() -> None:
    """Verification scenarios for smooth noncommutative tori."""


@main.command("list")
@click.option("--json", "as_json", is_flag=True, help="Print the catalog as JSON.")
def list_cmd(as_json: bool) -> None:
    """List the registered scenarios."""
    catalog = list_scenarios()
    if as_json:
        click.echo(json.dumps(catalog, indent=2))
        return
    width = max(len(e["name"]) for e in catalog)
    for e in catalog:
        click.echo(f"{e['name']:<{width}}  {e['description']}")
        click.echo(f"{'':<{width}}  anchor: {e['anchor']}")


@main.command("run")
@click.argument("scenario")
@click.option("--theta", type=float, default=GOLDEN, show_default=True, help="Base deformation angle in (0, 1).")
@click.option("--scale", type=click.Choice(["unit", "2pi"]), default="unit", show_default=True, help="Derivation scale i or 2 pi i.")
@click.option("--box", type=int, default=None, help="Truncation box radius for the dense spectral cross-check.")
@click.option("--tol", type=float, default=None, help="Pruning tolerance for products and exponentials.")
@click.option("--seed", type=int, default=1, show_default=True, help="Seed for the random corpus.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the JSON report here.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Also write check rows as CSV.")
def run_cmd(scenario, theta, scale, box, tol, seed, out, csv_path) -> None:
    """Run one scenario; exit status 0 iff every check passes."""
    if scenario not in REGISTRY:
        raise click.UsageError(f"unknown scenario {scenario!r}; choose from: {', '.join(REGISTRY)}")
    try:
        cfg = ScenarioConfig(
            scenario=scenario,
            theta=theta,
            derivation_scale=scale,
            box_radius=box,
            prune_tol=tol,
            rng_seed=seed,
            output_path=str(out) if out else None,
        )
    except ConfigurationError as exc:
        raise click.UsageError(str(exc)) from exc
    report = run_scenario(cfg)
    if out:
        out.write_text(report.to_json())
    if csv_path:
        csv_path.write_text(report.to_csv())
    click.echo(report.summary())
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
