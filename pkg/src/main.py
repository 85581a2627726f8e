"""
DoS Impact Simulator - Main Entry Point
Economic impact of denial-of-service attacks from time-preference dynamics
"""

import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import psutil
from tqdm import tqdm

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from core.analytic import (beta_k, deterministic_dM, half_restoration_time, hourly_annuity,  # noqa: E402
                           ou_moments, recovery_growth_rate)
from core.category_presets import load_presets  # noqa: E402
from core.drivers import shock_steps  # noqa: E402
from core.scenario_parser import ScenarioDocument, load_scenario, scenario_to_dict  # noqa: E402
from core.worked_example import format_comparison, run_worked_example  # noqa: E402
from models.errors import ScenarioError  # noqa: E402
from models.simulation_config import SimulationConfig  # noqa: E402
from models.time_preference import TimePreferenceModel  # noqa: E402
from processors.claim_reporter import PROCESS_KINDS, ClaimReport, CountermeasureProcess, build_claim_report  # noqa: E402
from processors.damage_assessor import DamageTriple  # noqa: E402
from processors.ensemble_runner import EnsembleRunner, PathStatistics  # noqa: E402
from processors.results_writer import OUTPUT_FORMATS, read_claim_inputs, write_report, write_results  # noqa: E402
from utils.config_manager import ConfigManager  # noqa: E402
from utils.logger import setup_logging  # noqa: E402

APP_NAME = "DoS Impact Simulator"
APP_VERSION = "1.0.0"

APP_ROOT = Path(__file__).parent.parent
DEFAULT_SETTINGS = APP_ROOT / "config" / "settings.json"
DEFAULT_PRESETS = APP_ROOT / "config" / "category_presets.json"

ANALYTIC_QUANTITIES = ("beta_k", "ou_moments", "g", "t_half", "annuity", "dM")


class ScenarioInputError(click.ClickException):
    """Scenario parse or validation failure"""

    exit_code = 3


class OutputError(click.ClickException):
    """File read or write failure"""

    exit_code = 4


class DosImpactApp:
    """Application controller: configuration, scenario runs and result output"""

    def __init__(self, settings_path: Optional[str] = None, log_level: Optional[str] = None,
                 log_dir: Optional[str] = None):
        """
        Initialize application

        Args:
            settings_path: Alternative settings JSON file
            log_level: Overrides the configured log level
            log_dir: Directory for a log file
        """
        self.logger = setup_logging(log_dir=log_dir, log_level=log_level or "INFO")

        # Load configuration
        self.config = ConfigManager(
            settings_path=settings_path or str(DEFAULT_SETTINGS),
            presets_path=str(DEFAULT_PRESETS),
        )
        if log_level is None:
            level = str(self.config.get("logging.level", "INFO")).upper()
            logging.getLogger().setLevel(getattr(logging, level, logging.INFO))
        if log_dir is None and self.config.get("logging.log_dir"):
            self.logger = setup_logging(log_dir=self.config.get("logging.log_dir"),
                                        log_level=logging.getLevelName(logging.getLogger().level))

        self.presets = load_presets(self.config.get_all_presets())
        self.logger.debug(f"{APP_NAME} {APP_VERSION} ready")

    def simulation_defaults(self) -> SimulationConfig:
        """SimulationConfig from settings (defaults < settings.json < environment)"""
        section = self.config.get("simulation", {})
        fields = {f.name for f in dataclasses.fields(SimulationConfig)}
        return SimulationConfig(**{key: value for key, value in section.items() if key in fields})

    def default_workers(self) -> int:
        configured = self.config.get("execution.max_workers")
        if configured:
            return int(configured)
        return psutil.cpu_count(logical=False) or 1

    def load(self, scenario_path: str) -> ScenarioDocument:
        """Read and validate a scenario file"""
        try:
            doc = load_scenario(scenario_path, defaults=self.simulation_defaults(), presets=self.presets)
        except OSError as e:
            raise OutputError(f"cannot read scenario {scenario_path}: {e.strerror or e}")
        except ScenarioError as e:
            raise ScenarioInputError(f"invalid scenario {scenario_path}:\n{e}")
        self.logger.info(f"Loaded scenario {scenario_path}: {len(doc.assets)} asset(s), {len(doc.shocks)} shock(s)")
        return doc

    def apply_overrides(self, doc: ScenarioDocument, **overrides: Any) -> ScenarioDocument:
        """Apply CLI overrides to the scenario's simulation settings and re-check them"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        if not changes:
            return doc
        config = dataclasses.replace(doc.config, **changes)
        problems = [f"{path}: {message}" for path, message in config.violations()]
        if not problems:
            for asset in doc.assets:
                try:
                    shock_steps(config, doc.shocks_for(asset.id))
                except ValueError as e:
                    problems.append(f"shocks of asset {asset.id}: {e}")
        if problems:
            raise ScenarioInputError("invalid overrides:\n" + "\n".join(problems))
        self.logger.info(f"Command-line overrides: {changes}")
        return dataclasses.replace(doc, config=config)

    def simulate(self, doc: ScenarioDocument, window: Optional[float] = None,
                 workers: Optional[int] = None) -> List[PathStatistics]:
        """Run the ensemble of every asset in scenario order"""
        runner = EnsembleRunner(
            max_workers=workers or self.default_workers(),
            chunk_size=int(self.config.get("execution.chunk_size", 250)),
        )
        window = window if window is not None else doc.window

        self.logger.info("=" * 60)
        self.logger.info(f"Simulating {len(doc.assets)} asset(s), {doc.config.n_paths} paths, seed {doc.config.seed}")
        self.logger.info("=" * 60)

        results = []
        for asset in doc.assets:
            with tqdm(total=doc.config.n_paths, desc=asset.id, unit="path", file=sys.stderr,
                      disable=not sys.stderr.isatty()) as bar:
                def progress_callback(current, total, label, status):
                    bar.update(current - bar.n)

                try:
                    stats = runner.run(asset, doc.config, doc.shocks_for(asset.id), rho=doc.rho,
                                       window=window, progress_callback=progress_callback)
                except ValueError as e:
                    raise ScenarioInputError(f"asset {asset.id}: {e}")
            results.append(stats)

        self.logger.info("Simulation complete")
        return results

    def claim_report(self, doc: ScenarioDocument, results: Sequence[PathStatistics],
                     process: Optional[str] = None) -> ClaimReport:
        """Portfolio claim report from per-asset ensemble damages"""
        kind = CountermeasureProcess(process) if process else doc.process
        named: List[Tuple[str, DamageTriple]] = []
        samples = np.zeros(doc.config.n_paths)
        for stats in results:
            if stats.damages is None:
                named.append((stats.asset_id, DamageTriple()))
                continue
            named.append((stats.asset_id, stats.damages.mean_triple()))
            samples = samples + stats.damages.claims()
        return build_claim_report(named, kind, claim_samples=samples)

    def results_meta(self, doc: ScenarioDocument, window: Optional[float]) -> Dict[str, Any]:
        config = doc.config
        return {
            "tool_version": APP_VERSION,
            "horizon": config.horizon,
            "record_every": config.record_every,
            "usability_mode": config.usability_mode,
            "noise_enabled": config.noise_enabled,
            "process": doc.process.kind,
            "rho": doc.rho,
            "window": window if window is not None else doc.window,
            "scenario": scenario_to_dict(doc),
        }

    def write(self, data: bytes, out: Optional[str]):
        """Write bytes to a file, or to stdout when out is None"""
        if out is None:
            click.echo(data.decode("utf-8"), nl=False)
            return
        try:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
        except OSError as e:
            raise OutputError(f"cannot write {out}: {e.strerror or e}")
        self.logger.info(f"Wrote {out}")


def _suffixed(out: str, asset_id: str) -> str:
    path = Path(out)
    return str(path.with_name(f"{path.stem}_{asset_id}{path.suffix}"))


def _need(quantity: str, **values: Any):
    missing = [f"--{name.replace('_', '-')}" for name, value in values.items() if value is None]
    if missing:
        raise click.UsageError(f"analytic {quantity} requires {', '.join(missing)}")


# ---- command line ---------------------------------------------------------

simulation_options = [
    click.option("--paths", "n_paths", type=int, default=None, help="Number of Monte Carlo paths"),
    click.option("--seed", type=int, default=None, help="Root seed (unsigned 64-bit)"),
    click.option("--dt", type=float, default=None, help="Step size in hours"),
    click.option("--no-noise", is_flag=True, default=False, help="Disable diffusion noise (shocks only)"),
    click.option("--record-every", type=int, default=None, help="Record statistics every N steps"),
    click.option("--window", type=float, default=None, help="Damage window in hours (default TK)"),
    click.option("--workers", type=int, default=None, help="Parallel workers (default: physical cores)"),
]


def with_simulation_options(func):
    for option in reversed(simulation_options):
        func = option(func)
    return func


@click.group()
@click.option("--config", "settings_path", type=str, default=None, help="Alternative settings JSON file")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Logging level (default from settings)")
@click.option("--log-dir", type=str, default=None, help="Also write a log file into this directory")
@click.version_option(APP_VERSION, prog_name=APP_NAME)
@click.pass_context
def cli(ctx: click.Context, settings_path: Optional[str], log_level: Optional[str], log_dir: Optional[str]):
    """Economic impact of denial-of-service attacks."""
    ctx.obj = DosImpactApp(settings_path=settings_path, log_level=log_level, log_dir=log_dir)


@cli.command()
@click.option("--scenario", "scenario_path", required=True, type=str, help="Scenario file (YAML)")
@click.option("--out", type=str, default=None, help="Output file (default: stdout)")
@click.option("--format", "fmt", type=click.Choice(OUTPUT_FORMATS), default="csv", show_default=True)
@click.option("--process", type=click.Choice(PROCESS_KINDS), default=None, help="Override the scenario's process")
@with_simulation_options
@click.pass_obj
def simulate(app: DosImpactApp, scenario_path, out, fmt, process, n_paths, seed, dt, no_noise,
             record_every, window, workers):
    """Simulate a scenario and write per-step statistics."""
    doc = app.load(scenario_path)
    doc = app.apply_overrides(doc, n_paths=n_paths, seed=seed, dt=dt,
                              noise_enabled=False if no_noise else None, record_every=record_every)
    if process:
        doc = dataclasses.replace(doc, process=CountermeasureProcess(process))

    if fmt == "csv" and out is None and len(doc.assets) > 1:
        raise click.UsageError("CSV output of a multi-asset scenario needs --out (one file per asset)")

    results = app.simulate(doc, window=window, workers=workers)
    report = app.claim_report(doc, results)

    if fmt == "json":
        app.write(write_results(results, report, "json", meta=app.results_meta(doc, window)), out)
    elif len(results) == 1:
        app.write(write_results(results[0], None, "csv"), out)
    else:
        for stats in results:
            app.write(write_results(stats, None, "csv"), _suffixed(out, stats.asset_id))


@cli.command()
@click.argument("quantity", type=click.Choice(ANALYTIC_QUANTITIES))
@click.option("--a", type=float, default=None, help="Reversion intensity, 1/h")
@click.option("--tk", type=float, default=2160.0, show_default=True, help="Rebuild horizon TK, h")
@click.option("--r0", type=float, default=None, help="Initial time preference, 1/h")
@click.option("--r-eq", type=float, default=None, help="Equilibrium time preference, 1/h")
@click.option("--v", "V", type=float, default=1.0, show_default=True, help="Time-preference volatility, 1/h")
@click.option("--t", type=float, default=None, help="Elapsed time, h")
@click.option("--r-post", type=float, default=1.0, show_default=True, help="Post-attack time preference, 1/h")
@click.option("--lambda-market", type=float, default=0.2, show_default=True, help="Market risk premium")
@click.option("--va", "VA", type=float, default=0.0, show_default=True, help="Usability volatility")
@click.option("--g", type=float, default=None, help="Growth rate for t_half, 1/h")
@click.option("--value", type=float, default=None, help="Total capability value, EUR")
@click.option("--m-prev", type=float, default=None, help="Previous monetary mass, EUR")
@click.option("--r", type=float, default=None, help="Time preference, 1/h")
@click.option("--rm", type=float, default=None, help="Short-rate increment rM, 1/h")
@click.option("--dt", type=float, default=1.0, show_default=True, help="Step size, h")
def analytic(quantity, a, tk, r0, r_eq, V, t, r_post, lambda_market, VA, g, value, m_prev, r, rm, dt):
    """Evaluate a closed-form quantity."""
    try:
        if quantity == "beta_k":
            _need(quantity, a=a)
            click.echo(f"beta_k = {beta_k(a, tk):.10g} h")
        elif quantity == "ou_moments":
            _need(quantity, a=a, r0=r0, r_eq=r_eq, t=t)
            moments = ou_moments(r0, TimePreferenceModel(a=a, r_eq=r_eq, V=V), t)
            click.echo(f"mean = {moments.mean:.10g} 1/h")
            click.echo(f"variance = {moments.variance:.10g} 1/h^2")
        elif quantity == "g":
            click.echo(f"g = {recovery_growth_rate(r_post, V, lambda_market, VA, tk):.10g} 1/h")
        elif quantity == "t_half":
            rate = g if g is not None else recovery_growth_rate(r_post, V, lambda_market, VA, tk)
            restoration = half_restoration_time(rate)
            shown = "unbounded" if restoration.unbounded else f"{restoration.hours:.10g} h"
            click.echo(f"t_half = {shown}")
        elif quantity == "annuity":
            _need(quantity, value=value)
            click.echo(f"annuity = {hourly_annuity(value, tk):.10g} EUR/h")
        elif quantity == "dM":
            _need(quantity, m_prev=m_prev, r=r, rm=rm)
            click.echo(f"dM = {deterministic_dM(m_prev, r, rm, dt):.10g} EUR")
    except ValueError as e:
        raise ScenarioInputError(f"analytic {quantity}: {e}")


@cli.command()
def example():
    """Recompute the data-centre worked example next to its published figures."""
    rows = run_worked_example()
    click.echo(format_comparison(rows), nl=False)


@cli.command()
@click.option("--process", required=True, type=click.Choice(PROCESS_KINDS), help="Counter-measure process")
@click.option("--scenario", "scenario_path", type=str, default=None, help="Scenario to simulate inline")
@click.option("--results", "results_path", type=str, default=None, help="JSON file written by simulate")
@click.option("--out", type=str, default=None, help="Output file (default: stdout)")
@click.option("--format", "fmt", type=click.Choice(OUTPUT_FORMATS), default="json", show_default=True)
@with_simulation_options
@click.pass_obj
def report(app: DosImpactApp, process, scenario_path, results_path, out, fmt, n_paths, seed, dt, no_noise,
           record_every, window, workers):
    """Write the claim report for a counter-measure process."""
    if (scenario_path is None) == (results_path is None):
        raise click.UsageError("give exactly one of --scenario or --results")

    if results_path is not None:
        try:
            data = Path(results_path).read_bytes()
        except OSError as e:
            raise OutputError(f"cannot read results {results_path}: {e.strerror or e}")
        try:
            named, distribution, _ = read_claim_inputs(data)
        except ValueError as e:
            raise ScenarioInputError(f"invalid results file {results_path}: {e}")
        claim = build_claim_report(named, CountermeasureProcess(process))
        claim = dataclasses.replace(claim, distribution=distribution)
    else:
        doc = app.load(scenario_path)
        doc = app.apply_overrides(doc, n_paths=n_paths, seed=seed, dt=dt,
                                  noise_enabled=False if no_noise else None, record_every=record_every)
        results = app.simulate(doc, window=window, workers=workers)
        claim = app.claim_report(doc, results, process=process)

    app.write(write_report(claim, fmt), out)


def main():
    """Main entry point"""
    cli(prog_name="dos-impact")


if __name__ == "__main__":
    main()
