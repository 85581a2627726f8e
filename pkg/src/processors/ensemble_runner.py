"""
Ensemble Runner - orchestrates Monte Carlo paths in chunks with progress tracking
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from core.drivers import first_shock_step
from core.integrator import BatchResult, check_inputs, simulate_batch
from models.asset import Asset
from models.simulation_config import SimulationConfig
from models.time_preference import AttackShock
from processors.damage_assessor import DamageAccumulator, PathDamages, resolve_window

QUANTILES = (0.05, 0.5, 0.95)
SERIES_NAMES = ("r", "M", "K", "A")


@dataclass(frozen=True, eq=False)
class SeriesSummary:
    """Per-record-step mean, variance and 5/50/95 % quantiles of one process"""

    mean: np.ndarray
    variance: np.ndarray
    q05: np.ndarray
    q50: np.ndarray
    q95: np.ndarray

    @classmethod
    def from_matrix(cls, values: np.ndarray) -> "SeriesSummary":
        """Summarize a (n_paths, n_records) matrix column by column"""
        with np.errstate(invalid="ignore", over="ignore"):
            q05, q50, q95 = np.quantile(values, QUANTILES, axis=0)
            return cls(
                mean=np.mean(values, axis=0),
                variance=np.var(values, axis=0),
                # keep q05 <= q50 <= q95 under rounding
                q05=np.minimum(q05, q50),
                q50=q50,
                q95=np.maximum(q95, q50),
            )


@dataclass(frozen=True, eq=False)
class PathStatistics:
    """Ensemble summary of one asset's simulation"""

    asset_id: str
    seed: int
    n_paths: int
    dt: float
    times: np.ndarray
    series: Dict[str, SeriesSummary]
    dM_cumulative_mean: np.ndarray
    half_restoration_times: np.ndarray
    damages: Optional[PathDamages] = None

    def half_restoration_summary(self) -> Dict[str, Optional[float]]:
        """Share of paths reaching A >= 0.5 and the spread of their crossing times"""
        reached = self.half_restoration_times[~np.isnan(self.half_restoration_times)]
        summary: Dict[str, Optional[float]] = {
            "reached_fraction": float(reached.size) / self.n_paths,
            "mean_h": None,
            "median_h": None,
            "q95_h": None,
        }
        if reached.size:
            summary["mean_h"] = float(np.mean(reached))
            summary["median_h"] = float(np.median(reached))
            summary["q95_h"] = float(np.quantile(reached, 0.95))
        return summary


class EnsembleRunner:
    """Runs path chunks sequentially or on a thread pool and merges them by path index"""

    def __init__(self, max_workers: int = 4, chunk_size: int = 250):
        """
        Initialize ensemble runner

        Args:
            max_workers: Maximum parallel workers (1 runs sequentially)
            chunk_size: Paths integrated together as one vectorized batch
        """
        self.logger = logging.getLogger(__name__)
        self.max_workers = max(1, int(max_workers))
        self.chunk_size = max(1, int(chunk_size))
        self.cancelled = False

    def run(
        self,
        asset: Asset,
        config: SimulationConfig,
        shocks: Sequence[AttackShock],
        rho: float = 0.0,
        window: Optional[float] = None,
        progress_callback: Optional[Callable] = None
    ) -> PathStatistics:
        """
        Simulate config.n_paths paths and aggregate their statistics

        Args:
            asset: Attack target
            config: Simulation configuration
            shocks: Attack shocks sorted by time
            rho: Correlation between the W and WA noises
            window: Damage window in hours (default TK, cut to the horizon)
            progress_callback: Optional callback(current, total, label, status)

        Returns:
            PathStatistics, identical for any worker count or chunk size
        """
        self.cancelled = False
        check_inputs(asset, config)
        shock_index = first_shock_step(config, shocks)
        window_steps = self._damage_window(asset, config, shock_index, window)

        chunks = [
            list(range(start, min(start + self.chunk_size, config.n_paths)))
            for start in range(0, config.n_paths, self.chunk_size)
        ]

        self.logger.info(
            f"Simulating asset {asset.id}: {config.n_paths} paths x {config.n_steps} steps "
            f"(dt={config.dt} h, {len(chunks)} chunks, {self.max_workers} workers)"
        )

        def run_chunk(indices: List[int]):
            observers = []
            if window_steps is not None:
                observers.append(DamageAccumulator(asset, config.dt, shock_index or 0, window_steps, len(indices)))
            batch = simulate_batch(asset, config, shocks, indices, rho=rho, observers=observers)
            damages = observers[0].result() if observers else None
            return batch, damages

        if self.max_workers > 1 and len(chunks) > 1:
            results = self._run_parallel(chunks, run_chunk, progress_callback, asset.id)
        else:
            results = self._run_sequential(chunks, run_chunk, progress_callback, asset.id)

        if self.cancelled:
            raise RuntimeError(f"Ensemble for asset {asset.id} cancelled")

        stats = self._merge(asset, config, [r[0] for r in results], [r[1] for r in results])
        self.logger.info(f"Ensemble complete for asset {asset.id}: {config.n_paths} paths")
        return stats

    def _damage_window(self, asset: Asset, config: SimulationConfig,
                       shock_index: Optional[int], window: Optional[float]) -> Optional[int]:
        if shock_index is None:
            self.logger.info(f"Asset {asset.id} has no attack shock; damage assessment skipped")
            return None
        if window is None:
            remaining = (config.n_steps - shock_index) * config.dt
            window = asset.TK
            if window > remaining:
                self.logger.warning(
                    f"Asset {asset.id}: default window TK={asset.TK} h runs past the horizon, "
                    f"using the remaining {remaining} h"
                )
                window = remaining
        return resolve_window(config.dt, config.n_steps, shock_index, window)

    def _run_parallel(self, chunks, run_chunk, progress_callback, label) -> list:
        """Run chunks on a ThreadPoolExecutor; results are slotted by chunk position"""
        results = [None] * len(chunks)
        done = 0

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_slot = {executor.submit(run_chunk, chunk): slot for slot, chunk in enumerate(chunks)}

            for future in as_completed(future_to_slot):
                if self.cancelled:
                    for pending in future_to_slot:
                        pending.cancel()
                    break

                slot = future_to_slot[future]
                try:
                    results[slot] = future.result()
                except Exception as e:
                    self.logger.error(f"Chunk {slot} of asset {label} failed: {e}")
                    raise

                done += len(chunks[slot])
                if progress_callback:
                    progress_callback(done, sum(len(c) for c in chunks), label, "Simulating paths...")

        return results

    def _run_sequential(self, chunks, run_chunk, progress_callback, label) -> list:
        """Run chunks one after the other"""
        results = []
        done = 0
        total = sum(len(c) for c in chunks)

        for slot, chunk in enumerate(chunks):
            if self.cancelled:
                break
            try:
                results.append(run_chunk(chunk))
            except Exception as e:
                self.logger.error(f"Chunk {slot} of asset {label} failed: {e}")
                raise

            done += len(chunk)
            if progress_callback:
                progress_callback(done, total, label, "Simulating paths...")

        return results

    def _merge(self, asset: Asset, config: SimulationConfig,
               batches: List[BatchResult], damages: List[Optional[PathDamages]]) -> PathStatistics:
        series = {
            name: SeriesSummary.from_matrix(np.vstack([getattr(batch, name) for batch in batches]))
            for name in SERIES_NAMES
        }
        with np.errstate(invalid="ignore", over="ignore"):
            dM_mean = np.mean(np.vstack([batch.dM_cumulative for batch in batches]), axis=0)

        merged_damages = None
        if damages and damages[0] is not None:
            merged_damages = PathDamages(
                asset=asset,
                short_term_monetary=np.concatenate([d.short_term_monetary for d in damages]),
                raw_initial_investment=np.concatenate([d.raw_initial_investment for d in damages]),
                degraded_hours=np.concatenate([d.degraded_hours for d in damages]),
                window=damages[0].window,
                start=damages[0].start,
            )

        return PathStatistics(
            asset_id=asset.id,
            seed=config.seed,
            n_paths=config.n_paths,
            dt=config.dt,
            times=batches[0].times,
            series=series,
            dM_cumulative_mean=dM_mean,
            half_restoration_times=np.concatenate([batch.half_restoration_times for batch in batches]),
            damages=merged_damages,
        )

    def cancel(self):
        """Cancel an ongoing ensemble"""
        self.cancelled = True
        self.logger.warning("Ensemble cancellation requested")


def simulate_ensemble(
    asset: Asset,
    config: SimulationConfig,
    shocks: Sequence[AttackShock],
    rho: float = 0.0,
    window: Optional[float] = None,
    max_workers: int = 1,
    chunk_size: int = 250,
    progress_callback: Optional[Callable] = None
) -> PathStatistics:
    """Run config.n_paths independent paths (path_index 0..n_paths-1) and summarize them"""
    runner = EnsembleRunner(max_workers=max_workers, chunk_size=chunk_size)
    return runner.run(asset, config, shocks, rho=rho, window=window, progress_callback=progress_callback)
