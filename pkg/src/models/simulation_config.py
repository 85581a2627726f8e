"""Simulation run configuration"""

from dataclasses import dataclass
from typing import List, Tuple

USABILITY_MODES = ("multiplicative", "linearized")

# relative tolerance for horizon/dt to count as an integer step count
STEP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SimulationConfig:
    """Time grid, ensemble size and integration switches for one run"""

    dt: float = 1.0
    horizon: float = 2160.0
    n_paths: int = 1000
    seed: int = 42
    usability_mode: str = "linearized"
    noise_enabled: bool = True
    record_every: int = 1

    @property
    def n_steps(self) -> int:
        """Number of integration steps covering the horizon"""
        return int(round(self.horizon / self.dt))

    def violations(self, prefix: str = "simulation") -> List[Tuple[str, str]]:
        found = []
        if not self.dt > 0:
            found.append((f"{prefix}.dt", f"step size must be positive, got {self.dt}"))
        elif not self.horizon >= self.dt:
            found.append((f"{prefix}.horizon", f"horizon must be >= dt ({self.dt}), got {self.horizon}"))
        else:
            ratio = self.horizon / self.dt
            if abs(ratio - round(ratio)) > STEP_TOLERANCE * max(1.0, ratio):
                found.append((f"{prefix}.horizon", f"horizon {self.horizon} is not a whole number of steps of {self.dt}"))
        if not (isinstance(self.n_paths, int) and self.n_paths >= 1):
            found.append((f"{prefix}.n_paths", f"path count must be a positive integer, got {self.n_paths}"))
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            found.append((f"{prefix}.seed", f"seed must be an unsigned 64-bit integer, got {self.seed}"))
        if self.usability_mode not in USABILITY_MODES:
            found.append((f"{prefix}.usability_mode", f"must be one of {', '.join(USABILITY_MODES)}, got {self.usability_mode!r}"))
        if not (isinstance(self.record_every, int) and self.record_every >= 1):
            found.append((f"{prefix}.record_every", f"must be a positive integer, got {self.record_every}"))
        return found

    def validate(self):
        """Raise ValueError listing every violation"""
        found = self.violations()
        if found:
            raise ValueError("; ".join(f"{path}: {message}" for path, message in found))
