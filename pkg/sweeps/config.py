from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from pyexstates.errors import UsageError
from pyexstates.states.config import StateFamily
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE

OBSERVABLES = ("mean_n", "mandel_q", "var_x", "var_p")
OUTPUT_FORMATS = ("csv", "json")


@dataclass
class EtaGrid:
    """Uniform eta grid, both endpoints included."""

    start: float = 0.0
    stop: float = 1.0
    count: int = 201

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class SweepConfig:
    """Configuration of one parameter sweep."""

    family: StateFamily = StateFamily.EBS
    k_values: List[int] = field(default_factory=lambda: [0, 1, 2, 3])
    M: int = 10
    eta_grid: EtaGrid = field(default_factory=EtaGrid)

    # Columns after family,k,eta,M; subset of OBSERVABLES
    observables: List[str] = field(default_factory=lambda: ["mandel_q"])
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    # OUTPUT
    output_format: str = "csv"  # Options: csv, json
    out: Optional[str] = None  # None writes to stdout

    def validate(self) -> "SweepConfig":
        """Coerce field types and raise UsageError on the first violation."""
        try:
            self.family = StateFamily(self.family)
        except ValueError:
            raise UsageError(
                f"family must be one of "
                f"{[f.value for f in StateFamily]}, got {self.family!r}"
            ) from None

        if not self.k_values:
            raise UsageError("k_values must not be empty")
        if any(int(k) != k or k < 0 for k in self.k_values):
            raise UsageError(
                f"k_values must be integers >= 0, got {self.k_values}"
            )
        self.k_values = [int(k) for k in self.k_values]
        if not self.family.is_excited and self.k_values != [0]:
            raise UsageError(
                f"{self.family.value} takes k_values=[0] only, "
                f"got {self.k_values}"
            )
        if int(self.M) != self.M or self.M < 1:
            raise UsageError(f"M must be an integer >= 1, got {self.M}")
        self.M = int(self.M)

        grid = self.eta_grid
        if grid.count < 2:
            raise UsageError(f"eta_grid.count must be >= 2, got {grid.count}")
        if not 0.0 <= grid.start < grid.stop <= 1.0:
            raise UsageError(
                "eta_grid needs 0 <= start < stop <= 1, got "
                f"start={grid.start}, stop={grid.stop}"
            )

        unknown = sorted(set(self.observables) - set(OBSERVABLES))
        if not self.observables or unknown:
            raise UsageError(
                f"observables must be a non-empty subset of {list(OBSERVABLES)}"
                f", got {self.observables}"
            )
        if not self.tail_tolerance > 0.0:
            raise UsageError(
                f"tail_tolerance must be positive, got {self.tail_tolerance}"
            )
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(
                f"output_format must be one of {list(OUTPUT_FORMATS)}, "
                f"got {self.output_format!r}"
            )
        return self
