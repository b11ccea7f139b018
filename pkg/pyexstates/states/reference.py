"""Coherent states and excited coherent states as limit references.

Both binomial families approach the excited coherent state a^dag^k |alpha>
when M grows with eta^2 M = alpha^2 held fixed.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from pyexstates.errors import DomainError
from pyexstates.states.config import FockExpansion
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE
from pyexstates.states.series import (
    truncate_amplitude_series,
    truncate_log_series,
)
from pyexstates.states.special_functions import default_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoherentParams:
    """Real amplitude alpha >= 0 of a coherent state."""

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha < 0.0:
            raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)


def _log_poisson(alpha: float, n: np.ndarray) -> np.ndarray:
    """ln(e^(-alpha^2) alpha^(2n) / n!)."""
    return (
        -alpha * alpha
        + 2.0 * n * math.log(alpha)
        - default_table().lookup(n)
    )


def coherent_expansion(
    alpha: float, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> FockExpansion:
    """e^(-alpha^2/2) alpha^n / sqrt(n!) cut where the Poisson tail is small."""
    alpha = CoherentParams(alpha).alpha
    if alpha == 0.0:
        return FockExpansion.fock(0)
    series = truncate_amplitude_series(
        lambda n: _log_poisson(alpha, n), tail_tolerance
    )
    return FockExpansion.from_log_weights(0, series.log_terms, series.tail_bound)


def ecs_expansion(
    k: int, alpha: float, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> FockExpansion:
    """Normalized a^dag^k |alpha>, normalized by its directly summed norm."""
    alpha = CoherentParams(alpha).alpha
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return coherent_expansion(alpha, tail_tolerance)
    if alpha == 0.0:
        return FockExpansion.fock(k)

    table = default_table()

    def log_weights(n: np.ndarray) -> np.ndarray:
        # |<n+k| a^dag^k |alpha>|^2 = |<n|alpha>|^2 (n+k)!/n!
        return _log_poisson(alpha, n) + table.lookup(n + k) - table.lookup(n)

    # First pass fixes the scale, second cuts on the normalized tail.
    rough = truncate_log_series(log_weights, tail_tolerance, relative=True)
    log_norm = rough.log_sum()
    series = truncate_amplitude_series(
        lambda n: log_weights(n) - log_norm, tail_tolerance, offset=k
    )
    logger.debug(
        "ECS(k=%d, alpha=%g) ln norm^2 = %.17g",
        k,
        alpha,
        log_norm + series.log_sum(),
    )
    return FockExpansion.from_log_weights(k, series.log_terms, series.tail_bound)


def limit_distance(first: FockExpansion, second: FockExpansion) -> float:
    """Largest amplitude difference over the union of retained indices."""
    low = min(first.offset, second.offset)
    high = max(first.top, second.top)
    dimension = high + 1
    a = first.to_dense(dimension)[low:]
    b = second.to_dense(dimension)[low:]
    return float(np.abs(a - b).max())
