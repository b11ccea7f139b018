"""Truncation of positive series with eventually decreasing term ratios."""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from pyexstates.errors import CapacityError, DomainError
from pyexstates.states.constants import (
    AMPLITUDE_TAIL_LIMIT,
    MAX_SERIES_TERMS,
    MIN_TAIL_TOLERANCE,
    SERIES_CHUNK,
    TAIL_TOLERANCE_STEP,
)

logger = logging.getLogger(__name__)

LogTerms = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TruncatedSeries:
    """Retained log-terms t_0..t_N of a positive series and a tail bound.

    Attributes:
        log_terms (np.ndarray): ln t_n for n = 0..N.
        tail_bound (float): Upper bound on sum_{n > N} t_n.
    """

    log_terms: np.ndarray
    tail_bound: float

    @property
    def terms_used(self) -> int:
        return self.log_terms.size

    def log_sum(self) -> float:
        return float(logsumexp(self.log_terms))


def truncate_log_series(
    log_terms: LogTerms,
    tolerance: float,
    relative: bool = False,
    max_terms: int = MAX_SERIES_TERMS,
) -> TruncatedSeries:
    """Cut a positive series once a ratio-test bound on its tail is small.

    The series must have non-increasing term ratios r_n = t_{n+1}/t_n from
    the cut onwards; then sum_{n > N} t_n <= t_N r_N / (1 - r_N) once
    r_N < 1. The cut N is the first index where that bound is below
    ``tolerance`` (or below ``tolerance`` times the partial sum t_0 + ... +
    t_N when ``relative`` is set).

    Args:
        log_terms: Maps an index array n to ln t_n (-inf for a zero term).
        tolerance: Absolute or relative bound on the dropped tail.
        relative: Compare the bound with the partial sum.
        max_terms: Give up beyond this many terms.

    Returns:
        TruncatedSeries with the retained terms and the tail bound.
    """
    if not tolerance > 0.0:
        raise DomainError(f"tolerance must be positive, got {tolerance!r}")
    log_tolerance = math.log(tolerance)

    length = SERIES_CHUNK
    while True:
        logs = np.asarray(log_terms(np.arange(length + 1)), dtype=np.float64)
        with np.errstate(invalid="ignore"):
            log_ratios = logs[1:] - logs[:-1]
        # A zero term is followed only by zero terms in every family here.
        log_ratios = np.nan_to_num(log_ratios, nan=-np.inf, posinf=np.inf)
        head = logs[:-1]

        converging = log_ratios < 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            log_gaps = np.log1p(-np.exp(np.minimum(log_ratios, 0.0)))
            log_bounds = head + log_ratios - log_gaps
            if relative:
                log_bounds = log_bounds - np.logaddexp.accumulate(head)
        log_bounds = np.where(converging, log_bounds, np.inf)
        log_bounds = np.nan_to_num(log_bounds, nan=-np.inf, posinf=np.inf)

        hits = np.flatnonzero(converging & (log_bounds < log_tolerance))
        if hits.size:
            cut = int(hits[0])
            log_tail = float(log_bounds[cut])
            if relative:
                log_tail += float(np.logaddexp.reduce(head[: cut + 1]))
            tail_bound = math.exp(log_tail)
            logger.debug(
                "Series cut after %d terms, tail bound %.3e",
                cut + 1,
                tail_bound,
            )
            return TruncatedSeries(
                log_terms=logs[: cut + 1], tail_bound=tail_bound
            )

        if length >= max_terms:
            raise CapacityError(
                f"series did not reach tolerance {tolerance:g} within "
                f"{max_terms} terms"
            )
        length = min(2 * length, max_terms)


def amplitude_tail_bound(squared_edge: float, tail: float, top: int) -> float:
    """Cauchy-Schwarz bound on the neighbouring-amplitude sums lost to a cut.

    Args:
        squared_edge: Sum of the last two retained squared amplitudes.
        tail: Bound on the dropped squared amplitudes.
        top: Highest retained Fock index.
    """
    if tail <= 0.0:
        return 0.0
    return math.sqrt((squared_edge + tail) * tail) * (top + 3.0)


def truncate_amplitude_series(
    log_weights: LogTerms,
    tolerance: float,
    offset: int = 0,
    max_terms: int = MAX_SERIES_TERMS,
) -> TruncatedSeries:
    """Truncate squared amplitudes so that <a> and <a^2> survive the cut.

    A tail below ``tolerance`` is not enough when the retained mass is
    itself tiny or the cut sits far out: the products D_n D_{n+1} near the
    cut are only bounded by the square root of the tail. The tolerance is
    tightened until amplitude_tail_bound on the normalized weights is
    within half of AMPLITUDE_TAIL_LIMIT.

    Args:
        log_weights: Maps n - offset to the log squared amplitude at n.
        tolerance: Starting absolute bound on the dropped tail.
        offset: Fock index of the first term.
        max_terms: Give up beyond this many terms.
    """
    while True:
        series = truncate_log_series(log_weights, tolerance, max_terms=max_terms)
        log_total = series.log_sum()
        edge = float(np.exp(series.log_terms[-2:] - log_total).sum())
        tail = series.tail_bound * math.exp(-log_total)
        top = offset + series.terms_used - 1
        bound = amplitude_tail_bound(edge, tail, top)
        if bound <= 0.5 * AMPLITUDE_TAIL_LIMIT or tolerance <= MIN_TAIL_TOLERANCE:
            return series
        logger.debug(
            "Amplitude tail bound %.3e at tolerance %.1e, tightening",
            bound,
            tolerance,
        )
        tolerance = max(tolerance * TAIL_TOLERANCE_STEP, MIN_TAIL_TOLERANCE)
