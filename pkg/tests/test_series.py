import math

import numpy as np
import pytest

from pyexstates.errors import CapacityError, DomainError
from pyexstates.states.constants import AMPLITUDE_TAIL_LIMIT
from pyexstates.states.series import (
    amplitude_tail_bound,
    truncate_amplitude_series,
    truncate_log_series,
)

LOG_HALF = math.log(0.5)


def _geometric(n):
    return n * LOG_HALF


def _tiny_eta_nbs(n):
    # NBS at eta = 2^-8, M = 1: t_n = eta^(2n) (1 - eta^2)
    return n * math.log(2.0**-16) + math.log1p(-(2.0**-16))


def test_geometric_tail_bound_is_exact():
    series = truncate_log_series(_geometric, 1e-10)
    # sum_{n > N} 2^-n = 2^-N, first below 1e-10 at N = 34
    assert series.terms_used == 35
    assert series.tail_bound == pytest.approx(0.5**34, rel=1e-12)
    assert series.log_sum() == pytest.approx(math.log(2.0 - 0.5**34), rel=1e-14)


def test_relative_tolerance_scales_with_partial_sum():
    scaled = truncate_log_series(
        lambda n: _geometric(n) + 50.0, 1e-10, relative=True
    )
    plain = truncate_log_series(_geometric, 1e-10, relative=True)
    assert scaled.terms_used == plain.terms_used
    assert scaled.tail_bound == pytest.approx(plain.tail_bound * math.exp(50.0))


def test_prefix_does_not_depend_on_tolerance():
    loose = truncate_log_series(_geometric, 1e-8)
    tight = truncate_log_series(_geometric, 1e-20)
    assert tight.terms_used > loose.terms_used
    np.testing.assert_array_equal(
        tight.log_terms[: loose.terms_used], loose.log_terms
    )


@pytest.mark.parametrize("tolerance", [0.0, -1.0, math.nan])
def test_rejects_non_positive_tolerance(tolerance):
    with pytest.raises(DomainError):
        truncate_log_series(_geometric, tolerance)


def test_divergent_series_hits_capacity():
    with pytest.raises(CapacityError):
        truncate_log_series(lambda n: np.zeros(n.shape), 1e-10, max_terms=1024)


def test_amplitude_tail_bound():
    assert amplitude_tail_bound(0.5, 0.0, 10) == 0.0
    assert amplitude_tail_bound(0.75, 0.25, 1) == pytest.approx(2.0)


def test_amplitude_truncation_tightens_tolerance():
    plain = truncate_log_series(_tiny_eta_nbs, 1e-14)
    series = truncate_amplitude_series(_tiny_eta_nbs, 1e-14)
    assert plain.terms_used == 3
    assert series.terms_used == 4
    log_total = series.log_sum()
    edge = float(np.exp(series.log_terms[-2:] - log_total).sum())
    tail = series.tail_bound * math.exp(-log_total)
    bound = amplitude_tail_bound(edge, tail, series.terms_used - 1)
    assert bound <= 0.5 * AMPLITUDE_TAIL_LIMIT


def test_amplitude_truncation_keeps_adequate_cut():
    plain = truncate_log_series(_geometric, 1e-14)
    series = truncate_amplitude_series(_geometric, 1e-14)
    assert series.terms_used >= plain.terms_used
    np.testing.assert_array_equal(
        series.log_terms[: plain.terms_used], plain.log_terms
    )
