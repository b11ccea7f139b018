import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pyexstates.errors import DomainError, RouteError
from pyexstates.oracle.rational import (
    enbs_direct_terms,
    enbs_finite_sum_terms,
    nbs_squared_terms,
)
from pyexstates.states.config import NormalizationRoute, StateFamily, StateParams
from pyexstates.states.excited import excited_expansion
from pyexstates.states.negative_binomial import (
    NEGATIVE_BINOMIAL,
    nbs_coefficients,
    nbs_ladder_lowering,
    nbs_lowered_moment,
    normalization_enbs,
)

ETA_GRID = [0.1 * i for i in range(1, 10)]


def _nbs(eta, M, tail_tolerance=1e-14):
    return nbs_coefficients(StateParams(StateFamily.NBS, 0, eta, M), tail_tolerance)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=0.9, allow_nan=False),
    st.integers(min_value=1, max_value=30),
)
def test_nbs_is_normalized_within_tail_bound(eta, M):
    expansion = _nbs(eta, M)
    assert expansion.truncation_tail_bound <= 1e-14
    assert np.all(expansion.coefficients >= 0.0)
    assert expansion.norm_squared() == pytest.approx(1.0, abs=1e-12)


def test_nbs_truncation_bounds_true_tail():
    expansion = _nbs(0.5, 3, tail_tolerance=1e-10)
    exact = nbs_squared_terms(Fraction(1, 4), 3, expansion.top + 1).sum()
    dropped = 1.0 - float(exact)
    assert 0.0 <= dropped <= expansion.truncation_tail_bound


def test_nbs_at_zero_is_vacuum():
    expansion = _nbs(0.0, 4)
    assert expansion.top == 0
    assert expansion.amplitude(0) == 1.0


@pytest.mark.parametrize("tail_tolerance", [0.0, 1e-6])
def test_nbs_rejects_loose_tolerance(tail_tolerance):
    with pytest.raises(DomainError):
        _nbs(0.5, 3, tail_tolerance)


@pytest.mark.parametrize("eta", [1.0, 1.5])
def test_nbs_requires_eta_below_one(eta):
    with pytest.raises(DomainError):
        StateParams(StateFamily.NBS, 0, eta, 3)


def test_nbs_coefficients_requires_nbs():
    with pytest.raises(DomainError):
        nbs_coefficients(StateParams(StateFamily.BS, 0, 0.5, 3))


@pytest.mark.parametrize("route", list(NormalizationRoute)[:3])
def test_normalization_exact_spot_value(route):
    # k = 1, eta^2 = 1/4, M = 1: B^- = 1 + 1/3
    value = normalization_enbs(1, 0.5, 1, route).value
    assert value == pytest.approx(4.0 / 3.0, rel=1e-13), route.value


@pytest.mark.parametrize("k, M", itertools.product(range(6), (1, 3, 10)))
def test_normalization_at_zero_is_factorial(k, M):
    for route in (NormalizationRoute.DIRECT_SUM, NormalizationRoute.FINITE_SUM):
        assert normalization_enbs(k, 0.0, M, route).value == math.factorial(k)


def test_hypergeometric_route_is_singular_at_zero():
    with pytest.raises(RouteError) as info:
        normalization_enbs(2, 0.0, 5, NormalizationRoute.HYPERGEOMETRIC)
    assert info.value.fallback == "finite_sum"


def test_reversed_route_is_binomial_only():
    with pytest.raises(DomainError):
        normalization_enbs(2, 0.5, 5, NormalizationRoute.REVERSED_SUM)


@pytest.mark.parametrize(
    "k, M, eta", itertools.product(range(6), (2, 5, 10, 50), ETA_GRID)
)
def test_routes_agree(k, M, eta):
    values = NEGATIVE_BINOMIAL.all_normalizations(k, eta, M)
    assert set(values) == set(NEGATIVE_BINOMIAL.routes)
    reference = values[NormalizationRoute.FINITE_SUM].value
    for route, value in values.items():
        assert value.value == pytest.approx(reference, rel=1e-10), (
            f"k={k} M={M} eta={eta}: {route.value} gives {value.value!r}, "
            f"finite sum {reference!r}"
        )


def test_direct_sum_records_truncation():
    value = normalization_enbs(3, 0.7, 4, NormalizationRoute.DIRECT_SUM)
    assert value.terms_used > 4
    assert 0.0 < value.tail_bound <= 1e-14 * value.value * (1.0 + 1e-9)


@pytest.mark.parametrize("k, M", [(1, 1), (2, 3), (4, 6)])
def test_finite_sum_matches_exact_rational(k, M):
    exact = enbs_finite_sum_terms(k, Fraction(9, 16), M).sum()
    value = normalization_enbs(k, 0.75, M).value
    assert value == pytest.approx(float(exact), rel=1e-13)
    # The direct series converges onto the same number.
    partial = enbs_direct_terms(k, Fraction(9, 16), M, 200).sum()
    assert float(partial) == pytest.approx(float(exact), rel=1e-10)


@pytest.mark.parametrize("k, eta, M", [(1, 0.3, 2), (2, 0.6, 5), (3, 0.8, 1)])
def test_lowered_moment_matches_ladder_scale(k, eta, M):
    scale, target = nbs_ladder_lowering(k, eta, M)
    assert target == StateParams(StateFamily.NBS, 0, eta, M + k)
    assert scale**2 == pytest.approx(nbs_lowered_moment(k, eta, M), rel=1e-13)


def test_lowered_moment_closed_form():
    # (eta^2/(1-eta^2))^k (M+k-1)!/(M-1)! at eta^2 = 1/4, k = 2, M = 3
    assert nbs_lowered_moment(2, 0.5, 3) == pytest.approx(12 / 9, rel=1e-14)
    assert nbs_lowered_moment(0, 0.5, 3) == 1.0
    assert nbs_lowered_moment(2, 0.0, 3) == 0.0


@pytest.mark.parametrize("k, eta, M", [(1, 0.3, 5), (3, 0.8, 10), (2, 0.9, 2)])
def test_excited_expansion(k, eta, M):
    expansion = excited_expansion(StateParams(StateFamily.ENBS, k, eta, M))
    assert expansion.offset == k
    assert expansion.amplitude(k - 1) == 0.0
    assert expansion.truncation_tail_bound <= 1e-14
    assert np.all(expansion.coefficients > 0.0)
    assert expansion.norm_squared() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "M, eta",
    [(1_000, 0.05), (1_000, 0.5), (1_000, 0.95), (10_000, 0.1), (10_000, 0.3)],
)
@pytest.mark.parametrize("k", [1, 3])
def test_excited_expansion_normalized_for_large_m(M, eta, k):
    expansion = excited_expansion(StateParams(StateFamily.ENBS, k, eta, M))
    assert expansion.norm_squared() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k, eta, M", [(0, 0.5, 3), (0, 0.9, 10), (2, 0.7, 4)])
def test_amplitudes_do_not_depend_on_tolerance(k, eta, M):
    params = StateParams(StateFamily.ENBS, k, eta, M)
    loose = excited_expansion(params, tail_tolerance=1e-14)
    tight = excited_expansion(params, tail_tolerance=1e-30)
    assert tight.top >= loose.top
    np.testing.assert_allclose(
        tight.coefficients[: loose.coefficients.size],
        loose.coefficients,
        rtol=1e-13,
    )


def test_excited_expansion_at_zero_is_number_state():
    expansion = excited_expansion(StateParams(StateFamily.ENBS, 3, 0.0, 4))
    assert expansion.offset == 3
    assert expansion.top == 3
    assert expansion.amplitude(3) == 1.0


def test_excited_amplitudes_follow_definition():
    k, eta, M = 2, 0.5, 3
    base = _nbs(eta, M)
    b = normalization_enbs(k, eta, M).value
    excited = excited_expansion(StateParams(StateFamily.ENBS, k, eta, M))
    for m in range(20):
        expected = base.amplitude(m) * math.sqrt(math.perm(m + k, k) / b)
        assert excited.amplitude(m + k) == pytest.approx(expected, rel=1e-12)
