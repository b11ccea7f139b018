import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pyexstates.errors import ConsistencyError, TruncationRiskError
from pyexstates.states import observables
from pyexstates.states.config import FockExpansion, StateFamily, StateParams
from pyexstates.states.excited import state_expansion
from pyexstates.states.observables import (
    MomentSet,
    amplitude_moments,
    mandel_q,
    mandel_q_from_normalization,
    number_moments_from_expansion,
    number_moments_from_normalization,
    quadrature_variances,
    statistics_report,
)

ETA_GRID = [0.1 * i for i in range(1, 10)]
M_VALUES = [2, 5, 10, 50]


def _report(family, k, eta, M):
    return statistics_report(StateParams(family, k, eta, M))


@pytest.mark.parametrize("M, eta", itertools.product(M_VALUES, ETA_GRID))
def test_bs_mandel_q_is_minus_eta_squared(M, eta):
    q = _report("BS", 0, eta, M).mandel_q
    assert q == pytest.approx(-eta * eta, abs=1e-10), f"M={M} eta={eta}"


@pytest.mark.parametrize("M, eta", itertools.product(M_VALUES, ETA_GRID))
def test_nbs_mandel_q_closed_form(M, eta):
    q = _report("NBS", 0, eta, M).mandel_q
    expected = eta * eta / (1.0 - eta * eta)
    assert q == pytest.approx(expected, rel=1e-9), f"M={M} eta={eta}"


def test_mandel_q_helper():
    assert mandel_q(0.0, 0.0) is None
    assert mandel_q(2.0, 4.0) == -1.0
    assert mandel_q(1.0, 2.0) == 0.0


def test_number_state_report():
    report = _report("EBS", 2, 0.0, 5)
    assert report.mean_photon == pytest.approx(2.0, abs=1e-14)
    assert report.mandel_q == pytest.approx(-1.0, abs=1e-14)
    assert report.var_x == pytest.approx(1.25, abs=1e-14)
    assert report.var_p == pytest.approx(1.25, abs=1e-14)
    assert report.photon_statistics == "sub-Poissonian"
    assert not report.x_squeezed and not report.p_squeezed


def test_vacuum_report_has_undefined_q():
    report = _report("BS", 0, 0.0, 3)
    assert report.mandel_q is None
    assert report.photon_statistics == "undefined"
    assert report.var_x == 0.25
    assert report.var_p == 0.25
    assert report.to_dict()["mandel_q"] is None
    assert report.violations() == []


@pytest.mark.parametrize(
    "family, k, eta, M",
    [
        ("BS", 0, 0.5, 10),
        ("NBS", 0, 0.5, 10),
        ("EBS", 2, 0.5, 10),
        ("EBS", 1, 0.9, 3),
        ("ENBS", 1, 0.4, 3),
        ("ENBS", 3, 0.7, 8),
    ],
)
def test_normalization_ratio_q_matches_coefficients(family, k, eta, M):
    from_ratios = mandel_q_from_normalization(family, k, eta, M)
    from_report = _report(family, k, eta, M).mandel_q
    assert from_ratios == pytest.approx(from_report, rel=1e-9)


def test_normalization_ratio_q_of_vacuum_is_undefined():
    assert mandel_q_from_normalization("EBS", 0, 0.0, 5) is None


@pytest.mark.parametrize(
    "family, k, eta, M",
    [("EBS", 3, 0.6, 10), ("ENBS", 2, 0.6, 4), ("NBS", 0, 0.8, 2)],
)
def test_number_moments_two_ways(family, k, eta, M):
    expansion = state_expansion(StateParams(family, k, eta, M))
    ratio = number_moments_from_normalization(family, k, eta, M)
    direct = number_moments_from_expansion(expansion)
    assert ratio == pytest.approx(direct, rel=1e-10, abs=1e-12)


def test_number_moments_of_fock_state():
    assert number_moments_from_expansion(FockExpansion.fock(3)) == (3.0, 9.0)
    assert amplitude_moments(FockExpansion.fock(3)) == (0.0, 0.0)


def test_fock_expansion_from_log_weights():
    expansion = FockExpansion.from_log_weights(
        2, np.log([1.0, 3.0]) + 50.0, tail_bound=math.exp(50.0)
    )
    assert expansion.offset == 2
    np.testing.assert_allclose(
        expansion.coefficients, [0.5, math.sqrt(3.0) / 2.0], rtol=1e-14
    )
    assert expansion.truncation_tail_bound == pytest.approx(0.25, rel=1e-14)
    assert expansion.norm_squared() == pytest.approx(1.0, abs=1e-15)


def test_amplitude_moments_refuse_heavy_tails():
    expansion = FockExpansion(0, [0.6, 0.8], truncation_tail_bound=1e-3)
    with pytest.raises(TruncationRiskError):
        amplitude_moments(expansion)


@pytest.mark.parametrize(
    "family, k, eta, M",
    [
        ("NBS", 0, 0.00390625, 1),
        ("NBS", 0, 1e-6, 50),
        ("ENBS", 1, 0.0045, 10),
        ("ENBS", 2, 0.0045, 10),
        ("ENBS", 3, 0.0045, 10),
    ],
)
def test_small_eta_amplitudes_survive_truncation(family, k, eta, M):
    expansion = state_expansion(StateParams(family, k, eta, M))
    amplitude_moments(expansion)
    report = _report(family, k, eta, M)
    assert report.violations() == []
    assert report.moments.mean_n == pytest.approx(
        number_moments_from_normalization(family, k, eta, M)[0],
        rel=1e-10,
        abs=1e-14,
    )


def test_quadrature_variances_of_vacuum():
    assert quadrature_variances(MomentSet(0.0, 0.0, 0.0, 0.0)) == (0.25, 0.25)


def test_moment_violations():
    assert MomentSet(2.0, 0.0, 1.0, 1.0).violations() == ["mean_a^2 <= mean_n"]
    assert MomentSet(0.0, 0.0, 2.0, 3.0).violations() == ["mean_n2 >= mean_n^2"]


def test_photon_statistics_classification():
    assert _report("BS", 0, 0.5, 10).photon_statistics == "sub-Poissonian"
    assert _report("NBS", 0, 0.5, 10).photon_statistics == "super-Poissonian"


def test_report_lists_every_route():
    report = _report("ENBS", 2, 0.5, 4)
    assert set(report.normalization_routes) == {
        "direct_sum",
        "finite_sum",
        "hypergeometric",
    }
    assert report.route_spread < 1e-10
    assert report.normalization.route.value == "finite_sum"
    data = report.to_dict()
    assert data["family"] == "ENBS"
    assert data["normalization"] == report.normalization.value


def test_report_detects_disagreeing_paths(monkeypatch):
    monkeypatch.setattr(
        observables,
        "number_moments_from_normalization",
        lambda *args, **kwargs: (10.0, 100.0),
    )
    with pytest.raises(ConsistencyError):
        _report("EBS", 1, 0.5, 4)


@st.composite
def state_params(draw):
    family = draw(st.sampled_from(list(StateFamily)))
    k = draw(st.integers(min_value=0, max_value=4)) if family.is_excited else 0
    eta = draw(st.floats(min_value=0.0, max_value=0.9, allow_nan=False))
    M = draw(st.integers(min_value=1, max_value=30))
    return StateParams(family, k, eta, M)


@settings(max_examples=60, deadline=None)
@given(state_params())
def test_universal_invariants(params):
    report = statistics_report(params)
    assert report.violations() == [], f"{params}: {report.violations()}"
    assert report.uncertainty_product >= 1.0 / 16.0 - 1e-12
    assert report.route_spread < 1e-10
    if report.mandel_q is not None:
        assert report.mandel_q >= -1.0 - 1e-12
