import json
import math

import numpy as np
import pandas as pd
import pytest

from pyexstates.errors import UsageError
from pyexstates.states.constants import ENBS_ETA_CEILING
from sweeps.config import EtaGrid, SweepConfig
from sweeps.presets import PRESETS
from sweeps.run_sweep import render_report, report_point, run_sweep
from sweeps.verify import (
    CheckResult,
    VerificationSummary,
    VerifyLevel,
    run_check,
    verify_suite,
)
from utils.datasets import to_csv, to_json
from utils.metrics import below_threshold_intervals, is_monotone_in_k


def _config(**kwargs):
    return SweepConfig(**kwargs).validate()


@pytest.fixture(scope="module")
def ebs_q():
    config = _config(
        family="EBS",
        k_values=[0],
        M=5,
        eta_grid=EtaGrid(0.0, 1.0, 11),
        observables=["mandel_q"],
    )
    return run_sweep(config, progress=False)


def test_ebs_sweep_q_is_minus_eta_squared(ebs_q):
    assert list(ebs_q.columns) == ["family", "k", "eta", "M", "mandel_q"]
    assert len(ebs_q) == 11
    assert math.isnan(ebs_q["mandel_q"].iloc[0]), "vacuum Q must be missing"
    for eta, q in zip(ebs_q["eta"].iloc[1:], ebs_q["mandel_q"].iloc[1:]):
        assert q == pytest.approx(-eta * eta, abs=1e-10), f"eta={eta}"


def test_enbs_sweep_q_closed_form():
    config = _config(
        family="ENBS",
        k_values=[0],
        M=5,
        eta_grid=EtaGrid(0.0, 0.9, 10),
        observables=["mandel_q"],
    )
    df = run_sweep(config, progress=False)
    for eta, q in zip(df["eta"].iloc[1:], df["mandel_q"].iloc[1:]):
        expected = eta * eta / (1.0 - eta * eta)
        assert q == pytest.approx(expected, rel=1e-9), f"eta={eta}"


def test_sweep_order_is_k_then_eta():
    config = _config(
        family="EBS",
        k_values=[2, 1],
        M=3,
        eta_grid=EtaGrid(0.2, 0.6, 3),
        observables=["mean_n", "var_x", "var_p"],
    )
    df = run_sweep(config, progress=False)
    assert df["k"].tolist() == [2, 2, 2, 1, 1, 1]
    assert df["eta"].tolist() == pytest.approx([0.2, 0.4, 0.6] * 2)
    assert (df["var_x"] * df["var_p"] >= 1.0 / 16.0 - 1e-12).all()


def test_sweep_is_deterministic(ebs_q):
    config = _config(
        family="EBS",
        k_values=[0],
        M=5,
        eta_grid=EtaGrid(0.0, 1.0, 11),
        observables=["mandel_q"],
    )
    again = run_sweep(config, progress=False)
    assert to_csv(again) == to_csv(ebs_q)
    assert to_json(again) == to_json(ebs_q)


def test_failed_points_become_error_rows():
    config = _config(
        family="ENBS",
        k_values=[0],
        M=2,
        eta_grid=EtaGrid(0.5, 1.0, 3),
        observables=["mean_n"],
    )
    df = run_sweep(config, progress=False)
    assert list(df.columns)[-1] == "error"
    assert df["eta"].iloc[-1] == ENBS_ETA_CEILING
    assert pd.isna(df["error"].iloc[0])
    assert df["error"].iloc[-1].startswith("CapacityError")
    assert math.isnan(df["mean_n"].iloc[-1])
    assert df["mean_n"].iloc[0] == pytest.approx(2 * 0.25 / 0.75, rel=1e-12)


def test_large_m_sweep_has_no_error_rows():
    config = _config(
        family="EBS",
        k_values=[1],
        M=10_000,
        eta_grid=EtaGrid(0.0, 0.02, 5),
        observables=["mean_n", "mandel_q"],
    )
    df = run_sweep(config, progress=False)
    assert "error" not in df.columns, df
    # <n> = B(2)/B(1) - 1 with B(1) = 1 + x, B(2) = x^2 - x eta^2 + 4x + 2
    eta2 = df["eta"] ** 2
    x = 10_000 * eta2
    expected = (x * x - x * eta2 + 4.0 * x + 2.0) / (1.0 + x) - 1.0
    np.testing.assert_allclose(df["mean_n"], expected, rtol=1e-10)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta_grid": EtaGrid(0.0, 1.0, 1)},
        {"eta_grid": EtaGrid(0.5, 0.5, 5)},
        {"eta_grid": EtaGrid(0.0, 1.5, 5)},
        {"k_values": []},
        {"k_values": [-1]},
        {"family": "BS", "k_values": [1]},
        {"family": "XYZ"},
        {"M": 0},
        {"observables": ["entropy"]},
        {"tail_tolerance": 0.0},
        {"output_format": "xml"},
    ],
)
def test_invalid_configs(kwargs):
    with pytest.raises(UsageError):
        SweepConfig(**kwargs).validate()


def test_csv_schema(ebs_q):
    lines = to_csv(ebs_q).splitlines()
    assert lines[0] == "family,k,eta,M,mandel_q"
    assert lines[1] == "EBS,0,0,5,"
    family, k, eta, M, q = lines[-1].split(",")
    assert (family, k, eta, M) == ("EBS", "0", "1", "5")
    assert float(q) == pytest.approx(-1.0, abs=1e-10)
    assert float(lines[2].split(",")[2]) == pytest.approx(0.1, rel=1e-15)


def test_json_uses_null_for_undefined_q(ebs_q):
    records = json.loads(to_json(ebs_q))
    assert records[0]["mandel_q"] is None
    assert records[0]["k"] == 0
    assert records[-1]["mandel_q"] == pytest.approx(-1.0, abs=1e-10)


def test_report_point_number_state():
    report = report_point("EBS", 2, 0.0, 5)
    assert report.mean_photon == pytest.approx(2.0)
    assert report.mandel_q == pytest.approx(-1.0)
    assert report.var_x == pytest.approx(1.25)
    assert report.var_p == pytest.approx(1.25)


def test_report_point_binomial_state():
    assert report_point("BS", 0, 0.5, 10).mandel_q == pytest.approx(-0.25, abs=1e-10)


def test_report_point_enbs_routes():
    report = report_point("ENBS", 1, 0.5, 1)
    assert len(report.normalization_routes) == 3
    for route, value in report.normalization_routes.items():
        assert value == pytest.approx(4.0 / 3.0, rel=1e-13), route


def test_render_report_formats():
    report = report_point("ENBS", 1, 0.5, 1)
    data = json.loads(render_report(report, "json"))
    assert data["normalization"] == pytest.approx(4.0 / 3.0)
    text = render_report(report, "text")
    assert "photon_statistics" in text
    assert "B via finite_sum" in text


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_are_valid(name):
    config = PRESETS[name]().validate()
    assert config.k_values == [0, 1, 2, 3]
    assert config.eta_grid.count == 201
    if config.family.is_negative_binomial:
        assert config.eta_grid.stop == 0.9


def test_below_threshold_intervals():
    df = pd.DataFrame(
        {
            "k": [0] * 5 + [1] * 5,
            "eta": [0.0, 0.25, 0.5, 0.75, 1.0] * 2,
            "var_x": [0.3, 0.2, 0.2, 0.3, 0.2, 0.3, 0.3, 0.1, np.nan, 0.3],
        }
    )
    intervals = below_threshold_intervals(df, "var_x", 0.25)
    assert intervals == {0: [(0.25, 0.5), (1.0, 1.0)], 1: [(0.5, 0.5)]}


def test_is_monotone_in_k():
    df = pd.DataFrame(
        {"k": [0, 0, 1, 1, 2, 2], "eta": [0.2, 0.4] * 3, "q": [0, -1, 0, -2, 0, -3]}
    )
    assert is_monotone_in_k(df, "q", 0.4)
    assert not is_monotone_in_k(df, "q", 0.4, decreasing=False)


def test_run_check_reports_exceptions():
    def check_broken():
        raise RuntimeError("boom")

    result = run_check(check_broken)
    assert result.name == "broken"
    assert not result.passed
    assert "boom" in result.detail


def test_summary_rendering():
    summary = VerificationSummary(
        VerifyLevel.FAST,
        [CheckResult("a", True, "ok", 0.1), CheckResult("b", False, "bad", 0.2)],
    )
    assert not summary.passed
    assert [r.name for r in summary.failed] == ["b"]
    assert "1 of 2 checks failed" in summary.render()


def test_fast_verification_passes():
    summary = verify_suite(VerifyLevel.FAST)
    assert summary.passed, summary.render()


@pytest.mark.slow
def test_full_verification_passes():
    summary = verify_suite("full")
    assert summary.passed, summary.render()
