import json
import logging
from typing import List, Union

import pandas as pd
from tqdm import tqdm

from pyexstates.errors import ConsistencyError, ExStatesError
from pyexstates.states.config import StateFamily, StateParams
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE, ENBS_ETA_CEILING
from pyexstates.states.observables import StatisticsReport, statistics_report
from sweeps.config import SweepConfig

logger = logging.getLogger(__name__)

KEY_COLUMNS = ["family", "k", "eta", "M"]


def grid_etas(config: SweepConfig) -> List[float]:
    """Grid points, clamped below 1 for the negative binomial families."""
    etas = [float(eta) for eta in config.eta_grid.points()]
    if config.family.is_negative_binomial:
        etas = [min(eta, ENBS_ETA_CEILING) for eta in etas]
    return etas


def evaluate_point(params: StateParams, observables: List[str], tail_tolerance):
    """Observables of one grid point; raises if any invariant is broken."""
    report = statistics_report(params, tail_tolerance)
    broken = report.violations()
    if broken:
        raise ConsistencyError(f"{params} violates {', '.join(broken)}")
    values = {
        "mean_n": report.mean_photon,
        "mandel_q": report.mandel_q,
        "var_x": report.var_x,
        "var_p": report.var_p,
    }
    return {name: values[name] for name in observables}


def run_sweep(config: SweepConfig, progress: bool = True) -> pd.DataFrame:
    """One row per (k, eta) in grid order, k outer and eta inner.

    A point that raises is kept as a row with empty observables and the
    message in an ``error`` column; the sweep carries on.
    """
    config.validate()
    etas = grid_etas(config)
    grid = [(k, eta) for k in config.k_values for eta in etas]
    logger.info(
        "Sweeping %s over k=%s, M=%d, %d eta points",
        config.family.value,
        config.k_values,
        config.M,
        len(etas),
    )

    records = []
    failures = 0
    pbar = tqdm(grid, colour="green", disable=not progress)
    for k, eta in pbar:
        pbar.set_description(f"{config.family.value} k={k}")
        record = {"family": config.family.value, "k": k, "eta": eta, "M": config.M}
        try:
            params = StateParams(config.family, k, eta, config.M)
            record.update(
                evaluate_point(params, config.observables, config.tail_tolerance)
            )
        except ExStatesError as err:
            failures += 1
            logger.warning(
                "Point family=%s k=%d eta=%r M=%d failed: %s",
                config.family.value,
                k,
                eta,
                config.M,
                err,
            )
            record.update({name: None for name in config.observables})
            record["error"] = f"{type(err).__name__}: {err}"
        records.append(record)

    columns = KEY_COLUMNS + list(config.observables)
    if failures:
        columns.append("error")
    df = pd.DataFrame.from_records(records, columns=columns)
    logger.info("Sweep done: %d points, %d failed", len(df), failures)
    return df


def report_point(
    family: Union[StateFamily, str],
    k: int,
    eta: float,
    M: int,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> StatisticsReport:
    """Full statistics of a single state."""
    return statistics_report(StateParams(family, k, eta, M), tail_tolerance)


def render_report(report: StatisticsReport, output_format: str = "text") -> str:
    data = report.to_dict()
    if output_format == "json":
        return json.dumps(data, indent=2) + "\n"

    lines = []
    for key, value in data.items():
        if key == "normalization_routes":
            for route, route_value in value.items():
                lines.append(f"  B via {route:<15} {route_value:.17g}")
            continue
        if isinstance(value, float):
            value = f"{value:.17g}"
        elif value is None:
            value = "undefined"
        lines.append(f"{key:<20} {value}")
    return "\n".join(lines) + "\n"
