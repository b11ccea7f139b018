"""Summaries of sweep datasets used to check qualitative claims."""

from typing import Dict, List, Tuple

import numpy as np
import pandas as pd


def below_threshold_intervals(
    df: pd.DataFrame, column: str, threshold: float
) -> Dict[int, List[Tuple[float, float]]]:
    """Maximal runs of consecutive grid points with ``column < threshold``.

    Returns, per k, the (first eta, last eta) of each run. Missing values
    end a run.
    """
    intervals = {}
    for k, group in df.sort_values(["k", "eta"]).groupby("k", sort=True):
        eta = group["eta"].to_numpy()
        below = (group[column] < threshold).to_numpy()
        runs = []
        start = None
        for i, flag in enumerate(below):
            if flag and start is None:
                start = i
            elif not flag and start is not None:
                runs.append((float(eta[start]), float(eta[i - 1])))
                start = None
        if start is not None:
            runs.append((float(eta[start]), float(eta[-1])))
        intervals[int(k)] = runs
    return intervals


def interval_length(runs: List[Tuple[float, float]]) -> float:
    return sum(stop - start for start, stop in runs)


def is_monotone_in_k(
    df: pd.DataFrame, column: str, eta: float, decreasing: bool = True
) -> bool:
    """Whether ``column`` at the grid point nearest ``eta`` is monotone in k."""
    values = []
    for _, group in df.sort_values("k").groupby("k", sort=True):
        nearest = (group["eta"] - eta).abs().idxmin()
        values.append(group.loc[nearest, column])
    steps = np.diff(np.asarray(values, dtype=np.float64))
    return bool(np.all(steps <= 0.0) if decreasing else np.all(steps >= 0.0))
