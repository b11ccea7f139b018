"""Named sweeps that regenerate the figure datasets.

Figures 1 and 2 plot Mandel Q, figures 3 and 4 the quadrature variances.
The k values, M and grid density are chosen here; they are not read off
the published plots.
"""

from typing import Callable, Dict

from pyexstates.states.config import StateFamily
from sweeps.config import EtaGrid, SweepConfig

PRESET_K_VALUES = [0, 1, 2, 3]
PRESET_M = 10
PRESET_ETA_COUNT = 201
ENBS_ETA_STOP = 0.9  # B^- needs ever longer series as eta -> 1


def fig1() -> SweepConfig:
    """Q of the EBS as a function of eta."""
    return SweepConfig(
        family=StateFamily.EBS,
        k_values=list(PRESET_K_VALUES),
        M=PRESET_M,
        eta_grid=EtaGrid(0.0, 1.0, PRESET_ETA_COUNT),
        observables=["mean_n", "mandel_q"],
    )


def fig2() -> SweepConfig:
    """Q of the ENBS as a function of eta."""
    return SweepConfig(
        family=StateFamily.ENBS,
        k_values=list(PRESET_K_VALUES),
        M=PRESET_M,
        eta_grid=EtaGrid(0.0, ENBS_ETA_STOP, PRESET_ETA_COUNT),
        observables=["mean_n", "mandel_q"],
    )


def fig3() -> SweepConfig:
    """Var(x) of the EBS; squeezing shows up as values below 1/4."""
    return SweepConfig(
        family=StateFamily.EBS,
        k_values=list(PRESET_K_VALUES),
        M=PRESET_M,
        eta_grid=EtaGrid(0.0, 1.0, PRESET_ETA_COUNT),
        observables=["var_x", "var_p"],
    )


def fig4() -> SweepConfig:
    """Var(p) of the ENBS."""
    return SweepConfig(
        family=StateFamily.ENBS,
        k_values=list(PRESET_K_VALUES),
        M=PRESET_M,
        eta_grid=EtaGrid(0.0, ENBS_ETA_STOP, PRESET_ETA_COUNT),
        observables=["var_x", "var_p"],
    )


PRESETS: Dict[str, Callable[[], SweepConfig]] = {
    "fig1": fig1,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
}
