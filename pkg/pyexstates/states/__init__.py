from pyexstates.states.config import (
    FockExpansion,
    NormalizationRoute,
    NormalizationValue,
    StateFamily,
    StateParams,
)
from pyexstates.states.special_functions import (
    Hyp2F1Args,
    LogFactorialTable,
    hyp2f1_terminating,
    log_binomial,
    log_factorial,
    normal_ordering_coefficients,
)
from pyexstates.states.binomial import bs_coefficients, normalization_ebs
from pyexstates.states.negative_binomial import (
    nbs_coefficients,
    nbs_ladder_lowering,
    nbs_lowered_moment,
    normalization_enbs,
)
from pyexstates.states.excited import (
    excited_expansion,
    normalization,
    state_expansion,
)
from pyexstates.states.observables import (
    MomentSet,
    StatisticsReport,
    amplitude_moments,
    mandel_q,
    mandel_q_from_normalization,
    number_moments_from_expansion,
    number_moments_from_normalization,
    quadrature_variances,
    statistics_report,
)
from pyexstates.states.reference import (
    CoherentParams,
    coherent_expansion,
    ecs_expansion,
    limit_distance,
)

__all__ = [
    "FockExpansion",
    "NormalizationRoute",
    "NormalizationValue",
    "StateFamily",
    "StateParams",
    "Hyp2F1Args",
    "LogFactorialTable",
    "hyp2f1_terminating",
    "log_binomial",
    "log_factorial",
    "normal_ordering_coefficients",
    "bs_coefficients",
    "normalization_ebs",
    "nbs_coefficients",
    "nbs_ladder_lowering",
    "nbs_lowered_moment",
    "normalization_enbs",
    "excited_expansion",
    "normalization",
    "state_expansion",
    "MomentSet",
    "StatisticsReport",
    "amplitude_moments",
    "mandel_q",
    "mandel_q_from_normalization",
    "number_moments_from_expansion",
    "number_moments_from_normalization",
    "quadrature_variances",
    "statistics_report",
    "CoherentParams",
    "coherent_expansion",
    "ecs_expansion",
    "limit_distance",
]
