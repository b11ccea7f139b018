"""Photon statistics and quadrature variances of Fock expansions.

Number moments are available two ways: from ratios of normalization
constants, <a^dag a> = B(k+1)/B(k) - 1 and
<(a^dag a)^2> = B(k+2)/B(k) - 3 B(k+1)/B(k) + 1, and from sums over the
Fock amplitudes. Reports use the amplitude sums and insist that the ratio
path agrees.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from pyexstates.errors import ConsistencyError, TruncationRiskError
from pyexstates.states.config import (
    FockExpansion,
    NormalizationRoute,
    NormalizationValue,
    StateFamily,
    StateParams,
)
from pyexstates.states.constants import (
    AMPLITUDE_TAIL_LIMIT,
    DEFAULT_TAIL_TOLERANCE,
    HEISENBERG_ATOL,
    HEISENBERG_BOUND,
    MOMENT_ATOL,
    MOMENT_RTOL,
    NORM_ATOL,
    POISSONIAN_ATOL,
    SQUEEZING_THRESHOLD,
    VACUUM_MEAN_FLOOR,
)
from pyexstates.states.excited import family_for, normalization, state_expansion
from pyexstates.states.series import amplitude_tail_bound

logger = logging.getLogger(__name__)

Family = Union[StateFamily, str]


@dataclass(frozen=True)
class MomentSet:
    """<a>, <a^2>, <a^dag a> and <(a^dag a)^2> of one state."""

    mean_a: float
    mean_a2: float
    mean_n: float
    mean_n2: float

    def violations(self, atol: float = MOMENT_ATOL) -> List[str]:
        """Names of the moment inequalities this set breaks."""
        broken = []
        if self.mean_n < -atol:
            broken.append("mean_n >= 0")
        if self.mean_n2 < self.mean_n**2 - atol * max(1.0, self.mean_n2):
            broken.append("mean_n2 >= mean_n^2")
        if self.mean_n2 < self.mean_n - atol * max(1.0, self.mean_n2):
            broken.append("mean_n2 >= mean_n")
        if self.mean_a**2 > self.mean_n + atol * max(1.0, self.mean_n):
            broken.append("mean_a^2 <= mean_n")
        return broken


@dataclass(frozen=True)
class StatisticsReport:
    """Photon statistics and quadrature variances of one state."""

    params: StateParams
    normalization: NormalizationValue
    moments: MomentSet
    mandel_q: Optional[float]
    var_x: float
    var_p: float
    norm_squared: float
    normalization_routes: Dict[str, float] = field(default_factory=dict)

    @property
    def mean_photon(self) -> float:
        return self.moments.mean_n

    @property
    def x_squeezed(self) -> bool:
        return self.var_x < SQUEEZING_THRESHOLD

    @property
    def p_squeezed(self) -> bool:
        return self.var_p < SQUEEZING_THRESHOLD

    @property
    def uncertainty_product(self) -> float:
        return self.var_x * self.var_p

    @property
    def photon_statistics(self) -> str:
        if self.mandel_q is None:
            return "undefined"
        if abs(self.mandel_q) <= POISSONIAN_ATOL:
            return "Poissonian"
        return "sub-Poissonian" if self.mandel_q < 0 else "super-Poissonian"

    @property
    def route_spread(self) -> float:
        """Largest relative deviation between normalization routes."""
        values = list(self.normalization_routes.values())
        if len(values) < 2:
            return 0.0
        reference = values[0]
        return max(abs(v - reference) for v in values) / reference

    def violations(self) -> List[str]:
        """Universal invariants this report breaks."""
        broken = list(self.moments.violations())
        if abs(self.norm_squared - 1.0) > NORM_ATOL:
            broken.append(f"norm^2 = {self.norm_squared!r} != 1")
        if self.uncertainty_product < HEISENBERG_BOUND - HEISENBERG_ATOL:
            broken.append(
                f"var_x*var_p = {self.uncertainty_product!r} < 1/16"
            )
        if self.mandel_q is not None and self.mandel_q < -1.0 - MOMENT_ATOL:
            broken.append(f"Q = {self.mandel_q!r} < -1")
        return broken

    def to_dict(self) -> dict:
        return {
            "family": self.params.family.value,
            "k": self.params.k,
            "eta": self.params.eta,
            "M": self.params.M,
            "normalization": self.normalization.value,
            "normalization_route": self.normalization.route.value,
            "normalization_routes": dict(self.normalization_routes),
            "route_spread": self.route_spread,
            "norm_squared": self.norm_squared,
            **asdict(self.moments),
            "mean_photon": self.mean_photon,
            "mandel_q": self.mandel_q,
            "photon_statistics": self.photon_statistics,
            "var_x": self.var_x,
            "var_p": self.var_p,
            "x_squeezed": self.x_squeezed,
            "p_squeezed": self.p_squeezed,
        }


def number_moments_from_normalization(
    family: Family,
    k: int,
    eta: float,
    M: int,
    route: Union[NormalizationRoute, str, None] = None,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> Tuple[float, float]:
    """(<a^dag a>, <(a^dag a)^2>) from B(k), B(k+1), B(k+2)."""
    params = StateParams(family, k, eta, M)
    state_family = family_for(params.family)
    ratio1 = state_family.normalization_ratio(
        1, params.k, params.eta, params.M, route, tail_tolerance
    )
    ratio2 = state_family.normalization_ratio(
        2, params.k, params.eta, params.M, route, tail_tolerance
    )
    return ratio1 - 1.0, ratio2 - 3.0 * ratio1 + 1.0


def number_moments_from_expansion(
    expansion: FockExpansion,
) -> Tuple[float, float]:
    """(sum n D_n^2, sum n^2 D_n^2) over the retained amplitudes."""
    n = expansion.indices.astype(np.float64)
    weights = expansion.probabilities()
    return math.fsum(n * weights), math.fsum(n * n * weights)


def mandel_q(mean_n: float, mean_n2: float) -> Optional[float]:
    """Q = (<n^2> - <n>^2)/<n> - 1, or None for the vacuum."""
    if mean_n < VACUUM_MEAN_FLOOR:
        return None
    return (mean_n2 - mean_n * mean_n) / mean_n - 1.0


def mandel_q_from_normalization(
    family: Family,
    k: int,
    eta: float,
    M: int,
    route: Union[NormalizationRoute, str, None] = None,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> Optional[float]:
    """Q = [B2 B0 - B1 B0 - B1^2] / [B1 B0 - B0^2] - 1 with Bj = B(k+j)."""
    params = StateParams(family, k, eta, M)
    b0, b1, b2 = (
        normalization(params.with_k(params.k + j), route, tail_tolerance).value
        for j in range(3)
    )
    if (b1 - b0) / b0 < VACUUM_MEAN_FLOOR:
        return None
    return (b2 * b0 - b1 * b0 - b1 * b1) / (b1 * b0 - b0 * b0) - 1.0


def amplitude_moments(expansion: FockExpansion) -> Tuple[float, float]:
    """(<a>, <a^2>) from neighbouring real amplitudes.

    <a> = sum sqrt(n+1) D_n D_{n+1} and <a^2> = sum sqrt((n+1)(n+2))
    D_n D_{n+2}. For a truncated expansion the dropped boundary terms are
    bounded by Cauchy-Schwarz and must stay below AMPLITUDE_TAIL_LIMIT.
    """
    d = expansion.coefficients
    n = expansion.indices.astype(np.float64)
    mean_a = math.fsum(np.sqrt(n[:-1] + 1.0) * d[:-1] * d[1:])
    mean_a2 = math.fsum(
        np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0)) * d[:-2] * d[2:]
    )

    tail = expansion.truncation_tail_bound
    if tail > 0.0:
        bound = amplitude_tail_bound(
            math.fsum(d[-2:] ** 2), tail, expansion.top
        )
        if bound > AMPLITUDE_TAIL_LIMIT:
            raise TruncationRiskError(
                f"amplitude moments lose up to {bound:.3e} to truncation "
                f"(tail mass {tail:.3e}, top index {expansion.top})"
            )
    return mean_a, mean_a2


def moment_set(expansion: FockExpansion) -> MomentSet:
    """All four moments from the Fock amplitudes."""
    mean_a, mean_a2 = amplitude_moments(expansion)
    mean_n, mean_n2 = number_moments_from_expansion(expansion)
    return MomentSet(mean_a, mean_a2, mean_n, mean_n2)


def quadrature_variances(moments: MomentSet) -> Tuple[float, float]:
    """Var(x), Var(p) for x = (a^dag + a)/2, p = i(a^dag - a)/2 and real moments."""
    var_x = 0.25 + 0.5 * (
        moments.mean_n + moments.mean_a2 - 2.0 * moments.mean_a**2
    )
    var_p = 0.25 + 0.5 * (moments.mean_n - moments.mean_a2)
    return var_x, var_p


def statistics_report(
    params: StateParams, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> StatisticsReport:
    """Every observable of one state, cross-checked against the B ratios."""
    expansion = state_expansion(params, tail_tolerance)
    moments = moment_set(expansion)

    ratio_moments = number_moments_from_normalization(
        params.family,
        params.k,
        params.eta,
        params.M,
        tail_tolerance=tail_tolerance,
    )
    coefficient_moments = (moments.mean_n, moments.mean_n2)
    if not np.allclose(
        ratio_moments, coefficient_moments, rtol=MOMENT_RTOL, atol=MOMENT_ATOL
    ):
        raise ConsistencyError(
            f"number moments disagree for {params}: normalization ratios give "
            f"{ratio_moments}, Fock amplitudes give {coefficient_moments}"
        )

    family = family_for(params.family)
    routes = family.all_normalizations(
        params.k, params.eta, params.M, tail_tolerance
    )
    var_x, var_p = quadrature_variances(moments)
    return StatisticsReport(
        params=params,
        normalization=normalization(params, tail_tolerance=tail_tolerance),
        moments=moments,
        mandel_q=mandel_q(moments.mean_n, moments.mean_n2),
        var_x=var_x,
        var_p=var_p,
        norm_squared=expansion.norm_squared(),
        normalization_routes={
            route.value: value.value for route, value in routes.items()
        },
    )
