"""Negative binomial states and excited negative binomial states.

C_n^-(eta, M) = C(M+n-1, n)^(1/2) eta^n (1 - eta^2)^(M/2), n = 0, 1, ...
The series is infinite; every truncation records a ratio-test tail bound.
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy.special import logsumexp

from pyexstates.errors import DomainError, RouteError
from pyexstates.states.base_state import BaseStateFamily
from pyexstates.states.config import (
    FockExpansion,
    NormalizationRoute,
    NormalizationValue,
    StateFamily,
    StateParams,
)
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE
from pyexstates.states.series import (
    truncate_amplitude_series,
    truncate_log_series,
)
from pyexstates.states.special_functions import (
    Hyp2F1Args,
    log_hyp2f1_terminating,
    normal_ordering_coefficients,
)

logger = logging.getLogger(__name__)

Route = Union[NormalizationRoute, str]

MAX_COEFFICIENT_TOLERANCE = 1e-8


class NegativeBinomialFamily(BaseStateFamily):
    """NBS |eta, M>^- and ENBS |k, eta, M>^-."""

    base_family = StateFamily.NBS
    routes = (
        NormalizationRoute.DIRECT_SUM,
        NormalizationRoute.FINITE_SUM,
        NormalizationRoute.HYPERGEOMETRIC,
    )
    default_route = NormalizationRoute.FINITE_SUM

    def _log_squared(self, eta: float, M: int, n: np.ndarray) -> np.ndarray:
        """ln (C_n^-)^2 for 0 < eta < 1."""
        eta2 = eta * eta
        return (
            self.table.log_binomials(M + n - 1, n)
            + 2.0 * n * math.log(eta)
            + M * math.log1p(-eta2)
        )

    def _log_weights(self, k: int, eta: float, M: int, n: np.ndarray):
        """ln((C_n^-)^2 (n+k)!/n!), the terms of the B^- series."""
        return (
            self._log_squared(eta, M, n)
            + self.table.lookup(n + k)
            - self.table.lookup(n)
        )

    def base_coefficients(
        self, eta: float, M: int, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    ) -> FockExpansion:
        params = StateParams(StateFamily.NBS, 0, eta, M)
        eta, M = params.eta, params.M
        if not 0.0 < tail_tolerance <= MAX_COEFFICIENT_TOLERANCE:
            raise DomainError(
                f"tail_tolerance must lie in (0, {MAX_COEFFICIENT_TOLERANCE:g}]"
                f", got {tail_tolerance!r}"
            )
        if eta == 0.0:
            return FockExpansion.fock(0)

        series = truncate_amplitude_series(
            lambda n: self._log_squared(eta, M, n), tail_tolerance
        )
        return FockExpansion.from_log_weights(
            0, series.log_terms, series.tail_bound
        )

    def normalization(
        self,
        k: int,
        eta: float,
        M: int,
        route: Route = None,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ) -> NormalizationValue:
        route = NormalizationRoute(route or self.default_route)
        params = self.validate(k, eta, M)
        k, eta, M = params.k, params.eta, params.M
        if route not in self.routes:
            raise DomainError(
                f"route {route.value} does not apply to the negative "
                "binomial family"
            )

        if eta == 0.0:
            if route is NormalizationRoute.HYPERGEOMETRIC:
                raise RouteError(
                    "route hypergeometric is singular at eta=0 "
                    "(argument (eta^2-1)/eta^2 diverges)",
                    fallback=NormalizationRoute.FINITE_SUM.value,
                )
            return NormalizationValue(float(math.factorial(k)), route, 1)
        if k == 0:
            return NormalizationValue(1.0, route, 1)

        eta2 = eta * eta
        log_ratio = 2.0 * math.log(eta) - math.log1p(-eta2)  # ln(eta^2/(1-eta^2))
        terms_used, tail_bound = k + 1, 0.0
        if route is NormalizationRoute.DIRECT_SUM:
            series = truncate_log_series(
                lambda n: self._log_weights(k, eta, M, n),
                tail_tolerance,
                relative=True,
            )
            log_value = series.log_sum()
            terms_used, tail_bound = series.terms_used, series.tail_bound
        elif route is NormalizationRoute.FINITE_SUM:
            log_value = self._log_finite_sum(k, log_ratio, M)
        else:
            args = Hyp2F1Args(
                -k, -k, -M - k + 1, self._hyp2f1_argument(eta2)
            )
            _, log_series = log_hyp2f1_terminating(args)
            log_value = (
                k * log_ratio
                + self.table.log_factorial(M + k - 1)
                - self.table.log_factorial(M - 1)
                + log_series
            )

        logger.debug(
            "B^-(k=%d, eta=%g, M=%d) via %s = %.17g (%d terms)",
            k,
            eta,
            M,
            route.value,
            math.exp(log_value),
            terms_used,
        )
        return NormalizationValue(
            math.exp(log_value), route, terms_used, tail_bound
        )

    def _log_lowered_moments(
        self, j: np.ndarray, log_ratio: float, M: int
    ) -> np.ndarray:
        """ln <a^dag^j a^j> on the NBS for an array of orders j."""
        return (
            j * log_ratio
            + self.table.lookup(M + j - 1)
            - self.table.log_factorial(M - 1)
        )

    def _log_finite_sum(self, k: int, log_ratio: float, M: int) -> float:
        """Normal-order a^k a^dag^k and sum the k+1 lowered moments."""
        l = np.arange(k + 1)
        log_weights = np.log(
            np.array(normal_ordering_coefficients(k), dtype=np.float64)
        )
        return float(
            logsumexp(
                log_weights + self._log_lowered_moments(k - l, log_ratio, M)
            )
        )

    def excited_expansion(
        self,
        k: int,
        eta: float,
        M: int,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ) -> FockExpansion:
        params = self.validate(k, eta, M)
        k, eta, M = params.k, params.eta, params.M
        if k == 0:
            return self.base_coefficients(eta, M, tail_tolerance)
        if eta == 0.0:
            return FockExpansion.fock(k)

        normalization = self.normalization(
            k, eta, M, NormalizationRoute.FINITE_SUM
        )
        log_normalization = math.log(normalization.value)
        # Cut where the dropped mass of the normalized state is small.
        series = truncate_amplitude_series(
            lambda n: self._log_weights(k, eta, M, n) - log_normalization,
            tail_tolerance,
            offset=k,
        )
        return self._excite(
            series.log_terms + log_normalization,
            k,
            log_normalization,
            series.tail_bound * normalization.value,
        )

    def ladder_lowering(
        self, k: int, eta: float, M: int
    ) -> Tuple[float, StateParams]:
        """a^k |eta, M>^- = scale |eta, M+k>^-."""
        params = self.validate(k, eta, M)
        k, eta, M = params.k, params.eta, params.M
        target = StateParams(StateFamily.NBS, 0, eta, M + k)
        if k == 0:
            return 1.0, target
        if eta == 0.0:
            return 0.0, target
        log_scale = k * (
            math.log(eta) - 0.5 * math.log1p(-eta * eta)
        ) + 0.5 * (
            self.table.log_factorial(M + k - 1)
            - self.table.log_factorial(M - 1)
        )
        return math.exp(log_scale), target

    def lowered_moment(self, k: int, eta: float, M: int) -> float:
        """<a^dag^k a^k> = (eta^2/(1-eta^2))^k (M+k-1)!/(M-1)! on the NBS."""
        params = self.validate(k, eta, M)
        k, eta, M = params.k, params.eta, params.M
        if k == 0:
            return 1.0
        if eta == 0.0:
            return 0.0
        log_ratio = 2.0 * math.log(eta) - math.log1p(-eta * eta)
        return math.exp(
            float(self._log_lowered_moments(np.array(k), log_ratio, M))
        )


NEGATIVE_BINOMIAL = NegativeBinomialFamily()


def nbs_coefficients(
    params: StateParams, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> FockExpansion:
    """Truncated Fock amplitudes of the negative binomial state."""
    if params.family is not StateFamily.NBS:
        raise DomainError(
            f"nbs_coefficients needs an NBS, got {params.family.value}"
        )
    return NEGATIVE_BINOMIAL.base_coefficients(
        params.eta, params.M, tail_tolerance
    )


def normalization_enbs(
    k: int,
    eta: float,
    M: int,
    route: Route = NormalizationRoute.FINITE_SUM,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> NormalizationValue:
    """B^-(k, eta, M) = ^-<eta, M| a^k a^dag^k |eta, M>^-."""
    return NEGATIVE_BINOMIAL.normalization(k, eta, M, route, tail_tolerance)


def nbs_ladder_lowering(k: int, eta: float, M: int) -> Tuple[float, StateParams]:
    """Scale and target of a^k |eta, M>^- = scale |eta, M+k>^-."""
    return NEGATIVE_BINOMIAL.ladder_lowering(k, eta, M)


def nbs_lowered_moment(k: int, eta: float, M: int) -> float:
    """Closed form of ^-<eta, M| a^dag^k a^k |eta, M>^-."""
    return NEGATIVE_BINOMIAL.lowered_moment(k, eta, M)
