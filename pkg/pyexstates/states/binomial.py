"""Binomial states and excited binomial states.

C_n(eta, M) = C(M, n)^(1/2) eta^n (1 - eta^2)^((M - n)/2), n = 0..M, and the
excited state N a^dag^k |eta, M> with N = B(k, eta, M)^(-1/2).
"""

import logging
import math
from typing import Union

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
from pyexstates.states.special_functions import (
    Hyp2F1Args,
    log_hyp2f1_terminating,
)

logger = logging.getLogger(__name__)

Route = Union[NormalizationRoute, str]


class BinomialFamily(BaseStateFamily):
    """BS |eta, M> and EBS |k, eta, M>."""

    base_family = StateFamily.BS
    routes = (
        NormalizationRoute.DIRECT_SUM,
        NormalizationRoute.HYPERGEOMETRIC,
        NormalizationRoute.REVERSED_SUM,
    )
    default_route = NormalizationRoute.DIRECT_SUM

    def _log_squared(self, eta: float, M: int, n: np.ndarray) -> np.ndarray:
        """ln C_n^2 for 0 < eta < 1."""
        eta2 = eta * eta
        return (
            self.table.log_binomials(M, n)
            + 2.0 * n * math.log(eta)
            + (M - n) * math.log1p(-eta2)
        )

    def base_coefficients(
        self, eta: float, M: int, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    ) -> FockExpansion:
        params = StateParams(StateFamily.BS, 0, eta, M)
        eta, M = params.eta, params.M
        if eta in (0.0, 1.0):
            # Vacuum at eta = 0, number state |M> at eta = 1.
            coefficients = np.zeros(M + 1)
            coefficients[M if eta == 1.0 else 0] = 1.0
            return FockExpansion(offset=0, coefficients=coefficients)
        n = np.arange(M + 1)
        return FockExpansion.from_log_weights(0, self._log_squared(eta, M, n))

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
                f"route {route.value} does not apply to the binomial family"
            )

        if eta == 0.0:
            if route is not NormalizationRoute.DIRECT_SUM:
                raise RouteError(
                    f"route {route.value} is singular at eta=0 "
                    "(argument (eta^2-1)/eta^2 diverges)",
                    fallback=NormalizationRoute.DIRECT_SUM.value,
                )
            return NormalizationValue(float(math.factorial(k)), route, 1)
        if k == 0:
            return NormalizationValue(1.0, route, M + 1)
        if eta == 1.0:
            # a^dag^k |M> has squared norm (M+k)!/M!
            value = math.prod(range(M + 1, M + k + 1))
            return NormalizationValue(float(value), route, 1)

        eta2 = eta * eta
        if route is NormalizationRoute.HYPERGEOMETRIC:
            args = Hyp2F1Args(-M, -M, -M - k, self._hyp2f1_argument(eta2))
            _, log_series = log_hyp2f1_terminating(args)
            log_value = (
                2.0 * M * math.log(eta)
                + self.table.log_factorial(M + k)
                - self.table.log_factorial(M)
                + log_series
            )
        elif route is NormalizationRoute.REVERSED_SUM or eta2 > 0.5:
            log_value = self._log_reversed_sum(k, eta, M)
        else:
            log_value = self._log_direct_sum(k, eta, M)

        logger.debug(
            "B(k=%d, eta=%g, M=%d) via %s = %.17g",
            k,
            eta,
            M,
            route.value,
            math.exp(log_value),
        )
        return NormalizationValue(math.exp(log_value), route, M + 1)

    def _log_direct_sum(self, k: int, eta: float, M: int) -> float:
        """(1 - eta^2)^M prefactored form, summed in the log domain."""
        n = np.arange(M + 1)
        lf = self.table.lookup
        log_terms = (
            lf(n + k)
            - 2.0 * lf(n)
            - lf(M - n)
            + n * (2.0 * math.log(eta) - math.log1p(-eta * eta))
        )
        prefactor = lf(M) + M * math.log1p(-eta * eta)
        return float(prefactor + logsumexp(log_terms))

    def _log_reversed_sum(self, k: int, eta: float, M: int) -> float:
        """eta^(2M) prefactored form, the same sum reindexed by n -> M - n."""
        n = np.arange(M + 1)
        lf = self.table.lookup
        log_terms = (
            lf(M + k - n)
            - lf(n)
            - 2.0 * lf(M - n)
            + n * (math.log1p(-eta * eta) - 2.0 * math.log(eta))
        )
        prefactor = lf(M) + 2.0 * M * math.log(eta)
        return float(prefactor + logsumexp(log_terms))

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
            return self.base_coefficients(eta, M)
        if eta in (0.0, 1.0):
            # |k> at eta = 0 and |M+k> at eta = 1.
            coefficients = np.zeros(M + 1)
            coefficients[M if eta == 1.0 else 0] = 1.0
            return FockExpansion(offset=k, coefficients=coefficients)

        m = np.arange(M + 1)
        log_weights = (
            self._log_squared(eta, M, m)
            + self.table.lookup(m + k)
            - self.table.lookup(m)
        )
        normalization = self.normalization(
            k, eta, M, NormalizationRoute.DIRECT_SUM
        )
        return self._excite(log_weights, k, math.log(normalization.value))


BINOMIAL = BinomialFamily()


def bs_coefficients(params: StateParams) -> FockExpansion:
    """Fock amplitudes of the binomial state |eta, M>."""
    if params.family is not StateFamily.BS:
        raise DomainError(
            f"bs_coefficients needs a BS, got {params.family.value}"
        )
    return BINOMIAL.base_coefficients(params.eta, params.M)


def normalization_ebs(
    k: int,
    eta: float,
    M: int,
    route: Route = NormalizationRoute.DIRECT_SUM,
) -> NormalizationValue:
    """B(k, eta, M) = <eta, M| a^k a^dag^k |eta, M>."""
    return BINOMIAL.normalization(k, eta, M, route)
