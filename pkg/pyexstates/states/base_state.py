import abc
import logging
import math
from typing import Dict, Tuple

import numpy as np
from scipy.special import logsumexp

from pyexstates.errors import ConsistencyError, RouteError
from pyexstates.states.config import (
    FockExpansion,
    NormalizationRoute,
    StateFamily,
    StateParams,
    check_eta,
)
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE, MOMENT_RTOL
from pyexstates.states.special_functions import default_table

logger = logging.getLogger(__name__)


class BaseStateFamily(metaclass=abc.ABCMeta):
    """Base class for a binomial-type state family and its excitations.

    A family knows its base coefficients C_n(eta, M), the normalization
    B(k, eta, M) = <a^k a^dag^k> of the base state by one or more routes,
    and how to expand the excited state N a^dag^k |eta, M> in Fock states.
    """

    base_family: StateFamily
    routes: Tuple[NormalizationRoute, ...]
    default_route: NormalizationRoute

    def __init__(self):
        self.table = default_table()

    @property
    def excited_family(self) -> StateFamily:
        return self.base_family.excited

    @abc.abstractmethod
    def base_coefficients(
        self, eta: float, M: int, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
    ) -> FockExpansion:
        """Amplitudes C_n(eta, M) of the base state."""

    @abc.abstractmethod
    def normalization(
        self,
        k: int,
        eta: float,
        M: int,
        route: NormalizationRoute = None,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ):
        """B(k, eta, M) by the requested route.

        Returns:
            NormalizationValue
        """

    @abc.abstractmethod
    def excited_expansion(
        self,
        k: int,
        eta: float,
        M: int,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ) -> FockExpansion:
        """Normalized amplitudes D_n(k, eta, M), n >= k."""

    def validate(self, k: int, eta: float, M: int) -> StateParams:
        """Check the parameters and return them as StateParams."""
        check_eta(float(eta), self.base_family)
        return StateParams(self.excited_family, k, eta, M)

    def all_normalizations(
        self,
        k: int,
        eta: float,
        M: int,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ) -> Dict[NormalizationRoute, object]:
        """B by every route that is regular at this point."""
        values = {}
        for route in self.routes:
            try:
                values[route] = self.normalization(
                    k, eta, M, route=route, tail_tolerance=tail_tolerance
                )
            except RouteError as err:
                logger.debug("Skipping route %s: %s", route.value, err)
        return values

    def normalization_ratio(
        self,
        j: int,
        k: int,
        eta: float,
        M: int,
        route: NormalizationRoute = None,
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ) -> float:
        """B(k + j) / B(k) at fixed eta and M."""
        top = self.normalization(k + j, eta, M, route, tail_tolerance)
        bottom = self.normalization(k, eta, M, route, tail_tolerance)
        return top.value / bottom.value

    def _excite(
        self,
        log_weights: np.ndarray,
        k: int,
        log_normalization: float,
        tail_bound: float = 0.0,
    ) -> FockExpansion:
        """Build D_n from ln(C_{n-k}^2 n!/(n-k)!), checked against ln B.

        The amplitudes are normalized by their own sum; B only has to agree
        with that sum up to the dropped tail.

        Args:
            log_weights: Log squared amplitudes before normalization, for
                n = k, k+1, ...
            k: Excitation order (Fock offset).
            log_normalization: ln B for the same state.
            tail_bound: Dropped unnormalized mass.
        """
        mismatch = math.expm1(float(logsumexp(log_weights)) - log_normalization)
        allowed = MOMENT_RTOL + tail_bound * math.exp(-log_normalization)
        if abs(mismatch) > allowed:
            raise ConsistencyError(
                f"amplitudes of the k={k} excitation sum to (1{mismatch:+.3e}) B"
                f", more than the allowed {allowed:.3e}"
            )
        return FockExpansion.from_log_weights(k, log_weights, tail_bound)

    def _hyp2f1_argument(self, eta2: float) -> float:
        """(eta^2 - 1)/eta^2, or RouteError once it is no longer finite."""
        x = (eta2 - 1.0) / eta2 if eta2 > 0.0 else -math.inf
        if not math.isfinite(x):
            raise RouteError(
                f"route hypergeometric is singular at eta^2={eta2!r} "
                "(argument (eta^2-1)/eta^2 diverges)",
                fallback=self.default_route.value,
            )
        return x
