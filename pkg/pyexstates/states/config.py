"""Parameter and result types for binomial-type states in the Fock basis."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import logsumexp

from pyexstates.errors import DomainError


class StateFamily(Enum):
    """Enum for the four state families."""

    BS = "BS"  # Binomial state
    NBS = "NBS"  # Negative binomial state
    EBS = "EBS"  # Excited binomial state
    ENBS = "ENBS"  # Excited negative binomial state

    @property
    def is_excited(self) -> bool:
        return self in (StateFamily.EBS, StateFamily.ENBS)

    @property
    def is_negative_binomial(self) -> bool:
        return self in (StateFamily.NBS, StateFamily.ENBS)

    @property
    def base(self) -> "StateFamily":
        """The unexcited family the state is built on."""
        return StateFamily.NBS if self.is_negative_binomial else StateFamily.BS

    @property
    def excited(self) -> "StateFamily":
        return StateFamily.ENBS if self.is_negative_binomial else StateFamily.EBS


class NormalizationRoute(Enum):
    """Enum for the ways a normalization constant can be evaluated."""

    DIRECT_SUM = "direct_sum"
    FINITE_SUM = "finite_sum"
    HYPERGEOMETRIC = "hypergeometric"
    REVERSED_SUM = "reversed_sum"  # EBS only: sum reindexed by n -> M - n


@dataclass(frozen=True)
class StateParams:
    """Parameters of a single-mode state.

    Attributes:
        family (StateFamily): Which family the state belongs to.
        k (int): Excitation order, number of creation operators applied.
        eta (float): Real parameter; [0, 1] for BS/EBS, [0, 1) for NBS/ENBS.
        M (int): Positive integer index of the base state.
    """

    family: Union[StateFamily, str]
    k: int
    eta: float
    M: int

    def __post_init__(self):
        object.__setattr__(self, "family", StateFamily(self.family))
        if not _is_whole(self.k) or self.k < 0:
            raise DomainError(
                f"k must be a non-negative integer, got {self.k!r}"
            )
        if not _is_whole(self.M) or self.M < 1:
            raise DomainError(f"M must be a positive integer, got {self.M!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "eta", float(self.eta))

        if not self.family.is_excited and self.k != 0:
            raise DomainError(
                f"{self.family.value} has no excitation, got k={self.k}"
            )
        check_eta(self.eta, self.family)

    @property
    def eta2(self) -> float:
        return self.eta * self.eta

    def base(self) -> "StateParams":
        """Parameters of the unexcited state the excitation acts on."""
        return StateParams(self.family.base, 0, self.eta, self.M)

    def with_k(self, k: int) -> "StateParams":
        """Same state with a different excitation order (always excited)."""
        return StateParams(self.family.excited, k, self.eta, self.M)


def check_eta(eta: float, family: StateFamily) -> None:
    """Raise DomainError when eta is outside the family's domain."""
    if not math.isfinite(eta) or eta < 0.0:
        raise DomainError(f"eta must be a finite number >= 0, got {eta!r}")
    if family.is_negative_binomial:
        if eta >= 1.0:
            raise DomainError(
                f"{family.value} requires eta^2 < 1 for the series to "
                f"converge, got eta={eta!r}"
            )
    elif eta > 1.0:
        raise DomainError(
            f"{family.value} requires 0 <= eta <= 1, got eta={eta!r}"
        )


def _is_whole(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, np.integer)):
        return True
    return isinstance(value, float) and value.is_integer()


@dataclass(frozen=True)
class FockExpansion:
    """Normalized amplitudes D_offset..D_top of a state in the Fock basis.

    Fock states below ``offset`` carry exactly zero amplitude. For infinite
    families the series is truncated and ``truncation_tail_bound`` bounds
    the squared amplitudes that were dropped.
    """

    offset: int
    coefficients: np.ndarray
    truncation_tail_bound: float = 0.0

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=np.float64)
        if coefficients.ndim != 1 or coefficients.size == 0:
            raise DomainError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(coefficients)):
            raise DomainError("coefficients must all be finite")
        if self.offset < 0:
            raise DomainError(f"offset must be >= 0, got {self.offset}")
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def top(self) -> int:
        """Highest retained Fock index."""
        return self.offset + self.coefficients.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.top + 1)

    def amplitude(self, n: int) -> float:
        if n < self.offset or n > self.top:
            return 0.0
        return float(self.coefficients[n - self.offset])

    def probabilities(self) -> np.ndarray:
        """Photon-number distribution over the retained indices."""
        return self.coefficients**2

    def norm_squared(self) -> float:
        return math.fsum(self.probabilities())

    def to_dense(self, dimension: int) -> np.ndarray:
        """Embed the amplitudes in a Fock vector of the given length."""
        if dimension <= self.top:
            raise DomainError(
                f"dimension {dimension} cannot hold Fock index {self.top}"
            )
        vector = np.zeros(dimension)
        vector[self.offset : self.top + 1] = self.coefficients
        return vector

    @classmethod
    def from_log_weights(
        cls, offset: int, log_weights: np.ndarray, tail_bound: float = 0.0
    ) -> "FockExpansion":
        """Amplitudes proportional to exp(log_weights / 2), unit norm.

        Args:
            offset: Fock index of the first weight.
            log_weights: Log squared amplitudes up to a common constant.
            tail_bound: Dropped mass in the same units as the weights.
        """
        log_weights = np.asarray(log_weights, dtype=np.float64)
        log_total = float(logsumexp(log_weights))
        if not math.isfinite(log_total):
            raise DomainError("log_weights carry no finite mass")
        return cls(
            offset=offset,
            coefficients=np.exp(0.5 * (log_weights - log_total)),
            truncation_tail_bound=tail_bound * math.exp(-log_total),
        )

    @classmethod
    def fock(cls, n: int) -> "FockExpansion":
        """The number state |n>."""
        return cls(offset=n, coefficients=np.ones(1))


@dataclass(frozen=True)
class NormalizationValue:
    """B(k, eta, M) or its negative binomial counterpart.

    Attributes:
        value (float): The expectation <a^k a^dag^k> on the base state.
        route (NormalizationRoute): How the value was computed.
        terms_used (int): Series terms summed (truncated routes only).
        tail_bound (float): Bound on the neglected part of a truncated sum.
    """

    value: float
    route: NormalizationRoute
    terms_used: int = 0
    tail_bound: float = 0.0

    @property
    def normalizer(self) -> float:
        """The constant 1/sqrt(B) multiplying a^dag^k |base>."""
        return 1.0 / math.sqrt(self.value)
