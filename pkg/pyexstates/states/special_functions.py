"""Log-factorials, log-binomials and the terminating Gauss 2F1 series.

Every factorial ratio in the state formulas is evaluated as a difference of
entries in a shared table of ln(n!), so nothing overflows for M ~ 10^4.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from scipy.special import gammaln, gammasgn

from pyexstates.errors import CapacityError, DomainError
from pyexstates.states.constants import (
    INTEGER_ATOL,
    LOG_FACTORIAL_CAPACITY,
)

logger = logging.getLogger(__name__)

IntArray = Union[int, np.ndarray]


class LogFactorialTable:
    """Table of ln(n!) for 0 <= n <= n_max, grown lazily on demand.

    Lookups are read-only once the table holds the largest index needed.
    Growth is not synchronized: call ``reserve`` before sharing the table
    between threads.
    """

    def __init__(self, n_max: int = LOG_FACTORIAL_CAPACITY, initial: int = 1024):
        if n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {n_max}")
        self.n_max = int(n_max)
        self._values = self._build(0, min(initial, self.n_max))

    @staticmethod
    def _build(start: int, stop: int) -> np.ndarray:
        values = gammaln(np.arange(start, stop + 1, dtype=np.float64) + 1.0)
        # gammaln(1) and gammaln(2) are zero already; pin them exactly.
        values[: max(0, 2 - start)] = 0.0
        return values

    @property
    def values(self) -> np.ndarray:
        view = self._values.view()
        view.flags.writeable = False
        return view

    @property
    def size(self) -> int:
        """Largest index currently held."""
        return self._values.size - 1

    def reserve(self, n: int) -> None:
        """Make sure ln(n!) is available, growing the table if needed."""
        if n <= self.size:
            return
        if n > self.n_max:
            raise CapacityError(
                f"log-factorial table capacity is {self.n_max}, "
                f"index {n} requested"
            )
        new_size = min(self.n_max, max(n, 2 * self.size))
        logger.debug(
            "Growing log-factorial table from %d to %d", self.size, new_size
        )
        self._values = np.concatenate(
            [self._values, self._build(self.size + 1, new_size)]
        )

    def lookup(self, n: IntArray) -> np.ndarray:
        """Vectorized ln(n!) for an integer array."""
        n = np.asarray(n, dtype=np.int64)
        if n.size == 0:
            return np.zeros(n.shape)
        if n.min() < 0:
            raise DomainError("log-factorial needs non-negative integers")
        self.reserve(int(n.max()))
        return self._values[n]

    def log_factorial(self, n: int) -> float:
        n = _as_index(n, "n")
        self.reserve(n)
        return float(self._values[n])

    def log_binomial(self, n: int, r: int) -> float:
        n, r = _as_index(n, "n"), _as_index(r, "r")
        if r > n:
            raise DomainError(f"log_binomial needs r <= n, got n={n}, r={r}")
        return float(self.log_binomials(n, r))

    def log_binomials(self, n: IntArray, r: IntArray) -> np.ndarray:
        """Vectorized ln C(n, r); callers guarantee 0 <= r <= n."""
        n = np.asarray(n, dtype=np.int64)
        r = np.asarray(r, dtype=np.int64)
        # Fold onto r <= n/2 so C(n, r) and C(n, n - r) share one code path.
        r = np.minimum(r, n - r)
        return self.lookup(n) - self.lookup(r) - self.lookup(n - r)


def _as_index(value, name: str) -> int:
    if isinstance(value, bool) or not float(value).is_integer():
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


_TABLE = LogFactorialTable()


def default_table() -> LogFactorialTable:
    """The process-wide table used by all state constructions."""
    return _TABLE


def log_factorial(n: int) -> float:
    """ln(n!) from the shared table."""
    return _TABLE.log_factorial(n)


def log_binomial(n: int, r: int) -> float:
    """ln C(n, r); exactly 0.0 for r = 0 and r = n."""
    return _TABLE.log_binomial(n, r)


def normal_ordering_coefficients(k: int) -> List[int]:
    """Integer weights c_l of a^k a^dag^k = sum_l c_l a^dag^(k-l) a^(k-l).

    c_l = k! k! / (l! (k-l)! (k-l)!) for l = 0..k.
    """
    k = _as_index(k, "k")
    return [math.comb(k, l) * math.perm(k, l) for l in range(k + 1)]


def _nearest_integer(value: float) -> Tuple[bool, int]:
    nearest = round(value)
    return abs(value - nearest) <= INTEGER_ATOL, int(nearest)


@dataclass(frozen=True)
class Hyp2F1Args:
    """Arguments of 2F1(a, b; c; x) with non-positive integer a and b."""

    a: float
    b: float
    c: float
    x: float

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            integral, nearest = _nearest_integer(value)
            if not integral or nearest > 0:
                raise DomainError(
                    f"2F1 parameter {name}={value!r} must be a non-positive "
                    "integer for the series to terminate"
                )
            object.__setattr__(self, name, float(nearest))
        if not all(math.isfinite(v) for v in (self.c, self.x)):
            raise DomainError(f"2F1 needs finite c and x, got {self!r}")

        integral, nearest = _nearest_integer(self.c)
        if integral and nearest <= 0 and nearest > max(self.a, self.b):
            raise DomainError(
                f"Pochhammer (c)_j vanishes at c={self.c!r} before the series "
                f"terminates (a={self.a:g}, b={self.b:g})"
            )
        if integral:
            object.__setattr__(self, "c", float(nearest))

    @property
    def terms(self) -> int:
        """Index of the last non-vanishing term, J = min(-a, -b)."""
        return int(min(-self.a, -self.b))


def _log_pochhammer(c: float, j: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sign and ln|(c)_j|, for j short of any zero factor of (c)_j."""
    if c <= 0.0 and float(c).is_integer():
        C = int(-c)
        return (-1.0) ** j, _TABLE.lookup(C) - _TABLE.lookup(C - j)
    return gammasgn(c + j) * gammasgn(c), gammaln(c + j) - gammaln(c)


def log_hyp2f1_terminating(args: Hyp2F1Args) -> Tuple[float, float]:
    """Sign and log-magnitude of the terminating series.

    Term j is (a)_j (b)_j x^j / ((c)_j j!), kept as (sign, ln|t_j|) with
    each Pochhammer log taken in closed form from the log-factorial table
    (gammaln for non-integer c). The rescaled terms are summed with
    math.fsum.

    Returns:
        (sign, log_abs): value = sign * exp(log_abs); sign is 0.0 for an
        exact zero sum.
    """
    J = args.terms
    if J == 0 or args.x == 0.0:
        return 1.0, 0.0

    j = np.arange(J + 1)
    sign_a, log_a = _log_pochhammer(args.a, j)
    sign_b, log_b = _log_pochhammer(args.b, j)
    sign_c, log_c = _log_pochhammer(args.c, j)
    log_terms = (
        log_a + log_b - log_c - _TABLE.lookup(j) + j * math.log(abs(args.x))
    )
    signs = sign_a * sign_b * sign_c * math.copysign(1.0, args.x) ** j

    peak = float(log_terms.max())
    total = math.fsum(signs * np.exp(log_terms - peak))
    if total == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, total), peak + math.log(abs(total))


def hyp2f1_terminating(args: Hyp2F1Args) -> float:
    """2F1(a, b; c; x) for a terminating series, as a float."""
    sign, log_abs = log_hyp2f1_terminating(args)
    return sign * math.exp(log_abs) if sign else 0.0
