"""Exact rational ground truth for the finite sums behind the normalizations.

Only rational eta^2 is accepted; every term is a ratio of factorials times
integer powers of eta^2, so sums are exact Fractions.
"""

import math
from fractions import Fraction
from typing import Callable, NamedTuple, Union

from pyexstates.errors import DomainError

MAX_TERMS = 200

Rational = Union[int, Fraction, str]
RationalTerm = Callable[[int], Fraction]


def as_rational(value: Rational) -> Fraction:
    """Fraction from an int, a Fraction or a string like '1/4'; no floats."""
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError(f"expected an exact rational, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError) as err:
        raise DomainError(f"expected an exact rational, got {value!r}") from err


def exact_rational_sum(term_spec: RationalTerm, count: int) -> Fraction:
    """Sum term_spec(0) + ... + term_spec(count - 1) exactly."""
    if not 0 <= count <= MAX_TERMS:
        raise DomainError(f"count must lie in [0, {MAX_TERMS}], got {count}")
    total = Fraction(0)
    for n in range(count):
        term = term_spec(n)
        if isinstance(term, (bool, float)) or not isinstance(
            term, (int, Fraction)
        ):
            raise DomainError(f"term {n} is not rational: {term!r}")
        total += term
    return total


class RationalSeries(NamedTuple):
    term: RationalTerm
    count: int

    def sum(self) -> Fraction:
        return exact_rational_sum(self.term, self.count)


def rising(x: Fraction, j: int) -> Fraction:
    """Pochhammer symbol (x)_j = x (x+1) ... (x+j-1)."""
    result = Fraction(1)
    for i in range(j):
        result *= x + i
    return result


def _falling_ratio(top: int, bottom: int) -> int:
    """top!/bottom! for top >= bottom."""
    return math.prod(range(bottom + 1, top + 1))


def bs_squared_terms(eta2: Rational, M: int) -> RationalSeries:
    """C_n^2 = C(M, n) eta^(2n) (1-eta^2)^(M-n), n = 0..M."""
    eta2 = as_rational(eta2)
    return RationalSeries(
        lambda n: math.comb(M, n) * eta2**n * (1 - eta2) ** (M - n), M + 1
    )


def nbs_squared_terms(eta2: Rational, M: int, count: int) -> RationalSeries:
    """(C_n^-)^2 = C(M+n-1, n) eta^(2n) (1-eta^2)^M for the first count n."""
    eta2 = as_rational(eta2)
    return RationalSeries(
        lambda n: math.comb(M + n - 1, n) * eta2**n * (1 - eta2) ** M, count
    )


def ebs_normalization_terms(k: int, eta2: Rational, M: int) -> RationalSeries:
    """Terms of B(k, eta, M) = sum_n C_n^2 (n+k)!/n!."""
    squared = bs_squared_terms(eta2, M)
    return RationalSeries(
        lambda n: squared.term(n) * _falling_ratio(n + k, n), squared.count
    )


def enbs_direct_terms(
    k: int, eta2: Rational, M: int, count: int
) -> RationalSeries:
    """First count terms of B^-(k, eta, M) = sum_n (C_n^-)^2 (n+k)!/n!."""
    squared = nbs_squared_terms(eta2, M, count)
    return RationalSeries(
        lambda n: squared.term(n) * _falling_ratio(n + k, n), count
    )


def enbs_finite_sum_terms(k: int, eta2: Rational, M: int) -> RationalSeries:
    """The k+1 normal-ordered terms of B^-(k, eta, M)."""
    eta2 = as_rational(eta2)
    ratio = eta2 / (1 - eta2)

    def term(l: int) -> Fraction:
        weight = Fraction(
            math.factorial(k) ** 2 * math.factorial(M + k - l - 1),
            math.factorial(l)
            * math.factorial(k - l) ** 2
            * math.factorial(M - 1),
        )
        return weight * ratio ** (k - l)

    return RationalSeries(term, k + 1)


def hyp2f1_terms(
    a: int, b: int, c: Rational, x: Rational
) -> RationalSeries:
    """Terms (a)_j (b)_j / ((c)_j j!) x^j of a terminating 2F1."""
    c, x = as_rational(c), as_rational(x)
    count = min(-a, -b) + 1

    def term(j: int) -> Fraction:
        return (
            rising(Fraction(a), j)
            * rising(Fraction(b), j)
            / (rising(c, j) * math.factorial(j))
            * x**j
        )

    return RationalSeries(term, count)
