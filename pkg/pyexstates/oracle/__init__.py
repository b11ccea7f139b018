from pyexstates.oracle.fock_space import (
    Ladder,
    TruncatedFockSpace,
    apply_word,
    expectation,
    safe_dimension,
)
from pyexstates.oracle.rational import RationalSeries, exact_rational_sum
