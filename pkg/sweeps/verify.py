"""Self-checks of the library against closed forms, oracles and limits.

``fast`` runs on reduced grids in a few seconds. ``full`` adds the slow
convergence of both excited families towards the excited coherent state.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np
import pandas as pd

from pyexstates.oracle.fock_space import (
    MAX_WORD_LENGTH,
    TruncatedFockSpace,
    safe_dimension,
)
from pyexstates.oracle.rational import (
    ebs_normalization_terms,
    enbs_finite_sum_terms,
)
from pyexstates.states.binomial import BINOMIAL
from pyexstates.states.config import NormalizationRoute, StateFamily, StateParams
from pyexstates.states.constants import ROUTE_RTOL
from pyexstates.states.excited import state_expansion
from pyexstates.states.negative_binomial import NEGATIVE_BINOMIAL
from pyexstates.states.observables import moment_set, statistics_report
from pyexstates.states.reference import ecs_expansion, limit_distance

logger = logging.getLogger(__name__)

ETA_GRID = [0.1 * i for i in range(1, 10)]
ROUTE_M_VALUES = [2, 5, 10, 50]
ORACLE_MAX_DIMENSION = 300
ORACLE_RTOL = 1e-10
ORACLE_ATOL = 1e-12
LIMIT_M_VALUES = [100, 1_000, 10_000]
LIMIT_THRESHOLD = 1e-3

CheckOutcome = Tuple[bool, str]


class VerifyLevel(Enum):
    """Enum for how much of the suite to run."""

    FAST = "fast"
    FULL = "full"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class VerificationSummary:
    level: VerifyLevel
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "check": r.name,
                    "status": "PASS" if r.passed else "FAIL",
                    "seconds": round(r.seconds, 3),
                    "detail": r.detail,
                }
                for r in self.results
            ],
            columns=["check", "status", "seconds", "detail"],
        )

    def render(self) -> str:
        verdict = "all checks passed" if self.passed else (
            f"{len(self.failed)} of {len(self.results)} checks failed"
        )
        table = self.to_frame().to_string(index=False)
        return f"{table}\n{self.level.value}: {verdict}\n"


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def check_route_agreement() -> CheckOutcome:
    """EBS and ENBS normalization routes agree pairwise."""
    worst, where = 0.0, ""
    for family, k, M, eta in itertools.product(
        (BINOMIAL, NEGATIVE_BINOMIAL), range(6), ROUTE_M_VALUES, ETA_GRID
    ):
        values = family.all_normalizations(k, eta, M)
        for (r1, v1), (r2, v2) in itertools.combinations(values.items(), 2):
            deviation = _relative(v1.value, v2.value)
            if deviation > worst:
                worst = deviation
                where = (
                    f"{family.excited_family.value} k={k} M={M} eta={eta:.1f} "
                    f"{r1.value} vs {r2.value}"
                )
    return worst <= ROUTE_RTOL, f"max relative deviation {worst:.2e} ({where})"


def _oracle_states():
    for k, M, eta in itertools.product(range(3), (2, 5, 10), (0.3, 0.6, 0.9)):
        yield StateParams(StateFamily.EBS, k, eta, M)
        if eta < 0.9:
            yield StateParams(StateFamily.ENBS, k, eta, M)


def check_oracle_equivalence() -> CheckOutcome:
    """Moments from the amplitudes match dense ladder-operator products."""
    words = {
        "mean_a": ["A"],
        "mean_a2": ["A", "A"],
        "mean_n": ["ADAG", "A"],
        "mean_n2": ["ADAG", "A", "ADAG", "A"],
    }
    checked, worst, where = 0, 0.0, ""
    for params in _oracle_states():
        expansion = state_expansion(params)
        dimension = safe_dimension(expansion, MAX_WORD_LENGTH)
        if dimension > ORACLE_MAX_DIMENSION:
            continue
        space = TruncatedFockSpace(dimension)
        moments = moment_set(expansion)
        vector = space.vector(expansion)
        for name, word in words.items():
            formula = getattr(moments, name)
            oracle = space.expectation(vector, word)
            error = abs(formula - oracle)
            if error > ORACLE_ATOL + ORACLE_RTOL * abs(oracle):
                return False, f"{params} {name}: formula {formula!r}, oracle {oracle!r}"
            if error > worst:
                worst, where = error, f"{params.family.value} {name}"
        checked += 1
    return True, f"{checked} states, max abs deviation {worst:.2e} ({where})"


def check_base_state_q() -> CheckOutcome:
    """Q = -eta^2 for the BS and eta^2/(1-eta^2) for the NBS."""
    for M, eta in itertools.product(ROUTE_M_VALUES, ETA_GRID):
        bs = statistics_report(StateParams(StateFamily.BS, 0, eta, M)).mandel_q
        if abs(bs + eta * eta) > 1e-10:
            return False, f"BS M={M} eta={eta:.1f}: Q={bs!r}"
        nbs = statistics_report(StateParams(StateFamily.NBS, 0, eta, M)).mandel_q
        expected = eta * eta / (1.0 - eta * eta)
        if abs(nbs - expected) > 1e-9 * expected:
            return False, f"NBS M={M} eta={eta:.1f}: Q={nbs!r}, expected {expected!r}"
    return True, f"{2 * len(ROUTE_M_VALUES) * len(ETA_GRID)} states"


def check_endpoint_limits() -> CheckOutcome:
    """Excited states approach number states at the ends of the eta range."""
    points = [
        (StateFamily.EBS, 1e-4),
        (StateFamily.EBS, 1.0 - 1e-4),
        (StateFamily.ENBS, 1e-4),
    ]
    for (family, eta), k in itertools.product(points, (1, 2, 3)):
        q = statistics_report(StateParams(family, k, eta, 10)).mandel_q
        if abs(q + 1.0) > 1e-3:
            return False, f"{family.value} k={k} eta={eta}: Q={q!r}"
    return True, "Q within 1e-3 of -1"


def check_exact_values() -> CheckOutcome:
    """Spot values against exact rational arithmetic."""
    b = NEGATIVE_BINOMIAL.normalization(1, 0.5, 1).value
    if _relative(b, 4.0 / 3.0) > 1e-14:
        return False, f"B^-(1, 0.5, 1) = {b!r}, expected 4/3"
    for k, M in itertools.product(range(6), range(1, 11)):
        at_zero = BINOMIAL.normalization(k, 0.0, M).value
        at_one = BINOMIAL.normalization(k, 1.0, M).value
        if at_zero != math.factorial(k):
            return False, f"B({k}, 0, {M}) = {at_zero!r}"
        if _relative(at_one, math.factorial(M + k) / math.factorial(M)) > 1e-13:
            return False, f"B({k}, 1, {M}) = {at_one!r}"
    # eta = 0.25, 0.5 and 0.75 have exactly representable squares.
    for eta, k, M in itertools.product((0.25, 0.5, 0.75), range(4), (1, 3, 7)):
        eta2 = Fraction(eta) ** 2
        exact_ebs = ebs_normalization_terms(k, eta2, M).sum()
        exact_enbs = enbs_finite_sum_terms(k, eta2, M).sum()
        for route in BINOMIAL.routes:
            value = BINOMIAL.normalization(k, eta, M, route).value
            if _relative(value, float(exact_ebs)) > ROUTE_RTOL:
                return False, f"EBS k={k} eta={eta} M={M} {route.value}: {value!r}"
        for route in NEGATIVE_BINOMIAL.routes:
            value = NEGATIVE_BINOMIAL.normalization(k, eta, M, route).value
            if _relative(value, float(exact_enbs)) > ROUTE_RTOL:
                return False, f"ENBS k={k} eta={eta} M={M} {route.value}: {value!r}"
    return True, "exact values reproduced"


def check_universal_invariants() -> CheckOutcome:
    """Normalization, Heisenberg bound and Q >= -1 on a mixed grid."""
    count = 0
    for family, k, M, eta in itertools.product(
        StateFamily, range(4), (1, 5, 20), (0.0, 0.25, 0.5, 0.75, 0.9)
    ):
        if not family.is_excited and k:
            continue
        report = statistics_report(StateParams(family, k, eta, M))
        broken = report.violations()
        if broken:
            return False, f"{report.params}: {'; '.join(broken)}"
        count += 1
    return True, f"{count} states"


def check_coherent_limit() -> CheckOutcome:
    """EBS and ENBS approach the ECS as M grows with eta^2 M fixed."""
    final = 0.0
    for k, alpha in itertools.product((1, 2), (0.5, 1.0)):
        reference = ecs_expansion(k, alpha)
        for family in (StateFamily.EBS, StateFamily.ENBS):
            distances = [
                limit_distance(
                    state_expansion(
                        StateParams(family, k, alpha / math.sqrt(M), M)
                    ),
                    reference,
                )
                for M in LIMIT_M_VALUES
            ]
            if not np.all(np.diff(distances) < 0.0):
                return False, (
                    f"{family.value} k={k} alpha={alpha}: distances "
                    f"{distances} do not decrease"
                )
            if distances[-1] >= LIMIT_THRESHOLD:
                return False, (
                    f"{family.value} k={k} alpha={alpha}: distance "
                    f"{distances[-1]:.2e} at M={LIMIT_M_VALUES[-1]}"
                )
            final = max(final, distances[-1])
    return True, f"max distance at M={LIMIT_M_VALUES[-1]}: {final:.2e}"


FAST_CHECKS: List[Callable[[], CheckOutcome]] = [
    check_route_agreement,
    check_oracle_equivalence,
    check_base_state_q,
    check_endpoint_limits,
    check_exact_values,
    check_universal_invariants,
]
FULL_CHECKS = FAST_CHECKS + [check_coherent_limit]


def run_check(check: Callable[[], CheckOutcome]) -> CheckResult:
    """Run one check; an exception counts as a failure."""
    name = check.__name__.replace("check_", "")
    start = time.perf_counter()
    try:
        passed, detail = check()
    except Exception as err:  # reported, not raised
        passed, detail = False, f"{type(err).__name__}: {err}"
    seconds = time.perf_counter() - start
    log = logger.info if passed else logger.error
    log("%s: %s (%.2fs) %s", name, "PASS" if passed else "FAIL", seconds, detail)
    return CheckResult(name, passed, detail, seconds)


def verify_suite(level: VerifyLevel = VerifyLevel.FAST) -> VerificationSummary:
    level = VerifyLevel(level)
    checks = FULL_CHECKS if level is VerifyLevel.FULL else FAST_CHECKS
    return VerificationSummary(level, [run_check(check) for check in checks])
