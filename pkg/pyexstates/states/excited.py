"""Family-independent entry points for building states."""

from typing import Dict, Union

from pyexstates.errors import DomainError
from pyexstates.states.base_state import BaseStateFamily
from pyexstates.states.binomial import BINOMIAL
from pyexstates.states.config import (
    FockExpansion,
    NormalizationRoute,
    NormalizationValue,
    StateFamily,
    StateParams,
)
from pyexstates.states.constants import DEFAULT_TAIL_TOLERANCE
from pyexstates.states.negative_binomial import NEGATIVE_BINOMIAL

_FAMILIES: Dict[StateFamily, BaseStateFamily] = {
    StateFamily.BS: BINOMIAL,
    StateFamily.EBS: BINOMIAL,
    StateFamily.NBS: NEGATIVE_BINOMIAL,
    StateFamily.ENBS: NEGATIVE_BINOMIAL,
}


def family_for(family: Union[StateFamily, str]) -> BaseStateFamily:
    return _FAMILIES[StateFamily(family)]


def excited_expansion(
    params: StateParams, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> FockExpansion:
    """Normalized Fock amplitudes of an EBS or ENBS."""
    if not params.family.is_excited:
        raise DomainError(
            f"excited_expansion needs EBS or ENBS, got {params.family.value}"
        )
    return family_for(params.family).excited_expansion(
        params.k, params.eta, params.M, tail_tolerance
    )


def state_expansion(
    params: StateParams, tail_tolerance: float = DEFAULT_TAIL_TOLERANCE
) -> FockExpansion:
    """Normalized Fock amplitudes of a state of any family."""
    family = family_for(params.family)
    if params.family.is_excited:
        return family.excited_expansion(
            params.k, params.eta, params.M, tail_tolerance
        )
    return family.base_coefficients(params.eta, params.M, tail_tolerance)


def normalization(
    params: StateParams,
    route: Union[NormalizationRoute, str, None] = None,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> NormalizationValue:
    """B or B^- for the state, by the family's default route if none given."""
    return family_for(params.family).normalization(
        params.k, params.eta, params.M, route, tail_tolerance
    )
