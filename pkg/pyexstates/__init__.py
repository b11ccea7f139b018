from pyexstates.errors import (
    CapacityError,
    ConsistencyError,
    DomainError,
    ExStatesError,
    RouteError,
    TruncationRiskError,
    UsageError,
)
from pyexstates.states import *  # noqa: F401,F403
