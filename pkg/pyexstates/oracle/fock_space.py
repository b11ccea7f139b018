"""Dense ladder operators on a truncated Fock space.

Brute-force reference for every closed form in the library: states are
plain vectors, operators are D x D matrices, and expectation values are
sequential matrix-vector products.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from pyexstates.errors import DomainError, TruncationRiskError
from pyexstates.states.config import FockExpansion

logger = logging.getLogger(__name__)

MAX_WORD_LENGTH = 6
NORM_RTOL = 1e-10


class Ladder(Enum):
    """Enum for the two ladder operators."""

    A = "A"
    ADAG = "ADAG"


Word = Sequence[Union[Ladder, str]]


@dataclass(frozen=True)
class TruncatedFockSpace:
    """Span of |0>, ..., |D-1> with a[n-1][n] = sqrt(n) and a^dag = a^T."""

    dimension: int
    annihilation: np.ndarray = field(init=False, repr=False)
    creation: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dimension}")
        annihilation = np.diag(np.sqrt(np.arange(1, self.dimension)), k=1)
        creation = annihilation.T.copy()
        for matrix in (annihilation, creation):
            matrix.flags.writeable = False
        object.__setattr__(self, "annihilation", annihilation)
        object.__setattr__(self, "creation", creation)

    def commutator_defect(self) -> float:
        """Max deviation of [a, a^dag] from identity on the leading block."""
        commutator = (
            self.annihilation @ self.creation - self.creation @ self.annihilation
        )
        block = self.dimension - 1
        return float(np.abs(commutator[:block, :block] - np.eye(block)).max())

    def matrix(self, word: Word) -> np.ndarray:
        """Operator product of the word, leftmost factor first."""
        product = np.eye(self.dimension)
        for letter in _letters(word):
            product = product @ self._operator(letter)
        return product

    def vector(self, state: Union[FockExpansion, Sequence[float]]) -> np.ndarray:
        """A Fock expansion or raw amplitudes as a length-D vector."""
        if isinstance(state, FockExpansion):
            return state.to_dense(self.dimension)
        vector = np.asarray(state, dtype=np.float64)
        if vector.shape != (self.dimension,):
            raise DomainError(
                f"state has shape {vector.shape}, expected ({self.dimension},)"
            )
        return vector

    def apply_word(
        self,
        state: Union[FockExpansion, Sequence[float]],
        word: Word,
        require_normalized: bool = True,
    ) -> np.ndarray:
        """Unnormalized image of the state under the operator word."""
        vector = self.vector(state)
        letters = _letters(word)
        self._check(vector, letters, require_normalized)
        for letter in reversed(letters):
            vector = self._operator(letter) @ vector
        return vector

    def expectation(
        self, state: Union[FockExpansion, Sequence[float]], word: Word
    ) -> float:
        """<psi| word |psi> for a real normalized state."""
        vector = self.vector(state)
        return float(vector @ self.apply_word(vector, word))

    def _operator(self, letter: Ladder) -> np.ndarray:
        if letter is Ladder.A:
            return self.annihilation
        return self.creation

    def _check(self, vector: np.ndarray, letters, require_normalized: bool):
        if len(letters) > MAX_WORD_LENGTH:
            raise DomainError(
                f"operator words are limited to {MAX_WORD_LENGTH} letters, "
                f"got {len(letters)}"
            )
        if require_normalized:
            norm = float(vector @ vector)
            if abs(norm - 1.0) > NORM_RTOL:
                raise DomainError(f"state is not normalized (|psi|^2 = {norm!r})")
        occupied = np.flatnonzero(vector)
        top = int(occupied[-1]) if occupied.size else 0
        if self.dimension < top + len(letters) + 2:
            raise TruncationRiskError(
                f"dimension {self.dimension} is too small for a word of "
                f"length {len(letters)} on a state occupying index {top}; "
                f"need at least {top + len(letters) + 2}"
            )


def _letters(word: Word):
    return [Ladder(letter) for letter in word]


def safe_dimension(expansion: FockExpansion, word_length: int = MAX_WORD_LENGTH) -> int:
    """Smallest dimension that holds the expansion under any word."""
    return expansion.top + word_length + 2


def expectation(
    state: FockExpansion, word: Word, dimension: int = None
) -> float:
    """<psi| word |psi> on a Fock space just large enough for the word."""
    dimension = dimension or safe_dimension(state, len(word))
    return TruncatedFockSpace(dimension).expectation(state, word)


def apply_word(
    state: FockExpansion, word: Word, dimension: int = None
) -> np.ndarray:
    """Image of the state under the word on a large enough Fock space."""
    dimension = dimension or safe_dimension(state, len(word))
    return TruncatedFockSpace(dimension).apply_word(state, word)
