"""Deterministic test states: named states and seeded random ensembles."""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from polymeasure.core.errors import InvalidRecipeError
from polymeasure.core.poly_model import DensityMatrix, require_state

# Get logger
logger = logging.getLogger("PolyMeasure")

KINDS = ("pure-random", "ginibre", "maximally-mixed", "computational", "bell-singlet")


@dataclass(frozen=True)
class StateRecipe:
    kind: str
    dim: int
    rank: Optional[int] = None
    seed: int = 0
    index: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidRecipeError(f"unknown state kind {self.kind!r}; expected one of {KINDS}")
        if self.dim < 1:
            raise InvalidRecipeError(f"dimension must be positive, got {self.dim}")
        if self.rank is not None and not 1 <= self.rank <= self.dim:
            raise InvalidRecipeError(f"rank must lie in [1, {self.dim}], got {self.rank}")
        if not 0 <= self.index < self.dim:
            raise InvalidRecipeError(f"basis index {self.index} out of range for dimension {self.dim}")
        if self.kind == "bell-singlet" and self.dim != 4:
            raise InvalidRecipeError("the singlet lives on two qubits (dim 4)")

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "dim": self.dim, "rank": self.rank, "seed": self.seed, "index": self.index}


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _projector(vector: np.ndarray) -> np.ndarray:
    vector = vector / np.linalg.norm(vector)
    return np.outer(vector, vector.conj())


def generate(recipe: StateRecipe) -> DensityMatrix:
    d = recipe.dim
    rng = np.random.default_rng(recipe.seed)
    if recipe.kind == "pure-random":
        entries = _projector(_complex_gaussian(rng, d))
    elif recipe.kind == "ginibre":
        g = _complex_gaussian(rng, (d, recipe.rank or d))
        entries = g @ g.conj().T
        entries = (entries + entries.conj().T) / 2
        entries /= np.trace(entries).real
    elif recipe.kind == "maximally-mixed":
        entries = np.eye(d, dtype=complex) / d
    elif recipe.kind == "computational":
        entries = np.zeros((d, d), dtype=complex)
        entries[recipe.index, recipe.index] = 1.0
    else:
        entries = _projector(np.array([0, 1, -1, 0], dtype=complex))
    logger.debug(f"Generated {recipe.kind} state of dimension {d} (seed {recipe.seed})")
    return require_state(entries)
