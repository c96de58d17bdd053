"""Eigendecomposition of observables and the standard-basis outcome distribution.

Measuring O on a state amounts to rotating with U = sum_j |j><phi_j|, measuring in
the standard basis and reporting o_j for outcome j.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np
import scipy.linalg

from polymeasure.core.errors import DimensionMismatchError, NumericalInvariantError
from polymeasure.core.tensor_ops import TensorState, require_hermitian, unitarity_deviation

# Get logger
logger = logging.getLogger("PolyMeasure")

PROBABILITY_FLOOR = -1e-10
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rotation: np.ndarray

    @classmethod
    def from_eigenvectors(cls, eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> "SpectralDecomposition":
        eigenvectors = np.asarray(eigenvectors, dtype=complex)
        return cls(np.asarray(eigenvalues, dtype=float), eigenvectors, eigenvectors.conj().T)

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    def deviations(self, o: np.ndarray) -> Dict[str, float]:
        """Measured residuals of the three decomposition invariants against ``o``."""
        rotated = self.rotation @ o @ self.rotation.conj().T
        off_diagonal = rotated - np.diag(np.diag(rotated))
        return {
            "unitarity": unitarity_deviation(self.eigenvectors),
            "diagonal": float(np.max(np.abs(off_diagonal))) if off_diagonal.size else 0.0,
            "reconstruction": float(np.max(np.abs(self.reconstruct() - o))),
        }


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    probabilities: np.ndarray
    values: np.ndarray

    @classmethod
    def from_raw(cls, probabilities: np.ndarray, values: np.ndarray) -> "OutcomeDistribution":
        """Clamp roundoff negatives and renormalize; larger defects are errors."""
        probabilities = np.real(np.asarray(probabilities, dtype=complex)).astype(float)
        values = np.asarray(values, dtype=float)
        if probabilities.shape != values.shape:
            raise DimensionMismatchError(
                f"{probabilities.size} probabilities but {values.size} outcome values"
            )
        if probabilities.min() < PROBABILITY_FLOOR:
            raise NumericalInvariantError(
                f"outcome probability {probabilities.min():.3e} is negative", "probability"
            )
        probabilities = np.clip(probabilities, 0.0, None)
        total = probabilities.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NumericalInvariantError(
                f"outcome probabilities sum to {total!r}, not 1", "probability"
            )
        return cls(probabilities / total, values)

    @property
    def weighted_mean(self) -> float:
        return float(np.dot(self.probabilities, self.values))


def eigh(o: np.ndarray) -> SpectralDecomposition:
    """Descending eigendecomposition with a fixed eigenvector phase.

    Each eigenvector is rotated so its largest-magnitude component (lowest index on
    ties) is real and positive.
    """
    o = require_hermitian(o)
    eigenvalues, eigenvectors = scipy.linalg.eigh(o)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    pivots = np.argmax(np.abs(eigenvectors), axis=0)
    pivot_values = eigenvectors[pivots, np.arange(eigenvectors.shape[1])]
    eigenvectors = eigenvectors * (pivot_values.conj() / np.abs(pivot_values))
    logger.debug(f"Diagonalized observable of size {o.shape[0]}")
    return SpectralDecomposition.from_eigenvectors(eigenvalues, eigenvectors)


def outcome_distribution(decomp: SpectralDecomposition, state: TensorState) -> OutcomeDistribution:
    """Standard-basis probabilities <j|U rho U^dagger|j>, tagged with o_j."""
    rho = state.entries
    if rho.shape[0] != decomp.eigenvectors.shape[0]:
        raise DimensionMismatchError(
            f"state size {rho.shape[0]} does not match observable size {decomp.eigenvectors.shape[0]}"
        )
    vectors = decomp.eigenvectors
    probabilities = np.einsum("ij,ik,kj->j", vectors.conj(), rho, vectors)
    return OutcomeDistribution.from_raw(probabilities, decomp.eigenvalues)
