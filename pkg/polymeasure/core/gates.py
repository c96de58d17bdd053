"""Fixed single- and two-qubit gates. The control of CNOT is the first (most
significant) qubit."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GateSet:
    hadamard: np.ndarray
    cnot: np.ndarray


def _frozen(matrix) -> np.ndarray:
    matrix = np.array(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


GATES = GateSet(
    hadamard=_frozen(np.array([[1, 1], [1, -1]]) / np.sqrt(2)),
    cnot=_frozen([[1, 0, 0, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0]]),
)
