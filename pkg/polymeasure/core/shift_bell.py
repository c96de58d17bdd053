"""Purity Tr{rho^m} through the cyclic shift, and the Bell-basis swap measurement.

S |psi_1> ... |psi_m> = |psi_m> |psi_1> ... |psi_{m-1}> and Tr{S rho^m} = Tr{rho^m}.
For two qubits the swap is diagonal in the Bell basis, which a CNOT followed by a
Hadamard on the first qubit maps onto the computational basis.
"""

import logging
from typing import List, NamedTuple, Sequence

import numpy as np

from polymeasure.core.errors import DimensionMismatchError, NumericalInvariantError, PolyMeasureError
from polymeasure.core.gates import GATES
from polymeasure.core.hadamard_test import EmbeddedUnitary, sample_control
from polymeasure.core.observable_builder import expectation
from polymeasure.core.poly_model import DensityMatrix, require_state
from polymeasure.core.sampler import (
    DEFAULT_SEED,
    DEFAULT_SHOTS,
    EstimateReport,
    estimate_distribution,
)
from polymeasure.core.spectral import OutcomeDistribution
from polymeasure.core.tensor_ops import (
    DEFAULT_CAP,
    check_cap,
    kron,
    partial_trace,
    permutation_matrix,
    tensor_power,
)

# Get logger
logger = logging.getLogger("PolyMeasure")

PURITY_TOL = 1e-12
PURITY_METHODS = ("swap-exact", "bell-sample", "hadamard")

# Outcome index b1*2 + b0 of the Bell circuit -> swap eigenvalue.
BELL_OUTCOME_VALUES = np.array([1.0, 1.0, 1.0, -1.0])


class BellState(NamedTuple):
    name: str
    vector: np.ndarray
    eigenvalue: float


def cyclic_shift(d: int, m: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    check_cap(d, m, cap)
    # Output slot 0 carries input slot m-1, slot k carries slot k-1.
    return permutation_matrix(d, m, [m - 1] + list(range(m - 1)))


def purity_exact(state: DensityMatrix, m: int, cap: int = DEFAULT_CAP) -> float:
    """Tr{S rho^m}, cross-checked against the direct Tr{rho^m}."""
    if m < 1:
        raise DimensionMismatchError(f"m must be at least 1, got {m}")
    value = expectation(cyclic_shift(state.dim, m, cap), tensor_power(state, m, cap))
    direct = np.trace(np.linalg.matrix_power(state.entries, m))
    if abs(value - direct) > PURITY_TOL:
        raise NumericalInvariantError(
            f"Tr{{S rho^m}} = {value} disagrees with Tr{{rho^m}} = {direct}", "purity"
        )
    if abs(value.imag) > PURITY_TOL:
        raise NumericalInvariantError(f"purity has imaginary residual {value.imag:.3e}", "purity")
    return float(value.real)


def bell_eigenbasis() -> List[BellState]:
    s = 1 / np.sqrt(2)
    return [
        BellState("phi+", np.array([s, 0, 0, s], dtype=complex), 1.0),
        BellState("phi-", np.array([s, 0, 0, -s], dtype=complex), 1.0),
        BellState("psi+", np.array([0, s, s, 0], dtype=complex), 1.0),
        BellState("psi-", np.array([0, s, -s, 0], dtype=complex), -1.0),
    ]


def bell_circuit() -> np.ndarray:
    """CNOT (control = first qubit) followed by H on the first qubit."""
    return kron(GATES.hadamard, np.eye(2)) @ GATES.cnot


def bell_circuit_distribution(joint: np.ndarray) -> OutcomeDistribution:
    joint = np.asarray(joint, dtype=complex)
    if joint.shape != (4, 4):
        raise DimensionMismatchError(f"the Bell circuit acts on two qubits, got shape {joint.shape}")
    state = require_state(joint)
    circuit = bell_circuit()
    final = circuit @ state.entries @ circuit.conj().T
    return OutcomeDistribution.from_raw(np.diag(final), BELL_OUTCOME_VALUES)


def bell_circuit_images() -> List[int]:
    """Computational basis index each Bell state is mapped to by the circuit."""
    circuit = bell_circuit()
    images = []
    for bell in bell_eigenbasis():
        amplitudes = np.abs(circuit @ bell.vector)
        images.append(int(np.argmax(amplitudes)))
    return images


def reduced_purity(state: DensityMatrix, dims: Sequence[int], keep: Sequence[int] = (0,)) -> float:
    """Tr{rho_A^2} for the subsystems ``keep`` of a state on ``dims``."""
    reduced = partial_trace(state.entries, dims, keep)
    return float(np.real(np.einsum("ij,ji->", reduced, reduced)))


def estimate_purity(
    state: DensityMatrix,
    m: int = 2,
    method: str = "swap-exact",
    shots: int = DEFAULT_SHOTS,
    seed: int = DEFAULT_SEED,
    include_exact: bool = True,
    cap: int = DEFAULT_CAP,
) -> EstimateReport:
    """Tr{rho^m} by the exact shift identity, the sampled Bell circuit or the Hadamard test."""
    if method not in PURITY_METHODS:
        raise PolyMeasureError(f"unknown purity method {method!r}; expected one of {PURITY_METHODS}", "method")

    exact = purity_exact(state, m, cap)
    scale = None
    if method == "swap-exact":
        estimate, stderr, used = exact, 0.0, 0
    elif method == "bell-sample":
        if state.dim != 2 or m != 2:
            raise DimensionMismatchError(
                f"bell-sample measures two copies of a qubit, got d={state.dim}, m={m}"
            )
        joint = tensor_power(state, 2, cap)
        estimate, stderr = estimate_distribution(bell_circuit_distribution(joint.entries), shots, seed)
        used = shots
    else:
        # S is unitary for every m, so the Hadamard test measures Re Tr{S rho^m} directly.
        embedded = EmbeddedUnitary.from_unitary(cyclic_shift(state.dim, m, cap))
        result = sample_control(embedded, tensor_power(state, m, cap), shots, seed)
        estimate, stderr, used, scale = result.mean, result.stderr, shots, result.scale
    logger.debug(f"Purity m={m} via {method}: {estimate}")

    return EstimateReport(
        estimate=complex(estimate, 0.0),
        stderr_real=stderr,
        stderr_imag=0.0,
        shots_real=used,
        shots_imag=0,
        seed=seed,
        method=method,
        dim=state.dim,
        degree=m,
        exact=complex(exact, 0.0) if include_exact else None,
        scale_real=scale,
    )
