"""Operators whose expectation on m copies of a state reproduces a polynomial.

Each term ``c * r[i1,j1] ... r[im,jm]`` contributes ``c |j1..jm><i1..im|`` to A_f;
the Hermitian pair (O_f, O'_f) then satisfies <A_f> = <O_f> + i <O'_f>.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from polymeasure.core.errors import (
    DimensionMismatchError,
    IndexRangeError,
    NonHomogeneousError,
    PermutationLimitError,
)
from polymeasure.core.poly_model import PolynomialSpec, homogenize
from polymeasure.core.tensor_ops import (
    DEFAULT_CAP,
    TensorState,
    check_cap,
    permutation_indices,
)

# Get logger
logger = logging.getLogger("PolyMeasure")

MAX_SYMMETRIZE_COPIES = 6
ZERO_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ObservablePair:
    dim_total: int
    a_f: np.ndarray
    o_real: np.ndarray
    o_imag: np.ndarray

    @property
    def imag_is_zero(self) -> bool:
        return float(np.linalg.norm(self.o_imag)) <= ZERO_NORM_TOL


def _composite(indices: Sequence[int], d: int) -> int:
    return int(np.ravel_multi_index(tuple(indices), (d,) * len(indices)))


def term_operator(indices: Sequence[int], d: int) -> np.ndarray:
    """The rank-1 operator |j1..jm><i1..im| for one multi-index term."""
    indices = [int(i) for i in indices]
    if not indices or len(indices) % 2:
        raise DimensionMismatchError(f"expected 2m indices, got {len(indices)}")
    bad = [i for i in indices if not 0 <= i < d]
    if bad:
        raise IndexRangeError(f"index {bad[0]} out of range for dimension {d}")
    m = len(indices) // 2
    matrix = np.zeros((d ** m, d ** m), dtype=complex)
    matrix[_composite(indices[1::2], d), _composite(indices[0::2], d)] = 1.0
    return matrix


def assemble_A(spec: PolynomialSpec, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Sum of coefficient-weighted term operators; the polynomial must be homogeneous."""
    if not spec.is_homogeneous:
        raise NonHomogeneousError(f"spec of degree {spec.degree} has lower-degree terms; homogenize first")
    d, m = spec.dim, spec.degree
    size = check_cap(d, m, cap)
    a_f = np.zeros((size, size), dtype=complex)
    for term in spec.terms:
        a_f[_composite(term.indices[1::2], d), _composite(term.indices[0::2], d)] += term.coeff
    logger.debug(f"Assembled A_f of size {size} from {len(spec.terms)} terms")
    return a_f


def hermitian_pair(a_f: np.ndarray) -> ObservablePair:
    a_f = np.asarray(a_f, dtype=complex)
    if a_f.ndim != 2 or a_f.shape[0] != a_f.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a_f.shape}")
    adjoint = a_f.conj().T
    return ObservablePair(
        dim_total=a_f.shape[0],
        a_f=a_f,
        o_real=(a_f + adjoint) / 2,
        o_imag=-1j * (a_f - adjoint) / 2,
    )


def symmetrize(a_f: np.ndarray, d: int, m: int) -> np.ndarray:
    """Uniform average of A_f over all m! permutations of the copies."""
    a_f = np.asarray(a_f, dtype=complex)
    if a_f.shape != (d ** m, d ** m):
        raise DimensionMismatchError(f"operator shape {a_f.shape} is not d^m = {d ** m}")
    if m > MAX_SYMMETRIZE_COPIES:
        raise PermutationLimitError(
            f"symmetrizing over {m}! permutations exceeds the limit of m <= {MAX_SYMMETRIZE_COPIES}"
        )
    total = np.zeros_like(a_f)
    for perm in itertools.permutations(range(m)):
        src = permutation_indices(d, m, perm)
        total += a_f[np.ix_(src, src)]
    return total / math.factorial(m)


def expectation(op: np.ndarray, state: TensorState) -> complex:
    """Tr{op * state}."""
    op = np.asarray(op)
    if op.shape != state.entries.shape:
        raise DimensionMismatchError(
            f"operator shape {op.shape} does not match state shape {state.entries.shape}"
        )
    return complex(np.einsum("ij,ji->", op, state.entries))


def lift(spec: PolynomialSpec, degree: Optional[int] = None, cap: int = DEFAULT_CAP) -> PolynomialSpec:
    """Homogenize to ``degree`` once d^degree is known to fit under the cap."""
    target = spec.degree if degree is None else int(degree)
    check_cap(spec.dim, target, cap)
    return homogenize(spec, target)


def build_observables(
    spec: PolynomialSpec,
    degree: Optional[int] = None,
    symmetrized: bool = False,
    cap: int = DEFAULT_CAP,
) -> ObservablePair:
    """Homogenize, assemble and split a polynomial in one step."""
    lifted = lift(spec, degree, cap)
    a_f = assemble_A(lifted, cap)
    if symmetrized:
        a_f = symmetrize(a_f, lifted.dim, lifted.degree)
    return hermitian_pair(a_f)
