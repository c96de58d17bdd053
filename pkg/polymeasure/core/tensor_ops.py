"""Dense complex matrix helpers on tensor powers.

Composite indices are big-endian: the first copy is the most significant digit in
base d, which is also the layout ``np.kron`` produces.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg

from polymeasure.core.errors import (
    CapExceededError,
    DimensionMismatchError,
    NotHermitianError,
    NotPositiveSemidefiniteError,
    NumericalInvariantError,
)
from polymeasure.core.poly_model import DensityMatrix, PSD_FLOOR

# Get logger
logger = logging.getLogger("PolyMeasure")

DEFAULT_CAP = 4096


@dataclass(frozen=True, eq=False)
class TensorState:
    """The joint state of ``copies`` independent copies of a d-dimensional state."""

    dim_single: int
    copies: int
    entries: np.ndarray

    @property
    def dim_total(self) -> int:
        return self.entries.shape[0]


def check_cap(dim: int, copies: int, cap: int = DEFAULT_CAP) -> int:
    """Return d**m, raising when it exceeds the configured cap."""
    dim, copies = int(dim), int(copies)
    # d >= 2, so more copies than the cap has bits always overflows it
    if copies > int(cap).bit_length() or dim ** copies > cap:
        raise CapExceededError(f"d^m = {dim}^{copies} exceeds the cap of {cap}")
    return dim ** copies


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(kron, factors)


def tensor_power(state: DensityMatrix, m: int, cap: int = DEFAULT_CAP) -> TensorState:
    if m < 1:
        raise DimensionMismatchError(f"number of copies must be at least 1, got {m}")
    check_cap(state.dim, m, cap)
    entries = kron_all([state.entries] * m)
    trace_dev = abs(np.trace(entries) - 1.0)
    if trace_dev > 1e-10:
        raise NumericalInvariantError(f"tensor power trace deviates from 1 by {trace_dev:.3e}", "trace")
    logger.debug(f"Built tensor power with d={state.dim}, m={m}, size {entries.shape[0]}")
    return TensorState(state.dim, m, entries)


def hermiticity_deviation(h: np.ndarray) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def require_hermitian(h: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Return the Hermitian part of ``h`` after checking it is Hermitian within ``tol``."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    deviation = hermiticity_deviation(h)
    if deviation > tol:
        raise NotHermitianError(f"matrix deviates from Hermitian by {deviation:.3e} (tolerance {tol:.0e})")
    return (h + h.conj().T) / 2


def sqrt_psd(h: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [PSD_FLOOR, 0) are treated as roundoff and clamped to zero.
    """
    h = require_hermitian(h)
    eigenvalues, eigenvectors = scipy.linalg.eigh(h)
    if eigenvalues.size and eigenvalues.min() < PSD_FLOOR:
        raise NotPositiveSemidefiniteError(
            f"smallest eigenvalue {eigenvalues.min():.3e} is below {PSD_FLOOR:.0e}"
        )
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def permutation_indices(d: int, m: int, perm: Sequence[int]) -> np.ndarray:
    """Source index map of the copy permutation ``perm``.

    Output slot k carries input slot ``perm[k]``; the returned array ``src`` satisfies
    ``(P v)[k] = v[src[k]]``.
    """
    perm = list(perm)
    if sorted(perm) != list(range(m)):
        raise DimensionMismatchError(f"{perm} is not a permutation of {m} slots")
    shape = (d,) * m
    out_digits = np.array(np.unravel_index(np.arange(d ** m), shape))
    in_digits = np.empty_like(out_digits)
    in_digits[perm] = out_digits
    return np.ravel_multi_index(tuple(in_digits), shape)


def permutation_matrix(d: int, m: int, perm: Sequence[int]) -> np.ndarray:
    src = permutation_indices(d, m, perm)
    matrix = np.zeros((d ** m, d ** m), dtype=complex)
    matrix[np.arange(d ** m), src] = 1.0
    return matrix


def partial_trace(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem of ``matrix`` not listed in ``keep``."""
    dims = [int(x) for x in dims]
    matrix = np.asarray(matrix, dtype=complex)
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise DimensionMismatchError(f"matrix shape {matrix.shape} does not match subsystem dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    tensor = matrix.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = [letters[n + k] if k in keep else rows[k] for k in range(n)]
    out = [rows[k] for k in keep] + [cols[k] for k in keep]
    reduced = np.einsum("".join(rows + cols) + "->" + "".join(out), tensor)
    kept = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(kept, kept)


def unitarity_deviation(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
