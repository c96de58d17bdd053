"""Seeded shot sampling and polynomial estimates with standard errors.

Sampling rule: a ``numpy.random.Generator`` backed by PCG64 and seeded with the
integer seed draws ``shots`` uniforms u in [0, 1); outcome = first index k whose
normalized cumulative probability exceeds u.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from polymeasure.core.errors import DimensionMismatchError, PolyMeasureError, ShotCountError
from polymeasure.core.observable_builder import build_observables
from polymeasure.core.poly_model import (
    DensityMatrix,
    PolynomialSpec,
    complex_to_pair,
    evaluate_exact,
)
from polymeasure.core.spectral import (
    OutcomeDistribution,
    SpectralDecomposition,
    eigh,
    outcome_distribution,
)
from polymeasure.core.tensor_ops import DEFAULT_CAP, TensorState, tensor_power

# Get logger
logger = logging.getLogger("PolyMeasure")

DEFAULT_SHOTS = 10000
DEFAULT_SEED = 0
SIGMA_BOUND = 5.0
METHODS = ("eigen", "hadamard")


class ObservableEstimate(NamedTuple):
    mean: float
    stderr: float


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def sample_outcomes(dist: OutcomeDistribution, shots: int, seed: int) -> np.ndarray:
    """Draw ``shots`` i.i.d. outcome indices by inverse CDF."""
    if shots < 1:
        raise ShotCountError(f"shots must be at least 1, got {shots}")
    cdf = np.cumsum(dist.probabilities)
    cdf /= cdf[-1]
    uniforms = make_generator(seed).random(int(shots))
    return np.searchsorted(cdf, uniforms, side="right")


def sample_outcomes_batched(
    dist: OutcomeDistribution,
    shots: int,
    seed: int,
    batch_size: int,
    workers: int = 1,
) -> np.ndarray:
    """Sample in batches, batch k on its own stream seeded with ``seed + k``.

    The concatenated result depends on ``batch_size`` but never on ``workers``.
    """
    if shots < 1:
        raise ShotCountError(f"shots must be at least 1, got {shots}")
    if batch_size < 1:
        raise ShotCountError(f"batch size must be at least 1, got {batch_size}")
    sizes = [min(batch_size, shots - start) for start in range(0, shots, batch_size)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        batches = list(pool.map(lambda k: sample_outcomes(dist, sizes[k], seed + k), range(len(sizes))))
    return np.concatenate(batches)


def summarize(values: np.ndarray) -> ObservableEstimate:
    """Sample mean and its standard error (sample std / sqrt(N))."""
    n = len(values)
    if n < 2:
        raise ShotCountError(f"at least 2 shots are needed for a standard error, got {n}")
    return ObservableEstimate(float(np.mean(values)), float(np.std(values, ddof=1) / math.sqrt(n)))


def estimate_distribution(dist: OutcomeDistribution, shots: int, seed: int) -> ObservableEstimate:
    outcomes = sample_outcomes(dist, shots, seed)
    return summarize(dist.values[outcomes])


def estimate_observable(
    decomp: SpectralDecomposition,
    state: TensorState,
    shots: int,
    seed: int,
) -> ObservableEstimate:
    """Rotate, measure in the standard basis and average the eigenvalue of each outcome."""
    if shots < 2:
        raise ShotCountError(f"at least 2 shots are needed for a standard error, got {shots}")
    return estimate_distribution(outcome_distribution(decomp, state), shots, seed)


@dataclass(frozen=True)
class EstimateReport:
    estimate: complex
    stderr_real: float
    stderr_imag: float
    shots_real: int
    shots_imag: int
    seed: int
    method: str
    dim: int
    degree: int
    exact: Optional[complex] = None
    scale_real: Optional[float] = None
    scale_imag: Optional[float] = None

    def deviation(self) -> Optional[tuple]:
        if self.exact is None:
            return None
        diff = self.estimate - self.exact
        return abs(diff.real), abs(diff.imag)

    def within_bound(self, sigmas: float = SIGMA_BOUND, floor: float = 1e-8) -> Optional[tuple]:
        """Whether each part lies within ``sigmas`` standard errors of the exact value."""
        deviation = self.deviation()
        if deviation is None:
            return None
        return (
            deviation[0] <= max(sigmas * self.stderr_real, floor),
            deviation[1] <= max(sigmas * self.stderr_imag, floor),
        )

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "estimate": complex_to_pair(self.estimate),
            "stderr": [float(self.stderr_real), float(self.stderr_imag)],
            "shots": [int(self.shots_real), int(self.shots_imag)],
            "exact": complex_to_pair(self.exact) if self.exact is not None else None,
            "seed": int(self.seed),
            "method": self.method,
            "dim": self.dim,
            "degree": self.degree,
        }
        if self.exact is not None:
            result["deviation"] = [float(x) for x in self.deviation()]
            result["bound"] = [SIGMA_BOUND * float(self.stderr_real), SIGMA_BOUND * float(self.stderr_imag)]
            result["within_bound"] = list(self.within_bound())
        if self.scale_real is not None or self.scale_imag is not None:
            result["scale"] = [self.scale_real, self.scale_imag]
        return result


def estimate_polynomial(
    spec: PolynomialSpec,
    state: DensityMatrix,
    shots: int = DEFAULT_SHOTS,
    seed: int = DEFAULT_SEED,
    method: str = "eigen",
    degree: Optional[int] = None,
    symmetrized: bool = False,
    include_exact: bool = True,
    cap: int = DEFAULT_CAP,
) -> EstimateReport:
    """Estimate f(rho) = <O_f> + i <O'_f> from simulated shots.

    Shots are split evenly between the two observables (the real part takes the odd
    one); when O'_f vanishes every shot goes to O_f. The real part is sampled with
    ``seed`` and the imaginary part with ``seed + 1``.
    """
    if method not in METHODS:
        raise PolyMeasureError(f"unknown method {method!r}; expected one of {METHODS}", "method")
    if spec.dim != state.dim:
        raise DimensionMismatchError(f"polynomial dimension {spec.dim} does not match state dimension {state.dim}")

    pair = build_observables(spec, degree, symmetrized, cap)
    m = degree if degree is not None else spec.degree
    joint = tensor_power(state, m, cap)

    if pair.imag_is_zero:
        shots_real, shots_imag = shots, 0
    else:
        shots_real, shots_imag = shots - shots // 2, shots // 2
    if shots_real < 2 or (shots_imag and shots_imag < 2):
        raise ShotCountError(f"{shots} shots leave fewer than 2 for one of the observables")
    logger.debug(f"Estimating with method={method}, shots split {shots_real}/{shots_imag}")

    if method == "eigen":
        real = estimate_observable(eigh(pair.o_real), joint, shots_real, seed)
        imag = estimate_observable(eigh(pair.o_imag), joint, shots_imag, seed + 1) if shots_imag else None
        scale_real = scale_imag = None
    else:
        from polymeasure.core.hadamard_test import embed_unitary, sample_control

        embedded = embed_unitary(pair.o_real)
        real = sample_control(embedded, joint, shots_real, seed).rescaled
        scale_real, scale_imag = embedded.scale, None
        imag = None
        if shots_imag:
            embedded_imag = embed_unitary(pair.o_imag)
            imag = sample_control(embedded_imag, joint, shots_imag, seed + 1).rescaled
            scale_imag = embedded_imag.scale

    return EstimateReport(
        estimate=complex(real.mean, imag.mean if imag is not None else 0.0),
        stderr_real=real.stderr,
        stderr_imag=imag.stderr if imag is not None else 0.0,
        shots_real=shots_real,
        shots_imag=shots_imag,
        seed=seed,
        method=method,
        dim=spec.dim,
        degree=m,
        exact=evaluate_exact(spec, state) if include_exact else None,
        scale_real=scale_real,
        scale_imag=scale_imag,
    )
