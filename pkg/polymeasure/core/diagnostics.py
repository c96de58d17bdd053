"""Consistency suite behind the ``check`` command.

Each check measures one identity on the given (polynomial, state) pair and reports
the deviation against its tolerance.
"""

import logging
from collections import OrderedDict
from typing import Any, Dict, Optional

import numpy as np

from polymeasure.core.hadamard_test import (
    e_operator_check,
    eigenstate_responses,
    embed_unitary,
    formula_value,
    run_circuit_exact,
)
from polymeasure.core.observable_builder import build_observables, expectation, lift
from polymeasure.core.poly_model import DensityMatrix, PolynomialSpec, evaluate_exact
from polymeasure.core.spectral import eigh, outcome_distribution
from polymeasure.core.tensor_ops import DEFAULT_CAP, TensorState, tensor_power

# Get logger
logger = logging.getLogger("PolyMeasure")


def _entry(deviation: float, tolerance: float) -> Dict[str, Any]:
    deviation = float(deviation)
    return {"deviation": deviation, "tolerance": tolerance, "ok": bool(deviation <= tolerance)}


def _observable_checks(label: str, o: np.ndarray, joint: TensorState, results: Dict[str, Any]) -> None:
    decomp = eigh(o)
    deviations = decomp.deviations(o)
    results[f"{label}.spectral_reconstruction"] = _entry(deviations["reconstruction"], 1e-10)
    results[f"{label}.rotation_unitarity"] = _entry(deviations["unitarity"], 1e-10)
    results[f"{label}.rotation_diagonalizes"] = _entry(deviations["diagonal"], 1e-10)

    weighted = outcome_distribution(decomp, joint).weighted_mean
    results[f"{label}.measurement_identity"] = _entry(abs(weighted - expectation(o, joint)), 1e-10)

    embedded = embed_unitary(o)
    embedding = embedded.deviations()
    results[f"{label}.embedding_unitarity"] = _entry(embedding["unitarity"], 1e-10)
    results[f"{label}.embedding_real_part"] = _entry(embedding["real_part"], 1e-10)
    results[f"{label}.circuit_formula"] = _entry(
        abs(run_circuit_exact(embedded, joint) - formula_value(embedded, joint)), 1e-10
    )
    results[f"{label}.e_operator"] = _entry(e_operator_check(embedded, joint).deviation, 1e-10)
    results[f"{label}.eigenstate_response"] = _entry(eigenstate_responses(embedded).deviation, 1e-10)


def run_checks(
    spec: PolynomialSpec,
    state: DensityMatrix,
    degree: Optional[int] = None,
    symmetrized: bool = False,
    cap: int = DEFAULT_CAP,
) -> Dict[str, Dict[str, Any]]:
    """Run every identity check; keys are ordered as they run."""
    results: Dict[str, Dict[str, Any]] = OrderedDict()
    exact = evaluate_exact(spec, state)

    lifted = lift(spec, degree, cap)
    results["homogenization"] = _entry(abs(evaluate_exact(lifted, state) - exact), 1e-12)

    pair = build_observables(spec, degree, symmetrized, cap)
    joint = tensor_power(state, lifted.degree, cap)
    via_pair = expectation(pair.o_real, joint) + 1j * expectation(pair.o_imag, joint)
    results["trace_identity"] = _entry(abs(via_pair - exact), 1e-10)

    _observable_checks("o_real", pair.o_real, joint, results)
    if not pair.imag_is_zero:
        _observable_checks("o_imag", pair.o_imag, joint, results)

    failed = [name for name, entry in results.items() if not entry["ok"]]
    if failed:
        logger.warning(f"Consistency checks failed: {failed}")
    return results
