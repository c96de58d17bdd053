import json
import logging
from typing import Dict, Any, Optional, Sequence, Union

import numpy as np
from sqlalchemy.exc import SQLAlchemyError

from polymeasure.core.diagnostics import run_checks
from polymeasure.core.errors import PolyMeasureError
from polymeasure.core.observable_builder import build_observables
from polymeasure.core.poly_model import (
    DensityMatrix,
    PolynomialSpec,
    evaluate_exact,
    matrix_to_pairs,
    parse_polynomial,
    spec_from_dict,
    complex_to_pair,
    state_from_dict,
)
from polymeasure.core.sampler import DEFAULT_SEED, DEFAULT_SHOTS, estimate_polynomial
from polymeasure.core.shift_bell import estimate_purity, reduced_purity
from polymeasure.core.state_gen import StateRecipe, generate
from polymeasure.core.tensor_ops import DEFAULT_CAP
from polymeasure.repositories import RunRepository

# Get logger
logger = logging.getLogger("PolyMeasure")

PolynomialSource = Union[str, Dict[str, Any], PolynomialSpec]
StateSource = Union[Dict[str, Any], DensityMatrix]

class EstimationService:
    """Service layer that coordinates the estimators and the run ledger."""

    def __init__(self,
                db_url: str = "sqlite:///polymeasure.db",
                cap: int = DEFAULT_CAP,
                record: bool = False):
        """Initialize with the dimension cap and an optional run ledger."""
        self.db_url = db_url
        self.cap = cap
        self.record = record
        self._repository = None

    @property
    def repository(self):
        """Open the run ledger on first use."""
        if self._repository is None:
            self._repository = RunRepository(self.db_url)
        return self._repository

    def _error(self, e: Exception) -> Dict[str, Any]:
        invariant = getattr(e, "invariant", "internal")
        return {"error": str(e), "invariant": invariant}

    def _resolve_state(self, state: StateSource) -> DensityMatrix:
        if isinstance(state, DensityMatrix):
            return state
        return state_from_dict(state)

    def _resolve_polynomial(self, polynomial: PolynomialSource, dim: Optional[int]) -> PolynomialSpec:
        if isinstance(polynomial, PolynomialSpec):
            return polynomial
        if isinstance(polynomial, str):
            if dim is None:
                raise PolyMeasureError("an expression needs a dimension (give a state or --dim)", "dim")
            return parse_polynomial(polynomial, dim)
        return spec_from_dict(polynomial)

    def _record(self, report: Dict[str, Any], command: str,
                spec: Optional[PolynomialSpec] = None) -> None:
        if not self.record:
            return
        try:
            polynomial = json.dumps(spec.to_dict()) if spec is not None else None
            run_id = self.repository.add_run(report, command, polynomial)
            logger.info(f"Run {run_id} recorded")
        except Exception as e:
            logger.error(f"Failed to record run: {e}", exc_info=True)
            # Continue even if the ledger fails - the report is already computed

    def evaluate(self, polynomial: PolynomialSource, state: StateSource) -> Dict[str, Any]:
        """Exact oracle value of a polynomial on a state."""
        try:
            rho = self._resolve_state(state)
            spec = self._resolve_polynomial(polynomial, rho.dim)
            value = evaluate_exact(spec, rho)
            logger.info(f"Exact value on d={rho.dim}: {value}")
            return {"exact": complex_to_pair(value), "dim": spec.dim, "degree": spec.degree}
        except PolyMeasureError as e:
            logger.error(f"Error evaluating polynomial: {e}", exc_info=True)
            return self._error(e)

    def estimate(self, polynomial: PolynomialSource, state: StateSource,
                 shots: int = DEFAULT_SHOTS, seed: int = DEFAULT_SEED,
                 method: str = "eigen", degree: Optional[int] = None,
                 symmetrized: bool = False, include_exact: bool = True) -> Dict[str, Any]:
        """Shot-based estimate of a polynomial, with the oracle attached by default."""
        logger.info(f"Estimating polynomial with method={method}, shots={shots}, seed={seed}")

        try:
            rho = self._resolve_state(state)
            spec = self._resolve_polynomial(polynomial, rho.dim)
            report = estimate_polynomial(
                spec, rho, shots=shots, seed=seed, method=method, degree=degree,
                symmetrized=symmetrized, include_exact=include_exact, cap=self.cap,
            ).to_dict()
            self._record(report, "estimate", spec)
            return report
        except PolyMeasureError as e:
            logger.error(f"Error estimating polynomial: {e}", exc_info=True)
            return self._error(e)

    def purity(self, state: StateSource, m: int = 2, method: str = "swap-exact",
               shots: int = DEFAULT_SHOTS, seed: int = DEFAULT_SEED,
               include_exact: bool = True,
               reduce_dims: Optional[Sequence[int]] = None) -> Dict[str, Any]:
        """Tr{rho^m} by the selected method; optionally Tr{rho_A^2} of a bipartition."""
        logger.info(f"Estimating purity with m={m}, method={method}")

        try:
            rho = self._resolve_state(state)
            report = estimate_purity(
                rho, m=m, method=method, shots=shots, seed=seed,
                include_exact=include_exact, cap=self.cap,
            ).to_dict()
            if reduce_dims:
                report["reduced_purity"] = reduced_purity(rho, reduce_dims)
            self._record(report, "purity")
            return report
        except PolyMeasureError as e:
            logger.error(f"Error estimating purity: {e}", exc_info=True)
            return self._error(e)

    def generate_state(self, kind: str, dim: int, rank: Optional[int] = None,
                       seed: int = DEFAULT_SEED, index: int = 0) -> Dict[str, Any]:
        """Generate a state in the JSON state format, echoing its recipe."""
        try:
            recipe = StateRecipe(kind=kind, dim=dim, rank=rank, seed=seed, index=index)
            document = generate(recipe).to_dict()
            document["recipe"] = recipe.to_dict()
            return document
        except PolyMeasureError as e:
            logger.error(f"Error generating state: {e}", exc_info=True)
            return self._error(e)

    def check(self, polynomial: PolynomialSource, state: StateSource,
              degree: Optional[int] = None, symmetrized: bool = False) -> Dict[str, Any]:
        """Run the consistency suite on the given inputs."""
        logger.info("Running consistency checks")

        try:
            rho = self._resolve_state(state)
            spec = self._resolve_polynomial(polynomial, rho.dim)
            checks = run_checks(spec, rho, degree=degree, symmetrized=symmetrized, cap=self.cap)
            return {"ok": all(entry["ok"] for entry in checks.values()), "checks": checks}
        except PolyMeasureError as e:
            logger.error(f"Error running checks: {e}", exc_info=True)
            return self._error(e)

    def export_observable(self, polynomial: PolynomialSource, dim: Optional[int] = None,
                          degree: Optional[int] = None,
                          symmetrized: bool = False) -> Dict[str, Any]:
        """A_f and its Hermitian split as JSON matrices, with their spectra."""
        try:
            spec = self._resolve_polynomial(polynomial, dim)
            pair = build_observables(spec, degree, symmetrized, self.cap)
            return {
                "dim_total": pair.dim_total,
                "a_f": matrix_to_pairs(pair.a_f),
                "o_real": matrix_to_pairs(pair.o_real),
                "o_imag": matrix_to_pairs(pair.o_imag),
                "eigenvalues_real": [float(x) for x in np.linalg.eigvalsh(pair.o_real)[::-1]],
                "eigenvalues_imag": [float(x) for x in np.linalg.eigvalsh(pair.o_imag)[::-1]],
            }
        except PolyMeasureError as e:
            logger.error(f"Error exporting observable: {e}", exc_info=True)
            return self._error(e)

    def history(self, command: Optional[str] = None, limit: int = 50) -> Dict[str, Any]:
        """Recorded runs, newest first."""
        try:
            return {"runs": self.repository.get_runs(command=command, limit=limit)}
        except SQLAlchemyError as e:
            logger.error(f"Error reading run history: {e}", exc_info=True)
            # SQLAlchemy appends a background link on a second line
            return {"error": str(e).splitlines()[0], "invariant": "database"}
