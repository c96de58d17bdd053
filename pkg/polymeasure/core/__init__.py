from polymeasure.core.errors import PolyMeasureError
from polymeasure.core.poly_model import (
    DensityMatrix,
    MultiIndexTerm,
    PolynomialSpec,
    evaluate_exact,
    homogenize,
    parse_polynomial,
    validate_state,
)
from polymeasure.core.tensor_ops import TensorState, tensor_power
from polymeasure.core.observable_builder import ObservablePair, assemble_A, hermitian_pair, symmetrize
from polymeasure.core.spectral import OutcomeDistribution, SpectralDecomposition, eigh, outcome_distribution
from polymeasure.core.sampler import EstimateReport, estimate_polynomial
from polymeasure.core.hadamard_test import EmbeddedUnitary, embed_unitary, run_circuit_exact
from polymeasure.core.shift_bell import estimate_purity, purity_exact
from polymeasure.core.state_gen import StateRecipe, generate

__all__ = [
    'PolyMeasureError',
    'DensityMatrix', 'MultiIndexTerm', 'PolynomialSpec',
    'evaluate_exact', 'homogenize', 'parse_polynomial', 'validate_state',
    'TensorState', 'tensor_power',
    'ObservablePair', 'assemble_A', 'hermitian_pair', 'symmetrize',
    'OutcomeDistribution', 'SpectralDecomposition', 'eigh', 'outcome_distribution',
    'EstimateReport', 'estimate_polynomial',
    'EmbeddedUnitary', 'embed_unitary', 'run_circuit_exact',
    'estimate_purity', 'purity_exact',
    'StateRecipe', 'generate',
]
