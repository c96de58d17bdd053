import numpy as np
import pytest

from polymeasure.core.errors import (
    DimensionMismatchError,
    EmptyExpressionError,
    ExpressionSyntaxError,
    IndexRangeError,
    NonHomogeneousError,
    PolyMeasureError,
    StateValidationError,
)
from polymeasure.core.poly_model import (
    DensityMatrix,
    MultiIndexTerm,
    PolynomialSpec,
    StateViolationReport,
    evaluate_exact,
    homogenize,
    parse_polynomial,
    require_state,
    spec_from_dict,
    state_from_dict,
    validate_state,
)


class TestParsePolynomial:

    def test_sum_of_products(self):
        spec = parse_polynomial("r[0,1]*r[1,0] + r[0,0]*r[1,1]", 2)
        assert spec.degree == 2
        assert len(spec.terms) == 2
        assert all(term.coeff == 1 + 0j for term in spec.terms)
        assert [term.indices for term in spec.terms] == [(0, 0, 1, 1), (0, 1, 1, 0)]

    def test_complex_coefficient(self):
        spec = parse_polynomial("(0.5+0.5i)*r[0,0]", 2)
        assert spec.degree == 1
        assert spec.terms == (MultiIndexTerm((0, 0), 0.5 + 0.5j),)

    def test_signs_and_real_coefficients(self):
        spec = parse_polynomial("-r[0,0] - 2*r[1,1] + (-0.5-1i)*r[0,1]", 2)
        coeffs = {term.indices: term.coeff for term in spec.terms}
        assert coeffs == {(0, 0): -1, (0, 1): -0.5 - 1j, (1, 1): -2}

    def test_index_out_of_range(self):
        with pytest.raises(IndexRangeError):
            parse_polynomial("r[0,2]*r[2,0]", 2)

    @pytest.mark.parametrize("text", ["", "   "])
    def test_empty_expression(self, text):
        with pytest.raises(EmptyExpressionError):
            parse_polynomial(text, 2)

    def test_syntax_error_reports_position(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_polynomial("r[0,1] r[1,0]", 2)
        assert info.value.position == 7
        assert info.value.invariant == "syntax"

    def test_fractional_index_is_rejected(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_polynomial("r[0.5,1]", 2)

    def test_identical_terms_merge(self):
        spec = parse_polynomial("r[0,1] + r[0,1]", 2)
        assert spec.terms == (MultiIndexTerm((0, 1), 2),)

    def test_cancelling_terms_drop(self):
        assert parse_polynomial("r[0,1] - r[0,1]", 2).terms == ()

    def test_canonical_form_is_idempotent(self):
        spec = parse_polynomial("r[1,1]*r[0,0] + 3*r[0,1]*r[1,0] + r[1,1]*r[0,0]", 2)
        assert spec.canonical() == spec
        assert spec.canonical().canonical() == spec

    def test_mixed_degree_is_kept(self):
        spec = parse_polynomial("r[0,0] + r[0,1]*r[1,0]", 2)
        assert spec.degree == 2
        assert not spec.is_homogeneous


class TestPolynomialSpec:

    def test_rejects_small_dimension(self):
        with pytest.raises(PolyMeasureError):
            PolynomialSpec(1, 1, ())

    def test_rejects_term_above_degree(self):
        with pytest.raises(PolyMeasureError):
            PolynomialSpec(2, 1, (MultiIndexTerm((0, 0, 1, 1), 1),))

    def test_rejects_odd_indices(self):
        with pytest.raises(PolyMeasureError):
            MultiIndexTerm((0, 1, 1), 1)

    def test_addition_merges_terms(self):
        a = PolynomialSpec(2, 1, (MultiIndexTerm((0, 0), 1),))
        b = PolynomialSpec(2, 2, (MultiIndexTerm((0, 0), 1), MultiIndexTerm((0, 1, 1, 0), 1)))
        total = a + b
        assert total.degree == 2
        assert {t.indices: t.coeff for t in total.terms} == {(0, 0): 2, (0, 1, 1, 0): 1}

    def test_addition_needs_same_dimension(self):
        with pytest.raises(DimensionMismatchError):
            PolynomialSpec(2, 1, ()) + PolynomialSpec(3, 1, ())


class TestHomogenize:

    def test_lifts_lower_degree_terms(self):
        spec = PolynomialSpec(2, 2, (MultiIndexTerm((0, 0), 1), MultiIndexTerm((0, 1, 1, 0), 1)))
        lifted = homogenize(spec)
        assert lifted.is_homogeneous
        assert [t.indices for t in lifted.terms] == [(0, 0, 0, 0), (0, 0, 1, 1), (0, 1, 1, 0)]

    def test_homogeneous_spec_is_unchanged(self, purity_spec):
        assert homogenize(purity_spec(2)) == purity_spec(2)

    def test_lift_to_degree_three(self, make_state):
        spec = PolynomialSpec(3, 1, (MultiIndexTerm((1, 2), 1),))
        lifted = homogenize(spec, 3)
        assert lifted.degree == 3
        assert len(lifted.terms) == 9
        assert {t.indices[:2] for t in lifted.terms} == {(1, 2)}
        for seed in range(20):
            rho = make_state("ginibre", 3, seed=seed)
            assert abs(evaluate_exact(lifted, rho) - evaluate_exact(spec, rho)) <= 1e-12

    def test_cannot_lower_degree(self, purity_spec):
        with pytest.raises(NonHomogeneousError):
            homogenize(purity_spec(2), 1)

    def test_evaluation_invariance_over_seeded_lifts(self, random_spec, make_state):
        for seed in range(50):
            d = 2 + seed % 2
            spec = random_spec(d, 2 + seed % 2, seed, mixed_degree=True)
            rho = make_state("ginibre", d, seed=seed)
            lifted = homogenize(spec)
            assert lifted.is_homogeneous
            assert abs(evaluate_exact(lifted, rho) - evaluate_exact(spec, rho)) <= 1e-12


class TestEvaluateExact:

    def test_purity_of_maximally_mixed_qubit(self, purity_spec, mixed_qubit):
        assert evaluate_exact(purity_spec(2), mixed_qubit) == pytest.approx(0.5, abs=1e-15)

    def test_purity_of_pure_qubit(self, purity_spec, pure_qubit):
        value = evaluate_exact(purity_spec(2), pure_qubit)
        assert abs(value - 1.0) <= 1e-12

    def test_trace_is_one(self, make_state):
        for d in (2, 3, 4):
            spec = PolynomialSpec(d, 1, tuple(MultiIndexTerm((i, i), 1) for i in range(d)))
            rho = make_state("ginibre", d, seed=d)
            assert abs(evaluate_exact(spec, rho) - 1.0) <= 1e-12

    def test_linear_in_coefficients(self, random_spec, make_state):
        for seed in range(10):
            f = random_spec(2, 2, 400 + seed)
            g = random_spec(2, 2, 500 + seed)
            a, b = 0.7 - 1.3j, -2.0 + 0.4j
            combined = PolynomialSpec(2, 2, tuple(
                [MultiIndexTerm(t.indices, a * t.coeff) for t in f.terms]
                + [MultiIndexTerm(t.indices, b * t.coeff) for t in g.terms]
            ))
            rho = make_state("ginibre", 2, seed=seed)
            expected = a * evaluate_exact(f, rho) + b * evaluate_exact(g, rho)
            assert abs(evaluate_exact(combined, rho) - expected) <= 1e-12, f"seed {seed}"

    def test_dimension_mismatch(self, purity_spec, make_state):
        with pytest.raises(DimensionMismatchError):
            evaluate_exact(purity_spec(3), make_state("ginibre", 2))


class TestValidateState:

    def test_maximally_mixed_is_valid(self):
        assert isinstance(validate_state(np.eye(2) / 2), DensityMatrix)

    def test_negative_eigenvalue(self):
        report = validate_state([[0.6, 0.5], [0.5, 0.4]])
        assert isinstance(report, StateViolationReport)
        assert [v.invariant for v in report.violations] == ["psd"]
        expected = -(1 - np.sqrt(1.04)) / 2
        assert report.violations[0].deviation == pytest.approx(expected, rel=1e-9)

    def test_trace_violation(self):
        report = validate_state([[1, 0], [0, 0.1]])
        assert [v.invariant for v in report.violations] == ["trace"]
        assert report.violations[0].deviation == pytest.approx(0.1)

    def test_non_hermitian(self):
        report = validate_state([[0.5, 0.1], [0.0, 0.5]])
        assert "hermitian" in [v.invariant for v in report.violations]

    def test_non_finite(self):
        report = validate_state([[np.nan, 0], [0, 1]])
        assert [v.invariant for v in report.violations] == ["finite"]

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError):
            validate_state(np.zeros((2, 3)))

    def test_require_state_raises_with_report(self):
        with pytest.raises(StateValidationError) as info:
            require_state([[1, 0], [0, 0.1]])
        assert info.value.report.violations[0].invariant == "trace"

    def test_entries_are_read_only(self, mixed_qubit):
        with pytest.raises(ValueError):
            mixed_qubit.entries[0, 0] = 1.0


class TestJsonDocuments:

    def test_state_document(self, pure_qubit):
        restored = state_from_dict(pure_qubit.to_dict())
        np.testing.assert_allclose(restored.entries, pure_qubit.entries, atol=1e-15)

    def test_state_shape_must_match_dim(self):
        with pytest.raises(DimensionMismatchError):
            state_from_dict({"dim": 3, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})

    def test_malformed_state(self):
        with pytest.raises(PolyMeasureError) as info:
            state_from_dict({"entries": []})
        assert info.value.invariant == "json"

    def test_polynomial_document(self):
        spec = spec_from_dict({
            "dim": 2,
            "terms": [{"indices": [0, 1, 1, 0], "coeff": [1, 0]}, {"indices": [0, 0], "coeff": [0, 2]}],
        })
        assert spec.degree == 2
        assert {t.indices: t.coeff for t in spec.terms} == {(0, 0): 2j, (0, 1, 1, 0): 1}

    def test_malformed_polynomial(self):
        with pytest.raises(PolyMeasureError) as info:
            spec_from_dict({"dim": 2, "terms": [{"coeff": [1, 0]}]})
        assert info.value.invariant == "json"

    def test_fractional_json_index_is_rejected(self):
        with pytest.raises(IndexRangeError):
            spec_from_dict({"dim": 2, "terms": [{"indices": [0.9, 1.7], "coeff": [1, 0]}]})

    def test_whole_float_index_is_accepted(self):
        spec = spec_from_dict({"dim": 2, "terms": [{"indices": [0.0, 1.0], "coeff": [1, 0]}]})
        assert spec.terms[0].indices == (0, 1)

    def test_non_numeric_index_is_rejected(self):
        for bad in ("1", True, None):
            with pytest.raises(IndexRangeError):
                MultiIndexTerm((0, bad), 1)
