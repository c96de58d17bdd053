import pytest

from polymeasure.core.diagnostics import run_checks
from polymeasure.core.errors import CapExceededError
from polymeasure.core.poly_model import parse_polynomial


class TestRunChecks:

    def test_purity_on_maximally_mixed_qubit(self, purity_spec, mixed_qubit):
        checks = run_checks(purity_spec(2), mixed_qubit)
        assert list(checks)[:2] == ["homogenization", "trace_identity"]
        assert "o_real.e_operator" in checks
        assert not any(name.startswith("o_imag.") for name in checks)
        assert all(entry["ok"] for entry in checks.values())

    def test_complex_polynomial_checks_both_parts(self, random_spec, make_state):
        checks = run_checks(random_spec(2, 2, seed=12), make_state("ginibre", 2, seed=12))
        for label in ("o_real", "o_imag"):
            for name in ("spectral_reconstruction", "rotation_unitarity", "measurement_identity",
                         "embedding_unitarity", "embedding_real_part", "circuit_formula",
                         "e_operator", "eigenstate_response"):
                assert checks[f"{label}.{name}"]["ok"], f"{label}.{name}"

    @pytest.mark.parametrize("seed", range(5))
    def test_mixed_degree_with_symmetrization(self, random_spec, make_state, seed):
        spec = random_spec(3, 2, seed, mixed_degree=True)
        checks = run_checks(spec, make_state("ginibre", 3, seed=seed), symmetrized=True)
        failed = [name for name, entry in checks.items() if not entry["ok"]]
        assert failed == []

    def test_entries_carry_tolerance(self, purity_spec, mixed_qubit):
        entry = run_checks(purity_spec(2), mixed_qubit)["homogenization"]
        assert entry["tolerance"] == 1e-12
        assert entry["deviation"] <= entry["tolerance"]

    def test_cap(self, purity_spec, mixed_qubit):
        with pytest.raises(CapExceededError):
            run_checks(purity_spec(2), mixed_qubit, cap=2)

    def test_large_degree_hits_cap_before_lifting(self, purity_spec, mixed_qubit):
        with pytest.raises(CapExceededError):
            run_checks(purity_spec(2), mixed_qubit, degree=60)

    def test_four_copies_of_a_ququart(self, make_state):
        spec = parse_polynomial("r[0,1]*r[1,2]*r[2,3]*r[3,0] + (0.5-1i)*r[1,1]*r[2,0]", 4)
        checks = run_checks(spec, make_state("ginibre", 4, seed=9))
        failed = [name for name, entry in checks.items() if not entry["ok"]]
        assert failed == []
        assert "o_imag.eigenstate_response" in checks
