import numpy as np
import pytest

from polymeasure.core.errors import InvalidRecipeError
from polymeasure.core.poly_model import DensityMatrix, validate_state
from polymeasure.core.shift_bell import purity_exact
from polymeasure.core.state_gen import KINDS, StateRecipe, generate


class TestGenerate:

    def test_maximally_mixed(self):
        rho = generate(StateRecipe("maximally-mixed", 3))
        np.testing.assert_allclose(rho.entries, np.eye(3) / 3)

    def test_pure_random_is_pure(self):
        for seed in range(20):
            rho = generate(StateRecipe("pure-random", 3, seed=seed))
            assert abs(purity_exact(rho, 2) - 1.0) <= 1e-12

    def test_ginibre_qubit_purity_bounds(self):
        for seed in range(1000):
            purity = purity_exact(generate(StateRecipe("ginibre", 2, rank=2, seed=seed)), 2)
            assert 0.5 < purity < 1.0, f"seed {seed}"

    def test_rank_one_ginibre_is_pure(self):
        rho = generate(StateRecipe("ginibre", 4, rank=1, seed=2))
        assert purity_exact(rho, 2) == pytest.approx(1.0, abs=1e-12)

    def test_computational_basis_state(self):
        rho = generate(StateRecipe("computational", 3, index=2))
        expected = np.zeros((3, 3))
        expected[2, 2] = 1
        np.testing.assert_array_equal(rho.entries, expected)

    def test_singlet(self):
        rho = generate(StateRecipe("bell-singlet", 4))
        singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        np.testing.assert_allclose(rho.entries, np.outer(singlet, singlet), atol=1e-15)

    @pytest.mark.parametrize("kind", ["pure-random", "ginibre", "maximally-mixed", "computational"])
    def test_outputs_are_valid(self, kind):
        for seed in range(5):
            rho = generate(StateRecipe(kind, 3, seed=seed))
            assert isinstance(validate_state(rho.entries), DensityMatrix)

    def test_deterministic(self):
        recipe = StateRecipe("ginibre", 3, rank=2, seed=17)
        np.testing.assert_array_equal(generate(recipe).entries, generate(recipe).entries)

    def test_seed_changes_state(self):
        a = generate(StateRecipe("ginibre", 3, seed=1)).entries
        b = generate(StateRecipe("ginibre", 3, seed=2)).entries
        assert not np.allclose(a, b)


class TestStateRecipe:

    def test_known_kinds(self):
        assert set(KINDS) == {"pure-random", "ginibre", "maximally-mixed", "computational", "bell-singlet"}

    def test_unknown_kind(self):
        with pytest.raises(InvalidRecipeError):
            StateRecipe("thermal", 2)

    def test_rank_above_dimension(self):
        with pytest.raises(InvalidRecipeError):
            StateRecipe("ginibre", 2, rank=3)

    def test_index_out_of_range(self):
        with pytest.raises(InvalidRecipeError):
            StateRecipe("computational", 2, index=2)

    def test_singlet_needs_two_qubits(self):
        with pytest.raises(InvalidRecipeError) as info:
            StateRecipe("bell-singlet", 2)
        assert info.value.invariant == "recipe"

    def test_document(self):
        assert StateRecipe("ginibre", 2, rank=1, seed=3).to_dict() == {
            "kind": "ginibre", "dim": 2, "rank": 1, "seed": 3, "index": 0,
        }
