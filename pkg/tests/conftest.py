import json
import os

# Keep the file log out of the working tree during tests.
os.environ.setdefault("POLYMEASURE_LOG_FILE", os.devnull)

import numpy as np
import pytest

from polymeasure.core.poly_model import MultiIndexTerm, PolynomialSpec
from polymeasure.core.state_gen import StateRecipe, generate


def _purity_spec(d: int = 2) -> PolynomialSpec:
    return PolynomialSpec(
        d, 2, tuple(MultiIndexTerm((i, j, j, i), 1) for i in range(d) for j in range(d))
    )


def _random_spec(d: int, m: int, seed: int, n_terms: int = 4,
                 mixed_degree: bool = False) -> PolynomialSpec:
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(n_terms):
        k = int(rng.integers(1, m + 1)) if mixed_degree else m
        indices = tuple(int(i) for i in rng.integers(0, d, size=2 * k))
        coeff = rng.normal() + 1j * rng.normal()
        terms.append(MultiIndexTerm(indices, coeff))
    return PolynomialSpec(d, m, tuple(terms))


@pytest.fixture
def purity_spec():
    return _purity_spec


@pytest.fixture
def random_spec():
    return _random_spec


@pytest.fixture
def make_state():
    def build(kind: str = "ginibre", dim: int = 2, seed: int = 0, rank=None, index: int = 0):
        return generate(StateRecipe(kind=kind, dim=dim, rank=rank, seed=seed, index=index))
    return build


@pytest.fixture
def mixed_qubit(make_state):
    return make_state("maximally-mixed", 2)


@pytest.fixture
def pure_qubit(make_state):
    return make_state("pure-random", 2, seed=7)


@pytest.fixture
def write_json(tmp_path):
    def write(name: str, document) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)
    return write


@pytest.fixture
def random_hermitian():
    def build(n: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return (g + g.conj().T) / 2
    return build
