import pytest

from polymeasure.repositories import RunRepository
from polymeasure.services import EstimationService

PURITY_EXPR = "r[0,0]*r[0,0] + r[0,1]*r[1,0] + r[1,0]*r[0,1] + r[1,1]*r[1,1]"


@pytest.fixture
def service(tmp_path):
    return EstimationService(db_url=f"sqlite:///{tmp_path / 'runs.db'}")


@pytest.fixture
def recording_service(tmp_path):
    return EstimationService(db_url=f"sqlite:///{tmp_path / 'runs.db'}", record=True)


class TestEvaluate:

    def test_expression_on_state_document(self, service, mixed_qubit):
        result = service.evaluate(PURITY_EXPR, mixed_qubit.to_dict())
        assert result == {"exact": [0.5, 0.0], "dim": 2, "degree": 2}

    def test_polynomial_document(self, service, purity_spec, pure_qubit):
        result = service.evaluate(purity_spec(2).to_dict(), pure_qubit)
        assert result["exact"][0] == pytest.approx(1.0, abs=1e-12)

    def test_syntax_error(self, service, mixed_qubit):
        result = service.evaluate("r[0,1] *", mixed_qubit)
        assert result["invariant"] == "syntax"
        assert "position" in result["error"]

    def test_invalid_state(self, service):
        bad = {"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [0.1, 0]]]}
        result = service.evaluate(PURITY_EXPR, bad)
        assert result["invariant"] == "density-matrix"
        assert "trace" in result["error"]


class TestEstimate:

    def test_report(self, service, pure_qubit):
        report = service.estimate(PURITY_EXPR, pure_qubit.to_dict(), shots=100_000, seed=1)
        assert report["method"] == "eigen"
        assert report["shots"] == [100_000, 0]
        assert report["within_bound"][0]

    def test_hadamard(self, service, mixed_qubit):
        report = service.estimate(PURITY_EXPR, mixed_qubit, shots=10_000, method="hadamard")
        assert report["method"] == "hadamard"
        assert report["scale"][0] == pytest.approx(1.0, rel=1e-8)

    def test_cap(self, tmp_path, mixed_qubit):
        service = EstimationService(db_url=f"sqlite:///{tmp_path / 'runs.db'}", cap=2)
        result = service.estimate(PURITY_EXPR, mixed_qubit)
        assert result["invariant"] == "cap"

    def test_large_degree_hits_cap(self, service, mixed_qubit):
        result = service.estimate("r[0,0] + r[1,1]", mixed_qubit, degree=60)
        assert result["invariant"] == "cap"

    def test_fractional_index_in_document(self, service, mixed_qubit):
        document = {"dim": 2, "terms": [{"indices": [0.5, 1], "coeff": [1, 0]}]}
        assert service.estimate(document, mixed_qubit)["invariant"] == "index-range"

    def test_not_recorded_by_default(self, service, mixed_qubit):
        service.estimate(PURITY_EXPR, mixed_qubit, shots=100)
        assert service.history()["runs"] == []


class TestPurity:

    def test_swap_exact(self, service, mixed_qubit):
        report = service.purity(mixed_qubit, m=3)
        assert report["estimate"] == [0.25, 0.0]
        assert report["stderr"] == [0.0, 0.0]

    def test_reduced_purity(self, service, make_state):
        report = service.purity(make_state("bell-singlet", 4), reduce_dims=[2, 2])
        assert report["estimate"][0] == pytest.approx(1.0, abs=1e-12)
        assert report["reduced_purity"] == pytest.approx(0.5, abs=1e-12)

    def test_unknown_method(self, service, mixed_qubit):
        assert service.purity(mixed_qubit, method="tomography")["invariant"] == "method"


class TestGenerateState:

    def test_document_echoes_recipe(self, service):
        document = service.generate_state("ginibre", 3, rank=2, seed=4)
        assert document["dim"] == 3
        assert len(document["entries"]) == 3
        assert document["recipe"] == {"kind": "ginibre", "dim": 3, "rank": 2, "seed": 4, "index": 0}

    def test_invalid_recipe(self, service):
        assert service.generate_state("ginibre", 2, rank=5)["invariant"] == "recipe"


class TestCheckAndExport:

    def test_check(self, service, random_spec, make_state):
        result = service.check(random_spec(2, 2, seed=3), make_state("ginibre", 2, seed=3))
        assert result["ok"]
        assert "trace_identity" in result["checks"]

    def test_export_observable(self, service):
        result = service.export_observable(PURITY_EXPR, dim=2)
        assert result["dim_total"] == 4
        assert result["eigenvalues_real"] == pytest.approx([1, 1, 1, -1], abs=1e-12)
        assert result["eigenvalues_imag"] == pytest.approx([0, 0, 0, 0], abs=1e-12)
        assert result["a_f"][1][2] == [1.0, 0.0]

    def test_expression_needs_dimension(self, service):
        assert service.export_observable(PURITY_EXPR)["invariant"] == "dim"


class TestRunLedger:

    def test_estimate_is_recorded(self, recording_service, mixed_qubit):
        report = recording_service.estimate(PURITY_EXPR, mixed_qubit, shots=1000, seed=8)
        runs = recording_service.history()["runs"]
        assert len(runs) == 1
        run = runs[0]
        assert run["command"] == "estimate"
        assert run["seed"] == 8
        assert run["estimate"] == report["estimate"]
        assert run["exact"] == [0.5, 0.0]
        assert '"dim": 2' in run["polynomial"]

    def test_filter_by_command(self, recording_service, mixed_qubit):
        recording_service.estimate(PURITY_EXPR, mixed_qubit, shots=100)
        recording_service.purity(mixed_qubit)
        assert [r["command"] for r in recording_service.history(command="purity")["runs"]] == ["purity"]
        assert len(recording_service.history()["runs"]) == 2

    def test_unreachable_database(self, tmp_path):
        service = EstimationService(db_url=f"sqlite:///{tmp_path / 'missing' / 'runs.db'}")
        result = service.history()
        assert result["invariant"] == "database"
        assert "\n" not in result["error"]

    def test_get_run_by_id(self, tmp_path, mixed_qubit):
        repository = RunRepository(f"sqlite:///{tmp_path / 'ledger.db'}")
        report = EstimationService().purity(mixed_qubit)
        run_id = repository.add_run(report, "purity")
        assert repository.get_run_by_id(run_id)["estimate"] == [0.5, 0.0]
        assert repository.get_run_by_id("missing") is None
