import json

import numpy as np
import pytest
from click.testing import CliRunner

from infocap import basis_ensemble, ensemble_to_json, pgm, uniform_povm
from infocap.cli import main
from infocap.discrimination import povm_to_json


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


class TestBound:
    def test_vacuum_reference_row(self, runner):
        result = runner.invoke(main, ["bound", "vacuum", "--n", "4", "--omega", "0.1"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "assumption,omega,n,pg_bound,info_bits,validity"
        fields = lines[1].split(",")
        assert fields[0] == "vacuum"
        assert abs(float(fields[3]) - 0.559808) <= 1e-6

    def test_dimension(self, runner):
        result = runner.invoke(main, ["bound", "dimension", "--d", "2", "--n", "4"])
        assert result.exit_code == 0
        assert float(result.output.strip().splitlines()[1].split(",")[3]) == 0.5

    def test_ea_dimension_reference(self, runner):
        result = runner.invoke(main, ["bound", "ea-dimension", "--d", "3", "--n", "30"])
        assert result.exit_code == 0
        assert abs(float(result.output.strip().splitlines()[1].split(",")[4 - 1]) - 0.3) <= 1e-9

    def test_json_format(self, runner):
        result = runner.invoke(
            main, ["bound", "vacuum", "--n", "4", "--omega", "0.1", "--format", "json"]
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload[0]["validity"] == "valid"
        assert abs(payload[0]["pg_bound"] - 0.5598076211353316) <= 1e-15

    def test_grid_rows(self, runner):
        result = runner.invoke(
            main,
            ["bound", "almost-dim", "--d", "2", "--n", "4", "--n", "8",
             "--eps", "0.0", "--eps", "0.1"],
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "assumption,d,eps,n,pg_bound,info_bits,validity"
        assert len(lines) == 5

    def test_parameter_error_exits_2(self, runner):
        result = runner.invoke(main, ["bound", "vacuum", "--n", "4", "--omega", "1.5"])
        assert result.exit_code == 2

    def test_missing_parameter_exits_2(self, runner):
        result = runner.invoke(main, ["bound", "vacuum", "--n", "4"])
        assert result.exit_code == 2


class TestOracle:
    def test_basis_ensemble_file(self, runner, tmp_path):
        path = write_json(tmp_path / "e.json", ensemble_to_json(basis_ensemble(3, 3)))
        result = runner.invoke(main, ["oracle", path])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert abs(payload["value"] - 1.0) <= 1e-9
        assert payload["converged"]

    def test_invalid_file_exits_3(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        result = runner.invoke(main, ["oracle", str(bad)])
        assert result.exit_code == 3

    def test_invalid_ensemble_exits_3(self, runner, tmp_path):
        path = write_json(tmp_path / "e.json", {"n": 1, "dim": 2, "states": [[[[2, 0], [0, 0]], [[0, 0], [0, 0]]]]})
        result = runner.invoke(main, ["oracle", path])
        assert result.exit_code == 3


class TestCertify:
    def test_optimal_povm_certifies(self, runner, tmp_path):
        e = basis_ensemble(2, 2)
        epath = write_json(tmp_path / "e.json", ensemble_to_json(e))
        mpath = write_json(tmp_path / "m.json", povm_to_json(pgm(e)))
        result = runner.invoke(main, ["certify", epath, mpath])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["valid"]
        assert abs(payload["trace_value"] - 1.0) <= 1e-9

    def test_uniform_povm_fails_certification(self, runner, tmp_path):
        e = basis_ensemble(2, 2)
        epath = write_json(tmp_path / "e.json", ensemble_to_json(e))
        mpath = write_json(tmp_path / "m.json", povm_to_json(uniform_povm(2, 2)))
        result = runner.invoke(main, ["certify", epath, mpath])
        assert result.exit_code == 1


class TestSearch:
    def test_vacuum_search(self, runner):
        result = runner.invoke(
            main,
            ["search", "vacuum", "--n", "3", "--omega", "0.2", "--restarts", "3", "--seed", "0"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["gap"] <= 1e-6

    def test_missing_param_exits_2(self, runner):
        result = runner.invoke(main, ["search", "vacuum", "--n", "3"])
        assert result.exit_code == 2


class TestSweep:
    def test_row_count_and_header(self, runner):
        result = runner.invoke(
            main,
            ["sweep", "vacuum", "--n", "4", "--start", "0", "--stop", "0.75", "--points", "50"],
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "omega,pg_bound,info_bits"
        assert len(lines) == 51

    def test_overlap_endpoints(self, runner):
        result = runner.invoke(
            main,
            ["sweep", "overlap", "--n", "3", "--start", "0", "--stop", "1", "--points", "11"],
        )
        lines = result.output.strip().splitlines()
        first = float(lines[1].split(",")[1])
        last = float(lines[-1].split(",")[1])
        assert first == pytest.approx(1.0, abs=1e-9)
        assert last == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_coherent_info_monotone(self, runner):
        result = runner.invoke(
            main,
            ["sweep", "coherent", "--n", "8", "--start", "0", "--stop", "1", "--points", "21"],
        )
        lines = result.output.strip().splitlines()[1:]
        info = [float(line.split(",")[2]) for line in lines]
        assert np.all(np.diff(info) >= -1e-12)

    def test_oracle_column(self, runner):
        result = runner.invoke(
            main,
            ["sweep", "vacuum", "--n", "3", "--start", "0", "--stop", "0.5", "--points", "5",
             "--with-oracle"],
        )
        lines = result.output.strip().splitlines()
        assert lines[0].endswith(",oracle_value")
        for line in lines[1:]:
            bound_value, oracle_value = float(line.split(",")[1]), float(line.split(",")[3])
            assert abs(bound_value - oracle_value) <= 1e-6


class TestReferenceChecks:
    def test_single_check_passes(self, runner):
        result = runner.invoke(main, ["paper-numbers", "--only", "deviation_vacuum_identity"])
        assert result.exit_code == 0
        assert result.output.startswith("PASS")

    def test_unknown_check_exits_2(self, runner):
        result = runner.invoke(main, ["paper-numbers", "--only", "nope"])
        assert result.exit_code == 2


class TestSRDemo:
    def test_prints_counterexample(self, runner):
        result = runner.invoke(main, ["sr-demo", "--tol", "1e-8"])
        assert result.exit_code == 0
        assert "0.366667" in result.output
        assert "0.300000" in result.output

    def test_strategy_file(self, runner, tmp_path):
        from infocap import Dimension, SRStrategy, strategy_to_json

        s = SRStrategy(
            branches=(
                (0.5, basis_ensemble(2, 2), Dimension(d=2)),
                (0.5, basis_ensemble(2, 2), Dimension(d=2)),
            )
        )
        path = write_json(tmp_path / "s.json", strategy_to_json(s))
        result = runner.invoke(main, ["sr-demo", "--strategy", path])
        assert result.exit_code == 0
        assert "mixture guessing value" in result.output
        assert "1.000000000" in result.output
