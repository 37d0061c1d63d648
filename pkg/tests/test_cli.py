import math

import pytest
from click.testing import CliRunner

from gossip_age.cli import main
from gossip_age.records import ExperimentRecord, read_csv, sort_records, write_csv
from gossip_age.topologies import star_center_fed, write_network_file


@pytest.fixture
def runner():
    return CliRunner()


def _rows(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    import io

    return read_csv(io.StringIO(result.output))


class TestSolveCommand:
    def test_star_pull_leaf(self, runner):
        rows = _rows(runner, ["solve", "--topology", "star-center-fed", "--n", "3",
                              "--protocol", "pull", "--lambda", "1",
                              "--lambda-e", "1", "--sets", "1"])
        assert len(rows) == 1
        assert rows[0].value == pytest.approx(2.0)
        assert rows[0].stderr is None

    def test_over_cap_fails(self, runner):
        result = runner.invoke(main, ["solve", "--topology", "complete",
                                      "--n", "70", "--method", "exact",
                                      "--sets", "1"])
        assert result.exit_code != 0
        assert "cap" in result.output

    def test_solve_from_file(self, runner, tmp_path):
        path = tmp_path / "net.json"
        write_network_file(star_center_fed(3, 1.0, 1.0), str(path))
        rows = _rows(runner, ["solve", "--file", str(path), "--sets", "{1,2}"])
        assert rows[0].target == "{1,2}"
        assert 0 < rows[0].value < 5 / 3

    def test_file_and_topology_conflict(self, runner, tmp_path):
        result = runner.invoke(main, ["solve", "--file", "x.json",
                                      "--topology", "ring", "--n", "5"])
        assert result.exit_code != 0

    def test_bounds_method(self, runner):
        rows = _rows(runner, ["solve", "--topology", "star-center-fed", "--n", "3",
                              "--method", "bounds", "--sets", "1"])
        methods = {r.method: r.value for r in rows}
        assert methods["bound-lower"] - 1e-9 <= 5 / 3 <= methods["bound-upper"] + 1e-9


class TestSimulateCommand:
    def test_reproducible(self, runner):
        args = ["simulate", "--topology", "ring", "--n", "20",
                "--protocol", "pushpull", "--scale", "0.5", "--seed", "7",
                "--reps", "3", "--horizon", "1000", "--sets", "1"]
        assert _rows(runner, args) == _rows(runner, args)

    def test_different_seeds_agree_statistically(self, runner):
        base = ["simulate", "--topology", "complete", "--n", "6",
                "--reps", "5", "--horizon", "20000", "--sets", "1"]
        a = _rows(runner, base + ["--seed", "1"])[0]
        b = _rows(runner, base + ["--seed", "2"])[0]
        assert abs(a.value - b.value) <= 3 * math.hypot(a.stderr, b.stderr)

    def test_horizon_must_exceed_burn_in(self, runner):
        result = runner.invoke(main, ["simulate", "--topology", "ring", "--n", "5",
                                      "--horizon", "10", "--burn-in", "10"])
        assert result.exit_code != 0


class TestFigureCommands:
    def test_figure_star_csv(self, runner, tmp_path):
        out = tmp_path / "star.csv"
        result = runner.invoke(main, ["figure-star", "--n-values", "10",
                                      "--horizon", "300", "--reps", "2",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(str(out))
        assert len(rows) == 12
        assert rows == sort_records(rows)

    def test_figure_ring_fc_csv(self, runner, tmp_path):
        out = tmp_path / "rfc.csv"
        result = runner.invoke(main, ["figure-ring-fc", "--n-values", "10",
                                      "--horizon", "300", "--reps", "2",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(str(out))
        ref = {r.topology: r.value for r in rows if r.method == "reference-curve"}
        assert ref["ring"] == pytest.approx(math.sqrt(math.pi / 2) * math.sqrt(10))
        assert ref["complete"] == pytest.approx(math.log(10))


class TestValidateCommand:
    def test_ok(self, runner, tmp_path):
        path = tmp_path / "net.json"
        write_network_file(star_center_fed(4, 1.0, 1.0), str(path))
        result = runner.invoke(main, ["validate", "--file", str(path)])
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_invalid_file(self, runner, tmp_path):
        path = tmp_path / "net.json"
        path.write_text('{"n": 2, "lambda_e": 1.0, "source_rates": [1.0, 0.0],'
                        ' "push_edges": [{"from": 1, "to": 1, "rate": 1.0}]}')
        result = runner.invoke(main, ["validate", "--file", str(path)])
        assert result.exit_code != 0
        assert "self-loop" in result.output


class TestRecordRoundTrip:
    def test_csv_round_trip_with_inf(self, tmp_path):
        records = [
            ExperimentRecord("ring", "pushpull", 0.5, 10, "1", "simulated",
                             3.2, stderr=0.1, seed=7, horizon=1e4, reps=5),
            ExperimentRecord("random", "push", 1.0, 4, "{2,3}", "exact", math.inf),
            ExperimentRecord("complete", "pushpull", 0.5, 100, "1",
                             "reference-curve", math.log(100)),
        ]
        path = tmp_path / "r.csv"
        write_csv(records, str(path))
        back = read_csv(str(path))
        assert back == sort_records(records)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="unknown method"):
            ExperimentRecord("ring", "push", 1.0, 3, "1", "guess", 1.0)

    def test_negative_value_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            ExperimentRecord("ring", "push", 1.0, 3, "1", "exact", -1.0)
