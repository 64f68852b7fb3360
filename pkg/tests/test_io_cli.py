import json

import numpy as np
import pytest

from kcmd import Scenario, generate, load_sample
from kcmd.cli import main
from kcmd.errors import (
    DataError,
    GridViolationError,
    ParseError,
    RowCountMismatchError,
    UsageError,
)
from kcmd.io import parse_config, read_config, write_matrix


def write_dataset(tmp_path, x, y, x_grid=None, y_grid=None, name="m.json"):
    write_matrix(tmp_path / "x.csv", x)
    write_matrix(tmp_path / "y.csv", y)
    manifest = {"format": "kcmd-manifest/1"}
    for side, grid in (("x", x_grid), ("y", y_grid)):
        entry = {"kind": "vector", "path": f"{side}.csv"}
        if grid is not None:
            entry = {"kind": "curve", "path": f"{side}.csv", "grid": list(grid)}
        manifest[side] = entry
    path = tmp_path / name
    path.write_text(json.dumps(manifest))
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestLoadSample:
    def test_vectors(self, tmp_path):
        m = write_dataset(tmp_path, [[1, 2], [3, 4], [5, 6]], [[0, 1], [1, 0], [2, 2]])
        s = load_sample(m)
        assert s.n == 3 and s.x.values.shape == (3, 2) and s.y.values.shape == (3, 2)
        assert s.x.kind == "vector"

    def test_curves(self, tmp_path):
        m = write_dataset(tmp_path, [[0, 1, 2]] * 4, [[1, 1]] * 4, x_grid=[0, 0.5, 1], y_grid=[0, 1])
        s = load_sample(m)
        assert s.x.kind == "curve" and list(s.x.grid.points) == [0, 0.5, 1]

    def test_grid_width_mismatch(self, tmp_path):
        m = write_dataset(tmp_path, [[0, 1, 2, 3]] * 3, [[1.0]] * 3, x_grid=[0, 0.5, 1])
        with pytest.raises(GridViolationError):
            load_sample(m)

    def test_parse_error_location(self, tmp_path):
        m = write_dataset(tmp_path, [[1.0, 1.0]], [[1.0]])
        (tmp_path / "x.csv").write_text("1.0,abc\n")
        with pytest.raises(ParseError) as info:
            load_sample(m)
        assert info.value.row == 1 and info.value.column == 2
        assert "row 1" in str(info.value) and "column 2" in str(info.value)

    def test_row_mismatch(self, tmp_path):
        m = write_dataset(tmp_path, [[1.0]] * 3, [[1.0]] * 2)
        with pytest.raises(RowCountMismatchError):
            load_sample(m)

    @pytest.mark.parametrize(
        "content",
        ["", "1,2\n3\n", "1,nan\n", "inf\n", "1;2\n", "\n\n", "1,,2\n"],
    )
    def test_malformed_csv(self, tmp_path, content):
        m = write_dataset(tmp_path, [[1.0]], [[1.0]])
        (tmp_path / "x.csv").write_text(content)
        with pytest.raises(DataError):
            load_sample(m)

    @pytest.mark.parametrize(
        "manifest",
        [
            "not json",
            "[]",
            '{"x": {"kind": "vector", "path": "x.csv"}}',
            '{"x": {"kind": "tensor", "path": "x.csv"}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"x": {"kind": "vector", "path": "missing.csv"}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"x": {"kind": "curve", "path": "x.csv"}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"x": {"kind": "curve", "path": "x.csv", "grid": [0, 0.2]}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"x": {"kind": "curve", "path": "x.csv", "grid": "abc"}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"format": "other/2", "x": {"kind": "vector", "path": "x.csv"}, "y": {"kind": "vector", "path": "y.csv"}}',
            '{"x": {"kind": "vector", "path": "x.csv", "dimension": 3}, "y": {"kind": "vector", "path": "y.csv"}}',
        ],
    )
    def test_malformed_manifest(self, tmp_path, manifest):
        write_dataset(tmp_path, [[1.0]], [[1.0]])
        path = tmp_path / "bad.json"
        path.write_text(manifest)
        with pytest.raises(DataError):
            load_sample(path)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DataError):
            load_sample(tmp_path / "nope.json")


class TestConfig:
    def test_defaults(self):
        cfg = read_config(None)
        assert cfg.kernel == "median" and cfg.family.kind == "alternating"
        assert cfg.family.gamma == 0.5 and cfg.alpha == 0.05

    def test_explicit(self):
        cfg = parse_config({"kernel": {"kind": "gaussian", "omega": 0.7}, "weights": {"family": "sinusoidal", "gamma": 0.3}, "alpha": 0.1, "seed": 4})
        assert cfg.kernel.omega == 0.7 and cfg.family.kind == "sinusoidal" and cfg.seed == 4
        assert cfg.echo()["kernel"] == {"kind": "gaussian", "omega": 0.7}

    @pytest.mark.parametrize(
        "raw",
        [
            {"alpha": 1.5},
            {"alpha": True},
            {"seed": -1},
            {"seed": 1.5},
            {"kernel": {"kind": "linear"}},
            {"kernel": {"omega": -1}},
            {"kernel": {"omega": "wide"}},
            {"weights": {"family": "constant"}},
            {"weights": {"family": "alternating", "gamma": 1.0}},
            {"colour": "blue"},
            [],
        ],
    )
    def test_rejects(self, raw):
        with pytest.raises(UsageError):
            parse_config(raw)


class TestCli:
    def test_weights(self, capsys):
        code, out, _ = run_cli(capsys, "weights", "--family", "alternating", "--gamma", "0.5", "--n", "4")
        assert code == 0
        assert json.loads(out)["weights"] == [0.5, 1.5, 0.5, 1.5]

    def test_weights_verify(self, capsys):
        code, out, _ = run_cli(capsys, "weights", "--family", "sinusoidal", "--gamma", "0.3", "--n", "100", "--verify")
        rep = json.loads(out)["verification"]
        assert code == 0 and rep["partial_sum_ok"] and rep["mean_square_ok"]

    def test_estimate_zero_responses(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        m = write_dataset(tmp_path, rng.standard_normal((6, 2)), np.zeros((6, 2)))
        code, out, _ = run_cli(capsys, "estimate", "--manifest", str(m))
        payload = json.loads(out)
        assert code == 0
        for key in ("naive", "weighted", "ustat", "alpha_sq", "sigma_sq"):
            assert payload[key] == 0.0

    def test_test_rejects_strong_signal(self, tmp_path, capsys):
        s = generate(Scenario("h1_linear", n=400, seed=5, b=3.0))
        m = write_dataset(tmp_path, s.x.values, s.y.values)
        code, out, _ = run_cli(capsys, "test", "--manifest", str(m))
        res = json.loads(out)
        assert code == 0
        assert res["reject"] is True and res["statistic"] > 10

    def test_round_trip_bit_exact(self, tmp_path, capsys):
        s = generate(Scenario("h0_vectors", n=50, seed=2))
        m = write_dataset(tmp_path, s.x.values, s.y.values)
        from kcmd import run_test

        direct = run_test(load_sample(m))
        code, out, _ = run_cli(capsys, "test", "--manifest", str(m))
        res = json.loads(out)
        for key in ("statistic", "kcmd_weighted", "sigma_hat", "p_value"):
            assert res[key] == getattr(direct, key)
        assert res["kernel"]["omega"] == direct.kernel["omega"]

    def test_output_stable(self, tmp_path, capsys):
        s = generate(Scenario("h0_vectors", n=30, seed=3))
        m = write_dataset(tmp_path, s.x.values, s.y.values)
        first = run_cli(capsys, "test", "--manifest", str(m))[1]
        second = run_cli(capsys, "test", "--manifest", str(m))[1]
        assert first == second

    def test_output_file_and_config(self, tmp_path, capsys):
        s = generate(Scenario("h0_vectors", n=30, seed=3))
        m = write_dataset(tmp_path, s.x.values, s.y.values)
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"kernel": {"omega": 0.5}, "alpha": 0.1}))
        out = tmp_path / "r.json"
        code, stdout, _ = run_cli(capsys, "test", "--manifest", str(m), "--config", str(cfg), "-o", str(out))
        res = json.loads(out.read_text())
        assert code == 0 and stdout == ""
        assert res["alpha"] == 0.1 and res["kernel"] == {"kind": "gaussian", "omega": 0.5}

    def test_usage_exit_code(self, capsys):
        assert run_cli(capsys, "weights", "--gamma", "1.5", "--n", "4")[0] == 2
        assert run_cli(capsys, "frobnicate")[0] == 2
        assert run_cli(capsys, "simulate", "--scenario", "nothing", "--replicates", "2")[0] == 2
        assert run_cli(capsys, "test", "--manifest", "m.json", "--threads", "0")[0] == 2

    def test_data_exit_code(self, tmp_path, capsys):
        m = write_dataset(tmp_path, [[1.0]] * 3, [[1.0]] * 2)
        code, _, err = run_cli(capsys, "test", "--manifest", str(m))
        assert code == 3 and "data error" in err

    def test_degenerate_exit_code(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        m = write_dataset(tmp_path, rng.standard_normal((6, 2)), np.zeros((6, 2)))
        code, _, err = run_cli(capsys, "test", "--manifest", str(m))
        assert code == 4 and "degeneracy" in err

    def test_simulate_threads_env(self, tmp_path, capsys, monkeypatch):
        args = ("simulate", "--scenario", "h1_linear", "--b", "0.5", "--n", "30", "--replicates", "12")
        serial = run_cli(capsys, *args)[1]
        monkeypatch.setenv("KCMD_THREADS", "3")
        threaded = run_cli(capsys, *args)[1]
        assert serial == threaded
        monkeypatch.setenv("KCMD_THREADS", "many")
        assert run_cli(capsys, *args)[0] == 2

    def test_simulate_scenario_file(self, tmp_path, capsys):
        sc = tmp_path / "s.json"
        sc.write_text(json.dumps({"kind": "h0_curves", "n": 20, "r": 11, "q": 11}))
        csv_path = tmp_path / "reps.csv"
        code, out, _ = run_cli(capsys, "simulate", "--scenario", str(sc), "--replicates", "3", "--csv", str(csv_path))
        assert code == 0 and json.loads(out)["scenario"]["r"] == 11
        assert len(csv_path.read_text().splitlines()) == 4
        sc.write_text(json.dumps({"kind": "h0_curves", "seed": 3}))
        assert run_cli(capsys, "simulate", "--scenario", str(sc), "--replicates", "3")[0] == 2
