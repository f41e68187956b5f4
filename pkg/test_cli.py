import json
import os
import tempfile
import unittest

from cli import main, parse_config, run_experiment
from helpers import UsageError
from results import ExperimentConfig, ResultTable, emit_results, render


class TestParseConfig(unittest.TestCase):
    def test_flags(self):
        config = parse_config(["spectrum", "--n", "4", "--delta", "1.0"])
        self.assertEqual(config.subcommand, "spectrum")
        self.assertEqual(config.parameters["n"], 4)
        self.assertEqual(config.parameters["delta"], 1.0)
        self.assertEqual(config.fmt, "csv")

    def test_selection_defaults_to_json(self):
        self.assertEqual(parse_config(["selection"]).fmt, "json")

    def test_unknown_subcommand(self):
        with self.assertRaises(UsageError):
            parse_config(["bogus"])
        self.assertEqual(main(["bogus"]), 2)

    def test_malformed_number(self):
        with self.assertRaises(UsageError):
            parse_config(["spectrum", "--n", "four"])

    def test_flags_override_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"beta": 2, "g": 0.02}, f)
            config = parse_config(["lindblad", "--config", path, "--beta", "4"])
        self.assertEqual(config.parameters["beta"], 4.0)
        self.assertEqual(config.parameters["g"], 0.02)

    def test_unknown_file_key(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"temperature": 1.0}, f)
            with self.assertRaises(UsageError) as ctx:
                parse_config(["fidelity", "--config", path])
        self.assertIn("temperature", str(ctx.exception))

    def test_lists(self):
        config = parse_config(["fidelity", "--beta-list", "1,2,5"])
        self.assertEqual(config.parameters["beta_list"], [1.0, 2.0, 5.0])


class TestRunExperiment(unittest.TestCase):
    def run_cli(self, *argv):
        return run_experiment(parse_config(list(argv)))

    def test_spectrum(self):
        table = self.run_cli("spectrum", "--n", "4", "--delta", "1.0")
        self.assertEqual(table.columns, ["j", "energy", "multiplicity"])
        self.assertEqual(table.rows, [["0", 0.0, 2], ["1", 1.0, 9], ["2", 3.0, 5]])
        self.assertEqual(table.meta["config"]["parameters"]["n"], 4)

    def test_paths(self):
        table = self.run_cli("paths", "--n", "8", "--j", "0")
        self.assertEqual(len(table.rows), 14)
        self.assertEqual(table.meta["multiplicity"], {"enumerated": 14, "catalan": 14, "spectral": 14})

    def test_paths_csv_columns(self):
        table = self.run_cli("paths", "--n", "4", "--j", "0")
        self.assertEqual(table.columns, ["n", "J", "multiplicity", "path", "o_value"])
        self.assertEqual(table.rows, [
            [4, "0", 2, "1/2 0 1/2 0", "-1"],
            [4, "0", 2, "1/2 1 1/2 0", "-1"],
        ])
        lines = render(table, "csv").split("\n")
        self.assertEqual(lines[0], "n,J,multiplicity,path,o_value")
        self.assertEqual(lines[1], "4,0,2,1/2 0 1/2 0,-1")

    def test_selection(self):
        table = self.run_cli("selection", "--n", "4")
        self.assertTrue(table.meta["all_passed"])
        self.assertTrue(all(table.column("passed")))

    def test_fidelity(self):
        table = self.run_cli("fidelity", "--beta-list", "1,2,5")
        for beta, numeric, analytic, _ in table.rows:
            self.assertAlmostEqual(analytic, 1.0 / beta)
            self.assertLessEqual(abs(numeric - analytic), 1e-3 + 1e-12)

    def test_lindblad(self):
        table = self.run_cli("lindblad", "--delta", "1", "--beta-list", "2,4", "--g", "0.05")
        self.assertEqual(table.columns, ["beta", "gamma_fit", "n_thermal", "slope_check"])
        gammas = table.column("gamma_fit")
        self.assertGreater(gammas[0], gammas[1])

    def test_lindblad_rejects_other_sizes(self):
        with self.assertRaises(UsageError):
            self.run_cli("lindblad", "--n", "6", "--beta", "1")
        self.assertEqual(main(["lindblad", "--n", "6", "--beta", "1"]), 2)

    def test_conflicting_temperatures(self):
        with self.assertRaises(UsageError):
            self.run_cli("lindblad", "--beta", "1", "--temperature-k", "1")


class TestEmitResults(unittest.TestCase):
    def test_csv_header(self):
        table = ResultTable(["a", "b"], [[1, 0.1 + 0.2], ["x", True]])
        lines = render(table, "csv").split("\n")
        self.assertEqual(lines[0], "a,b")
        self.assertEqual(lines[1], "1,0.3")
        self.assertEqual(lines[2], "x,true")

    def test_json_schema(self):
        table = ResultTable(["a"], [[float("nan")]], {"note": "x"})
        payload = json.loads(render(table, "json"))
        self.assertEqual(set(payload), {"meta", "columns", "rows"})
        self.assertEqual(payload["rows"], [[None]])

    def test_ragged_rows_rejected(self):
        with self.assertRaises(ValueError):
            ResultTable(["a", "b"], [[1]])

    def test_unwritable_path(self):
        table = ResultTable(["a"], [[1]])
        path = os.path.join(tempfile.gettempdir(), "missing-dir-for-test", "out.csv")
        with self.assertRaises(OSError) as ctx:
            emit_results(table, "csv", path)
        self.assertIn(path, str(ctx.exception))

    def test_identical_runs_are_byte_identical(self):
        argv = ["spectrum", "--n", "3", "--delta", "0.5", "--format", "json"]
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for name in ("first.json", "second.json"):
                path = os.path.join(tmp, name)
                self.assertEqual(main(argv + ["--out", path]), 0)
                with open(path, "rb") as f:
                    outputs.append(f.read())
        self.assertEqual(outputs[0], outputs[1])
        self.assertIn(b'"tool_version"', outputs[0])

    def test_config_round_trips_into_meta(self):
        config = ExperimentConfig("paths", {"n": 4, "j": "0"}, None, "json")
        table = run_experiment(config)
        payload = json.loads(render(table, "json"))
        self.assertEqual(payload["meta"]["config"]["parameters"], {"n": 4, "j": "0"})


if __name__ == "__main__":
    unittest.main()
