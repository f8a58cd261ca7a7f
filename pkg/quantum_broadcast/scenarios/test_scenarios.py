import json
import math
import unittest
from dataclasses import replace

import numpy as np

from quantum_broadcast import hooks
from quantum_broadcast.library import Graph
from quantum_broadcast.mbqc import PauliFrame, ProgramBlock
from quantum_broadcast.protocols import Mode
from quantum_broadcast.scenarios import ScenarioConfig, get_entry, list_scenarios, run_scenario, to_plain
from quantum_broadcast.scenarios.catalog import TOPICS
from quantum_broadcast.scenarios.validators import (
	parse_angle_map,
	parse_blocks,
	parse_frame,
	parse_graph,
	parse_stabilizers,
)
from quantum_broadcast.shared.exceptions import NotFoundError, ValidationError

CATALOG = [
	"bbp",
	"bbp-rotated",
	"multisender",
	"add-sender",
	"delete-sender",
	"phase-restricted",
	"phase-general",
	"phase-approx",
	"auth",
	"qkd",
	"graph-dist-phase",
	"stab-broadcast",
	"phase-teleport",
	"graph-reduce",
	"ghz-star",
	"ghz-ring",
	"mbqc-cnot",
	"mbqc-rotation",
	"mbqc-program",
]


class TestScenarioConfig(unittest.TestCase):
	def test_round_trip(self):
		config = ScenarioConfig(
			"mbqc-program",
			{"blocks": [{"kind": "cnot"}], "psi": [[0.5, 0.5], 0.5, 0.5, [0, 0.5]]},
			"sample",
			5,
			42,
		)
		self.assertEqual(ScenarioConfig.from_json(config.to_json()), config)

	def test_defaults(self):
		config = ScenarioConfig.from_dict({"scenario": "bbp"})
		self.assertEqual(config.mode, Mode.ENUMERATE)
		self.assertIsNone(config.seed)
		self.assertEqual(config.parameters, {})

	def test_unknown_field(self):
		with self.assertRaises(ValidationError):
			ScenarioConfig.from_dict({"scenario": "bbp", "rounds": 4})

	def test_bad_mode(self):
		with self.assertRaises(ValidationError):
			ScenarioConfig("bbp", mode="replay")

	def test_invalid_json(self):
		with self.assertRaises(ValidationError):
			ScenarioConfig.from_json("{scenario: bbp")

	def test_flags_win(self):
		config = ScenarioConfig("bbp", {"theta": 0.1, "receivers": 3}, seed=1)
		merged = config.merged(parameters={"theta": 0.5}, seed=9, mode="sample")
		self.assertEqual(merged.parameters, {"theta": 0.5, "receivers": 3})
		self.assertEqual(merged.seed, 9)
		self.assertEqual(merged.mode, Mode.SAMPLE)


class TestCatalog(unittest.TestCase):
	def test_completeness(self):
		names = [entry.name for entry in list_scenarios()]
		self.assertGreaterEqual(len(names), 17)
		for name in CATALOG:
			self.assertIn(name, names)

	def test_entries_resolve(self):
		for entry in list_scenarios():
			self.assertIn(entry.topic, TOPICS)
			self.assertTrue(callable(entry.resolve()), entry.name)
			json.dumps(to_plain(entry.to_dict()))

	def test_aliases(self):
		for alias, name in hooks.scenario_aliases.items():
			self.assertEqual(get_entry(alias).name, name)

	def test_unknown_scenario(self):
		with self.assertRaises(NotFoundError):
			get_entry("teleport-everything")

	def test_bind_fills_defaults(self):
		bound = get_entry("bbp").bind({"receivers": 3})
		self.assertEqual(bound["receivers"], 3)
		self.assertAlmostEqual(bound["alpha"], 1 / math.sqrt(2))
		self.assertEqual(bound["theta"], 0.0)

	def test_bind_rejects_unknown_parameter(self):
		with self.assertRaises(ValidationError):
			get_entry("bbp").bind({"K": 4})

	def test_bind_checks_choices(self):
		with self.assertRaises(ValidationError):
			get_entry("qkd").bind({"strategy": "guess"})


class TestParameterParsing(unittest.TestCase):
	def test_graph_forms(self):
		self.assertEqual(parse_graph([[1, 2], [2, 3]]), Graph.from_edges([(1, 2), (2, 3)]))
		graph = parse_graph({"vertices": [1, 2, 3], "edges": [[1, 3]]})
		self.assertEqual(graph.vertices, (1, 2, 3))
		with self.assertRaises(ValidationError):
			parse_graph([[1, 2, 3]])

	def test_angle_map_keys(self):
		self.assertEqual(parse_angle_map({"1": 0.5, "3": -1}), {1: 0.5, 3: -1.0})

	def test_stabilizers(self):
		self.assertEqual(parse_stabilizers("+XX, -ZZ"), ["+XX", "-ZZ"])
		with self.assertRaises(ValidationError):
			parse_stabilizers(["XQ"])

	def test_frame(self):
		self.assertEqual(parse_frame([1, 0, 0, 1]), PauliFrame(1, 0, 0, 1))
		self.assertEqual(parse_frame({"z2": True}), PauliFrame(0, 0, 0, 1))
		with self.assertRaises(ValidationError):
			parse_frame({"y1": 1})

	def test_blocks(self):
		blocks = parse_blocks(["cnot", {"kind": "rotation", "first": [0.1, 0.2, 0.3]}])
		self.assertEqual(blocks[0], ProgramBlock("cnot"))
		self.assertEqual(blocks[1].first, (0.1, 0.2, 0.3))
		with self.assertRaises(ValidationError):
			parse_blocks("cnot")


class TestRunScenario(unittest.TestCase):
	def test_bbp(self):
		config = ScenarioConfig("bbp", {"receivers": 2, "alpha": 1 / math.sqrt(2), "beta": 1 / math.sqrt(2)})
		report = run_scenario(config)
		self.assertTrue(report.passed)
		self.assertEqual(report.exit_code, 0)
		self.assertEqual(report.summary["branches"], 3)
		(trial,) = report.trials
		self.assertEqual(len(trial.to_dict()["result"]["branches"]), 3)
		self.assertGreaterEqual(report.verdict("min_fidelity").value, 1 - 1e-10)

	def test_general_phase_success_probability(self):
		config = ScenarioConfig("unknown-phase-general", {"dim": 8, "variant": "destructive"})
		report = run_scenario(config)
		self.assertTrue(report.passed)
		self.assertAlmostEqual(report.summary["success_probability"], 0.75, places=12)

	def test_qkd_sifted_fraction(self):
		config = ScenarioConfig("qkd", {"rounds": 3000, "strategy": "povm"}, seed=42)
		report = run_scenario(config)
		sigma = math.sqrt(0.25 / 3000)
		for fraction in report.summary["sifted_fractions"].values():
			self.assertLessEqual(abs(fraction - 0.5), 3 * sigma)

	def test_trials_become_rounds(self):
		report = run_scenario(ScenarioConfig("auth", {}, trials=200, seed=3))
		self.assertEqual(len(report.trials), 1)
		self.assertEqual(report.summary["rounds"], 200)

	def test_sampled_trials(self):
		report = run_scenario(ScenarioConfig("bbp", {"theta": 0.4}, "sample", 3, 11))
		self.assertEqual(len(report.trials), 3)
		self.assertEqual(len({t.seed for t in report.trials}), 3)
		self.assertEqual(report.summary["trials"], 3)
		self.assertTrue(report.passed)

	def test_enumeration_ignores_trials(self):
		report = run_scenario(ScenarioConfig("ghz-star", {"receivers": 3}, trials=5))
		self.assertEqual(len(report.trials), 1)

	def test_deterministic_reports(self):
		for config in (
			ScenarioConfig("qkd", {"rounds": 300}, seed=7),
			ScenarioConfig("mbqc-cnot", {}, "sample", 2, 5),
			ScenarioConfig("phase-teleport", {"angles": {"2": 0.3}}),
		):
			self.assertEqual(run_scenario(config).to_json(), run_scenario(config).to_json(), config.scenario)

	def test_invalid_parameter(self):
		with self.assertRaises(ValidationError):
			run_scenario(ScenarioConfig("ghz-ring", {"receivers": 0}))
		with self.assertRaises(ValidationError):
			run_scenario(ScenarioConfig("bbp", {"alpha": 1, "beta": 1}))

	def test_unknown_scenario(self):
		with self.assertRaises(NotFoundError):
			run_scenario(ScenarioConfig("bbq"))

	def test_every_scenario_with_defaults(self):
		for entry in list_scenarios():
			parameters = {"rounds": 300} if entry.takes_rounds else {}
			mode = "sample" if entry.topic == "mbqc" else "enumerate"
			report = run_scenario(ScenarioConfig(entry.name, parameters, mode, seed=1))
			self.assertTrue(report.passed, entry.name)

	def test_serialized_report(self):
		report = run_scenario(ScenarioConfig("graph-dist-phase", {"entangler": "ccz"}), verbose=True)
		data = json.loads(report.to_json())
		self.assertTrue(data["passed"])
		self.assertEqual(data["config"]["parameters"]["entangler"], "ccz")
		self.assertIn("events", data["trials"][0]["result"]["branches"][0])
		records = [json.loads(line) for line in report.to_lines()]
		self.assertEqual([r["type"] for r in records], ["trial", "summary"])

	def test_verdicts_follow_raw_values(self):
		report = run_scenario(ScenarioConfig("ghz-ring", {"receivers": 2}))
		self.assertTrue(report.passed)
		verdicts = report.trials[0].result.verdicts
		verdicts[0] = replace(verdicts[0], value=np.nan)
		self.assertFalse(report.passed)
		self.assertEqual(report.exit_code, 1)

	def test_table(self):
		report = run_scenario(ScenarioConfig("stab-broadcast"))
		table = report.render_table()
		self.assertIn("Metric", table)
		self.assertIn("PASS", table)
		self.assertNotIn("FAIL", table)
