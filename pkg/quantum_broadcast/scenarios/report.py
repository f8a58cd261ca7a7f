"""
Scenario Reports

Per-trial results, aggregate figures and verdicts of one scenario run,
rendered as a metric/value table, as JSON or as JSON lines.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from quantum_broadcast.library.graphs import Graph
from quantum_broadcast.protocols.transcript import Verdict, VerdictLog

from .catalog import ScenarioEntry
from .config import ScenarioConfig


def to_plain(value):
	"""
	Convert results to JSON-ready data.

	Floats keep 17 significant digits, complex numbers become [re, im]
	pairs and objects with ``to_dict`` are expanded.
	"""
	if value is None or isinstance(value, (bool, str)):
		return value
	if isinstance(value, Enum):
		return value.value
	if isinstance(value, (int, np.integer)):
		return int(value)
	if isinstance(value, (float, np.floating)):
		value = float(value)
		return float(f"{value:.17g}") if math.isfinite(value) else value
	if isinstance(value, (complex, np.complexfloating)):
		return [to_plain(value.real), to_plain(value.imag)]
	if isinstance(value, np.ndarray):
		return to_plain(value.tolist())
	if isinstance(value, dict):
		return {str(k): to_plain(v) for k, v in value.items()}
	if isinstance(value, (list, tuple, set)):
		return [to_plain(v) for v in value]
	if isinstance(value, Graph):
		return {"vertices": to_plain(value.vertices), "edges": to_plain(value.edges)}
	if hasattr(value, "to_dict"):
		return to_plain(value.to_dict())
	return str(value)


def dumps(data) -> str:
	return json.dumps(to_plain(data), sort_keys=True)


@dataclass(eq=False)
class TrialRecord:
	"""One run of the scenario handler."""

	index: int
	seed: int
	result: VerdictLog

	@property
	def passed(self) -> bool:
		return self.result.passed

	def to_dict(self, verbose: bool = False) -> dict:
		return {"trial": self.index, "seed": self.seed, "passed": self.passed, "result": self.result.to_dict(verbose)}


@dataclass(eq=False)
class Report(VerdictLog):
	"""
	Outcome of ``run_scenario``.

	Verdicts are read from the trial results on every access, so ``passed``
	always reflects the raw values.
	"""

	config: ScenarioConfig
	entry: ScenarioEntry
	trials: list[TrialRecord]
	verbose: bool = False

	@property
	def verdicts(self) -> list[Verdict]:
		return [v for trial in self.trials for v in trial.result.verdicts]

	@property
	def exit_code(self) -> int:
		return 0 if self.passed else 1

	@property
	def parameters(self) -> dict:
		"""Scenario parameters with defaults filled in, as given (JSON form)."""
		return {
			name: self.config.parameters.get(name, parameter.default)
			for name, parameter in self.entry.parameters.items()
		}

	@property
	def summary(self) -> dict:
		summary = {
			"scenario": self.entry.name,
			"topic": self.entry.topic,
			"mode": self.config.mode.value,
			"trials": len(self.trials),
			"failed_trials": sum(not t.passed for t in self.trials),
			"passed": self.passed,
		}
		if len(self.trials) == 1:
			summary.update(self.trials[0].result.summary)
			return summary
		# mean of every numeric summary figure shared by all trials
		for key in self.trials[0].result.summary:
			values = [t.result.summary.get(key) for t in self.trials]
			if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in values):
				summary[f"mean_{key}"] = float(np.mean(values))
		return summary

	def to_dict(self) -> dict:
		return {
			"scenario": self.entry.name,
			"config": {**self.config.to_dict(), "parameters": self.parameters},
			"summary": self.summary,
			"verdicts": [v.to_dict() for v in self.verdicts],
			"trials": [t.to_dict(self.verbose) for t in self.trials],
			"passed": self.passed,
		}

	def to_json(self, indent: int | None = 2) -> str:
		return json.dumps(to_plain(self.to_dict()), sort_keys=True, indent=indent)

	def to_lines(self) -> list[str]:
		"""One JSON record per trial followed by the summary record."""
		lines = [dumps({"type": "trial", **t.to_dict(self.verbose)}) for t in self.trials]
		lines.append(
			dumps(
				{
					"type": "summary",
					"config": {**self.config.to_dict(), "parameters": self.parameters},
					"summary": self.summary,
					"verdicts": [v.to_dict() for v in self.verdicts],
				}
			)
		)
		return lines

	def get_columns(self) -> list[dict]:
		return [
			{"fieldname": "metric", "label": "Metric", "width": 36},
			{"fieldname": "value", "label": "Value", "width": 44},
		]

	def get_data(self) -> list[dict]:
		"""Summary figures, then one row per verdict."""
		data = []
		for key, value in self.summary.items():
			data.append({"metric": key, "value": _cell(value)})

		data.append({"metric": "", "value": ""})
		data.append({"metric": "Verdicts", "value": ""})
		for index, trial in enumerate(self.trials):
			prefix = f"[{index}] " if len(self.trials) > 1 else ""
			for verdict in trial.result.verdicts:
				status = "PASS" if verdict.passed else "FAIL"
				data.append({"metric": f"  {prefix}{verdict.name}", "value": f"{status} {_cell(verdict.value)}"})
		return data

	def render_table(self) -> str:
		columns = self.get_columns()
		lines = ["  ".join(c["label"].ljust(c["width"]) for c in columns).rstrip()]
		lines.append("  ".join("-" * c["width"] for c in columns))
		for row in self.get_data():
			lines.append("  ".join(str(row[c["fieldname"]]).ljust(c["width"]) for c in columns).rstrip())
		return "\n".join(lines)


def _cell(value) -> str:
	if isinstance(value, (float, np.floating)):
		return f"{float(value):.12g}"
	if isinstance(value, (dict, list, tuple)):
		return dumps(value)
	return str(value)
