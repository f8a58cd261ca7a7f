"""
Scenario Configuration

A named scenario with its raw parameters, run mode, trial count and master
seed, read from JSON and merged with command-line overrides.
"""

import json
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path

from quantum_broadcast.protocols.transcript import Mode
from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.validators import validate_positive_int

CONFIG_FIELDS = ("scenario", "parameters", "mode", "trials", "seed")


def parse_mode(value) -> Mode:
	try:
		return Mode(value)
	except ValueError:
		raise ValidationError(f"mode must be one of {[m.value for m in Mode]}, got {value!r}")


@dataclass(frozen=True)
class ScenarioConfig:
	"""
	Scenario request.

	Parameters stay raw here; the catalog entry of the scenario validates them
	before anything runs.
	"""

	scenario: str
	parameters: dict = field(default_factory=dict)
	mode: Mode = Mode.ENUMERATE
	trials: int | None = None
	seed: int | None = None

	def __post_init__(self):
		if not isinstance(self.scenario, str) or not self.scenario.strip():
			raise ValidationError("scenario name is required")
		if not isinstance(self.parameters, Mapping):
			raise ValidationError("parameters must be a JSON object")
		object.__setattr__(self, "scenario", self.scenario.strip())
		object.__setattr__(self, "parameters", dict(self.parameters))
		object.__setattr__(self, "mode", parse_mode(self.mode))
		if self.trials is not None:
			object.__setattr__(self, "trials", validate_positive_int(self.trials, "trials"))
		if self.seed is not None:
			object.__setattr__(self, "seed", validate_positive_int(self.seed, "seed", minimum=0))

	@classmethod
	def from_dict(cls, data: Mapping) -> "ScenarioConfig":
		"""
		Raises:
			ValidationError: On unknown top-level fields or a missing scenario name
		"""
		if not isinstance(data, Mapping):
			raise ValidationError("A scenario config must be a JSON object")
		unknown = set(data) - set(CONFIG_FIELDS)
		if unknown:
			raise ValidationError(f"Unknown config fields {sorted(unknown)}")
		if "scenario" not in data:
			raise ValidationError("scenario name is required")
		return cls(
			data["scenario"],
			data.get("parameters") or {},
			data.get("mode", Mode.ENUMERATE),
			data.get("trials"),
			data.get("seed"),
		)

	@classmethod
	def from_json(cls, text: str) -> "ScenarioConfig":
		try:
			data = json.loads(text)
		except json.JSONDecodeError as e:
			raise ValidationError(f"Scenario config is not valid JSON: {e.msg} (line {e.lineno})")
		return cls.from_dict(data)

	@classmethod
	def load(cls, path: str | Path) -> "ScenarioConfig":
		"""Read a scenario config file."""
		try:
			text = Path(path).read_text(encoding="utf-8")
		except OSError as e:
			raise ValidationError(f"Cannot read scenario config {path}: {e.strerror}")
		return cls.from_json(text)

	def merged(self, scenario=None, parameters=None, mode=None, trials=None, seed=None) -> "ScenarioConfig":
		"""Copy with every given (non-None) override applied; parameters are merged key by key."""
		changes = {}
		if scenario is not None:
			changes["scenario"] = scenario
		if parameters:
			changes["parameters"] = {**self.parameters, **parameters}
		if mode is not None:
			changes["mode"] = mode
		if trials is not None:
			changes["trials"] = trials
		if seed is not None:
			changes["seed"] = seed
		return replace(self, **changes)

	def to_dict(self) -> dict:
		return {
			"scenario": self.scenario,
			"parameters": self.parameters,
			"mode": self.mode.value,
			"trials": self.trials,
			"seed": self.seed,
		}

	def to_json(self) -> str:
		return json.dumps(self.to_dict(), sort_keys=True)
