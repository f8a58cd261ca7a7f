"""
Scenario Service

Business logic for running catalogued scenarios.
Validation happens before any handler runs; results come back as a Report.
"""

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.protocols.transcript import Mode
from quantum_broadcast.protocols.verification import report_failures
from quantum_broadcast.shared.exceptions import SimulatorError, ValidationError
from quantum_broadcast.shared.logger import get_logger, log_error

from .catalog import ScenarioEntry, get_entry, list_scenarios
from .config import ScenarioConfig
from .report import Report, TrialRecord

logger = get_logger("scenarios")


def trial_seed(seed: int, index: int) -> int:
	"""Independent seed for trial ``index`` of a multi-trial run."""
	return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


class ScenarioService:
	"""Service class for scenario dispatch."""

	@classmethod
	def run_scenario(cls, config: ScenarioConfig, verbose: bool = False) -> Report:
		"""
		Run a scenario.

		In sample mode ``trials`` independent runs are made, each with its own
		seed drawn from the master seed; enumeration is exhaustive and runs
		once. Key-distribution scenarios use ``trials`` as their round count
		when ``rounds`` is not given.

		Args:
			config: Scenario request
			verbose: Include full transcripts in the report

		Returns:
			Report: Trials, aggregates and verdicts

		Raises:
			NotFoundError: If the scenario is not registered
			ValidationError: If a parameter violates its precondition
		"""
		entry = get_entry(config.scenario)
		try:
			parameters = entry.bind(config.parameters)
		except ValidationError as e:
			log_error("Invalid scenario parameters", f"{entry.name}: {e.message}", "scenarios")
			raise

		settings = get_settings()
		seed = settings.default_seed if config.seed is None else config.seed
		count = cls._trial_count(entry, config)
		if entry.takes_rounds and parameters["rounds"] is None:
			parameters["rounds"] = config.trials or settings.default_trials

		handler = entry.resolve()
		logger.info("Running scenario %s (mode=%s, trials=%d, seed=%d)", entry.name, config.mode.value, count, seed)
		trials = []
		for index in range(count):
			run_seed = seed if count == 1 else trial_seed(seed, index)
			try:
				result = handler(parameters, config.mode, run_seed)
			except SimulatorError as e:
				log_error(f"Scenario {entry.name} failed", e.message, "scenarios")
				raise
			trials.append(TrialRecord(index, run_seed, result))

		report = Report(config, entry, trials, verbose)
		report_failures(entry.name, report)
		return report

	@staticmethod
	def _trial_count(entry: ScenarioEntry, config: ScenarioConfig) -> int:
		if entry.takes_rounds or config.mode != Mode.SAMPLE:
			return 1
		return config.trials or 1

	@staticmethod
	def list_scenarios() -> list[dict]:
		"""Catalog entries with their parameter schemas."""
		return [entry.to_dict() for entry in list_scenarios()]


run_scenario = ScenarioService.run_scenario
catalog = ScenarioService.list_scenarios
