"""
Scenarios

Named, catalogued runs of the protocol and MBQC operations with JSON
configuration and machine-readable reports.
"""

from .catalog import Parameter, ScenarioEntry, get_entry, list_scenarios, scenario_names
from .config import ScenarioConfig
from .report import Report, TrialRecord, to_plain
from .service import ScenarioService, catalog, run_scenario, trial_seed

__all__ = [
	# Config and catalog
	"Parameter",
	"ScenarioConfig",
	"ScenarioEntry",
	"get_entry",
	"list_scenarios",
	"scenario_names",
	# Running
	"Report",
	"ScenarioService",
	"TrialRecord",
	"catalog",
	"run_scenario",
	"to_plain",
	"trial_seed",
]
