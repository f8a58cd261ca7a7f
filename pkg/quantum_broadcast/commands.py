"""
Command Line

Runs catalogued scenarios. Exit status is 0 when every verdict passes,
1 when one fails, and the error's exit code (2 for invalid input, 3 for a
protocol rule breach) when the run is rejected.
"""

import json

import click

from quantum_broadcast.protocols.transcript import Mode
from quantum_broadcast.scenarios import ScenarioConfig, catalog, run_scenario
from quantum_broadcast.shared.exceptions import SimulatorError, ValidationError
from quantum_broadcast.shared.logger import configure


def parse_assignments(assignments) -> dict:
	"""``key=value`` pairs; values are read as JSON when they parse, else kept as text."""
	parameters = {}
	for item in assignments:
		key, sep, raw = item.partition("=")
		if not sep or not key.strip():
			raise ValidationError(f"Parameter {item!r} must look like key=value")
		try:
			parameters[key.strip()] = json.loads(raw)
		except json.JSONDecodeError:
			parameters[key.strip()] = raw
	return parameters


def build_config(scenario, config_path, assignments, mode, trials, seed) -> ScenarioConfig:
	"""Config file first, then command-line flags on top."""
	overrides = parse_assignments(assignments)
	if config_path:
		base = ScenarioConfig.load(config_path)
		return base.merged(scenario=scenario, parameters=overrides, mode=mode, trials=trials, seed=seed)
	if not scenario:
		raise ValidationError("Give a scenario name or --config (see --list)")
	return ScenarioConfig(scenario, overrides, mode or Mode.ENUMERATE, trials, seed)


def echo_catalog(as_json: bool) -> None:
	entries = catalog()
	if as_json:
		click.echo(json.dumps(entries, sort_keys=True, indent=2))
		return
	for entry in entries:
		click.echo(f"{entry['name']:<18}{entry['topic']:<11}{entry['description']}")


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("scenario", required=False)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON scenario file")
@click.option("-p", "--param", "assignments", multiple=True, metavar="KEY=VALUE", help="Set a scenario parameter")
@click.option("--seed", type=click.IntRange(min=0), help="Master seed")
@click.option("--trials", type=click.IntRange(min=1), help="Sampled trials (or rounds for key scenarios)")
@click.option("--mode", type=click.Choice([m.value for m in Mode]), help="Branch enumeration or sampling")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@click.option("--lines", "as_lines", is_flag=True, help="Print one JSON record per trial and a summary record")
@click.option("--verbose-transcript", is_flag=True, help="Include full transcripts in the report")
@click.option("--list", "list_only", is_flag=True, help="List the scenario catalog and exit")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.pass_context
def cli(
	ctx,
	scenario,
	config_path,
	assignments,
	seed,
	trials,
	mode,
	as_json,
	as_lines,
	verbose_transcript,
	list_only,
	verbose,
):
	"""Run a quantum broadcasting SCENARIO and check its verdicts."""
	configure(verbose)
	if list_only:
		echo_catalog(as_json)
		return

	try:
		config = build_config(scenario, config_path, assignments, mode, trials, seed)
		report = run_scenario(config, verbose=verbose_transcript)
	except SimulatorError as e:
		click.echo(f"Error: {e.message}", err=True)
		ctx.exit(e.exit_code)

	if as_lines:
		for line in report.to_lines():
			click.echo(line)
	elif as_json:
		click.echo(report.to_json())
	else:
		click.echo(report.render_table())
	ctx.exit(report.exit_code)


commands = [cli]
