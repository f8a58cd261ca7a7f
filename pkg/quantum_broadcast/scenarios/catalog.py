"""
Scenario Catalog

Parameter schemas for every registered scenario. Handlers come from the
registry in ``quantum_broadcast.hooks``; this module adds the topic, a short
description and the typed parameters each handler accepts.
"""

import importlib
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from quantum_broadcast import hooks
from quantum_broadcast.protocols.keys import STRATEGIES
from quantum_broadcast.protocols.phases import VARIANTS
from quantum_broadcast.shared.exceptions import NotFoundError, ValidationError
from quantum_broadcast.shared.validators import parse_complex, validate_angles, validate_dimension, validate_positive_int

from . import validators

INV_SQRT2 = 1 / math.sqrt(2)
HADAMARD_ROWS = [[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]]
REDUCIBLE_EDGES = [[1, 2], [1, 3], [2, 3], [3, 4], [3, 5], [3, 6], [4, 6], [5, 6]]
TOPICS = ("broadcast", "phases", "keys", "graphs", "mbqc")


@dataclass(frozen=True)
class Parameter:
	"""One typed scenario parameter."""

	kind: str
	default: object = None
	description: str = ""
	choices: tuple = ()

	def parse(self, value, name: str):
		"""
		Raises:
			ValidationError: If the value does not fit the kind
		"""
		if value is None:
			return None
		if self.kind == "int":
			result = validate_positive_int(value, name, minimum=0)
		elif self.kind == "count":
			result = validate_positive_int(value, name)
		elif self.kind == "dim":
			result = validate_dimension(value, name)
		elif self.kind == "float":
			result = validators.parse_float(value, name)
		elif self.kind == "complex":
			result = parse_complex(value, name)
		elif self.kind == "bool":
			result = validators.parse_bool(value, name)
		elif self.kind == "choice":
			if value not in self.choices:
				raise ValidationError(f"{name} must be one of {list(self.choices)}, got {value!r}")
			result = value
		else:
			result = PARSERS[self.kind](value, name)
		return result

	def to_dict(self) -> dict:
		data = {"kind": self.kind, "default": self.default, "description": self.description}
		if self.choices:
			data["choices"] = list(self.choices)
		return data


PARSERS: dict[str, Callable] = {
	"angles": lambda value, name: list(validate_angles(value, name)),
	"triple": lambda value, name: list(validate_angles(value, name, count=3)),
	"ints": validators.parse_int_list,
	"graph": validators.parse_graph,
	"vertices": validators.parse_vertices,
	"angle_map": validators.parse_angle_map,
	"stabilizers": validators.parse_stabilizers,
	"qubit": lambda value, name: validators.parse_amplitudes(value, name, size=2),
	"pair": lambda value, name: validators.parse_amplitudes(value, name, size=4),
	"matrix2": lambda value, name: validators.parse_matrix(value, name, size=2),
	"frame": validators.parse_frame,
	"blocks": validators.parse_blocks,
}


@dataclass(frozen=True)
class ScenarioEntry:
	"""A catalogued scenario: where its handler lives and what it accepts."""

	name: str
	handler: str
	topic: str
	description: str
	parameters: dict[str, Parameter] = field(default_factory=dict)

	def bind(self, raw: Mapping) -> dict:
		"""
		Validate raw parameters against the schema and fill in defaults.

		Raises:
			ValidationError: On unknown names or invalid values
		"""
		unknown = set(raw) - set(self.parameters)
		if unknown:
			raise ValidationError(
				f"Scenario {self.name!r} does not take {sorted(unknown)}; expected {sorted(self.parameters)}"
			)
		bound = {}
		for name, parameter in self.parameters.items():
			value = raw[name] if name in raw else parameter.default
			bound[name] = parameter.parse(value, name)
		return bound

	def resolve(self) -> Callable:
		"""Import the handler named by its dotted path."""
		module_name, _, attr = self.handler.rpartition(".")
		try:
			return getattr(importlib.import_module(module_name), attr)
		except (ImportError, AttributeError):
			raise NotFoundError(f"Handler {self.handler} for scenario {self.name!r} cannot be imported")

	@property
	def takes_rounds(self) -> bool:
		return "rounds" in self.parameters

	def to_dict(self) -> dict:
		return {
			"name": self.name,
			"topic": self.topic,
			"description": self.description,
			"parameters": {name: p.to_dict() for name, p in self.parameters.items()},
		}


def _amplitudes() -> dict[str, Parameter]:
	return {
		"alpha": Parameter("complex", INV_SQRT2, "Amplitude of |0>"),
		"beta": Parameter("complex", INV_SQRT2, "Amplitude of |1>"),
	}


def _psi(default=(0.5, 0.5, 0.5, 0.5)) -> Parameter:
	return Parameter("pair", list(default), "Two-qubit logical input (4 amplitudes)")


SCHEMAS: dict[str, tuple[str, str, dict[str, Parameter]]] = {
	"bbp": (
		"broadcast",
		"One sender qudit distributes a phase to N receiver qubits",
		{
			**_amplitudes(),
			"theta": Parameter("float", 0.0, "Phase to broadcast"),
			"receivers": Parameter("count", 2, "Number of receivers N"),
		},
	),
	"bbp-rotated": (
		"broadcast",
		"Broadcast in a rotated qubit basis {T|0>, T|1>}",
		{
			"rotation": Parameter("matrix2", HADAMARD_ROWS, "2x2 unitary T"),
			"psi": Parameter("qubit", [1.0, 0.0], "Receiver start state"),
			"theta": Parameter("float", 0.0, "Phase to broadcast"),
			"receivers": Parameter("count", 2, "Number of receivers N"),
		},
	),
	"multisender": (
		"broadcast",
		"M senders each add a phase; receivers get the sum",
		{
			**_amplitudes(),
			"senders": Parameter("count", 2, "Number of senders M"),
			"receivers": Parameter("count", 2, "Number of receivers N"),
			"thetas": Parameter("angles", None, "One phase per sender (default all zero)"),
			"active": Parameter("ints", None, "1-based indices of active senders (default all)"),
		},
	),
	"add-sender": (
		"broadcast",
		"A newcomer joins through a maximally entangled pair with the last sender",
		{
			**_amplitudes(),
			"senders": Parameter("count", 1, "Senders before the join"),
			"receivers": Parameter("count", 2, "Number of receivers N"),
		},
	),
	"delete-sender": (
		"broadcast",
		"A sender leaves by measuring in the Fourier basis",
		{
			**_amplitudes(),
			"senders": Parameter("count", 2, "Senders before the departure"),
			"receivers": Parameter("count", 2, "Number of receivers N"),
			"which": Parameter("count", None, "1-based index of the leaving sender (default the last)"),
		},
	),
	"phase-restricted": (
		"phases",
		"Send theta = 2 pi k / K stored in a K-level encoding qudit",
		{
			**_amplitudes(),
			"k": Parameter("int", 1, "Phase index k"),
			"dim": Parameter("dim", 4, "Encoding dimension K"),
			"receivers": Parameter("count", 2, "Number of receivers"),
		},
	),
	"phase-general": (
		"phases",
		"Send an arbitrary phase stored in the encoding qudit",
		{
			**_amplitudes(),
			"theta": Parameter("float", 0.3, "Stored phase"),
			"dim": Parameter("dim", 8, "Encoding dimension K"),
			"variant": Parameter("choice", "destructive", "Measurement variant", VARIANTS),
			"receivers": Parameter("count", 2, "Number of receivers"),
			"uses": Parameter("count", 1, "Number of uses of one encoding state"),
		},
	),
	"phase-approx": (
		"phases",
		"Approximate phase sending and the noise left by a second use",
		{
			**_amplitudes(),
			"theta": Parameter("float", 0.3, "Stored phase"),
			"dim": Parameter("dim", 8, "Encoding dimension K"),
			"receivers": Parameter("count", 2, "Number of receivers"),
			"uses": Parameter("count", 2, "Number of uses of one encoding state"),
		},
	),
	"auth": (
		"keys",
		"Trine-state authentication: receivers never see the sent label",
		{
			"rounds": Parameter("count", None, "Rounds to sample (default: trials or the settings default)"),
			"receivers": Parameter("count", 2, "Number of receivers"),
		},
	),
	"qkd": (
		"keys",
		"Trine-state key distribution with sifting",
		{
			"rounds": Parameter("count", None, "Rounds to sample (default: trials or the settings default)"),
			"receivers": Parameter("count", 1, "Number of receivers"),
			"strategy": Parameter("choice", "projective", "Receiver measurement", STRATEGIES),
		},
	),
	"graph-dist-phase": (
		"graphs",
		"Broadcast a phase into an entangled receiver block",
		{
			**_amplitudes(),
			"graph": Parameter("graph", [[1, 2]], "Receiver graph of the CZ entangler"),
			"entangler": Parameter("choice", "graph", "Entangler on the receiver block", ("graph", "ccz")),
			"senders": Parameter("count", 1, "Number of senders M"),
			"thetas": Parameter("angles", None, "One phase per sender"),
			"abort": Parameter("bool", False, "Sender measures in the computational basis instead"),
		},
	),
	"stab-broadcast": (
		"graphs",
		"Distribute the state fixed by commuting Pauli stabilizers",
		{
			"stabilizers": Parameter("stabilizers", ["+XX", "+ZZ"], "Signed Pauli strings"),
			"abort": Parameter("bool", False, "Sender measures in the computational basis instead"),
		},
	),
	"phase-teleport": (
		"graphs",
		"Teleport e^{i theta Z} onto graph vertices from sender ancillas",
		{
			"graph": Parameter("graph", [[1, 2], [2, 3]], "Receiver graph"),
			"angles": Parameter("angle_map", {"1": 0.4}, "Vertex to angle"),
			"correct": Parameter("bool", True, "Apply the Z corrections"),
		},
	),
	"graph-reduce": (
		"graphs",
		"Cut vertices out of a graph state by measuring them",
		{
			"graph": Parameter("graph", REDUCIBLE_EDGES, "Full graph"),
			"keep": Parameter("vertices", [1, 2, 3, 4, 5], "Vertices that stay entangled"),
		},
	),
	"ghz-star": (
		"graphs",
		"GHZ state from a star graph",
		{"receivers": Parameter("count", 3, "Number of receivers")},
	),
	"ghz-ring": (
		"graphs",
		"GHZ state from a ring of pairs",
		{"receivers": Parameter("count", 3, "Number of receivers")},
	),
	"mbqc-cnot": (
		"mbqc",
		"CNOT on one brickwork block with receiver X measurements only",
		{
			"psi": _psi(),
			"frame": Parameter("frame", [0, 0, 0, 0], "Incoming Pauli frame [x1, z1, x2, z2]"),
			"lazy": Parameter("bool", True, "Grow the register vertex by vertex"),
		},
	),
	"mbqc-rotation": (
		"mbqc",
		"Euler rotations on both wires of one brickwork block",
		{
			"psi": _psi(),
			"first": Parameter("triple", [0.0, 0.0, 0.0], "(alpha, beta, gamma) on wire 1"),
			"second": Parameter("triple", [0.0, 0.0, 0.0], "(alpha, beta, gamma) on wire 2"),
			"frame": Parameter("frame", [0, 0, 0, 0], "Incoming Pauli frame [x1, z1, x2, z2]"),
			"lazy": Parameter("bool", True, "Grow the register vertex by vertex"),
		},
	),
	"mbqc-program": (
		"mbqc",
		"A chain of brickwork blocks with byproducts carried between them",
		{
			"blocks": Parameter("blocks", [{"kind": "rotation", "first": [0.3, 0.2, 0.1]}, {"kind": "cnot"}], "Block list"),
			"psi": _psi(),
			"frame": Parameter("frame", [0, 0, 0, 0], "Incoming Pauli frame [x1, z1, x2, z2]"),
			"samples": Parameter("count", 4, "Sampled histories of the leading blocks"),
		},
	),
}


def scenario_names() -> list[str]:
	return list(hooks.scenarios)


def get_entry(name: str) -> ScenarioEntry:
	"""
	Look up a scenario by name or alias.

	Raises:
		NotFoundError: If no such scenario is registered
	"""
	name = hooks.scenario_aliases.get(name, name)
	if name not in hooks.scenarios or name not in SCHEMAS:
		raise NotFoundError(f"Unknown scenario {name!r}; run with --list to see the catalog")
	topic, description, parameters = SCHEMAS[name]
	return ScenarioEntry(name, hooks.scenarios[name], topic, description, parameters)


def list_scenarios() -> list[ScenarioEntry]:
	"""Every registered scenario, in registry order."""
	return [get_entry(name) for name in scenario_names()]
