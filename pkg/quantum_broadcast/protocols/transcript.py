"""
Protocol Transcripts

Parties, classical messages, the ordered event log of a protocol run and
the verdicts computed from it.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from quantum_broadcast.shared.exceptions import ProtocolViolation
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import DensityMatrix, LocalOperator, Measurement, StateVector

BROADCAST = "*"


class Mode(str, Enum):
	ENUMERATE = "enumerate"
	SAMPLE = "sample"


class PartyRole(str, Enum):
	SENDER = "sender"
	RECEIVER = "receiver"
	PHASE_PROVIDER = "phase-provider"


@dataclass(frozen=True)
class Party:
	"""A named participant and the subsystems it holds at the start."""

	name: str
	role: PartyRole
	subsystems: tuple[str, ...] = ()


@dataclass(frozen=True)
class ClassicalMessage:
	sequence: int
	sender: str
	recipients: tuple[str, ...]
	payload: tuple[int, ...] = ()
	abort: bool = False
	tag: str = ""

	def addressed_to(self, party: str) -> bool:
		return BROADCAST in self.recipients or party in self.recipients

	def to_dict(self) -> dict:
		return {
			"seq": self.sequence,
			"from": self.sender,
			"to": list(self.recipients),
			"payload": list(self.payload),
			"abort": self.abort,
			"tag": self.tag,
		}


@dataclass(frozen=True, eq=False)
class OperationEvent:
	sequence: int
	party: str
	op: LocalOperator
	depends_on: tuple[int, ...] = ()
	label: str = ""

	def to_dict(self) -> dict:
		return {
			"seq": self.sequence,
			"kind": "operation",
			"party": self.party,
			"op": self.op.name,
			"targets": [str(t) for t in self.op.targets],
			"depends_on": list(self.depends_on),
			"label": self.label,
		}


@dataclass(frozen=True, eq=False)
class MeasurementEvent:
	sequence: int
	party: str
	measurement: Measurement
	outcome: int
	probability: float
	discard: bool = False
	sampled: bool = False
	label: str = ""

	def to_dict(self) -> dict:
		return {
			"seq": self.sequence,
			"kind": "measurement",
			"party": self.party,
			"basis": self.measurement.name,
			"target": str(self.measurement.target),
			"outcome": self.outcome,
			"probability": self.probability,
			"label": self.label,
		}


@dataclass(frozen=True, eq=False)
class MessageEvent:
	sequence: int
	message: ClassicalMessage

	def to_dict(self) -> dict:
		return {"kind": "message", **self.message.to_dict()}


@dataclass(frozen=True, eq=False)
class TransferEvent:
	sequence: int
	subsystem: str
	source: str
	destination: str

	def to_dict(self) -> dict:
		return {
			"seq": self.sequence,
			"kind": "transfer",
			"subsystem": self.subsystem,
			"from": self.source,
			"to": self.destination,
		}


@dataclass(frozen=True, eq=False)
class AttachEvent:
	"""A party prepares fresh subsystems, appended to the register."""

	sequence: int
	party: str
	state: StateVector

	def to_dict(self) -> dict:
		return {"seq": self.sequence, "kind": "attach", "party": self.party, "subsystems": list(self.state.labels)}


Event = OperationEvent | MeasurementEvent | MessageEvent | TransferEvent | AttachEvent


@dataclass(frozen=True)
class Verdict:
	"""
	A checked claim. ``passed`` is derived from the raw value on every access.

	kind "min": value >= target - tolerance; "max": value <= target + tolerance;
	"equal": |value - target| <= tolerance.
	"""

	name: str
	value: float
	target: float
	tolerance: float
	kind: str = "equal"

	@property
	def passed(self) -> bool:
		value, target, tol = float(self.value), float(self.target), float(self.tolerance)
		if not np.isfinite(value):
			return False
		if self.kind == "min":
			return value >= target - tol
		if self.kind == "max":
			return value <= target + tol
		return abs(value - target) <= tol

	def to_dict(self) -> dict:
		return {
			"name": self.name,
			"value": float(self.value),
			"target": float(self.target),
			"tolerance": float(self.tolerance),
			"kind": self.kind,
			"passed": self.passed,
		}


class VerdictLog:
	"""Verdict bookkeeping shared by transcripts and multi-round results."""

	verdicts: list[Verdict]

	@property
	def passed(self) -> bool:
		return all(v.passed for v in self.verdicts)

	def verdict(self, name: str) -> Verdict:
		for v in self.verdicts:
			if v.name == name:
				return v
		raise KeyError(name)

	def add_verdict(self, name: str, value: float, target: float, tolerance: float, kind: str = "equal") -> Verdict:
		verdict = Verdict(name, float(value), float(target), float(tolerance), kind)
		self.verdicts.append(verdict)
		return verdict


@dataclass(eq=False)
class BranchRecord:
	"""
	One complete measurement history.

	Impossible histories (an outcome of probability below the zero
	threshold) stop at that outcome and have no final state.
	"""

	outcomes: tuple[int, ...]
	probability: float
	possible: bool
	events: tuple
	initial_state: StateVector
	initial_owners: dict[str, str]
	final_state: StateVector | None
	owners: dict[str, str]
	checkpoints: dict[str, StateVector] = field(default_factory=dict)
	notes: dict = field(default_factory=dict)

	@property
	def messages(self) -> list[ClassicalMessage]:
		return [e.message for e in self.events if isinstance(e, MessageEvent)]

	@property
	def measurements(self) -> list[MeasurementEvent]:
		return [e for e in self.events if isinstance(e, MeasurementEvent)]

	def outcome_of(self, label: str) -> int:
		"""Outcome of the measurement event carrying ``label``."""
		for event in self.measurements:
			if event.label == label:
				return event.outcome
		raise KeyError(label)

	def replay(self) -> StateVector:
		"""
		Re-run the recorded events from the initial state.

		Raises:
			ProtocolViolation: For an impossible branch
		"""
		if not self.possible:
			raise ProtocolViolation("An impossible branch has no final state to replay")
		state = self.initial_state
		for event in self.events:
			if isinstance(event, OperationEvent):
				state = TensorService.apply(state, event.op)
			elif isinstance(event, MeasurementEvent):
				state = TensorService.collapse(state, event.measurement, event.outcome, event.discard).state
			elif isinstance(event, AttachEvent):
				state = TensorService.tensor(state, event.state)
		return state

	def check_locality(self) -> None:
		"""
		Every operation and measurement touches only subsystems its party holds.

		Raises:
			ProtocolViolation: On the first offending event
		"""
		owners = dict(self.initial_owners)
		for event in self.events:
			if isinstance(event, OperationEvent):
				touched = event.op.targets
			elif isinstance(event, MeasurementEvent):
				touched = (event.measurement.target,)
			elif isinstance(event, TransferEvent):
				if owners.get(event.subsystem) != event.source:
					raise ProtocolViolation(f"{event.source} transferred {event.subsystem} without holding it")
				owners[event.subsystem] = event.destination
				continue
			elif isinstance(event, AttachEvent):
				for label in event.state.labels:
					owners[label] = event.party
				continue
			else:
				continue
			for target in touched:
				if owners.get(str(target)) != event.party:
					raise ProtocolViolation(f"Event {event.sequence}: {event.party} acted on {target} it does not hold")
			if isinstance(event, MeasurementEvent) and event.discard:
				owners.pop(str(event.measurement.target), None)

	def check_causality(self) -> None:
		"""
		Every operation depends only on earlier messages addressed to its party.

		Raises:
			ProtocolViolation: On the first offending dependency
		"""
		seen = {}
		for event in self.events:
			if isinstance(event, MessageEvent):
				seen[event.message.sequence] = event.message
			elif isinstance(event, OperationEvent):
				for sequence in event.depends_on:
					message = seen.get(sequence)
					if message is None:
						raise ProtocolViolation(f"Event {event.sequence} depends on unknown or later message {sequence}")
					if not message.addressed_to(event.party):
						raise ProtocolViolation(f"Event {event.sequence} uses message {sequence} not sent to {event.party}")

	def party_state(self, party: str) -> DensityMatrix:
		"""Reduced state of the subsystems a party holds at the end."""
		if self.final_state is None:
			raise ProtocolViolation("An impossible branch has no final state")
		held = [label for label in self.final_state.labels if self.owners.get(label) == party]
		if not held:
			raise ProtocolViolation(f"{party} holds no subsystems at the end")
		return TensorService.partial_trace(self.final_state, held)

	def to_dict(self, verbose: bool = False) -> dict:
		data = {
			"outcomes": list(self.outcomes),
			"probability": float(self.probability),
			"possible": self.possible,
			"notes": {k: v for k, v in self.notes.items() if _is_plain(v)},
		}
		if verbose:
			data["events"] = [e.to_dict() for e in self.events]
		return data


def _is_plain(value) -> bool:
	if isinstance(value, (bool, int, float, str)) or value is None:
		return True
	if isinstance(value, (list, tuple)):
		return all(_is_plain(v) for v in value)
	if isinstance(value, dict):
		return all(isinstance(k, str) and _is_plain(v) for k, v in value.items())
	return False


@dataclass(eq=False)
class ProtocolTranscript(VerdictLog):
	"""
	Result of running one protocol: every branch (enumerate) or the single
	sampled history (sample), plus verdicts and aggregate figures.
	"""

	protocol: str
	mode: Mode
	seed: int
	parameters: dict
	parties: tuple[Party, ...]
	branches: list[BranchRecord]
	verdicts: list[Verdict] = field(default_factory=list)
	summary: dict = field(default_factory=dict)
	states: dict[str, DensityMatrix] = field(default_factory=dict)

	@property
	def possible_branches(self) -> list[BranchRecord]:
		return [b for b in self.branches if b.possible]

	@property
	def total_probability(self) -> float:
		return float(sum(b.probability for b in self.branches))

	@property
	def final_state(self) -> StateVector:
		"""Final state of the first possible branch."""
		return self.possible_branches[0].final_state

	@property
	def final_notes(self) -> dict:
		"""Notes of the first possible branch (the only one in sample mode)."""
		return self.possible_branches[0].notes

	def check_contracts(self) -> None:
		"""Locality and causality on every branch."""
		for branch in self.branches:
			branch.check_locality()
			branch.check_causality()

	def to_dict(self, verbose: bool = False) -> dict:
		data = {
			"protocol": self.protocol,
			"mode": self.mode.value,
			"seed": self.seed,
			"parameters": self.parameters,
			"parties": [{"name": p.name, "role": p.role.value, "subsystems": list(p.subsystems)} for p in self.parties],
			"branches": [b.to_dict(verbose) for b in self.branches],
			"summary": self.summary,
			"verdicts": [v.to_dict() for v in self.verdicts],
		}
		if verbose and self.states:
			data["states"] = {
				name: {"labels": list(rho.labels), "dims": list(rho.dims), "mat": rho.mat}
				for name, rho in self.states.items()
			}
		return data
