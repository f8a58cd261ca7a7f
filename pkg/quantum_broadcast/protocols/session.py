"""
Protocol Session

Runs a protocol body as named parties acting on a shared register.

A body is a function ``body(session) -> dict`` that calls ``operate``,
``measure``, ``send``, ``transfer`` and ``attach`` on the session. In
enumerate mode the body is executed once per measurement history: an
odometer walks every outcome, and on each re-execution the shared prefix
is not recomputed; the register is restored from the snapshot taken just
before the first measurement whose outcome changed. In sample mode the body
runs once with per-party seeded outcomes.

Bodies may read the register only through ``checkpoint`` or after their
last measurement.
"""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.shared.exceptions import NotFoundError, ProtocolViolation, ValidationError
from quantum_broadcast.shared.logger import get_logger
from quantum_broadcast.shared.rng import party_rng
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import LocalOperator, Measurement, StateVector

from .transcript import (
	BROADCAST,
	AttachEvent,
	BranchRecord,
	ClassicalMessage,
	MeasurementEvent,
	MessageEvent,
	Mode,
	OperationEvent,
	Party,
	ProtocolTranscript,
	TransferEvent,
)

logger = get_logger("protocols")


@dataclass
class _PathEntry:
	outcome: int
	arity: int
	probability: float
	sampled: bool


class _ImpossibleBranch(Exception):
	pass


class ProtocolSession:
	"""
	One execution of a protocol body.

	Created by ``run_protocol``; bodies never construct it directly.
	"""

	def __init__(
		self,
		initial_state: StateVector,
		parties: Sequence[Party],
		mode: Mode,
		rngs: dict,
		seed: int,
		path: list[_PathEntry],
		snapshots: list[StateVector],
		replay_point: int | None,
		previous_checkpoints: dict,
	):
		self.mode = mode
		self.seed = seed
		self.parties = {p.name: p for p in parties}
		self._rngs = rngs
		self._path = path
		self._snapshots = snapshots
		self._replay_point = replay_point
		self._previous_checkpoints = previous_checkpoints
		self._initial_state = initial_state
		self._state = initial_state
		self._live = replay_point is None
		self._owners = self._initial_owners(initial_state, parties)
		self._initial_owner_map = dict(self._owners)
		self._events = []
		self._sequence = 0
		self._measure_index = 0
		self._probability = 1.0
		self._checkpoints = {}
		self.notes = {}

	@staticmethod
	def _initial_owners(state: StateVector, parties: Sequence[Party]) -> dict[str, str]:
		owners = {}
		for party in parties:
			for label in party.subsystems:
				if label in owners:
					raise ProtocolViolation(f"Subsystem {label} is held by both {owners[label]} and {party.name}")
				owners[label] = party.name
		for label in state.labels:
			if label not in owners:
				raise ProtocolViolation(f"Subsystem {label} is not held by any party")
		return owners

	def _next_sequence(self) -> int:
		self._sequence += 1
		return self._sequence

	def _check_party(self, party: str) -> None:
		if party not in self.parties:
			raise NotFoundError(f"Unknown party {party!r}")

	def _check_holds(self, party: str, targets: Iterable) -> None:
		self._check_party(party)
		for target in targets:
			if target is None:
				raise ValidationError("Operation or measurement is not bound to a subsystem")
			if self._owners.get(str(target)) != party:
				raise ProtocolViolation(f"{party} cannot act on {target}: held by {self._owners.get(str(target))}")

	@property
	def state(self) -> StateVector:
		"""
		Current register.

		Raises:
			ProtocolViolation: While a shared prefix is being skipped
		"""
		if not self._live:
			raise ProtocolViolation("Register is not materialized while replaying a shared prefix")
		return self._state

	def holder(self, subsystem: str) -> str:
		return self._owners[subsystem]

	def held_by(self, party: str) -> list[str]:
		return [label for label, owner in self._owners.items() if owner == party]

	def operate(self, party: str, op: LocalOperator, depends_on: Iterable = (), label: str = "") -> None:
		"""
		Apply a local operator on behalf of ``party``.

		Args:
			party: Acting party; must hold every target
			op: Bound operator
			depends_on: Messages (or their sequence numbers) this operation is a function of
			label: Free-text tag for the transcript

		Raises:
			ProtocolViolation: On a locality or causality breach
		"""
		self._check_holds(party, op.targets)
		dependencies = tuple(m.sequence if isinstance(m, ClassicalMessage) else int(m) for m in depends_on)
		known = {e.message.sequence: e.message for e in self._events if isinstance(e, MessageEvent)}
		for sequence in dependencies:
			if sequence not in known:
				raise ProtocolViolation(f"{party} depends on message {sequence} which has not been sent")
			if not known[sequence].addressed_to(party):
				raise ProtocolViolation(f"{party} depends on message {sequence} addressed to others")
		event = OperationEvent(self._next_sequence(), party, op, dependencies, label)
		self._events.append(event)
		if self._live:
			self._state = TensorService.apply(self._state, op)
		logger.debug("[%d] %s applies %s on %s", event.sequence, party, op.name, list(op.targets))

	def measure(
		self,
		party: str,
		measurement: Measurement,
		discard: bool = False,
		label: str = "",
		sampled: bool = False,
	) -> int:
		"""
		Measure a held subsystem and return the outcome.

		In enumerate mode every outcome is visited across executions, unless
		``sampled`` is set, in which case the outcome is drawn from the
		party's stream and the branch weight does not include it.
		"""
		self._check_holds(party, [measurement.target])
		index = self._measure_index
		self._measure_index += 1

		if self._replay_point is not None and index < self._replay_point:
			entry = self._path[index]
			outcome, probability = entry.outcome, entry.probability
		elif self._replay_point is not None and index == self._replay_point:
			self._state = self._snapshots[index]
			self._live = True
			entry = self._path[index]
			outcome = entry.outcome
			probability = self._collapse(measurement, outcome, discard)
			entry.probability = probability
		else:
			del self._snapshots[index:]
			self._snapshots.append(self._state)
			sample = self.mode == Mode.SAMPLE or sampled
			if sample:
				rng = self._rng(party)
				branch, _state = TensorService.measure(self._state, measurement, rng, discard)
				outcome, probability = branch.outcome, branch.probability
				self._state = branch.state
				arity = 1
			else:
				outcome = 0
				arity = measurement.outcomes
				probability = self._collapse(measurement, outcome, discard)
			del self._path[index:]
			self._path.append(_PathEntry(outcome, arity, probability, sample))
			entry = self._path[index]

		if not (entry.sampled and self.mode == Mode.ENUMERATE):
			self._probability *= probability
		event = MeasurementEvent(
			self._next_sequence(), party, measurement, outcome, probability, discard, entry.sampled, label
		)
		self._events.append(event)
		if discard:
			self._owners.pop(str(measurement.target), None)
		logger.debug(
			"[%d] %s measures %s in %s -> %d (p=%.6g)",
			event.sequence,
			party,
			measurement.target,
			measurement.name,
			outcome,
			probability,
		)
		if probability < get_settings().zero_probability:
			raise _ImpossibleBranch()
		return outcome

	def _collapse(self, measurement: Measurement, outcome: int, discard: bool) -> float:
		branch = TensorService.collapse(self._state, measurement, outcome, discard)
		if branch.possible:
			self._state = branch.state
		return branch.probability

	def _rng(self, party: str) -> np.random.Generator:
		if party not in self._rngs:
			self._rngs[party] = party_rng(self.seed, party)
		return self._rngs[party]

	def send(self, party: str, recipients, payload: Iterable[int] = (), tag: str = "", abort: bool = False) -> ClassicalMessage:
		"""Send a classical message; recipients is a party name, a list of names or "*"."""
		self._check_party(party)
		if isinstance(recipients, str):
			recipients = (recipients,)
		recipients = tuple(recipients)
		for name in recipients:
			if name != BROADCAST:
				self._check_party(name)
		message = ClassicalMessage(self._next_sequence(), party, recipients, tuple(int(p) for p in payload), abort, tag)
		self._events.append(MessageEvent(message.sequence, message))
		logger.debug("[%d] %s -> %s: %s %s", message.sequence, party, list(recipients), tag, list(message.payload))
		return message

	def inbox(self, party: str) -> list[ClassicalMessage]:
		return [e.message for e in self._events if isinstance(e, MessageEvent) and e.message.addressed_to(party)]

	def transfer(self, party: str, subsystem: str, destination: str) -> None:
		"""Hand a held subsystem to another party."""
		self._check_holds(party, [subsystem])
		self._check_party(destination)
		event = TransferEvent(self._next_sequence(), subsystem, party, destination)
		self._events.append(event)
		self._owners[subsystem] = destination
		logger.debug("[%d] %s hands %s to %s", event.sequence, party, subsystem, destination)

	def attach(self, party: str, state: StateVector) -> None:
		"""Append freshly prepared subsystems held by ``party``."""
		self._check_party(party)
		for label in state.labels:
			if label in self._owners:
				raise ProtocolViolation(f"Subsystem {label} already exists")
			self._owners[label] = party
		event = AttachEvent(self._next_sequence(), party, state)
		self._events.append(event)
		if self._live:
			self._state = TensorService.tensor(self._state, state)
		logger.debug("[%d] %s prepares %s", event.sequence, party, list(state.labels))

	def checkpoint(self, name: str) -> StateVector:
		"""Record (and return) the register at this point under ``name``."""
		if self._live:
			self._checkpoints[name] = self._state
		else:
			self._checkpoints[name] = self._previous_checkpoints[name]
		return self._checkpoints[name]

	def note(self, key: str, value) -> None:
		self.notes[key] = value

	def _record(self, possible: bool, notes: dict | None) -> BranchRecord:
		merged = dict(self.notes)
		merged.update(notes or {})
		return BranchRecord(
			outcomes=tuple(entry.outcome for entry in self._path[: self._measure_index]),
			probability=self._probability,
			possible=possible,
			events=tuple(self._events),
			initial_state=self._initial_state,
			initial_owners=self._initial_owner_map,
			final_state=self._state if possible else None,
			owners=dict(self._owners),
			checkpoints=dict(self._checkpoints),
			notes=merged,
		)


def run_protocol(
	name: str,
	initial_state: StateVector,
	parties: Sequence[Party],
	body: Callable[[ProtocolSession], dict | None],
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	parameters: dict | None = None,
) -> ProtocolTranscript:
	"""
	Execute ``body`` over every measurement history (enumerate) or once (sample).

	Args:
		name: Protocol name recorded in the transcript
		initial_state: Register at the start, every subsystem held by a party
		parties: Participants
		body: Protocol body
		mode: "enumerate" or "sample"
		seed: Master seed for party streams (default from settings)
		parameters: Echoed in the transcript

	Returns:
		ProtocolTranscript: One BranchRecord per history
	"""
	mode = Mode(mode)
	seed = get_settings().default_seed if seed is None else int(seed)
	rngs = {}
	path: list[_PathEntry] = []
	snapshots: list[StateVector] = []
	replay_point = None
	checkpoints = {}
	branches = []

	while True:
		session = ProtocolSession(initial_state, parties, mode, rngs, seed, path, snapshots, replay_point, checkpoints)
		try:
			notes = body(session)
			if not session._live:
				raise ProtocolViolation(f"Protocol {name} finished before reaching its replay point")
			branches.append(session._record(True, notes))
		except _ImpossibleBranch:
			branches.append(session._record(False, None))
		checkpoints = session._checkpoints
		del path[session._measure_index :]

		# odometer: advance the deepest entry that still has outcomes left
		while path and path[-1].outcome + 1 >= path[-1].arity:
			path.pop()
		if not path:
			break
		path[-1].outcome += 1
		replay_point = len(path) - 1

	transcript = ProtocolTranscript(name, mode, seed, dict(parameters or {}), tuple(parties), branches)
	logger.debug("%s: %d branches (%d possible)", name, len(branches), len(transcript.possible_branches))
	return transcript
