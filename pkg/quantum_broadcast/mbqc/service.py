"""
Distributed Brickwork Runner

Bob holds a brickwork block and only ever measures in X; Alice holds one
ancilla per measured vertex, coupled to it by CZ, and teleports the adaptive
rotation e^{i theta Z} by measuring it. Outcomes are threaded through an
OutcomeRecord, the output frame follows the closed byproduct forms and each
branch is checked against the logical unitary applied directly.

Columns are measured in the order (1, 6), (2, 7), (3, 8), (4, 9). By default
the register is grown lazily: a vertex is prepared (and entangled with its
present neighbours) only when a neighbour is about to be measured.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import cz, rotated_x_basis, x_basis
from quantum_broadcast.library.graphs import BrickworkLayout, brickwork_block
from quantum_broadcast.library.states import plus_state
from quantum_broadcast.protocols.graphs import OutcomeRecord
from quantum_broadcast.protocols.session import ProtocolSession, run_protocol
from quantum_broadcast.protocols.transcript import MeasurementEvent, Mode, Party, PartyRole, ProtocolTranscript, VerdictLog
from quantum_broadcast.protocols.verification import conclude, report_failures, state_fidelity
from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.logger import get_logger
from quantum_broadcast.shared.validators import validate_positive_int
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import LocalOperator, StateVector

from .brickwork import (
	INPUT_LABELS,
	OUTPUT_LABELS,
	AngleSchedule,
	BrickworkState,
	LogicalResult,
	PauliFrame,
	ProgramBlock,
	ancilla_label,
	block_byproducts,
	bob_label,
	flag_values,
	logical_input,
	measured_vertices,
)

logger = get_logger("mbqc")

ALICE = "Alice"
BOB = "Bob"


def teleport_step(session: ProtocolSession, vertex: int, theta: float, sampled: bool = True) -> int:
	"""
	Alice measures the ancilla of ``vertex`` in {e^{-i theta X}|s>}.

	The vertex picks up Z^s e^{i theta Z}. The outcome is drawn from Alice's
	stream unless ``sampled`` is off, in which case it is enumerated.

	Raises:
		ProtocolViolation: If the ancilla was already measured
	"""
	ancilla = ancilla_label(vertex)
	return session.measure(ALICE, rotated_x_basis(theta).on(ancilla), discard=True, label=ancilla, sampled=sampled)


def x_measure_step(session: ProtocolSession, vertex: int) -> int:
	"""
	Bob measures ``vertex`` in X, moving the logical qubit one site along.

	Raises:
		ProtocolViolation: If the vertex was already measured
	"""
	label = bob_label(vertex)
	return session.measure(BOB, x_basis().on(label), discard=True, label=label)


def grow_vertex(session: ProtocolSession, layout: BrickworkLayout, vertex: int, present: set) -> None:
	"""Alice prepares ``vertex`` (and its coupled ancilla) and hands it to Bob, who entangles it."""
	label = bob_label(vertex)
	fresh = [label]
	if vertex in measured_vertices(layout):
		fresh.append(ancilla_label(vertex))
	session.attach(ALICE, plus_state(len(fresh), fresh))
	if len(fresh) == 2:
		session.operate(ALICE, cz().on(fresh[1], label), label="couple")
	session.transfer(ALICE, label, BOB)
	for u in layout.graph.neighbors(vertex):
		if u in present:
			session.operate(BOB, cz().on(bob_label(u), label), label="entangle")
	present.add(vertex)


def logical_target(schedule_unitary: np.ndarray, psi: StateVector, frame: PauliFrame) -> StateVector:
	"""U |psi'> on the output wires, with |psi'> the frame-free input."""
	clean = frame.strip(TensorService.reorder(psi, INPUT_LABELS), INPUT_LABELS)
	moved = TensorService.apply(clean, LocalOperator(schedule_unitary, INPUT_LABELS, "U"))
	return moved.relabel(dict(zip(INPUT_LABELS, OUTPUT_LABELS)))


def receiver_non_x_measurements(transcript: ProtocolTranscript) -> int:
	count = 0
	for branch in transcript.branches:
		for event in branch.events:
			if isinstance(event, MeasurementEvent) and event.party == BOB and event.measurement.name != "X":
				count += 1
	return count


def run_block(
	schedule: AngleSchedule,
	psi,
	frame: PauliFrame | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	lazy: bool = True,
	name: str = "mbqc-block",
) -> ProtocolTranscript:
	"""
	Run one brickwork block.

	Args:
		schedule: Adaptive angles and the logical unitary they realize
		psi: Two-qubit input on wires (1, 6), already carrying ``frame``
		frame: Incoming Pauli frame (x1, z1, x6, z6)
		mode: "enumerate" visits all 2^8 receiver outcome strings; Alice's
			teleport outcomes are always drawn from her stream
		lazy: Grow the register vertex by vertex instead of preparing the
			whole resource first

	Returns:
		ProtocolTranscript: Branch notes carry ``result`` (LogicalResult),
			``byproducts`` and ``outcomes``; verdicts ``stripped_fidelity``,
			``receiver_x_only`` and, when not lazy, ``resource_fidelity``

	Raises:
		ProtocolViolation: If an angle reads outcomes of its own or a later column
	"""
	layout = brickwork_block()
	frame = frame or PauliFrame()
	schedule.check_causality(layout.columns)
	block = BrickworkState(logical_input(psi), layout)
	measured = measured_vertices(layout)

	if lazy:
		prepared = [ancilla_label(v) for v in layout.inputs]
	else:
		prepared = [bob_label(v) for v in layout.graph.vertices if v not in layout.inputs]
		prepared += list(block.ancilla_labels())
	initial = TensorService.tensor(block.psi, plus_state(len(prepared), prepared))
	parties = [Party(ALICE, PartyRole.SENDER, initial.labels), Party(BOB, PartyRole.RECEIVER)]

	def body(session: ProtocolSession) -> dict:
		if lazy:
			for v in layout.inputs:
				session.operate(ALICE, cz().on(ancilla_label(v), bob_label(v)), label="couple")
				session.transfer(ALICE, bob_label(v), BOB)
			present = set(layout.inputs)
		else:
			for u, v in layout.graph.edges:
				session.operate(ALICE, cz().on(bob_label(u), bob_label(v)), label="entangle")
			for v in measured:
				session.operate(ALICE, cz().on(ancilla_label(v), bob_label(v)), label="couple")
			for label in block.bob_labels():
				session.transfer(ALICE, label, BOB)
			session.checkpoint("resource")
			present = set(layout.graph.vertices)

		record = OutcomeRecord()
		angles = {}
		for column in layout.columns:
			for v in column:
				for u in layout.graph.neighbors(v):
					if u not in present:
						grow_vertex(session, layout, u, present)
			values = flag_values(record, frame)
			for v in column:
				angles[v] = schedule.angle(v, values)
				record.s[v] = teleport_step(session, v, angles[v])
			outcomes = [x_measure_step(session, v) for v in column]
			for v, t in zip(column, outcomes):
				record.add_parity(v, t)
			session.send(BOB, ALICE, outcomes, tag="x-outcomes")

		output = block_byproducts(record, frame)
		record.byproducts = {
			layout.outputs[0]: (output.x1, output.z1),
			layout.outputs[1]: (output.x2, output.z2),
		}
		result = LogicalResult(session.state, output, record, angles)
		return {"result": result, "byproducts": output.to_list(), "outcomes": record.to_dict()}

	transcript = run_protocol(
		name,
		initial,
		parties,
		body,
		mode,
		seed,
		{"schedule": schedule.name, "frame": frame.to_list(), "lazy": lazy},
	)
	tol = get_settings().chained_tol
	if not lazy:
		resource = block.resource()
		transcript.add_verdict(
			"resource_fidelity",
			min(state_fidelity(b.checkpoints["resource"], resource) for b in transcript.possible_branches),
			1.0,
			tol,
			kind="min",
		)
	transcript.add_verdict("receiver_x_only", receiver_non_x_measurements(transcript), 0.0, 0.0, kind="max")
	target = logical_target(schedule.target, block.psi, frame)
	fidelities = [state_fidelity(r.stripped(), target) for r in block_results(transcript)]
	transcript.summary["schedule"] = schedule.name
	return conclude(transcript, min(fidelities) if fidelities else float("nan"), name="stripped_fidelity")


def block_results(transcript: ProtocolTranscript) -> list[LogicalResult]:
	"""LogicalResult of every possible branch."""
	return [b.notes["result"] for b in transcript.possible_branches]


def run_cnot_block(
	psi,
	frame: PauliFrame | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	lazy: bool = True,
) -> ProtocolTranscript:
	"""CX (control wire 1) on one block."""
	return run_block(AngleSchedule.cnot(), psi, frame, mode, seed, lazy, name="mbqc-cnot")


def run_rotation_block(
	psi,
	first: Sequence[float] = (0.0, 0.0, 0.0),
	second: Sequence[float] = (0.0, 0.0, 0.0),
	frame: PauliFrame | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	lazy: bool = True,
) -> ProtocolTranscript:
	"""R(first) on wire 1 and R(second) on wire 2, R(a, b, c) = e^{i c Z} e^{i b X} e^{i a Z}."""
	return run_block(AngleSchedule.rotation(first, second), psi, frame, mode, seed, lazy, name="mbqc-rotation")


@dataclass(eq=False)
class ProgramResult(VerdictLog):
	"""Final-block transcripts of every sampled history of a program."""

	blocks: list[ProgramBlock]
	transcripts: list[ProtocolTranscript]
	verdicts: list = field(default_factory=list)
	summary: dict = field(default_factory=dict)

	@property
	def results(self) -> list[LogicalResult]:
		return [r for t in self.transcripts for r in block_results(t)]

	def to_dict(self, verbose: bool = False) -> dict:
		data = {
			"blocks": [b.to_dict() for b in self.blocks],
			"summary": self.summary,
			"verdicts": [v.to_dict() for v in self.verdicts],
		}
		if verbose:
			data["histories"] = [r.to_dict() for r in self.results]
		return data


def _block_seed(seed: int, history: int, block: int) -> int:
	return int(np.random.SeedSequence([seed, history, block]).generate_state(1)[0])


def program_unitary(blocks: Iterable[ProgramBlock]) -> np.ndarray:
	"""Product of the block unitaries, first block rightmost."""
	total = np.eye(4, dtype=complex)
	for block in blocks:
		total = block.schedule().target @ total
	return total


def run_program(
	blocks: Sequence,
	psi,
	frame: PauliFrame | None = None,
	samples: int = 4,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProgramResult:
	"""
	Chain blocks on two logical wires.

	Each block's output on wires (5, 10) becomes the next block's input on
	(1, 6), and its output frame the next incoming frame. All blocks but
	the last run one sampled history; the last one runs in ``mode``. The
	whole chain is repeated for ``samples`` histories.

	Args:
		blocks: ProgramBlock objects, kind strings or mappings
		psi: Two-qubit input carrying ``frame``
		samples: Number of sampled histories of the leading blocks

	Returns:
		ProgramResult: verdicts ``stripped_fidelity`` and ``block_failures``

	Raises:
		ValidationError: If the block sequence is empty or malformed
	"""
	if isinstance(blocks, (str, ProgramBlock)) or not blocks:
		raise ValidationError("A program needs a non-empty list of blocks")
	program = [ProgramBlock.parse(item) for item in blocks]
	samples = validate_positive_int(samples, "samples")
	seed = get_settings().default_seed if seed is None else int(seed)
	frame = frame or PauliFrame()
	start = logical_input(psi)
	target = logical_target(program_unitary(program), start, frame)

	transcripts = []
	failures = 0
	for history in range(samples):
		state, current = start, frame
		for index, block in enumerate(program):
			last = index == len(program) - 1
			transcript = run_block(
				block.schedule(),
				state,
				current,
				mode if last else Mode.SAMPLE,
				_block_seed(seed, history, index),
				name=f"mbqc-{block.kind}",
			)
			if not transcript.passed:
				failures += 1
				logger.warning("Block %d (%s) failed in history %d", index, block.kind, history)
			if last:
				transcripts.append(transcript)
			else:
				result = transcript.final_notes["result"]
				state, current = result.as_input(), result.byproducts

	result = ProgramResult(program, transcripts)
	fidelities = [state_fidelity(r.stripped(), target) for r in result.results]
	tol = get_settings().chained_tol
	result.add_verdict("stripped_fidelity", min(fidelities), 1.0, tol, kind="min")
	result.add_verdict("block_failures", failures, 0.0, 0.0, kind="max")
	result.summary.update(
		{"blocks": len(program), "samples": samples, "histories": len(fidelities), "min_fidelity": min(fidelities)}
	)
	report_failures("mbqc-program", result)
	return result
