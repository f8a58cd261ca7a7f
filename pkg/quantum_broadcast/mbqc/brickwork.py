"""
Brickwork Block Types

The resource state of one brickwork block, the adaptive angle schedules of
the CNOT and rotation patterns, Pauli frames on the two logical wires and
the per-branch logical result.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import CNOT, cz, pauli, x_rotation, z_rotation
from quantum_broadcast.library.graphs import BrickworkLayout, brickwork_block
from quantum_broadcast.protocols.graphs import OutcomeRecord
from quantum_broadcast.shared.exceptions import NormalizationError, ProtocolViolation, ValidationError
from quantum_broadcast.shared.validators import validate_angles
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import StateVector

INPUT_LABELS = ("b1", "b6")
OUTPUT_LABELS = ("b5", "b10")


def bob_label(vertex: int) -> str:
	return f"b{vertex}"


def ancilla_label(vertex: int) -> str:
	return f"a{vertex}"


def measured_vertices(layout: BrickworkLayout) -> tuple[int, ...]:
	"""Vertices that receive a teleported rotation and an X measurement."""
	return tuple(v for column in layout.columns for v in column)


def euler_rotation(alpha: float, beta: float, gamma: float) -> np.ndarray:
	"""R(alpha, beta, gamma) = e^{i gamma Z} e^{i beta X} e^{i alpha Z}."""
	return z_rotation(gamma).mat @ x_rotation(beta).mat @ z_rotation(alpha).mat


def logical_input(psi, labels: Sequence[str] = INPUT_LABELS) -> StateVector:
	"""
	Two-qubit logical input on the given wire labels.

	Raises:
		NormalizationError: If the amplitudes are not normalized
	"""
	if isinstance(psi, StateVector):
		if psi.dims != (2, 2):
			raise ValidationError(f"Logical input must be a two-qubit state, got dims {list(psi.dims)}")
		amps = psi.amps
	else:
		amps = np.asarray(psi, dtype=complex).reshape(-1)
	norm = float(np.linalg.norm(amps))
	if abs(norm - 1) > get_settings().algebraic_tol:
		raise NormalizationError(f"Logical input has norm {norm:.12g}")
	return TensorService.make_state([2, 2], amps, tuple(labels))


@dataclass(frozen=True)
class PauliFrame:
	"""
	Pending Pauli X^x Z^z on each logical wire.

	A state carrying the frame is (X^x1 Z^z1 (x) X^x2 Z^z2) |psi'>, with
	|psi'> the frame-free state.
	"""

	x1: int = 0
	z1: int = 0
	x2: int = 0
	z2: int = 0

	def __post_init__(self):
		for name in ("x1", "z1", "x2", "z2"):
			value = getattr(self, name)
			if int(value) not in (0, 1):
				raise ValidationError(f"Pauli frame exponent {name} must be 0 or 1, got {value}")
			object.__setattr__(self, name, int(value))

	@classmethod
	def from_list(cls, values: Sequence[int]) -> "PauliFrame":
		if len(values) != 4:
			raise ValidationError("A Pauli frame has four exponents (x1, z1, x2, z2)")
		return cls(*values)

	def to_list(self) -> list[int]:
		return [self.x1, self.z1, self.x2, self.z2]

	def apply(self, state: StateVector, labels: Sequence[str]) -> StateVector:
		"""Put the frame on ``state``: Z first, then X, per wire."""
		for (x, z), label in zip(((self.x1, self.z1), (self.x2, self.z2)), labels):
			if z:
				state = TensorService.apply(state, pauli("Z").on(label))
			if x:
				state = TensorService.apply(state, pauli("X").on(label))
		return state

	def strip(self, state: StateVector, labels: Sequence[str]) -> StateVector:
		"""Remove the frame (up to a global sign)."""
		for (x, z), label in zip(((self.x1, self.z1), (self.x2, self.z2)), labels):
			if x:
				state = TensorService.apply(state, pauli("X").on(label))
			if z:
				state = TensorService.apply(state, pauli("Z").on(label))
		return state


@dataclass(frozen=True)
class ScheduledAngle:
	"""
	A measurement angle (-1)^(sum of flags) * base.

	Flags name outcome bits: "w<v>" for a measured vertex, "x1", "z1", "x6"
	and "z6" for the incoming frame.
	"""

	base: float
	flags: tuple[str, ...] = ()

	def resolve(self, values: Mapping[str, int]) -> float:
		try:
			parity = sum(int(values[f]) for f in self.flags) % 2
		except KeyError as exc:
			raise ProtocolViolation(f"Angle depends on outcome {exc.args[0]} which is not available yet")
		return -self.base if parity else self.base

	def vertices(self) -> set[int]:
		return {int(f[1:]) for f in self.flags if f.startswith("w")}


@dataclass(frozen=True, eq=False)
class AngleSchedule:
	"""Adaptive angles for every measured vertex of one block, and the logical unitary they realize."""

	name: str
	angles: dict[int, ScheduledAngle]
	target: np.ndarray

	@classmethod
	def cnot(cls) -> "AngleSchedule":
		"""CX with wire 1 as control."""
		quarter = np.pi / 4
		angles = {v: ScheduledAngle(0.0) for v in (1, 2, 4, 6, 8)}
		angles[9] = ScheduledAngle(-quarter, ("w2", "w6", "w8", "x1", "z6"))
		angles[3] = ScheduledAngle(quarter, ("w2", "x1"))
		angles[7] = ScheduledAngle(quarter, ("w6", "z6"))
		return cls("cnot", angles, CNOT.copy())

	@classmethod
	def rotation(cls, first: Sequence[float], second: Sequence[float]) -> "AngleSchedule":
		"""
		R(alpha, beta, gamma) on wire 1 and R(alpha', beta', gamma') on wire 2.

		Raises:
			ValidationError: If a triple does not hold three finite angles
		"""
		a, b, c = _triple(first, "first")
		a2, b2, c2 = _triple(second, "second")
		angles = {
			1: ScheduledAngle(a, ("x1",)),
			2: ScheduledAngle(b, ("w1", "z1")),
			3: ScheduledAngle(c, ("x1", "w2")),
			4: ScheduledAngle(0.0),
			6: ScheduledAngle(a2, ("x6",)),
			7: ScheduledAngle(b2, ("w6", "z6")),
			8: ScheduledAngle(c2, ("x6", "w7")),
			9: ScheduledAngle(0.0),
		}
		return cls("rotation", angles, np.kron(euler_rotation(a, b, c), euler_rotation(a2, b2, c2)))

	def angle(self, vertex: int, values: Mapping[str, int]) -> float:
		return self.angles[vertex].resolve(values)

	def check_causality(self, columns: Sequence[Sequence[int]]) -> None:
		"""
		Every angle reads only outcomes of earlier columns.

		Raises:
			ProtocolViolation: If an angle depends on its own or a later column
		"""
		earlier: set[int] = set()
		for column in columns:
			for v in column:
				late = self.angles[v].vertices() - earlier
				if late:
					raise ProtocolViolation(f"Angle at vertex {v} reads outcomes of {sorted(late)} too early")
			earlier.update(column)


def _triple(values: Sequence[float], name: str) -> tuple[float, float, float]:
	return validate_angles(values, f"rotation {name}", count=3)


def flag_values(record: OutcomeRecord, frame: PauliFrame) -> dict[str, int]:
	"""Outcome bits visible to the sender: w per measured vertex plus the incoming frame."""
	values = {f"w{v}": record.s.get(v, 0) ^ t for v, t in record.t.items()}
	values.update({"x1": frame.x1, "z1": frame.z1, "x6": frame.x2, "z6": frame.z2})
	return values


def block_byproducts(record: OutcomeRecord, frame: PauliFrame) -> PauliFrame:
	"""
	Output frame on wires (5, 10):

	X^(w2+w4+x1) Z^(w1+w3+w9+z1) (x) X^(w7+w9+x6) Z^(w4+w6+w8+z6).
	"""
	w = record.w
	return PauliFrame(
		(w[2] + w[4] + frame.x1) % 2,
		(w[1] + w[3] + w[9] + frame.z1) % 2,
		(w[7] + w[9] + frame.x2) % 2,
		(w[4] + w[6] + w[8] + frame.z2) % 2,
	)


@dataclass(frozen=True, eq=False)
class BrickworkState:
	"""
	One block's resource: the brickwork graph state on the receiver qubits
	with the logical input on wires 1 and 6, and a |+> sender ancilla
	coupled by CZ to every measured vertex.
	"""

	psi: StateVector
	layout: BrickworkLayout = field(default_factory=brickwork_block)

	def bob_labels(self) -> tuple[str, ...]:
		return tuple(bob_label(v) for v in self.layout.graph.vertices)

	def ancilla_labels(self) -> tuple[str, ...]:
		return tuple(ancilla_label(v) for v in measured_vertices(self.layout))

	def graph_state(self) -> StateVector:
		"""prod CZ over block edges on |psi>_(1,6) (x) |+> elsewhere."""
		rest = [bob_label(v) for v in self.layout.graph.vertices if v not in self.layout.inputs]
		plus = TensorService.make_state([2] * len(rest), [(label, np.ones(2) / np.sqrt(2)) for label in rest], rest)
		state = TensorService.tensor(self.psi, plus)
		for u, v in self.layout.graph.edges:
			state = TensorService.apply(state, cz().on(bob_label(u), bob_label(v)))
		return TensorService.reorder(state, self.bob_labels())

	def resource(self) -> StateVector:
		"""Graph state plus coupled ancillas, ordered receivers first."""
		ancillas = self.ancilla_labels()
		plus = TensorService.make_state(
			[2] * len(ancillas), [(label, np.ones(2) / np.sqrt(2)) for label in ancillas], ancillas
		)
		state = TensorService.tensor(self.graph_state(), plus)
		for v in measured_vertices(self.layout):
			state = TensorService.apply(state, cz().on(ancilla_label(v), bob_label(v)))
		return state


@dataclass
class LogicalResult:
	"""Output of one block history: the two-qubit state on wires (5, 10) and its frame."""

	state: StateVector
	byproducts: PauliFrame
	record: OutcomeRecord
	angles: dict[int, float] = field(default_factory=dict)

	def stripped(self) -> StateVector:
		return self.byproducts.strip(TensorService.reorder(self.state, OUTPUT_LABELS), OUTPUT_LABELS)

	def as_input(self) -> StateVector:
		"""The output relabelled onto wires (1, 6) for the next block."""
		state = TensorService.reorder(self.state, OUTPUT_LABELS)
		return state.relabel(dict(zip(OUTPUT_LABELS, INPUT_LABELS)))

	def to_dict(self) -> dict:
		return {
			"byproducts": self.byproducts.to_list(),
			"record": self.record.to_dict(),
			"angles": {str(v): float(theta) for v, theta in self.angles.items()},
		}


BLOCK_KINDS = ("cnot", "rotation")


@dataclass(frozen=True)
class ProgramBlock:
	"""One block of a program: a CNOT, or a pair of Euler rotations."""

	kind: str
	first: tuple[float, ...] = (0.0, 0.0, 0.0)
	second: tuple[float, ...] = (0.0, 0.0, 0.0)

	def __post_init__(self):
		if self.kind not in BLOCK_KINDS:
			raise ValidationError(f"Unknown block kind {self.kind!r}; expected one of {list(BLOCK_KINDS)}")
		object.__setattr__(self, "first", _triple(self.first, "first"))
		object.__setattr__(self, "second", _triple(self.second, "second"))

	@classmethod
	def parse(cls, item) -> "ProgramBlock":
		"""
		Accept a block, a bare kind string or a mapping with "kind", "first" and "second".

		Raises:
			ValidationError: If the item is malformed
		"""
		if isinstance(item, ProgramBlock):
			return item
		if isinstance(item, str):
			return cls(item)
		if isinstance(item, Mapping):
			unknown = set(item) - {"kind", "first", "second"}
			if unknown:
				raise ValidationError(f"Unknown block fields {sorted(unknown)}")
			return cls(item.get("kind", ""), item.get("first", (0.0, 0.0, 0.0)), item.get("second", (0.0, 0.0, 0.0)))
		raise ValidationError(f"Cannot read a program block from {item!r}")

	def schedule(self) -> AngleSchedule:
		if self.kind == "cnot":
			return AngleSchedule.cnot()
		return AngleSchedule.rotation(self.first, self.second)

	def to_dict(self) -> dict:
		if self.kind == "cnot":
			return {"kind": "cnot"}
		return {"kind": self.kind, "first": list(self.first), "second": list(self.second)}
