"""
Template States

Dicke states, the broadcast templates over M sender qudits and N receiver
qubits, graph states and the trine family.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.validators import validate_amplitudes, validate_dimension, validate_positive_int
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import StateVector

from .graphs import DiagonalPhaseGate, Graph
from .pauli import PauliString, check_stabilizer_generators


def sender_labels(count: int) -> tuple[str, ...]:
	return tuple(f"a{j}" for j in range(1, count + 1))


def receiver_labels(count: int, prefix: str = "b") -> tuple[str, ...]:
	return tuple(f"{prefix}{l}" for l in range(1, count + 1))


def _zeros(bits: int, width: int) -> int:
	return width - bin(bits).count("1")


def dicke_state(n: int, k: int, labels=None) -> StateVector:
	"""
	Symmetric N-qubit state with k qubits in |0> and N - k in |1>.

	Raises:
		ValidationError: If k is outside [0, N]
	"""
	n = validate_positive_int(n, "N")
	if not 0 <= int(k) <= n:
		raise ValidationError(f"Dicke label k={k} out of range [0, {n}]")
	amps = np.array([1.0 if _zeros(x, n) == k else 0.0 for x in range(2**n)], dtype=complex)
	return TensorService.make_state([2] * n, amps, labels)


@dataclass(frozen=True)
class BroadcastSpec:
	"""
	Parameters of a broadcast template.

	Attributes:
		senders: Number of sender qudits M (>= 0)
		receivers: Number of receiver qubits N (>= 1)
		alpha, beta: Amplitudes with |alpha|^2 + |beta|^2 = 1
		entangler: Optional diagonal phase gate on the receiver block
	"""

	senders: int
	receivers: int
	alpha: complex = 1 / math.sqrt(2)
	beta: complex = 1 / math.sqrt(2)
	entangler: DiagonalPhaseGate | None = field(default=None)

	def __post_init__(self):
		object.__setattr__(self, "senders", validate_positive_int(self.senders, "M", minimum=0))
		object.__setattr__(self, "receivers", validate_positive_int(self.receivers, "N"))
		alpha, beta = validate_amplitudes(self.alpha, self.beta)
		object.__setattr__(self, "alpha", alpha)
		object.__setattr__(self, "beta", beta)
		if self.entangler is not None and self.entangler.arity != self.receivers:
			raise ValidationError(
				f"Entangler acts on {self.entangler.arity} qubits but there are {self.receivers} receivers"
			)

	@property
	def sender_dim(self) -> int:
		return self.receivers + 1

	@property
	def sender_labels(self) -> tuple[str, ...]:
		return sender_labels(self.senders)

	@property
	def receiver_labels(self) -> tuple[str, ...]:
		return receiver_labels(self.receivers)


def make_broadcast_state(spec: BroadcastSpec, senders=None, receivers=None) -> StateVector:
	"""
	Broadcast template over M sender qudits and N receiver qubits.

	Sum over k of alpha^k beta^(N-k) sqrt(C(N,k)) |k>^M (entangler) |k; N-k>,
	where |k; N-k> is the Dicke state with k zeros. Senders come first.

	Args:
		spec: Template parameters
		senders: Optional sender labels (default a1..aM)
		receivers: Optional receiver labels (default b1..bN)

	Returns:
		StateVector: Normalized template
	"""
	senders = tuple(senders) if senders is not None else spec.sender_labels
	receivers = tuple(receivers) if receivers is not None else spec.receiver_labels
	if len(senders) != spec.senders or len(receivers) != spec.receivers:
		raise ValidationError("Label counts must match the template's sender and receiver counts")

	n, dim = spec.receivers, spec.sender_dim
	dims = [dim] * spec.senders + [2] * n
	TensorService._check_size(dims)
	phases = spec.entangler.diagonal() if spec.entangler is not None else np.ones(2**n)
	amps = np.zeros([dim] * spec.senders + [2**n], dtype=complex)
	for x in range(2**n):
		k = _zeros(x, n)
		amps[(k,) * spec.senders + (x,)] = spec.alpha**k * spec.beta ** (n - k) * phases[x]
	return TensorService.make_state(dims, amps.reshape(-1), senders + receivers)


def bell_pair(dim: int, labels=("x", "y")) -> StateVector:
	"""Maximally entangled qudit pair (1/sqrt(D)) sum_l |l>|l>."""
	dim = validate_dimension(dim)
	return TensorService.make_state([dim, dim], np.eye(dim).reshape(-1), labels)


def phase_encoding_state(dim: int, theta: float, label: str = "d") -> StateVector:
	"""(1/sqrt(K)) sum_k e^{i k theta}|k>."""
	dim = validate_dimension(dim, "K")
	return TensorService.make_state([dim], np.exp(1j * theta * np.arange(dim)), [label])


def plus_state(count: int, labels=None) -> StateVector:
	return TensorService.make_state([2] * count, np.ones(2**count), labels)


def graph_state(graph: Graph, labels=None) -> StateVector:
	"""
	Graph state: product of CZ over the edges applied to |+>^|V|.

	Subsystems follow the graph's vertex order; labels default to str(v).
	"""
	labels = tuple(labels) if labels is not None else tuple(str(v) for v in graph.vertices)
	diagonal = DiagonalPhaseGate.from_graph(graph).diagonal()
	n = len(graph.vertices)
	return TensorService.make_state([2] * n, diagonal, labels)


def ghz_state(count: int, labels=None) -> StateVector:
	"""(|0...0> + |1...1>)/sqrt(2)."""
	count = validate_positive_int(count, "GHZ size", minimum=2)
	amps = np.zeros(2**count, dtype=complex)
	amps[0] = amps[-1] = 1
	return TensorService.make_state([2] * count, amps, labels)


def qubit_state(alpha: complex, beta: complex, label: str = "q") -> StateVector:
	return TensorService.make_state([2], [alpha, beta], [label])


def product_state(vector, count: int, labels=None) -> StateVector:
	"""count copies of one qubit vector."""
	return TensorService.make_state([2] * count, [(i, vector) for i in range(count)], labels)


@dataclass(frozen=True, eq=False)
class TrineSet:
	"""Trine states (rows of ``trine``) and anti-trine states (rows of ``anti_trine``)."""

	trine: np.ndarray
	anti_trine: np.ndarray

	def angle(self, label: int) -> float:
		"""Broadcast angle theta with alpha = beta = 1/sqrt(2) that yields trine ``label``."""
		return 2 * np.pi * label / 3


def trine_states() -> TrineSet:
	"""
	Trine and anti-trine qubit states.

	psi_j = (w^j |0> + w^-j |1>)/sqrt(2) and anti_j = (w^j |0> - w^-j |1>)/sqrt(2)
	with w = e^{2 pi i / 3}.
	"""
	w = np.exp(2j * np.pi / 3)
	trine = np.array([[w**j, w ** (-j)] for j in range(3)]) / np.sqrt(2)
	anti = np.array([[w**j, -(w ** (-j))] for j in range(3)]) / np.sqrt(2)
	trine.flags.writeable = False
	anti.flags.writeable = False
	return TrineSet(trine, anti)


def stabilizer_state(generators: list[PauliString], labels=None) -> StateVector:
	"""
	Joint +1 eigenstate of a complete stabilizer generating set.

	Raises:
		ValidationError: If the set is invalid or has fewer than n generators
	"""
	check_stabilizer_generators(generators)
	n = generators[0].num_qubits
	if len(generators) != n:
		raise ValidationError(f"{len(generators)} generators do not fix a unique state on {n} qubits")
	projector = np.eye(2**n, dtype=complex)
	for generator in generators:
		projector = projector @ (np.eye(2**n) + generator.matrix()) / 2
	column = int(np.argmax(np.linalg.norm(projector, axis=0)))
	return TensorService.make_state([2] * n, projector[:, column], labels)
