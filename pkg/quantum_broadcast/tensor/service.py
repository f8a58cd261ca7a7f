"""
Tensor Service

Dense statevector and density-matrix engine over mixed-radix registers:
state construction, local operators, projective and POVM measurements,
exhaustive branch enumeration, partial traces and fidelities.

Every public operation returns a new value; inputs are never mutated.
"""

import itertools
from collections.abc import Mapping, Sequence

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.shared.exceptions import (
	DimensionError,
	NormalizationError,
	RegisterSizeError,
	ValidationError,
)
from quantum_broadcast.shared.logger import get_logger

from .types import (
	Branch,
	DensityMatrix,
	LocalOperator,
	Measurement,
	MeasurementBasis,
	Povm,
	StateVector,
	SubsystemRef,
	psd_sqrt,
)

logger = get_logger("tensor")


def _contract(tensor: np.ndarray, positions: Sequence[int], mat: np.ndarray, out_dims: Sequence[int]) -> np.ndarray:
	"""
	Apply ``mat`` (shape out x in) to the axes ``positions`` of ``tensor``.

	The output axes replace the input axes in place; an empty ``out_dims``
	removes them.
	"""
	n = tensor.ndim
	rest = [i for i in range(n) if i not in positions]
	moved = np.transpose(tensor, list(positions) + rest)
	rest_shape = moved.shape[len(positions) :]
	flat = moved.reshape(mat.shape[1], -1)
	result = (mat @ flat).reshape(tuple(out_dims) + rest_shape)
	if not out_dims:
		return result
	# undo the transpose: output axes go back to the original positions
	order = list(positions) + rest
	inverse = np.argsort(order)
	return np.transpose(result, inverse)


class TensorService:
	"""Service class for register operations."""

	@classmethod
	def _check_size(cls, dims: Sequence[int]) -> None:
		size = int(np.prod([int(d) for d in dims]))
		cap = get_settings().max_register_size
		if size > cap:
			raise RegisterSizeError(f"Register of {size} amplitudes exceeds the cap of {cap}")

	@classmethod
	def _normalized(cls, dims, amps: np.ndarray, labels) -> StateVector:
		norm = np.linalg.norm(amps)
		if norm < np.sqrt(get_settings().zero_probability):
			raise NormalizationError("Cannot normalize a zero vector")
		if abs(norm - 1) > get_settings().algebraic_tol:
			amps = amps / norm
		return StateVector(tuple(dims), amps, tuple(labels) if labels is not None else None)

	@classmethod
	def make_state(cls, dims: Sequence[int], assignments=None, labels: Sequence[str] | None = None) -> StateVector:
		"""
		Build a normalized state.

		Args:
			dims: Subsystem dimensions
			assignments: Either a full amplitude array of length prod(dims), or
				a mapping / list of (subsystem, local vector) pairs describing a
				product state. Subsystems without an assignment start in |0>.
			labels: Optional subsystem labels (default q0, q1, ...)

		Returns:
			StateVector: Normalized state

		Raises:
			DimensionError: If a vector length does not match its dimension
			NormalizationError: If the vector is zero
			RegisterSizeError: If the register exceeds the configured cap
		"""
		dims = tuple(int(d) for d in dims)
		if any(d < 2 for d in dims) or not dims:
			raise DimensionError(f"Subsystem dimensions must be >= 2, got {list(dims)}")
		cls._check_size(dims)
		size = int(np.prod(dims))

		pairs = None
		if isinstance(assignments, Mapping):
			pairs = list(assignments.items())
		elif isinstance(assignments, (list, tuple)) and assignments and all(
			isinstance(item, tuple) and len(item) == 2 and not np.isscalar(item[1]) for item in assignments
		):
			pairs = list(assignments)

		if assignments is None or pairs is not None:
			probe = StateVector(dims, np.eye(1, size, dtype=complex)[0], labels)
			factors = [np.eye(1, d, dtype=complex)[0] for d in dims]
			for ref, vector in pairs or []:
				index = probe.locate(ref)
				vector = np.asarray(vector, dtype=complex).reshape(-1)
				if vector.size != dims[index]:
					raise DimensionError(
						f"Vector for {probe.labels[index]!r} has length {vector.size}, expected {dims[index]}"
					)
				factors[index] = vector
			amps = factors[0]
			for factor in factors[1:]:
				amps = np.kron(amps, factor)
			return cls._normalized(dims, amps, probe.labels)

		amps = np.asarray(assignments, dtype=complex).reshape(-1)
		if amps.size != size:
			raise DimensionError(f"Amplitude array has length {amps.size}, expected {size}")
		return cls._normalized(dims, amps, labels)

	@classmethod
	def basis_state(cls, dims: Sequence[int], digits: Sequence[int], labels: Sequence[str] | None = None) -> StateVector:
		"""Computational basis state with the given per-subsystem digits."""
		if len(digits) != len(dims):
			raise DimensionError("One digit per subsystem is required")
		assignments = []
		for index, (dim, digit) in enumerate(zip(dims, digits)):
			if not 0 <= int(digit) < int(dim):
				raise DimensionError(f"Digit {digit} out of range for dimension {dim}")
			assignments.append((index, np.eye(1, int(dim), int(digit))[0]))
		return cls.make_state(dims, assignments, labels)

	@classmethod
	def _positions(cls, state, targets: Sequence[SubsystemRef]) -> list[int]:
		if not targets:
			raise ValidationError("Operator has no target subsystems")
		positions = [state.locate(t) for t in targets]
		if len(set(positions)) != len(positions):
			raise ValidationError(f"Repeated target subsystem in {list(targets)}")
		return positions

	@classmethod
	def apply(cls, state: StateVector, op: LocalOperator) -> StateVector:
		"""
		Apply a local operator to its target subsystems.

		Non-unitary operators (projectors, Kraus operators) are followed by
		renormalization.

		Raises:
			NotFoundError: If a target is not in the register
			DimensionError: If the operator size does not match the targets
			NormalizationError: If the operator annihilates the state
		"""
		positions = cls._positions(state, op.targets)
		target_dims = [state.dims[p] for p in positions]
		if op.mat.shape[0] != int(np.prod(target_dims)):
			raise DimensionError(
				f"Operator {op.name or ''} of size {op.mat.shape[0]} does not fit targets "
				f"{[state.labels[p] for p in positions]} of dims {target_dims}"
			)
		tensor = _contract(state.tensor_view(), positions, op.mat, target_dims)
		return cls._normalized(state.dims, tensor.reshape(-1), state.labels)

	@classmethod
	def expectation(cls, state: StateVector, op: LocalOperator) -> complex:
		"""<psi|O|psi> for a local operator O."""
		positions = cls._positions(state, op.targets)
		target_dims = [state.dims[p] for p in positions]
		if op.mat.shape[0] != int(np.prod(target_dims)):
			raise DimensionError(f"Operator {op.name or ''} does not fit its targets")
		image = _contract(state.tensor_view(), positions, op.mat, target_dims).reshape(-1)
		return complex(np.vdot(state.amps, image))

	@classmethod
	def _reduced_on(cls, state, position: int) -> np.ndarray:
		if isinstance(state, DensityMatrix):
			return cls.partial_trace(state, [position]).mat
		moved = np.moveaxis(state.tensor_view(), position, 0).reshape(state.dims[position], -1)
		return moved @ moved.conj().T

	@classmethod
	def probabilities(cls, state: StateVector | DensityMatrix, measurement: Measurement) -> np.ndarray:
		"""
		Born probabilities of every outcome.

		Raises:
			DimensionError: If the measurement does not fit its target
		"""
		if measurement.target is None:
			raise ValidationError(f"Measurement {measurement.name or ''} is not bound to a subsystem")
		position = state.locate(measurement.target)
		if state.dims[position] != measurement.dim:
			raise DimensionError(
				f"Measurement {measurement.name or ''} of dimension {measurement.dim} "
				f"does not fit {state.labels[position]!r} of dimension {state.dims[position]}"
			)
		if isinstance(measurement, MeasurementBasis) and isinstance(state, StateVector):
			moved = np.moveaxis(state.tensor_view(), position, 0).reshape(state.dims[position], -1)
			coeffs = measurement.vectors.conj() @ moved
			probs = np.sum(np.abs(coeffs) ** 2, axis=1)
		else:
			rho = cls._reduced_on(state, position)
			if isinstance(measurement, MeasurementBasis):
				elements = [measurement.projector(j) for j in range(measurement.outcomes)]
			else:
				elements = measurement.elements
			probs = np.array([np.real(np.trace(e @ rho)) for e in elements])
		return np.clip(probs, 0.0, None)

	@classmethod
	def collapse(cls, state: StateVector, measurement: Measurement, outcome: int, discard: bool = False) -> Branch:
		"""
		Post-measurement branch for a given outcome.

		Args:
			state: Input state
			measurement: Basis or POVM bound to a subsystem
			outcome: Outcome label
			discard: Remove the measured subsystem (projective bases only)

		Returns:
			Branch: With ``possible=False`` and no state when the outcome has
				probability below the zero threshold
		"""
		probs = cls.probabilities(state, measurement)
		if not 0 <= outcome < len(probs):
			raise ValidationError(f"Outcome {outcome} out of range for {measurement.name or 'measurement'}")
		probability = float(probs[outcome])
		if probability < get_settings().zero_probability:
			return Branch(outcome, probability, None, possible=False)

		position = state.locate(measurement.target)
		if isinstance(measurement, Povm):
			if discard:
				raise ValidationError("A POVM outcome does not leave a known pure state to discard")
			kraus = measurement.kraus(outcome)
			tensor = _contract(state.tensor_view(), [position], kraus, [state.dims[position]])
			collapsed = cls._normalized(state.dims, tensor.reshape(-1), state.labels)
		elif discard:
			bra = measurement.vectors[outcome].conj().reshape(1, -1)
			tensor = _contract(state.tensor_view(), [position], bra, [])
			dims = tuple(d for i, d in enumerate(state.dims) if i != position)
			labels = tuple(lbl for i, lbl in enumerate(state.labels) if i != position)
			if not dims:
				raise ValidationError("Cannot discard the last subsystem of a register")
			collapsed = cls._normalized(dims, tensor.reshape(-1), labels)
		else:
			projector = measurement.projector(outcome)
			tensor = _contract(state.tensor_view(), [position], projector, [state.dims[position]])
			collapsed = cls._normalized(state.dims, tensor.reshape(-1), state.labels)
		return Branch(outcome, probability, collapsed)

	@classmethod
	def enumerate_branches(cls, state: StateVector, measurement: Measurement, discard: bool = False) -> list[Branch]:
		"""
		One branch per outcome, zero-probability outcomes included and flagged.

		Raises:
			NormalizationError: If every outcome has probability below the zero threshold
		"""
		probs = cls.probabilities(state, measurement)
		if probs.sum() < get_settings().zero_probability:
			raise NormalizationError("All outcome probabilities vanish")
		return [cls.collapse(state, measurement, j, discard) for j in range(len(probs))]

	@classmethod
	def measure(
		cls,
		state: StateVector,
		measurement: Measurement,
		rng: np.random.Generator,
		discard: bool = False,
	) -> tuple[Branch, StateVector]:
		"""
		Sample an outcome with Born probabilities and collapse.

		Returns:
			tuple: (Branch, collapsed state)

		Raises:
			NormalizationError: If every outcome has probability below the zero threshold
		"""
		probs = cls.probabilities(state, measurement)
		total = probs.sum()
		if total < get_settings().zero_probability:
			raise NormalizationError("All outcome probabilities vanish")
		outcome = int(rng.choice(len(probs), p=probs / total))
		branch = cls.collapse(state, measurement, outcome, discard)
		logger.debug("measured %s on %s -> %d (p=%.6g)", measurement.name, measurement.target, outcome, branch.probability)
		return branch, branch.state

	@classmethod
	def to_density(cls, state: StateVector) -> DensityMatrix:
		return DensityMatrix(state.dims, np.outer(state.amps, state.amps.conj()), state.labels)

	@classmethod
	def partial_trace(cls, state: StateVector | DensityMatrix, keep: Sequence[SubsystemRef]) -> DensityMatrix:
		"""
		Reduced density matrix on ``keep`` (in the order given).

		Raises:
			ValidationError: If keep is empty or repeats a subsystem
		"""
		if not keep:
			raise ValidationError("partial_trace needs at least one subsystem to keep")
		kept = cls._positions(state, list(keep))
		traced = [i for i in range(len(state.dims)) if i not in kept]
		dk = int(np.prod([state.dims[i] for i in kept]))
		dr = int(np.prod([state.dims[i] for i in traced])) if traced else 1
		dims = tuple(state.dims[i] for i in kept)
		labels = tuple(state.labels[i] for i in kept)

		if isinstance(state, StateVector):
			moved = np.transpose(state.tensor_view(), kept + traced).reshape(dk, dr)
			rho = moved @ moved.conj().T
		else:
			n = len(state.dims)
			tensor = state.mat.reshape(state.dims + state.dims)
			perm = kept + traced + [n + i for i in kept] + [n + i for i in traced]
			tensor = np.transpose(tensor, perm).reshape(dk, dr, dk, dr)
			rho = np.einsum("ajbj->ab", tensor)
		rho = (rho + rho.conj().T) / 2
		return DensityMatrix(dims, rho, labels)

	@classmethod
	def fidelity(cls, a: StateVector | DensityMatrix, b: StateVector | DensityMatrix) -> float:
		"""
		Fidelity between two states.

		Pure-pure: |<a|b>|^2. Mixed-pure: <b|rho|b>. Mixed-mixed: Uhlmann
		fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

		Raises:
			DimensionError: If the registers have different dimensions
		"""
		if tuple(a.dims) != tuple(b.dims):
			raise DimensionError(f"Dimension mismatch: {list(a.dims)} vs {list(b.dims)}")
		if isinstance(a, StateVector) and isinstance(b, StateVector):
			return float(abs(np.vdot(a.amps, b.amps)) ** 2)
		if isinstance(a, StateVector):
			a, b = b, a
		if isinstance(b, StateVector):
			return float(np.real(np.vdot(b.amps, a.mat @ b.amps)))
		root = psd_sqrt(a.mat)
		inner = psd_sqrt(root @ b.mat @ root)
		return float(np.real(np.trace(inner)) ** 2)

	@classmethod
	def equal_up_to_global_phase(cls, a: StateVector, b: StateVector, tol: float | None = None) -> bool:
		"""True iff |<a|b>| >= 1 - tol."""
		tol = get_settings().chained_tol if tol is None else tol
		if tuple(a.dims) != tuple(b.dims):
			return False
		return bool(abs(np.vdot(a.amps, b.amps)) >= 1 - tol)

	@classmethod
	def reorder(cls, state: StateVector, order: Sequence[SubsystemRef]) -> StateVector:
		"""Permute subsystems so that ``order`` lists them from most significant."""
		positions = cls._positions(state, list(order))
		if len(positions) != len(state.dims):
			raise ValidationError("reorder needs every subsystem exactly once")
		tensor = np.transpose(state.tensor_view(), positions)
		return StateVector(
			tuple(state.dims[p] for p in positions),
			tensor.reshape(-1),
			tuple(state.labels[p] for p in positions),
		)

	@classmethod
	def discard(cls, state: StateVector, subsystem: SubsystemRef, vector, tol: float | None = None) -> StateVector:
		"""
		Remove a subsystem known to be in the pure state ``vector``.

		Raises:
			ValidationError: If the subsystem is entangled or in another state
		"""
		tol = get_settings().chained_tol if tol is None else tol
		position = state.locate(subsystem)
		vector = np.asarray(vector, dtype=complex).reshape(-1)
		if vector.size != state.dims[position]:
			raise DimensionError("Discarded vector does not match the subsystem dimension")
		vector = vector / np.linalg.norm(vector)
		tensor = _contract(state.tensor_view(), [position], vector.conj().reshape(1, -1), [])
		remainder = tensor.reshape(-1)
		if abs(np.linalg.norm(remainder) - 1) > tol:
			raise ValidationError(f"Subsystem {state.labels[position]!r} is not in the given pure state")
		dims = tuple(d for i, d in enumerate(state.dims) if i != position)
		labels = tuple(lbl for i, lbl in enumerate(state.labels) if i != position)
		return cls._normalized(dims, remainder, labels)

	@classmethod
	def tensor(cls, a: StateVector, b: StateVector) -> StateVector:
		"""Append register ``b`` after register ``a``."""
		dims = tuple(a.dims) + tuple(b.dims)
		cls._check_size(dims)
		labels = tuple(a.labels) + tuple(b.labels)
		if len(set(labels)) != len(labels):
			raise ValidationError(f"Registers share labels: {sorted(set(a.labels) & set(b.labels))}")
		return StateVector(dims, np.kron(a.amps, b.amps), labels)

	@classmethod
	def entanglement_entropy(cls, state: StateVector, part: Sequence[SubsystemRef]) -> float:
		"""Von Neumann entropy (bits) of the reduced state on ``part``."""
		values = cls.partial_trace(state, part).eigenvalues()
		values = values[values > 1e-15]
		return float(max(0.0, -np.sum(values * np.log2(values))))

	@classmethod
	def bipartition_entropies(cls, state: StateVector) -> dict[tuple[str, ...], float]:
		"""
		Entropy across every bipartition of the register.

		Each cut is listed once, keyed by the side holding subsystem 0.
		"""
		labels = state.labels
		if len(labels) < 2:
			return {}
		rest = labels[1:]
		entropies = {}
		for size in range(0, len(rest)):
			for combo in itertools.combinations(rest, size):
				side = (labels[0], *combo)
				entropies[side] = cls.entanglement_entropy(state, side)
		return entropies

	@classmethod
	def is_product_state(cls, state: StateVector, tol: float | None = None) -> bool:
		"""
		True iff the state factorizes into single-subsystem states.

		A pure state is fully product exactly when every one-subsystem
		marginal is pure.
		"""
		tol = get_settings().chained_tol if tol is None else tol
		return all(
			cls.partial_trace(state, [label]).purity() >= 1 - tol for label in state.labels
		)


make_state = TensorService.make_state
basis_state = TensorService.basis_state
apply = TensorService.apply
expectation = TensorService.expectation
probabilities = TensorService.probabilities
collapse = TensorService.collapse
enumerate_branches = TensorService.enumerate_branches
measure = TensorService.measure
to_density = TensorService.to_density
partial_trace = TensorService.partial_trace
fidelity = TensorService.fidelity
equal_up_to_global_phase = TensorService.equal_up_to_global_phase
reorder = TensorService.reorder
discard = TensorService.discard
tensor = TensorService.tensor
entanglement_entropy = TensorService.entanglement_entropy
bipartition_entropies = TensorService.bipartition_entropies
is_product_state = TensorService.is_product_state
