"""
Tensor Types

Immutable value types for mixed-radix registers: labelled subsystems,
pure and mixed states, local operators and measurements.

Amplitudes are indexed in mixed radix with subsystem 0 as the most
significant digit.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.shared.exceptions import DimensionError, NotFoundError, ValidationError

SubsystemRef = int | str


def _frozen(array) -> np.ndarray:
	result = np.array(array, dtype=complex)
	result.flags.writeable = False
	return result


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
	"""Principal square root of a positive semidefinite matrix."""
	values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
	roots = np.sqrt(np.clip(values, 0, None))
	return (vectors * roots) @ vectors.conj().T


def _locate(labels: tuple[str, ...], ref: SubsystemRef) -> int:
	if isinstance(ref, SubsystemId):
		ref = ref.label
	if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
		if 0 <= ref < len(labels):
			return int(ref)
		raise NotFoundError(f"Subsystem index {ref} not in register of size {len(labels)}")
	try:
		return labels.index(ref)
	except ValueError:
		raise NotFoundError(f"Subsystem {ref!r} not in register {list(labels)}")


@dataclass(frozen=True)
class SubsystemId:
	"""A registered subsystem: position, dimension and free-text label."""

	index: int
	dim: int
	label: str

	def __post_init__(self):
		if self.dim < 2:
			raise DimensionError(f"Subsystem {self.label!r} must have dimension >= 2")


class _Register:
	"""Label and dimension bookkeeping shared by states."""

	dims: tuple[int, ...]
	labels: tuple[str, ...]

	@property
	def subsystems(self) -> tuple[SubsystemId, ...]:
		return tuple(SubsystemId(i, d, lbl) for i, (d, lbl) in enumerate(zip(self.dims, self.labels)))

	@property
	def size(self) -> int:
		return int(np.prod(self.dims))

	def locate(self, ref: SubsystemRef) -> int:
		"""Position of a subsystem given its label, index or SubsystemId."""
		return _locate(self.labels, ref)

	def subsystem(self, ref: SubsystemRef) -> SubsystemId:
		index = self.locate(ref)
		return SubsystemId(index, self.dims[index], self.labels[index])

	def dim_of(self, ref: SubsystemRef) -> int:
		return self.dims[self.locate(ref)]


def _check_register(dims, labels) -> tuple[tuple[int, ...], tuple[str, ...]]:
	dims = tuple(int(d) for d in dims)
	if not dims:
		raise DimensionError("A register needs at least one subsystem")
	if any(d < 2 for d in dims):
		raise DimensionError(f"Subsystem dimensions must be >= 2, got {list(dims)}")
	if labels is None:
		labels = tuple(f"q{i}" for i in range(len(dims)))
	labels = tuple(str(lbl) for lbl in labels)
	if len(labels) != len(dims):
		raise DimensionError(f"{len(labels)} labels given for {len(dims)} subsystems")
	if len(set(labels)) != len(labels):
		raise ValidationError(f"Subsystem labels must be unique, got {list(labels)}")
	return dims, labels


@dataclass(frozen=True, eq=False)
class StateVector(_Register):
	"""
	Normalized pure state over a labelled mixed-radix register.

	Construct through ``TensorService.make_state`` unless the amplitudes
	are already normalized.
	"""

	dims: tuple[int, ...]
	amps: np.ndarray
	labels: tuple[str, ...] | None = None

	def __post_init__(self):
		dims, labels = _check_register(self.dims, self.labels)
		amps = _frozen(self.amps).reshape(-1)
		if amps.size != int(np.prod(dims)):
			raise DimensionError(f"Amplitude vector has length {amps.size}, expected {int(np.prod(dims))}")
		object.__setattr__(self, "dims", dims)
		object.__setattr__(self, "labels", labels)
		object.__setattr__(self, "amps", amps)

	def norm(self) -> float:
		return float(np.linalg.norm(self.amps))

	def tensor_view(self) -> np.ndarray:
		"""Amplitudes reshaped to one axis per subsystem."""
		return self.amps.reshape(self.dims)

	def relabel(self, mapping: dict[str, str]) -> "StateVector":
		"""Rename some subsystems; unnamed ones keep their label."""
		return replace(self, labels=tuple(mapping.get(lbl, lbl) for lbl in self.labels))

	def amplitude(self, digits) -> complex:
		"""Amplitude of the basis state with the given per-subsystem digits."""
		return complex(self.tensor_view()[tuple(digits)])

	def __repr__(self) -> str:
		return f"StateVector(labels={list(self.labels)}, dims={list(self.dims)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix(_Register):
	"""Unit-trace Hermitian matrix over a labelled register."""

	dims: tuple[int, ...]
	mat: np.ndarray
	labels: tuple[str, ...] | None = None

	def __post_init__(self):
		dims, labels = _check_register(self.dims, self.labels)
		mat = _frozen(self.mat)
		size = int(np.prod(dims))
		if mat.shape != (size, size):
			raise DimensionError(f"Density matrix has shape {mat.shape}, expected ({size}, {size})")
		object.__setattr__(self, "dims", dims)
		object.__setattr__(self, "labels", labels)
		object.__setattr__(self, "mat", mat)

	def trace(self) -> complex:
		return complex(np.trace(self.mat))

	def purity(self) -> float:
		return float(np.real(np.trace(self.mat @ self.mat)))

	def eigenvalues(self) -> np.ndarray:
		return np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)

	def __repr__(self) -> str:
		return f"DensityMatrix(labels={list(self.labels)}, dims={list(self.dims)})"


@dataclass(frozen=True, eq=False)
class LocalOperator:
	"""
	A matrix acting on an ordered tuple of subsystems.

	Library constructors return unbound operators (no targets); bind them
	with ``on``.
	"""

	mat: np.ndarray
	targets: tuple[SubsystemRef, ...] = ()
	name: str = ""

	def __post_init__(self):
		mat = _frozen(self.mat)
		if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
			raise DimensionError(f"Operator {self.name or ''} must be square")
		object.__setattr__(self, "mat", mat)
		object.__setattr__(self, "targets", tuple(self.targets))

	def on(self, *targets: SubsystemRef) -> "LocalOperator":
		"""Bind the operator to subsystems."""
		return replace(self, targets=targets)

	def named(self, name: str) -> "LocalOperator":
		return replace(self, name=name)

	@property
	def dagger(self) -> "LocalOperator":
		return replace(self, mat=self.mat.conj().T, name=f"{self.name}^dag" if self.name else "")

	def is_unitary(self, tol: float | None = None) -> bool:
		tol = get_settings().algebraic_tol if tol is None else tol
		identity = np.eye(self.mat.shape[0])
		return bool(np.allclose(self.mat.conj().T @ self.mat, identity, atol=tol, rtol=0))

	def is_projector(self, tol: float | None = None) -> bool:
		tol = get_settings().algebraic_tol if tol is None else tol
		return bool(
			np.allclose(self.mat @ self.mat, self.mat, atol=tol, rtol=0)
			and np.allclose(self.mat, self.mat.conj().T, atol=tol, rtol=0)
		)

	def is_diagonal(self) -> bool:
		return bool(np.count_nonzero(self.mat - np.diag(np.diag(self.mat))) == 0)

	def __matmul__(self, other: "LocalOperator") -> "LocalOperator":
		if self.targets != other.targets:
			raise ValidationError("Operators must share targets to be multiplied")
		return LocalOperator(self.mat @ other.mat, self.targets, f"{self.name}*{other.name}")


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
	"""
	Orthonormal projective measurement on a single subsystem.

	``vectors[j]`` is the state selected by outcome ``j``.
	"""

	vectors: np.ndarray
	target: SubsystemRef | None = None
	name: str = ""

	def __post_init__(self):
		vectors = _frozen(self.vectors)
		if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
			raise DimensionError("A measurement basis needs as many vectors as the target dimension")
		gram = vectors.conj() @ vectors.T
		if not np.allclose(gram, np.eye(vectors.shape[0]), atol=get_settings().algebraic_tol, rtol=0):
			raise ValidationError(f"Basis {self.name or ''} is not orthonormal")
		object.__setattr__(self, "vectors", vectors)

	@property
	def dim(self) -> int:
		return self.vectors.shape[1]

	@property
	def outcomes(self) -> int:
		return self.vectors.shape[0]

	def on(self, target: SubsystemRef) -> "MeasurementBasis":
		return replace(self, target=target)

	def projector(self, outcome: int) -> np.ndarray:
		vec = self.vectors[outcome]
		return np.outer(vec, vec.conj())


@dataclass(frozen=True, eq=False)
class Povm:
	"""Positive operator-valued measure on a single subsystem."""

	elements: tuple[np.ndarray, ...]
	target: SubsystemRef | None = None
	name: str = ""
	_kraus: tuple[np.ndarray, ...] = field(default=(), repr=False)

	def __post_init__(self):
		settings = get_settings()
		elements = tuple(_frozen(e) for e in self.elements)
		if not elements:
			raise ValidationError("A POVM needs at least one element")
		dim = elements[0].shape[0]
		for element in elements:
			if element.shape != (dim, dim):
				raise DimensionError("POVM elements must be square and of equal size")
			if not np.allclose(element, element.conj().T, atol=settings.algebraic_tol, rtol=0):
				raise ValidationError(f"POVM {self.name or ''} has a non-Hermitian element")
			if np.linalg.eigvalsh(element).min() < -settings.psd_tol:
				raise ValidationError(f"POVM {self.name or ''} has a non-positive element")
		if not np.allclose(sum(elements), np.eye(dim), atol=settings.algebraic_tol, rtol=0):
			raise ValidationError(f"POVM {self.name or ''} elements do not sum to the identity")
		object.__setattr__(self, "elements", elements)
		# principal square roots, used for the post-measurement state
		kraus = tuple(_frozen(psd_sqrt(e)) for e in elements)
		object.__setattr__(self, "_kraus", kraus)

	@property
	def dim(self) -> int:
		return self.elements[0].shape[0]

	@property
	def outcomes(self) -> int:
		return len(self.elements)

	def on(self, target: SubsystemRef) -> "Povm":
		return replace(self, target=target)

	def kraus(self, outcome: int) -> np.ndarray:
		return self._kraus[outcome]


Measurement = MeasurementBasis | Povm


@dataclass(frozen=True, eq=False)
class Branch:
	"""
	One measurement outcome with its Born probability.

	Impossible outcomes (probability below the zero threshold) carry
	``possible=False`` and no state.
	"""

	outcome: int
	probability: float
	state: StateVector | None
	possible: bool = True

	def __repr__(self) -> str:
		flag = "" if self.possible else ", impossible"
		return f"Branch(outcome={self.outcome}, probability={self.probability:.6g}{flag})"


__all__ = [
	"Branch",
	"DensityMatrix",
	"LocalOperator",
	"Measurement",
	"MeasurementBasis",
	"Povm",
	"StateVector",
	"SubsystemId",
	"SubsystemRef",
]
