"""
Gate and Measurement Constructors

Named single-subsystem and few-subsystem operators used by the protocols.
Constructors return unbound operators; bind them with ``.on(...)``.
"""

import numpy as np
from scipy import linalg

from quantum_broadcast.shared.exceptions import DimensionError, ValidationError
from quantum_broadcast.shared.validators import validate_dimension, validate_unitary
from quantum_broadcast.tensor.types import LocalOperator, MeasurementBasis, Povm, SubsystemId

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

PAULI_MATRICES = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def pauli(letter: str) -> LocalOperator:
	"""Single-qubit Pauli operator by letter."""
	try:
		return LocalOperator(PAULI_MATRICES[letter.upper()], name=letter.upper())
	except KeyError:
		raise ValidationError(f"Unknown Pauli letter {letter!r}")


def hadamard() -> LocalOperator:
	return LocalOperator(HADAMARD, name="H")


def cz() -> LocalOperator:
	return LocalOperator(CZ, name="CZ")


def cnot() -> LocalOperator:
	"""CNOT with the first target as control."""
	return LocalOperator(CNOT, name="CX")


def unitary(matrix, name: str = "U") -> LocalOperator:
	"""Wrap a user-supplied matrix after checking it is unitary."""
	return LocalOperator(validate_unitary(matrix, name), name=name)


def z_rotation(theta: float) -> LocalOperator:
	"""e^{i theta Z} = diag(e^{i theta}, e^{-i theta})."""
	return LocalOperator(np.diag([np.exp(1j * theta), np.exp(-1j * theta)]), name=f"Rz({theta:.6g})")


def x_rotation(theta: float) -> LocalOperator:
	"""e^{i theta X}."""
	return LocalOperator(linalg.expm(1j * theta * PAULI_X), name=f"Rx({theta:.6g})")


def computational_basis(dim: int) -> MeasurementBasis:
	dim = validate_dimension(dim)
	return MeasurementBasis(np.eye(dim), name="Z" if dim == 2 else f"Z{dim}")


def fourier_basis(dim: int) -> MeasurementBasis:
	"""
	Discrete Fourier basis: u_n[k] = e^{2 pi i n k / D} / sqrt(D).

	Outcome ``n`` multiplies the |k> component of the unmeasured partners by
	e^{-2 pi i n k / D}.

	Raises:
		DimensionError: If dim < 2
	"""
	dim = validate_dimension(dim)
	n, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
	return MeasurementBasis(np.exp(2j * np.pi * n * k / dim) / np.sqrt(dim), name=f"F{dim}")


def x_basis() -> MeasurementBasis:
	"""{|+>, |->}."""
	return MeasurementBasis(np.array([[1, 1], [1, -1]]) / np.sqrt(2), name="X")


def rotated_x_basis(theta: float) -> MeasurementBasis:
	"""
	The basis {e^{-i theta X}|s>}, s = 0, 1.

	Measuring an ancilla coupled by CZ to a |+>-type qubit in this basis
	induces Z^s e^{i theta Z} on the partner.
	"""
	rotation = linalg.expm(-1j * theta * PAULI_X)
	return MeasurementBasis(rotation.T, name=f"M({theta:.6g})")


def sender_phase_gate(dim: int, receivers: int, theta: float) -> LocalOperator:
	"""
	Sender qudit phase: |k> -> e^{i(2k - N) theta}|k>.

	Raises:
		DimensionError: If dim differs from receivers + 1
	"""
	if dim != receivers + 1:
		raise DimensionError(f"Sender dimension {dim} must equal N + 1 = {receivers + 1}")
	k = np.arange(dim)
	return LocalOperator(np.diag(np.exp(1j * (2 * k - receivers) * theta)), name=f"U({theta:.6g})")


def correction_gate(outcome_sum: int, sender_dim: int) -> LocalOperator:
	"""Receiver correction diag(e^{2 pi i s / D}, 1) for the summed sender outcomes s."""
	sender_dim = validate_dimension(sender_dim, "sender_dim")
	phase = np.exp(2j * np.pi * (int(outcome_sum) % sender_dim) / sender_dim)
	return LocalOperator(np.diag([phase, 1]), name=f"C({int(outcome_sum) % sender_dim}/{sender_dim})")


def shift_gate(dim: int, amount: int) -> LocalOperator:
	"""|x> -> |x + amount mod D>."""
	dim = validate_dimension(dim)
	return permutation_gate([(x + amount) % dim for x in range(dim)]).named(f"Shift({amount % dim})")


def permutation_gate(image) -> LocalOperator:
	"""
	Basis relabelling |x> -> |image[x]>.

	Raises:
		ValidationError: If image is not a permutation
	"""
	image = [int(x) for x in image]
	if sorted(image) != list(range(len(image))):
		raise ValidationError(f"{image} is not a permutation")
	mat = np.zeros((len(image), len(image)), dtype=complex)
	for source, target in enumerate(image):
		mat[target, source] = 1
	return LocalOperator(mat, name=f"P{image}")


def controlled_shift(ctrl: SubsystemId, tgt: SubsystemId, direction: int = 1) -> LocalOperator:
	"""
	Controlled shift |k>|l> -> |k>|l + direction*k mod d_tgt>, bound to (ctrl, tgt).

	With a qubit control and direction -1 this is the controlled V of the
	rotated-basis circuit, V|j> = |j - 1 mod 3>.

	Raises:
		DimensionError: If the control dimension exceeds the target dimension
	"""
	if direction not in (1, -1):
		raise ValidationError("direction must be +1 or -1")
	if ctrl.dim > tgt.dim:
		raise DimensionError(f"Control dimension {ctrl.dim} exceeds target dimension {tgt.dim}")
	c, t = ctrl.dim, tgt.dim
	mat = np.zeros((c * t, c * t), dtype=complex)
	for k in range(c):
		for l in range(t):
			mat[k * t + (l + direction * k) % t, k * t + l] = 1
	name = "CShift" if direction == 1 else "CShift^-1"
	return LocalOperator(mat, (ctrl.label, tgt.label), name)


def controlled_gate(matrix, ctrl_dim: int = 2, name: str = "") -> LocalOperator:
	"""|0><0| x I + |1><1| x U (control first); higher control levels act trivially."""
	matrix = np.asarray(matrix, dtype=complex)
	size = matrix.shape[0]
	blocks = [np.eye(size)] * ctrl_dim
	blocks[1] = matrix
	return LocalOperator(linalg.block_diag(*blocks), name=name or "C-U")


def anti_trine_povm() -> Povm:
	"""POVM {(2/3)|anti_j><anti_j|}, j = 0, 1, 2."""
	from .states import trine_states

	anti = trine_states().anti_trine
	return Povm(tuple((2 / 3) * np.outer(v, v.conj()) for v in anti), name="anti-trine")


def trine_basis(label: int) -> MeasurementBasis:
	"""Two-outcome basis {|psi_l>, |anti_l>}; outcome 0 is the trine state."""
	from .states import trine_states

	trines = trine_states()
	return MeasurementBasis(
		np.array([trines.trine[label], trines.anti_trine[label]]), name=f"trine{label}"
	)
