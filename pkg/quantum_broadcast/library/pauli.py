"""
Pauli Strings

Signed multi-qubit Pauli operators in symplectic form, and the GF(2)
linear algebra used to synthesize Pauli corrections.
"""

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.validators import parse_pauli_string
from quantum_broadcast.tensor.types import LocalOperator

from .gates import PAULI_MATRICES

# symplectic bits (x, z) per letter; Y = i X Z
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTER = {bits: letter for letter, bits in _BITS.items()}


@dataclass(frozen=True)
class PauliString:
	"""
	Pauli product with a phase i^phase.

	``PauliString("ZXZ", 2)`` is -Z X Z. Stabilizer generators carry phase
	0 or 2 (sign +1 or -1).
	"""

	letters: str
	phase: int = 0

	def __post_init__(self):
		letters = self.letters.upper()
		if not letters or any(c not in _BITS for c in letters):
			raise ValidationError(f"Invalid Pauli letters {self.letters!r}")
		object.__setattr__(self, "letters", letters)
		object.__setattr__(self, "phase", int(self.phase) % 4)

	@classmethod
	def parse(cls, text: str) -> "PauliString":
		"""Parse ``"+XZI"`` / ``"-ZZ"`` / ``"XX"``."""
		sign, letters = parse_pauli_string(text)
		return cls(letters, 0 if sign > 0 else 2)

	@classmethod
	def from_bits(cls, x: np.ndarray, z: np.ndarray, phase: int = 0) -> "PauliString":
		"""Build from symplectic bits with the letter convention (1, 1) -> Y."""
		return cls("".join(_LETTER[(int(a), int(b))] for a, b in zip(x, z)), phase)

	@property
	def num_qubits(self) -> int:
		return len(self.letters)

	@property
	def sign(self) -> complex:
		return 1j**self.phase

	@property
	def weight(self) -> int:
		return sum(c != "I" for c in self.letters)

	@property
	def x_bits(self) -> np.ndarray:
		return np.array([_BITS[c][0] for c in self.letters], dtype=np.uint8)

	@property
	def z_bits(self) -> np.ndarray:
		return np.array([_BITS[c][1] for c in self.letters], dtype=np.uint8)

	def symplectic(self) -> np.ndarray:
		return np.concatenate([self.x_bits, self.z_bits])

	def __mul__(self, other: "PauliString") -> "PauliString":
		if self.num_qubits != other.num_qubits:
			raise ValidationError("Pauli strings act on different qubit counts")
		phase = self.phase + other.phase
		letters = []
		for a, b in zip(self.letters, other.letters):
			# a*b = i^k c for single-qubit Paulis
			if a == "I" or b == "I" or a == b:
				letters.append(b if a == "I" else (a if b == "I" else "I"))
				continue
			c = _LETTER[(_BITS[a][0] ^ _BITS[b][0], _BITS[a][1] ^ _BITS[b][1])]
			cyclic = (a, b) in (("X", "Y"), ("Y", "Z"), ("Z", "X"))
			phase += 1 if cyclic else 3
			letters.append(c)
		return PauliString("".join(letters), phase)

	def commutes(self, other: "PauliString") -> bool:
		"""Symplectic inner product is zero."""
		overlap = np.dot(self.x_bits, other.z_bits) + np.dot(self.z_bits, other.x_bits)
		return int(overlap) % 2 == 0

	def matrix(self) -> np.ndarray:
		mat = reduce(np.kron, [PAULI_MATRICES[c] for c in self.letters])
		return self.sign * mat

	def operator(self, targets=()) -> LocalOperator:
		return LocalOperator(self.matrix(), tuple(targets), str(self))

	def restricted(self, positions) -> "PauliString":
		"""Letters on a subset of qubits (phase kept)."""
		return PauliString("".join(self.letters[p] for p in positions), self.phase)

	def __str__(self) -> str:
		prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
		return prefix + self.letters


def gf2_row_reduce(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
	"""Reduced row echelon form over GF(2) and the pivot columns."""
	mat = np.array(matrix, dtype=np.uint8) % 2
	rows, cols = mat.shape
	pivots = []
	row = 0
	for col in range(cols):
		if row >= rows:
			break
		candidates = np.nonzero(mat[row:, col])[0]
		if candidates.size == 0:
			continue
		pivot = row + int(candidates[0])
		mat[[row, pivot]] = mat[[pivot, row]]
		for other in range(rows):
			if other != row and mat[other, col]:
				mat[other] ^= mat[row]
		pivots.append(col)
		row += 1
	return mat, pivots


def gf2_rank(matrix: np.ndarray) -> int:
	return len(gf2_row_reduce(matrix)[1])


def gf2_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
	"""One solution x of A x = b over GF(2), or None if inconsistent."""
	matrix = np.array(matrix, dtype=np.uint8) % 2
	rhs = np.array(rhs, dtype=np.uint8).reshape(-1, 1) % 2
	reduced, pivots = gf2_row_reduce(np.hstack([matrix, rhs]))
	cols = matrix.shape[1]
	if cols in pivots:
		return None
	solution = np.zeros(cols, dtype=np.uint8)
	for row, col in enumerate(pivots):
		solution[col] = reduced[row, -1]
	return solution


def gf2_nullspace(matrix: np.ndarray) -> list[np.ndarray]:
	"""Basis of {x : A x = 0} over GF(2)."""
	reduced, pivots = gf2_row_reduce(matrix)
	cols = reduced.shape[1]
	basis = []
	for free in (c for c in range(cols) if c not in pivots):
		vector = np.zeros(cols, dtype=np.uint8)
		vector[free] = 1
		for row, col in enumerate(pivots):
			vector[col] = reduced[row, free]
		basis.append(vector)
	return basis


def minimal_weight_solution(matrix: np.ndarray, rhs: np.ndarray, weight, search_limit: int = 16) -> np.ndarray | None:
	"""
	Solution of A x = b over GF(2) minimizing ``weight(x)``.

	The coset of the nullspace is searched exhaustively when its dimension is
	at most ``search_limit``; otherwise the particular solution is returned.
	"""
	particular = gf2_solve(matrix, rhs)
	if particular is None:
		return None
	kernel = gf2_nullspace(matrix)
	if len(kernel) > search_limit:
		return particular
	best, best_weight = particular, weight(particular)
	for choice in itertools.product((0, 1), repeat=len(kernel)):
		candidate = particular.copy()
		for bit, vector in zip(choice, kernel):
			if bit:
				candidate ^= vector
		candidate_weight = weight(candidate)
		if candidate_weight < best_weight:
			best, best_weight = candidate, candidate_weight
	return best


def check_stabilizer_generators(generators: list[PauliString]) -> None:
	"""
	Validate a stabilizer generating set.

	Raises:
		ValidationError: If the strings have different lengths, fail to
			commute, are dependent, or generate -I
	"""
	if not generators:
		raise ValidationError("At least one stabilizer generator is required")
	n = generators[0].num_qubits
	if any(g.num_qubits != n for g in generators):
		raise ValidationError("Stabilizer generators must act on the same number of qubits")
	if len(generators) > n:
		raise ValidationError(f"At most {n} independent generators exist on {n} qubits")
	for a, b in itertools.combinations(generators, 2):
		if not a.commutes(b):
			raise ValidationError(f"Generators {a} and {b} do not commute")
	for g in generators:
		if g.phase % 2:
			raise ValidationError(f"Generator {g} is not Hermitian")
	symplectic = np.array([g.symplectic() for g in generators])
	# with independent symplectic vectors no nontrivial product is proportional to I, so -I is excluded
	if gf2_rank(symplectic) < len(generators):
		raise ValidationError("Stabilizer generators are not independent")
