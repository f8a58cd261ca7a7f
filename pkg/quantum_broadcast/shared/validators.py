"""
Input Validation Utilities

Provides validation and sanitization functions for common input types.
All validators either return sanitized data or raise ValidationError.
"""

import math
import re
from collections.abc import Iterable, Sequence

import numpy as np

import quantum_broadcast.config as _config  # module import: config imports shared, so resolve get_settings lazily

from .exceptions import DimensionError, NotFoundError, ValidationError

PAULI_PATTERN = re.compile(r"^([+-]?)([IXYZ]+)$")


def validate_positive_int(value, name: str, minimum: int = 1) -> int:
	"""
	Validate an integer parameter with a lower bound.

	Args:
		value: Raw value (int or integral float/string)
		name: Parameter name used in the error message
		minimum: Smallest allowed value

	Returns:
		int: The validated integer

	Raises:
		ValidationError: If value is not an integer or is below minimum
	"""
	if isinstance(value, bool):
		raise ValidationError(f"{name} must be an integer")
	try:
		number = int(value)
	except (TypeError, ValueError):
		raise ValidationError(f"{name} must be an integer")
	if isinstance(value, float) and not value.is_integer():
		raise ValidationError(f"{name} must be an integer")
	if number < minimum:
		raise ValidationError(f"{name} must be at least {minimum}")
	return number


def validate_dimension(value, name: str = "dimension") -> int:
	"""Validate a subsystem dimension (integer >= 2)."""
	try:
		return validate_positive_int(value, name, minimum=2)
	except ValidationError as e:
		raise DimensionError(e.message)


def parse_complex(value, name: str = "value") -> complex:
	"""
	Parse a complex number.

	Accepts plain numbers, ``[re, im]`` pairs and Python-style strings
	such as ``"0.5+0.5j"``.

	Raises:
		ValidationError: If the value cannot be read as a complex number
	"""
	if isinstance(value, bool):
		raise ValidationError(f"{name} must be a number")
	if isinstance(value, (int, float, complex, np.number)):
		result = complex(value)
	elif isinstance(value, (list, tuple)) and len(value) == 2:
		try:
			result = complex(float(value[0]), float(value[1]))
		except (TypeError, ValueError):
			raise ValidationError(f"{name} must be a [re, im] pair of numbers")
	elif isinstance(value, str):
		try:
			result = complex(value.replace(" ", ""))
		except ValueError:
			raise ValidationError(f"{name} is not a complex number: {value!r}")
	else:
		raise ValidationError(f"{name} must be a number or a [re, im] pair")

	if not (math.isfinite(result.real) and math.isfinite(result.imag)):
		raise ValidationError(f"{name} must be finite")
	return result


def validate_amplitudes(alpha, beta) -> tuple[complex, complex]:
	"""
	Validate the broadcast amplitudes.

	Returns:
		tuple: (alpha, beta) as complex numbers

	Raises:
		ValidationError: If |alpha|^2 + |beta|^2 differs from 1
	"""
	alpha = parse_complex(alpha, "alpha")
	beta = parse_complex(beta, "beta")
	norm = abs(alpha) ** 2 + abs(beta) ** 2
	if abs(norm - 1) > _config.get_settings().algebraic_tol:
		raise ValidationError(f"|alpha|^2 + |beta|^2 must equal 1 (got {norm:.15g})")
	return alpha, beta


def validate_angles(values, name: str = "angles", count: int | None = None) -> tuple[float, ...]:
	"""Validate a list of real angles, optionally of fixed length."""
	if isinstance(values, (int, float)) and not isinstance(values, bool):
		values = [values]
	if not isinstance(values, Iterable):
		raise ValidationError(f"{name} must be a list of numbers")
	angles = []
	for item in values:
		if isinstance(item, bool):
			raise ValidationError(f"{name} must contain numbers only")
		try:
			angle = float(item)
		except (TypeError, ValueError):
			raise ValidationError(f"{name} must contain numbers only")
		if not math.isfinite(angle):
			raise ValidationError(f"{name} must be finite")
		angles.append(angle)
	if count is not None and len(angles) != count:
		raise ValidationError(f"{name} must have exactly {count} entries")
	return tuple(angles)


def validate_square(matrix, size: int | None = None, name: str = "matrix") -> np.ndarray:
	"""Validate a square complex matrix, optionally of a given size."""
	mat = np.asarray(matrix, dtype=complex)
	if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
		raise DimensionError(f"{name} must be square")
	if size is not None and mat.shape[0] != size:
		raise DimensionError(f"{name} has size {mat.shape[0]}, expected {size}")
	if not np.all(np.isfinite(mat)):
		raise ValidationError(f"{name} must be finite")
	return mat


def validate_unitary(matrix, name: str = "operator") -> np.ndarray:
	"""
	Validate that a matrix is unitary.

	Raises:
		ValidationError: If U†U differs from I beyond the algebraic tolerance
	"""
	mat = validate_square(matrix, name=name)
	if not is_unitary(mat):
		raise ValidationError(f"{name} is not unitary")
	return mat


def is_unitary(matrix: np.ndarray, tol: float | None = None) -> bool:
	tol = _config.get_settings().algebraic_tol if tol is None else tol
	identity = np.eye(matrix.shape[0])
	return bool(np.allclose(matrix.conj().T @ matrix, identity, atol=tol, rtol=0))


def validate_positive_semidefinite(matrix, name: str = "operator") -> np.ndarray:
	"""Validate a Hermitian positive semidefinite matrix."""
	settings = _config.get_settings()
	mat = validate_square(matrix, name=name)
	if not np.allclose(mat, mat.conj().T, atol=settings.algebraic_tol, rtol=0):
		raise ValidationError(f"{name} is not Hermitian")
	if np.linalg.eigvalsh(mat).min() < -settings.psd_tol:
		raise ValidationError(f"{name} is not positive semidefinite")
	return mat


def parse_pauli_string(text: str) -> tuple[int, str]:
	"""
	Parse a signed Pauli string such as ``"+XZI"`` or ``"-ZZ"``.

	Returns:
		tuple: (sign, letters) with sign in {+1, -1}

	Raises:
		ValidationError: If the string is malformed
	"""
	if not isinstance(text, str):
		raise ValidationError("Pauli string must be text")
	cleaned = text.strip().upper()
	match = PAULI_PATTERN.match(cleaned)
	if not match:
		raise ValidationError(f"Invalid Pauli string: {text!r}")
	sign = -1 if match.group(1) == "-" else 1
	return sign, match.group(2)


def validate_subset(subset, universe: Sequence, name: str = "subset") -> tuple:
	"""
	Validate that every element of subset belongs to universe.

	Returns:
		tuple: The subset, in universe order and without duplicates

	Raises:
		NotFoundError: If an element is not in universe
	"""
	members = list(subset)
	missing = [item for item in members if item not in universe]
	if missing:
		raise NotFoundError(f"{name} contains unknown elements: {missing}")
	chosen = set(members)
	return tuple(item for item in universe if item in chosen)
