"""
Shared utilities.

This module provides common functionality used across all domains:
- Custom exceptions
- Input validation and sanitization
- Namespaced logging
- Per-party random streams
"""

from .exceptions import (
	DimensionError,
	NormalizationError,
	NotFoundError,
	ProtocolViolation,
	RegisterSizeError,
	SimulatorError,
	ValidationError,
)
from .logger import configure, get_logger, log_error
from .rng import party_rng
from .validators import (
	is_unitary,
	parse_complex,
	parse_pauli_string,
	validate_amplitudes,
	validate_angles,
	validate_dimension,
	validate_positive_int,
	validate_positive_semidefinite,
	validate_square,
	validate_subset,
	validate_unitary,
)

__all__ = [
	# Exceptions
	"DimensionError",
	"NormalizationError",
	"NotFoundError",
	"ProtocolViolation",
	"RegisterSizeError",
	"SimulatorError",
	"ValidationError",
	# Logging
	"configure",
	"get_logger",
	"log_error",
	# Randomness
	"party_rng",
	# Validators
	"is_unitary",
	"parse_complex",
	"parse_pauli_string",
	"validate_amplitudes",
	"validate_angles",
	"validate_dimension",
	"validate_positive_int",
	"validate_positive_semidefinite",
	"validate_square",
	"validate_subset",
	"validate_unitary",
]
