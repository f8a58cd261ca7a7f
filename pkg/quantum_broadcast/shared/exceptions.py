"""
Custom Exceptions for the Simulator

Provides semantic exceptions for simulator error handling.
These map to process exit codes at the command line.
"""


class SimulatorError(Exception):
	"""
	Base simulator error.

	All custom exceptions should inherit from this class.
	"""

	exit_code = 2
	message = "Simulation request failed"

	def __init__(self, message: str | None = None):
		self.message = message or self.__class__.message
		super().__init__(self.message)


class ValidationError(SimulatorError):
	"""Invalid input data or violated precondition."""

	exit_code = 2
	message = "Invalid input"


class DimensionError(ValidationError):
	"""Subsystem dimensions or matrix sizes do not match."""

	message = "Dimension mismatch"


class NormalizationError(ValidationError):
	"""Vector cannot be normalized (zero norm or vanishing Born probabilities)."""

	message = "Vector cannot be normalized"


class RegisterSizeError(ValidationError):
	"""Register exceeds the configured amplitude budget."""

	message = "Register is too large"


class NotFoundError(SimulatorError):
	"""Subsystem, vertex or scenario not found."""

	exit_code = 2
	message = "Resource not found"


class ProtocolViolation(SimulatorError):
	"""A party broke locality or causality, or re-measured a subsystem."""

	exit_code = 3
	message = "Protocol rule violated"
