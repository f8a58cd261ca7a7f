"""
Simulator Settings

Numeric policy shared by every domain: tolerances, the register cap and
defaults for seeds and trial counts.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

from quantum_broadcast.shared.exceptions import ValidationError


@dataclass(frozen=True)
class SimulatorSettings:
	"""Process-wide numeric settings."""

	algebraic_tol: float = 1e-12
	chained_tol: float = 1e-10
	psd_tol: float = 1e-10
	zero_probability: float = 1e-14
	max_register_size: int = 2**22
	default_seed: int = 0
	default_trials: int = 1000

	def __post_init__(self) -> None:
		for name in ("algebraic_tol", "chained_tol", "psd_tol", "zero_probability"):
			if not 0 < getattr(self, name) < 1:
				raise ValidationError(f"{name} must lie in (0, 1)")
		if self.max_register_size < 2:
			raise ValidationError("max_register_size must be at least 2")
		if self.default_seed < 0:
			raise ValidationError("default_seed must be non-negative")
		if self.default_trials < 1:
			raise ValidationError("default_trials must be at least 1")

	def with_overrides(self, **fields) -> "SimulatorSettings":
		"""Return a copy with some fields replaced."""
		return replace(self, **fields)

	@staticmethod
	def get_settings() -> "SimulatorSettings":
		"""
		Get the settings (cached).

		Returns:
			SimulatorSettings: The process-wide settings
		"""
		return _cached_settings()

	@staticmethod
	def clear_cache() -> None:
		"""Clear the cached settings."""
		_cached_settings.cache_clear()


@lru_cache(maxsize=1)
def _cached_settings() -> SimulatorSettings:
	return SimulatorSettings()


def get_settings() -> SimulatorSettings:
	return SimulatorSettings.get_settings()


__all__ = ["SimulatorSettings", "get_settings"]
