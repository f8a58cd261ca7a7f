"""
Logging Utilities

Module loggers live under the ``quantum_broadcast`` namespace so a single
handler configured by the command line controls all of them.
"""

import logging
import sys

ROOT_LOGGER = "quantum_broadcast"


def get_logger(module: str | None = None) -> logging.Logger:
	"""
	Get a namespaced logger.

	Args:
		module: Short module name (e.g. "protocols"), or None for the root logger

	Returns:
		logging.Logger
	"""
	if not module:
		return logging.getLogger(ROOT_LOGGER)
	return logging.getLogger(f"{ROOT_LOGGER}.{module}")


def log_error(title: str, message: str, module: str | None = None) -> None:
	"""
	Record an error entry with a title.

	Args:
		title: Short title of the failure
		message: Details
		module: Optional module name for the logger
	"""
	get_logger(module).error("%s: %s", title, message)


def configure(verbose: bool = False) -> None:
	"""
	Attach a stderr handler to the package logger.

	Warnings and errors only, or everything from DEBUG up when verbose.
	Calling it again points the handler at the current stderr.
	"""
	logger = get_logger()
	logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
	for handler in logger.handlers:
		if isinstance(handler, logging.StreamHandler):
			handler.setStream(sys.stderr)
			return
	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] [%(name)s] %(message)s"))
	logger.addHandler(handler)
