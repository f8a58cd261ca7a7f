"""
Verification Helpers

Fidelity sweeps over enumerated branches and the verdicts every protocol
run closes with.
"""

from collections.abc import Callable, Iterable

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.shared.logger import get_logger
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import DensityMatrix, LocalOperator, StateVector

from .transcript import BranchRecord, Mode, ProtocolTranscript, VerdictLog

logger = get_logger("protocols")


def qubit_target(alpha: complex, beta: complex, theta: float = 0.0) -> np.ndarray:
	"""alpha e^{i theta}|0> + beta e^{-i theta}|1>."""
	return np.array([alpha * np.exp(1j * theta), beta * np.exp(-1j * theta)], dtype=complex)


def product_target(vector, labels, entangler: LocalOperator | None = None) -> StateVector:
	"""
	One copy of ``vector`` per label, optionally followed by a joint diagonal gate.

	Args:
		vector: Single-qubit amplitudes
		labels: Receiver labels, in register order
		entangler: Operator over all the labels (targets are rebound)
	"""
	labels = tuple(labels)
	state = TensorService.make_state([2] * len(labels), [(label, vector) for label in labels], labels)
	if entangler is not None:
		state = TensorService.apply(state, entangler.on(*labels))
	return state


def state_fidelity(state: StateVector, target: StateVector | DensityMatrix) -> float:
	"""
	Fidelity of ``state`` (restricted to the target's subsystems) with ``target``.

	Subsystems of ``state`` the target does not name are traced out; the
	target's subsystem order is used for the comparison.
	"""
	if sorted(state.labels) == sorted(target.labels):
		return TensorService.fidelity(TensorService.reorder(state, target.labels), target)
	return TensorService.fidelity(TensorService.partial_trace(state, target.labels), target)


def worst_fidelity(
	branches: Iterable[BranchRecord],
	target: StateVector | Callable[[BranchRecord], StateVector | None],
	checkpoint: str | None = None,
) -> float:
	"""
	Minimum fidelity over possible branches.

	Args:
		branches: Branch records
		target: Fixed target, or a function of the branch returning a target
			(None skips the branch)
		checkpoint: Compare a named checkpoint instead of the final state

	Returns:
		float: Minimum fidelity, NaN when no branch was compared
	"""
	values = []
	for branch in branches:
		if not branch.possible:
			continue
		goal = target(branch) if callable(target) else target
		if goal is None:
			continue
		state = branch.checkpoints[checkpoint] if checkpoint else branch.final_state
		values.append(state_fidelity(state, goal))
	return float(min(values)) if values else float("nan")


def max_entry_error(a: np.ndarray, b: np.ndarray) -> float:
	return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def report_failures(name: str, log: VerdictLog) -> None:
	for verdict in log.verdicts:
		if not verdict.passed:
			logger.warning(
				"%s: verdict %s failed (value=%r target=%r tol=%r)",
				name,
				verdict.name,
				verdict.value,
				verdict.target,
				verdict.tolerance,
			)


def conclude(
	transcript: ProtocolTranscript,
	fidelity: float | None = None,
	name: str = "min_fidelity",
) -> ProtocolTranscript:
	"""
	Close a run: probability conservation, the fidelity verdict, locality and
	causality on every branch, and branch counts in the summary.

	Raises:
		ProtocolViolation: If a branch breaks locality or causality
	"""
	settings = get_settings()
	if transcript.mode == Mode.ENUMERATE:
		transcript.add_verdict("total_probability", transcript.total_probability, 1.0, settings.chained_tol)
	if fidelity is not None:
		transcript.add_verdict(name, fidelity, 1.0, settings.chained_tol, kind="min")
	transcript.check_contracts()
	transcript.summary.setdefault("branches", len(transcript.branches))
	transcript.summary.setdefault("possible_branches", len(transcript.possible_branches))
	report_failures(transcript.protocol, transcript)
	return transcript
