"""
Broadcast Protocols

The basic broadcast protocol, its rotated-basis and multi-sender
generalizations, and adding or removing senders from a shared template.

Every run starts with the first sender holding the receiver qubits; she
hands them out, the senders encode and measure their qudits in the Fourier
basis, broadcast the outcomes, and each receiver applies one phase
correction fixed by the outcome sum.
"""

from collections.abc import Sequence

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import (
	computational_basis,
	controlled_shift,
	correction_gate,
	fourier_basis,
	permutation_gate,
	sender_phase_gate,
	unitary,
)
from quantum_broadcast.library.states import BroadcastSpec, bell_pair, make_broadcast_state
from quantum_broadcast.shared.exceptions import DimensionError, ValidationError
from quantum_broadcast.shared.validators import validate_amplitudes, validate_angles, validate_unitary
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import LocalOperator, StateVector

from .session import ProtocolSession, run_protocol
from .transcript import BROADCAST, ClassicalMessage, Mode, Party, PartyRole, ProtocolTranscript
from .verification import conclude, product_target, qubit_target, worst_fidelity


def sender_names(count: int) -> tuple[str, ...]:
	return ("Alice",) if count == 1 else tuple(f"Alice{j}" for j in range(1, count + 1))


def receiver_names(count: int, offset: int = 0) -> tuple[str, ...]:
	return tuple(f"Bob{offset + l}" for l in range(1, count + 1))


def hand_out(session: ProtocolSession, holder: str, labels: Sequence[str], receivers: Sequence[str]) -> None:
	"""The preparing party sends one receiver qubit to each receiver."""
	for label, receiver in zip(labels, receivers):
		session.transfer(holder, label, receiver)


def announce_and_measure(
	session: ProtocolSession,
	spec: BroadcastSpec,
	senders: Sequence[str],
	sender_labels: Sequence[str],
	thetas: Sequence[float],
	active: Sequence[bool],
) -> list[ClassicalMessage]:
	"""
	Each sender applies her phase gate (if active), measures her qudit in the
	Fourier basis and broadcasts the outcome.
	"""
	dim = spec.sender_dim
	messages = []
	for alice, label, theta, is_active in zip(senders, sender_labels, thetas, active):
		if is_active:
			session.operate(alice, sender_phase_gate(dim, spec.receivers, theta).on(label), label="encode")
		outcome = session.measure(alice, fourier_basis(dim).on(label), discard=True, label=label)
		messages.append(session.send(alice, BROADCAST, [outcome], tag="outcome"))
	return messages


def correct_receivers(
	session: ProtocolSession,
	spec: BroadcastSpec,
	receivers: Sequence[str],
	receiver_labels: Sequence[str],
	messages: Sequence[ClassicalMessage],
	basis_change: np.ndarray | None = None,
) -> int:
	"""
	Apply the phase correction for the summed sender outcomes.

	With ``basis_change`` T the correction acts in the rotated basis,
	T C T^dagger.

	Returns:
		int: The outcome sum modulo the sender dimension
	"""
	total = sum(m.payload[0] for m in messages) % spec.sender_dim
	gate = correction_gate(total, spec.sender_dim)
	if basis_change is not None:
		gate = LocalOperator(basis_change @ gate.mat @ basis_change.conj().T, name=f"T{gate.name}T+")
	for bob, label in zip(receivers, receiver_labels):
		session.operate(bob, gate.on(label), depends_on=messages, label="correct")
	return total


def broadcast_parties(spec: BroadcastSpec, senders: Sequence[str], receivers: Sequence[str]) -> list[Party]:
	parties = []
	for index, (name, label) in enumerate(zip(senders, spec.sender_labels)):
		held = (label, *spec.receiver_labels) if index == 0 else (label,)
		parties.append(Party(name, PartyRole.SENDER, held))
	parties.extend(Party(name, PartyRole.RECEIVER) for name in receivers)
	return parties


def pre_correction_target(spec: BroadcastSpec, total_theta: float, outcome_sum: int) -> StateVector:
	"""
	Receiver state after the sender measurements, before correction.

	Every |0> picks up e^{-2 pi i s / D} for the outcome sum s.
	"""
	phase = np.exp(-2j * np.pi * outcome_sum / spec.sender_dim)
	vector = qubit_target(spec.alpha * phase, spec.beta, total_theta)
	entangler = spec.entangler.operator() if spec.entangler is not None else None
	return product_target(vector, spec.receiver_labels, entangler)


def run_multisender(
	senders: int,
	receivers: int,
	alpha: complex = 1 / np.sqrt(2),
	beta: complex = 1 / np.sqrt(2),
	thetas: Sequence[float] | None = None,
	active: Sequence[int] | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	entangler=None,
	name: str = "multisender",
) -> ProtocolTranscript:
	"""
	M senders broadcast the sum of their angles to N receivers.

	Inactive senders skip their phase gate but still measure and announce.

	Args:
		senders: M >= 1
		receivers: N >= 1
		alpha, beta: Template amplitudes
		thetas: One angle per sender (default all zero)
		active: 1-based indices of senders that encode (default all)
		mode: "enumerate" or "sample"
		seed: Master seed for sample mode
		entangler: Optional DiagonalPhaseGate on the receiver block

	Returns:
		ProtocolTranscript: With verdicts ``min_fidelity`` (corrected
			receivers against the summed-angle target) and
			``pre_correction_fidelity`` (outcome-dependent phases before
			correction)
	"""
	spec = BroadcastSpec(senders, receivers, alpha, beta, entangler)
	if spec.senders < 1:
		raise ValidationError("At least one sender is required")
	thetas = validate_angles(thetas if thetas is not None else [0.0] * spec.senders, "thetas", spec.senders)
	indices = range(1, spec.senders + 1)
	chosen = set(indices) if active is None else {int(j) for j in active}
	if not chosen <= set(indices):
		raise ValidationError(f"Active senders {sorted(chosen)} must lie in 1..{spec.senders}")
	flags = tuple(j in chosen for j in indices)
	total_theta = float(sum(t for t, on in zip(thetas, flags) if on))

	alices = sender_names(spec.senders)
	bobs = receiver_names(spec.receivers)

	def body(session: ProtocolSession) -> dict:
		hand_out(session, alices[0], spec.receiver_labels, bobs)
		messages = announce_and_measure(session, spec, alices, spec.sender_labels, thetas, flags)
		session.checkpoint("pre-correction")
		total = correct_receivers(session, spec, bobs, spec.receiver_labels, messages)
		return {"outcome_sum": total}

	transcript = run_protocol(
		name,
		make_broadcast_state(spec),
		broadcast_parties(spec, alices, bobs),
		body,
		mode,
		seed,
		{"M": spec.senders, "N": spec.receivers, "thetas": list(thetas), "active": sorted(chosen)},
	)
	entangler_op = spec.entangler.operator() if spec.entangler is not None else None
	target = product_target(qubit_target(spec.alpha, spec.beta, total_theta), spec.receiver_labels, entangler_op)
	before = worst_fidelity(
		transcript.branches,
		lambda b: pre_correction_target(spec, total_theta, b.notes["outcome_sum"]),
		checkpoint="pre-correction",
	)
	transcript.add_verdict("pre_correction_fidelity", before, 1.0, get_settings().chained_tol, kind="min")
	transcript.summary["total_theta"] = total_theta
	return conclude(transcript, worst_fidelity(transcript.branches, target))


def run_bbp(
	alpha: complex = 1 / np.sqrt(2),
	beta: complex = 1 / np.sqrt(2),
	theta: float = 0.0,
	receivers: int = 2,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Basic broadcast protocol: one sender, N receivers.

	Each receiver ends with alpha e^{i theta}|0> + beta e^{-i theta}|1>.
	"""
	return run_multisender(1, receivers, alpha, beta, [theta], mode=mode, seed=seed, name="bbp")


def run_bbp_rotated(
	rotation,
	psi: Sequence[complex] = (1.0, 0.0),
	theta: float = 0.0,
	receivers: int = 2,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Broadcast in the basis {T|0>, T|1>} starting from N copies of psi.

	Alice applies T^dagger to every qubit, counts ones into a qudit with
	controlled V (V|j> = |j - 1 mod D>), rotates the qubits back with T and
	runs the usual protocol in the rotated basis. Receivers end with
	(e^{i theta}|s0><s0| + e^{-i theta}|s1><s1|) psi, s_i = T|i>.

	Raises:
		ValidationError: If T is not unitary
	"""
	t = validate_unitary(rotation, "T")
	if t.shape != (2, 2):
		raise DimensionError("T must be a 2x2 unitary")
	psi = validate_amplitudes(*psi)
	mu, nu = t.conj().T @ np.array(psi)
	spec = BroadcastSpec(1, receivers, mu, nu)
	dim = spec.sender_dim
	sender, label = "Alice", spec.sender_labels[0]
	bobs = receiver_names(spec.receivers)

	initial = TensorService.make_state(
		[dim] + [2] * spec.receivers,
		[(b, psi) for b in spec.receiver_labels],
		(label, *spec.receiver_labels),
	)
	qudit = initial.subsystem(label)
	rotate_in = unitary(t.conj().T, "T+")
	rotate_out = unitary(t, "T")
	# counted label is -(ones) mod D; relabel to the number of zeros
	relabel = permutation_gate([spec.receivers] + list(range(spec.receivers)))

	def body(session: ProtocolSession) -> dict:
		for b in spec.receiver_labels:
			session.operate(sender, rotate_in.on(b))
		for b in spec.receiver_labels:
			session.operate(sender, controlled_shift(initial.subsystem(b), qudit, direction=-1), label="count")
		for b in spec.receiver_labels:
			session.operate(sender, rotate_out.on(b))
		session.checkpoint("template")
		session.operate(sender, relabel.on(label))
		hand_out(session, sender, spec.receiver_labels, bobs)
		messages = announce_and_measure(session, spec, (sender,), (label,), (theta,), (True,))
		total = correct_receivers(session, spec, bobs, spec.receiver_labels, messages, basis_change=t)
		return {"outcome_sum": total}

	parties = [Party(sender, PartyRole.SENDER, initial.labels)] + [Party(b, PartyRole.RECEIVER) for b in bobs]
	transcript = run_protocol(
		"bbp-rotated", initial, parties, body, mode, seed, {"N": spec.receivers, "theta": float(theta)}
	)

	template = make_broadcast_state(spec)
	template = TensorService.apply(template, relabel.dagger.on(label))
	for b in spec.receiver_labels:
		template = TensorService.apply(template, rotate_out.on(b))
	settings = get_settings()
	transcript.add_verdict(
		"template_fidelity",
		worst_fidelity(transcript.branches, template, checkpoint="template"),
		1.0,
		settings.chained_tol,
		kind="min",
	)

	vector = t @ np.diag([np.exp(1j * theta), np.exp(-1j * theta)]) @ t.conj().T @ np.array(psi)
	target = product_target(vector, spec.receiver_labels)
	transcript.summary.update({"mu": [float(mu.real), float(mu.imag)], "nu": [float(nu.real), float(nu.imag)]})
	return conclude(transcript, worst_fidelity(transcript.branches, target))


def add_sender(
	spec: BroadcastSpec,
	state: StateVector | None = None,
	pair_dim: int | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> tuple[StateVector, ProtocolTranscript]:
	"""
	Extend a template from M to M + 1 senders.

	The last sender shares a maximally entangled pair with the newcomer,
	shifts her half of it by her own qudit, measures it in the computational
	basis and announces j; the newcomer relabels |j - k> -> |k>.

	Args:
		spec: Parameters of the input template (M >= 1)
		state: Input template (default: built from ``spec``)
		pair_dim: Dimension of the shared pair (must be N + 1)

	Returns:
		tuple: (state over a1..a(M+1), b1..bN; transcript)

	Raises:
		DimensionError: If the pair dimension differs from N + 1
	"""
	if spec.senders < 1:
		raise ValidationError("Adding a sender needs an existing sender to share entanglement")
	dim = spec.sender_dim
	pair_dim = dim if pair_dim is None else int(pair_dim)
	if pair_dim != dim:
		raise DimensionError(f"Shared pair has dimension {pair_dim}; the senders' qudits have {dim}")
	state = make_broadcast_state(spec) if state is None else state
	if sorted(state.labels) != sorted(spec.sender_labels + spec.receiver_labels):
		raise ValidationError("Input state labels must match the template's senders and receivers")

	grown = BroadcastSpec(spec.senders + 1, spec.receivers, spec.alpha, spec.beta, spec.entangler)
	last, newcomer = spec.sender_labels[-1], grown.sender_labels[-1]
	half = f"{last}'"
	initial = TensorService.tensor(state, bell_pair(dim, (half, newcomer)))

	alices = sender_names(grown.senders)
	bobs = receiver_names(spec.receivers)
	parties = [Party(name, PartyRole.SENDER, (label,)) for name, label in zip(alices, spec.sender_labels)]
	parties[-1] = Party(alices[spec.senders - 1], PartyRole.SENDER, (last, half))
	parties.append(Party(alices[-1], PartyRole.SENDER, (newcomer,)))
	parties.extend(Party(name, PartyRole.RECEIVER, (label,)) for name, label in zip(bobs, spec.receiver_labels))
	shift = controlled_shift(initial.subsystem(last), initial.subsystem(half))

	def body(session: ProtocolSession) -> dict:
		holder = alices[spec.senders - 1]
		session.operate(holder, shift, label="share")
		j = session.measure(holder, computational_basis(dim).on(half), discard=True, label=half)
		message = session.send(holder, alices[-1], [j], tag="pair-outcome")
		session.operate(
			alices[-1],
			permutation_gate([(j - x) % dim for x in range(dim)]).on(newcomer),
			depends_on=[message],
			label="relabel",
		)
		return {"pair_outcome": j}

	transcript = run_protocol(
		"add-sender", initial, parties, body, mode, seed, {"M": spec.senders, "N": spec.receivers}
	)
	target = make_broadcast_state(grown)
	transcript = conclude(transcript, worst_fidelity(transcript.branches, target))
	result = TensorService.reorder(transcript.final_state, target.labels)
	return result, transcript


def delete_sender(
	spec: BroadcastSpec,
	which: int | None = None,
	state: StateVector | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Remove one sender from a template.

	The leaving sender measures her qudit in the Fourier basis and broadcasts
	the outcome; receivers apply the usual correction. The rest of the
	register is left in the template over the remaining senders.

	Args:
		spec: Parameters of the input template
		which: 1-based index of the leaving sender (default the last)
		state: Input template (default: built from ``spec``)
	"""
	if spec.senders < 1:
		raise ValidationError("There is no sender to delete")
	which = spec.senders if which is None else int(which)
	if not 1 <= which <= spec.senders:
		raise ValidationError(f"Sender index {which} out of range 1..{spec.senders}")
	state = make_broadcast_state(spec) if state is None else state
	if sorted(state.labels) != sorted(spec.sender_labels + spec.receiver_labels):
		raise ValidationError("Input state labels must match the template's senders and receivers")

	alices = sender_names(spec.senders)
	bobs = receiver_names(spec.receivers)
	leaving, label = alices[which - 1], spec.sender_labels[which - 1]
	parties = [Party(name, PartyRole.SENDER, (lbl,)) for name, lbl in zip(alices, spec.sender_labels)]
	parties.extend(Party(name, PartyRole.RECEIVER, (lbl,)) for name, lbl in zip(bobs, spec.receiver_labels))

	def body(session: ProtocolSession) -> dict:
		messages = announce_and_measure(session, spec, (leaving,), (label,), (0.0,), (False,))
		total = correct_receivers(session, spec, bobs, spec.receiver_labels, messages)
		return {"outcome_sum": total}

	transcript = run_protocol(
		"delete-sender", state, parties, body, mode, seed, {"M": spec.senders, "N": spec.receivers, "which": which}
	)
	remaining = tuple(lbl for lbl in spec.sender_labels if lbl != label)
	shrunk = BroadcastSpec(spec.senders - 1, spec.receivers, spec.alpha, spec.beta, spec.entangler)
	target = make_broadcast_state(shrunk, senders=remaining)
	return conclude(transcript, worst_fidelity(transcript.branches, target))
