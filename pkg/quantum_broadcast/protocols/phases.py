"""
Unknown Phase Protocols

Broadcasting an angle the sender does not know, read from an encoding
qudit d = (1/sqrt(K)) sum_k e^{i k theta}|k>.

For a restricted angle theta = 2 pi k / K the encoding survives untouched
and can be passed on. For a general angle the sender either measures d
(destroying it), measures the projector onto the unaffected levels, or
leaves d alone and accepts approximate receiver states.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import computational_basis, controlled_shift, shift_gate
from quantum_broadcast.library.states import BroadcastSpec, make_broadcast_state, phase_encoding_state, receiver_labels
from quantum_broadcast.shared.exceptions import DimensionError, ProtocolViolation, ValidationError
from quantum_broadcast.shared.validators import validate_dimension, validate_positive_int
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import DensityMatrix, Povm, StateVector

from .broadcast import announce_and_measure, correct_receivers, hand_out, receiver_names
from .session import ProtocolSession, run_protocol
from .transcript import BROADCAST, Mode, Party, PartyRole, ProtocolTranscript
from .verification import conclude, max_entry_error, product_target, worst_fidelity

ENCODING = "d"
PROVIDER = "Provider"
VARIANTS = ("destructive", "projector", "approximate")


@dataclass(frozen=True)
class PhaseEncoding:
	"""
	An angle stored in a K-level qudit.

	Restricted encodings carry the integer k with theta = 2 pi k / K.
	"""

	dim: int
	theta: float
	k: int | None = None

	@classmethod
	def restricted(cls, k: int, dim: int) -> "PhaseEncoding":
		"""
		Raises:
			ValidationError: If k is outside [0, K)
		"""
		dim = validate_dimension(dim, "K")
		k = validate_positive_int(k, "k", minimum=0)
		if k >= dim:
			raise ValidationError(f"k={k} must be below K={dim}")
		return cls(dim, 2 * np.pi * k / dim, k)

	@classmethod
	def general(cls, theta: float, dim: int) -> "PhaseEncoding":
		return cls(validate_dimension(dim, "K"), float(theta))

	@property
	def is_restricted(self) -> bool:
		return self.k is not None

	def state(self, label: str = ENCODING) -> StateVector:
		return phase_encoding_state(self.dim, self.theta, label)


def threshold_measurement(dim: int, threshold: int) -> Povm:
	"""Two-outcome projective measurement {I - Q, Q}, Q projecting onto levels >= threshold."""
	upper = np.diag([1.0 if k >= threshold else 0.0 for k in range(dim)]).astype(complex)
	return Povm((np.eye(dim) - upper, upper), name=f"Q{threshold}")


def residual_encoding(transcript: ProtocolTranscript, label: str = ENCODING) -> StateVector:
	"""
	The encoding qudit left by a run, as a pure state for the next sender.

	Raises:
		ProtocolViolation: If the qudit is gone or entangled with the rest
	"""
	branch = transcript.possible_branches[0]
	if branch.final_state is None or label not in branch.final_state.labels:
		raise ProtocolViolation(f"{label} does not survive this run")
	rho = TensorService.partial_trace(branch.final_state, [label])
	if rho.purity() < 1 - get_settings().chained_tol:
		raise ProtocolViolation(f"{label} is entangled with the receivers and cannot be handed on alone")
	_values, vectors = np.linalg.eigh(rho.mat)
	return TensorService.make_state(rho.dims, vectors[:, -1], [label])


def closed_form_rho_b(alpha: complex, beta: complex, theta: float, dim: int) -> np.ndarray:
	"""One receiver's state after an unmeasured use of a general-angle encoding (two receivers)."""
	u = np.array([alpha * np.exp(0.5j * theta), beta * np.exp(-0.5j * theta)])
	wrap = np.array(
		[
			[2 * abs(alpha) ** 2, alpha * np.conj(beta) * np.exp(1j * theta) * (1 + np.exp(-1j * dim * theta))],
			[np.conj(alpha) * beta * np.exp(-1j * theta) * (1 + np.exp(1j * dim * theta)), 2 * abs(beta) ** 2],
		]
	)
	return (dim - 2) / dim * np.outer(u, u.conj()) + wrap / dim


def closed_form_encoding_fidelity(alpha: complex, beta: complex, theta: float, dim: int) -> float:
	"""Fidelity of the encoding with its original after one unmeasured use (two receivers)."""
	return float(1 - 4 * abs(beta) ** 2 * (1 - np.cos(dim * theta)) * (dim - 2 + abs(alpha) ** 2) / dim**2)


def _encoding_input(encoding: StateVector | None, default: PhaseEncoding) -> StateVector:
	if encoding is None:
		return default.state()
	if tuple(encoding.labels) != (ENCODING,) or tuple(encoding.dims) != (default.dim,):
		raise DimensionError(f"Encoding state must be a single {default.dim}-level subsystem labelled {ENCODING!r}")
	return encoding


def send_phase_restricted(
	k: int,
	dim: int,
	receivers: int = 2,
	alpha: complex = 1 / np.sqrt(2),
	beta: complex = 1 / np.sqrt(2),
	encoding: StateVector | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Broadcast the restricted angle 2 pi k / K held in an encoding qudit.

	Alice shifts d by her qudit label, which multiplies alpha by
	e^{-2 pi i k / K} and leaves d unchanged, then runs the usual protocol.
	Receivers end with e^{-2 pi i k / K} alpha |0> + beta |1>; the provider
	gets d back.

	Args:
		k: Encoded integer, 0 <= k < K
		dim: K, at least N + 1
		receivers: N
		encoding: Encoding state to use instead of a fresh one (e.g. the
			residual of a previous run)

	Raises:
		ValidationError: If k is out of range
		DimensionError: If K < N + 1
	"""
	phase = PhaseEncoding.restricted(k, dim)
	spec = BroadcastSpec(1, receivers, alpha, beta)
	if phase.dim < spec.sender_dim:
		raise DimensionError(f"K={phase.dim} must be at least N + 1 = {spec.sender_dim}")
	d_state = _encoding_input(encoding, phase)
	initial = TensorService.tensor(make_broadcast_state(spec), d_state)
	(a,) = spec.sender_labels
	bobs = receiver_names(spec.receivers)
	imprint = controlled_shift(initial.subsystem(a), initial.subsystem(ENCODING))

	def body(session: ProtocolSession) -> dict:
		session.transfer(PROVIDER, ENCODING, "Alice")
		hand_out(session, "Alice", spec.receiver_labels, bobs)
		session.operate("Alice", imprint, label="imprint")
		messages = announce_and_measure(session, spec, ("Alice",), (a,), (0.0,), (False,))
		total = correct_receivers(session, spec, bobs, spec.receiver_labels, messages)
		session.transfer("Alice", ENCODING, PROVIDER)
		return {"outcome_sum": total}

	parties = [
		Party("Alice", PartyRole.SENDER, (a, *spec.receiver_labels)),
		Party(PROVIDER, PartyRole.PHASE_PROVIDER, (ENCODING,)),
		*(Party(name, PartyRole.RECEIVER) for name in bobs),
	]
	transcript = run_protocol(
		"phase-restricted", initial, parties, body, mode, seed, {"k": phase.k, "K": phase.dim, "N": spec.receivers}
	)

	vector = np.array([spec.alpha * np.exp(-2j * np.pi * phase.k / phase.dim), spec.beta])
	target = product_target(vector, spec.receiver_labels)
	transcript.add_verdict(
		"encoding_fidelity",
		worst_fidelity(transcript.branches, d_state),
		1.0,
		get_settings().algebraic_tol,
		kind="min",
	)
	transcript.summary["relative_phase"] = float(-2 * np.pi * phase.k / phase.dim)
	return conclude(transcript, worst_fidelity(transcript.branches, target))


def send_phase_general(
	theta: float,
	dim: int,
	variant: str = "destructive",
	receivers: int = 2,
	alpha: complex = 1 / np.sqrt(2),
	beta: complex = 1 / np.sqrt(2),
	uses: int = 1,
	encoding: StateVector | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Broadcast a general angle theta held in a K-level encoding qudit.

	Each use shifts d by the number of ones in the receiver block. Levels
	of d at or above N are untouched by the shift and carry the product
	state (alpha|0> + beta e^{-i theta}|1>)^N; the lowest N levels wrap
	around and leave entangled remainders.

	Variants:
		destructive: Alice measures d in the computational basis; success
			(outcome >= N) with probability (K - N)/K. One use only.
		projector: Alice measures Q_N, the projector onto levels >= N;
			success leaves d in the truncated encoding, which a second
			sender can use with Q_2N (success (K - 2N)/(K - N)).
		approximate: d is never measured. Receivers hold mixed states
			close to the target; a second sender can reuse d.

	Args:
		theta: Encoded angle
		dim: K >= 3 and K >= N + 1 (K > 2N for two uses)
		variant: "destructive", "projector" or "approximate"
		receivers: N receivers per sender
		uses: 1, or 2 for a second sender with a fresh receiver block
		encoding: Encoding state to use instead of a fresh one

	Raises:
		ValidationError: On an unknown variant, K < 3, or an invalid use count
	"""
	if variant not in VARIANTS:
		raise ValidationError(f"Unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
	dim = validate_positive_int(dim, "K", minimum=3)
	uses = validate_positive_int(uses, "uses")
	if uses > 2:
		raise ValidationError("At most two uses of the encoding are modelled")
	if variant == "destructive" and uses != 1:
		raise ValidationError("The destructive variant consumes the encoding; use it once")
	phase = PhaseEncoding.general(theta, dim)
	spec = BroadcastSpec(1, receivers, alpha, beta)
	n = spec.receivers
	if dim < n + 1:
		raise DimensionError(f"K={dim} must be at least N + 1 = {n + 1}")
	if uses == 2 and dim <= 2 * n:
		raise ValidationError(f"A second use needs K > 2N = {2 * n}")
	d_state = _encoding_input(encoding, phase)

	blocks = [(spec.sender_labels, spec.receiver_labels)]
	if uses == 2:
		blocks.append((("a2",), receiver_labels(n, prefix="c")))
	alices = ("Alice",) if uses == 1 else ("Alice1", "Alice2")
	bob_groups = [receiver_names(n, offset=index * n) for index in range(uses)]

	initial = make_broadcast_state(spec)
	for senders, labels in blocks[1:]:
		initial = TensorService.tensor(initial, make_broadcast_state(spec, senders=senders, receivers=labels))
	initial = TensorService.tensor(initial, d_state)
	d_id = initial.subsystem(ENCODING)
	advance = shift_gate(dim, n).on(ENCODING)

	def use(session: ProtocolSession, index: int) -> None:
		alice, bobs = alices[index], bob_groups[index]
		(a,), labels = blocks[index]
		hand_out(session, alice, labels, bobs)
		# d advances by the number of ones, N - k
		session.operate(alice, controlled_shift(initial.subsystem(a), d_id, direction=-1), label="imprint")
		session.operate(alice, advance, label="imprint")
		messages = announce_and_measure(session, spec, (alice,), (a,), (0.0,), (False,))
		correct_receivers(session, spec, bobs, labels, messages)

	def body(session: ProtocolSession) -> dict:
		session.transfer(PROVIDER, ENCODING, alices[0])
		notes = {}
		for index in range(uses):
			if index:
				session.transfer(alices[index - 1], ENCODING, alices[index])
			use(session, index)
			alice = alices[index]
			if variant == "destructive":
				level = session.measure(alice, computational_basis(dim).on(ENCODING), discard=True, label=ENCODING)
				success = level >= n
				notes["d_outcome"] = level
			elif variant == "projector":
				threshold = n * (index + 1)
				projector = threshold_measurement(dim, threshold).on(ENCODING)
				success = session.measure(alice, projector, label=f"Q{threshold}") == 1
			session.checkpoint(f"use-{index + 1}")
			if variant == "approximate":
				continue
			notes["success" if index == 0 else "second_success"] = success
			session.send(alice, BROADCAST, [int(success)], tag="success", abort=not success)
			if not success:
				break
		return notes

	parties = [
		Party(alice, PartyRole.SENDER, (senders[0], *labels)) for alice, (senders, labels) in zip(alices, blocks)
	]
	parties.append(Party(PROVIDER, PartyRole.PHASE_PROVIDER, (ENCODING,)))
	parties.extend(Party(name, PartyRole.RECEIVER) for group in bob_groups for name in group)
	transcript = run_protocol(
		f"phase-{variant}",
		initial,
		parties,
		body,
		mode,
		seed,
		{"theta": phase.theta, "K": dim, "N": n, "variant": variant, "uses": uses},
	)

	if variant == "approximate":
		_verify_approximate(transcript, spec, phase, blocks)
		return conclude(transcript)
	return _verify_heralded(transcript, spec, phase, blocks, variant)


def _verify_heralded(
	transcript: ProtocolTranscript,
	spec: BroadcastSpec,
	phase: PhaseEncoding,
	blocks: Sequence,
	variant: str,
) -> ProtocolTranscript:
	settings = get_settings()
	n, dim = spec.receivers, phase.dim
	vector = np.array([spec.alpha, spec.beta * np.exp(-1j * phase.theta)])
	branches = transcript.possible_branches
	first = sum(b.probability for b in branches if b.notes.get("success"))
	transcript.add_verdict("success_probability", first, (dim - n) / dim, settings.algebraic_tol)
	transcript.summary["success_probability"] = first

	targets = [product_target(vector, labels) for _senders, labels in blocks]
	transcript.add_verdict(
		"success_fidelity",
		worst_fidelity(branches, lambda b: targets[0] if b.notes.get("success") else None),
		1.0,
		settings.chained_tol,
		kind="min",
	)
	if variant == "projector":
		levels = np.arange(dim)
		for use_index, key in enumerate(("success", "second_success")[: len(blocks)]):
			threshold = n * (use_index + 1)
			amps = np.where(levels >= threshold, np.exp(1j * levels * phase.theta), 0)
			residual = TensorService.make_state([dim], amps, [ENCODING])
			transcript.add_verdict(
				f"residual_fidelity_{use_index + 1}",
				worst_fidelity(
					branches,
					lambda b, key=key: residual if b.notes.get(key) else None,
					checkpoint=f"use-{use_index + 1}",
				),
				1.0,
				settings.chained_tol,
				kind="min",
			)
	if len(blocks) == 2:
		both = sum(b.probability for b in branches if b.notes.get("second_success"))
		conditional = both / first if first else float("nan")
		transcript.add_verdict(
			"second_success_probability", conditional, (dim - 2 * n) / (dim - n), settings.algebraic_tol
		)
		transcript.summary["second_success_probability"] = conditional
		transcript.add_verdict(
			"second_success_fidelity",
			worst_fidelity(branches, lambda b: targets[1] if b.notes.get("second_success") else None),
			1.0,
			settings.chained_tol,
			kind="min",
		)
	return conclude(transcript)


def _verify_approximate(
	transcript: ProtocolTranscript, spec: BroadcastSpec, phase: PhaseEncoding, blocks: Sequence
) -> None:
	"""
	Check the approximate variant against its closed forms and keep the
	worst branch's reduced states on ``transcript.states``: ``rho_b`` (first
	receiver), ``rho_d`` (encoding) and, for two uses, ``rho_bcbc`` and
	``rho_noise``.
	"""
	settings = get_settings()
	n, dim, theta = spec.receivers, phase.dim, phase.theta
	branches = transcript.possible_branches
	original = phase.state()
	first_receiver = blocks[0][1][0]

	encodings = [TensorService.partial_trace(b.checkpoints["use-1"], [ENCODING]) for b in branches]
	fidelities = [TensorService.fidelity(rho_d, original) for rho_d in encodings]
	worst_index = int(np.argmin(fidelities))
	transcript.summary["encoding_fidelity"] = fidelities[worst_index]
	transcript.states["rho_d"] = encodings[worst_index]
	receiver_states = [TensorService.partial_trace(b.checkpoints["use-1"], [first_receiver]) for b in branches]
	transcript.states["rho_b"] = receiver_states[worst_index]

	if n == 2:
		expected = closed_form_encoding_fidelity(spec.alpha, spec.beta, theta, dim)
		worst = max(abs(f - expected) for f in fidelities)
		transcript.add_verdict("encoding_fidelity_error", worst, 0.0, settings.chained_tol, kind="max")
		rho_b = closed_form_rho_b(spec.alpha, spec.beta, theta, dim)
		error = max(max_entry_error(rho.mat, rho_b) for rho in receiver_states)
		transcript.add_verdict("rho_b_error", error, 0.0, settings.chained_tol, kind="max")
	else:
		transcript.summary["closed_form_checks"] = f"not applicable: closed forms cover 2 receivers, not {n}"

	if len(blocks) < 2:
		return
	labels = [label for _senders, block in blocks for label in block]
	vector = np.array([spec.alpha, spec.beta * np.exp(-1j * theta)])
	product = product_target(vector, labels)
	rho_prod = np.outer(product.amps, product.amps.conj())
	clean = (dim - 2 * n) / dim
	noise_norm, noise_floor, proportional = 0.0, 0.0, 0.0
	for index, branch in enumerate(branches):
		rho = TensorService.partial_trace(branch.checkpoints["use-2"], labels)
		noise = rho.mat - clean * rho_prod
		values = np.linalg.eigvalsh((noise + noise.conj().T) / 2)
		noise_norm = max(noise_norm, float(np.max(np.abs(values))))
		noise_floor = min(noise_floor, float(values.min()))
		proportional = max(proportional, max_entry_error(noise, (2 * n / dim) * rho_prod))
		if index == worst_index:
			transcript.states["rho_bcbc"] = rho
			transcript.states["rho_noise"] = DensityMatrix(rho.dims, noise, rho.labels)
	transcript.summary["noise_norm"] = noise_norm
	transcript.add_verdict("noise_norm", noise_norm, 2 * n / dim, settings.chained_tol, kind="max")
	transcript.add_verdict("noise_positive", noise_floor, 0.0, settings.psd_tol, kind="min")
	if abs(np.exp(1j * dim * theta) - 1) <= settings.algebraic_tol:
		transcript.add_verdict("noise_proportional_error", proportional, 0.0, settings.chained_tol, kind="max")
