"""
Trine-State Key Protocols

Authentication and three-state key distribution on top of the broadcast
protocol. Alice broadcasts one of the trine states psi_0, psi_1, psi_2 per
round (alpha = beta = 1/sqrt(2), theta = 2 pi j / 3); each receiver learns
one label Alice did not send.
"""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import anti_trine_povm, trine_basis
from quantum_broadcast.library.states import BroadcastSpec, make_broadcast_state, trine_states
from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.rng import party_rng
from quantum_broadcast.shared.validators import validate_positive_int
from quantum_broadcast.tensor.types import Measurement

from .broadcast import announce_and_measure, correct_receivers, hand_out, receiver_names
from .session import ProtocolSession, run_protocol
from .transcript import BROADCAST, Mode, Party, PartyRole, ProtocolTranscript, VerdictLog
from .verification import conclude, product_target, report_failures, worst_fidelity

LABELS = (0, 1, 2)
STRATEGIES = ("projective", "povm")
# exact sifted fraction per receiver, from one-round Born-rule enumeration
EXPECTED_SIFTED_FRACTION = {"projective": 0.25, "povm": 0.5}

# receiver outcome -> label it rules out (None when inconclusive)
Exclusion = Callable[[int], int | None]


def trine_round(
	label: int,
	receivers: int,
	measurements: dict[str, Measurement],
	exclusions: dict[str, Exclusion] | None = None,
	announce: int | None = None,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
	name: str = "trine-round",
) -> ProtocolTranscript:
	"""
	Broadcast trine ``label`` to N receivers, then let each receiver measure.

	When ``announce`` is given, receivers report whether their outcome was
	conclusive and Alice announces the label she did not send.

	Returns:
		ProtocolTranscript: Branch notes carry ``outcomes`` keyed by receiver
	"""
	if label not in LABELS:
		raise ValidationError(f"Trine label must be 0, 1 or 2, got {label}")
	spec = BroadcastSpec(1, receivers)
	(a,) = spec.sender_labels
	bobs = receiver_names(spec.receivers)
	theta = trine_states().angle(label)

	def body(session: ProtocolSession) -> dict:
		hand_out(session, "Alice", spec.receiver_labels, bobs)
		messages = announce_and_measure(session, spec, ("Alice",), (a,), (theta,), (True,))
		correct_receivers(session, spec, bobs, spec.receiver_labels, messages)
		session.checkpoint("broadcast")
		outcomes = {}
		for bob, qubit in zip(bobs, spec.receiver_labels):
			outcomes[bob] = session.measure(bob, measurements[bob].on(qubit), label=bob)
		if announce is not None:
			for bob in bobs:
				conclusive = exclusions[bob](outcomes[bob]) is not None
				session.send(bob, BROADCAST, [int(conclusive)], tag="conclusive")
			session.send("Alice", BROADCAST, [announce], tag="not-sent")
		return {"outcomes": outcomes}

	parties = [Party("Alice", PartyRole.SENDER, (a, *spec.receiver_labels))]
	parties.extend(Party(bob, PartyRole.RECEIVER) for bob in bobs)
	transcript = run_protocol(
		name, make_broadcast_state(spec), parties, body, mode, seed, {"label": label, "N": spec.receivers}
	)
	target = product_target(trine_states().trine[label], spec.receiver_labels)
	return conclude(transcript, worst_fidelity(transcript.branches, target, checkpoint="broadcast"))


def hop_bit(sent: int, announced: int) -> int:
	"""
	Key bit from the hop between the sent and the announced label.

	0 when announced = sent + 1 (mod 3), 1 when announced = sent + 2.

	Raises:
		ValidationError: If Alice announces the label she sent
	"""
	step = (announced - sent) % 3
	if step == 0:
		raise ValidationError("Alice never announces the label she sent")
	return 0 if step == 1 else 1


def sift_round(sent: int, excluded: int | None, announced: int) -> tuple[int, int | None]:
	"""
	Alice's bit and the receiver's bit for one round.

	The receiver knows ``excluded`` from the measurement and ``announced``
	from Alice. When the two coincide (or the outcome was inconclusive)
	nothing can be inferred and the receiver's bit is None.

	Returns:
		tuple: (alice_bit, receiver_bit or None)
	"""
	alice = hop_bit(sent, announced)
	if excluded is None or excluded == announced:
		return alice, None
	inferred = 3 - excluded - announced
	return alice, hop_bit(inferred, announced)


@dataclass(eq=False)
class AuthenticationResult(VerdictLog):
	"""Sent labels, receiver outcomes and the exact per-label distributions."""

	labels: list[int]
	outcomes: dict[str, list[int]]
	exact: dict[int, ProtocolTranscript]
	verdicts: list = field(default_factory=list)
	summary: dict = field(default_factory=dict)

	def to_dict(self, verbose: bool = False) -> dict:
		data = {"summary": self.summary, "verdicts": [v.to_dict() for v in self.verdicts]}
		if verbose:
			data["labels"] = list(self.labels)
			data["outcomes"] = {bob: list(values) for bob, values in self.outcomes.items()}
		return data


def _povm_for(bobs) -> dict[str, Measurement]:
	povm = anti_trine_povm()
	return {bob: povm for bob in bobs}


def run_authentication(rounds: int, receivers: int = 2, seed: int | None = None) -> AuthenticationResult:
	"""
	Trine-state authentication.

	Every round Alice broadcasts a uniformly random trine state and every
	receiver applies the anti-trine POVM, whose outcome never equals the
	sent label. The exact part enumerates one round per label; the sampled
	part runs ``rounds`` seeded rounds.

	Returns:
		AuthenticationResult: verdicts ``sent_label_probability``,
			``marginal_error``, ``broadcast_fidelity``, ``sent_label_hits`` and,
			for two or more receivers, ``agreement_probability`` and
			``agreement_rate``
	"""
	settings = get_settings()
	rounds = validate_positive_int(rounds, "rounds")
	receivers = validate_positive_int(receivers, "N")
	seed = settings.default_seed if seed is None else int(seed)
	bobs = receiver_names(receivers)
	measurements = _povm_for(bobs)

	exact = {j: trine_round(j, receivers, measurements, name="auth-round") for j in LABELS}
	hit, marginal_error, agreement_error = 0.0, 0.0, 0.0
	for j, transcript in exact.items():
		for branch in transcript.branches:
			# impossible histories stop at the first zero-probability outcome
			if branch.possible:
				seen = branch.notes["outcomes"].values()
				hit += branch.probability * any(o == j for o in seen)
			else:
				hit += branch.probability
		for bob in bobs:
			for other in LABELS:
				if other == j:
					continue
				p = sum(b.probability for b in transcript.possible_branches if b.notes["outcomes"][bob] == other)
				marginal_error = max(marginal_error, abs(p - 0.5))
		if receivers >= 2:
			agree = sum(
				b.probability
				for b in transcript.possible_branches
				if b.notes["outcomes"][bobs[0]] == b.notes["outcomes"][bobs[1]]
			)
			agreement_error = max(agreement_error, abs(agree - 0.5))

	rng = party_rng(seed, "Alice")
	round_seeds = party_rng(seed, "rounds")
	labels = []
	outcomes = {bob: [] for bob in bobs}
	for _ in range(rounds):
		j = int(rng.integers(3))
		transcript = trine_round(
			j, receivers, measurements, mode=Mode.SAMPLE, seed=int(round_seeds.integers(2**62)), name="auth-round"
		)
		labels.append(j)
		for bob, outcome in transcript.final_notes["outcomes"].items():
			outcomes[bob].append(outcome)

	result = AuthenticationResult(labels, outcomes, exact)
	result.add_verdict("sent_label_probability", hit, 0.0, settings.algebraic_tol, kind="max")
	result.add_verdict("marginal_error", marginal_error, 0.0, settings.algebraic_tol, kind="max")
	result.add_verdict(
		"broadcast_fidelity",
		min(t.verdict("min_fidelity").value for t in exact.values()),
		1.0,
		settings.chained_tol,
		kind="min",
	)
	hits = sum(o == j for values in outcomes.values() for o, j in zip(values, labels))
	result.add_verdict("sent_label_hits", hits, 0, 0, kind="max")
	if receivers >= 2:
		result.add_verdict("agreement_probability", 0.5 + agreement_error, 0.5, settings.algebraic_tol)
		matches = np.array(outcomes[bobs[0]]) == np.array(outcomes[bobs[1]])
		rate = float(matches.mean())
		sigma = np.sqrt(0.25 / rounds)
		result.add_verdict("agreement_rate", rate, 0.5, 3 * sigma)
		result.summary.update(
			{
				"agreement_rate": rate,
				"sequence_agreement_probability": 0.5**rounds,
				"sequences_agree": bool(matches.all()),
			}
		)
	result.summary.update({"rounds": rounds, "receivers": receivers})
	report_failures("auth", result)
	return result


@dataclass(eq=False)
class QkdResult(VerdictLog):
	"""Per-round records and the sifted key Alice shares with each receiver."""

	strategy: str
	sent: list[int]
	announced: list[int]
	bases: dict[str, list[int | None]]
	excluded: dict[str, list[int | None]]
	keys: dict[str, tuple[list[int], list[int]]]
	verdicts: list = field(default_factory=list)
	summary: dict = field(default_factory=dict)

	def to_dict(self, verbose: bool = False) -> dict:
		data = {"summary": self.summary, "verdicts": [v.to_dict() for v in self.verdicts]}
		if verbose:
			data["keys"] = {bob: {"alice": a, "bob": b} for bob, (a, b) in self.keys.items()}
		return data


def _strategy_for(strategy: str, basis: int | None) -> tuple[Measurement, Exclusion]:
	if strategy == "povm":
		return anti_trine_povm(), lambda outcome: outcome
	# outcome 1 is the anti-trine state of the basis label, ruling that label out
	return trine_basis(basis), lambda outcome: basis if outcome == 1 else None


def expected_sifted_fraction(strategy: str) -> float:
	"""
	Exact probability that a round ends in a sifted bit for one receiver.

	Averages the Born-rule enumeration of one round over the sent label,
	the receiver's basis choice and Alice's announcement.
	"""
	if strategy not in STRATEGIES:
		raise ValidationError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
	bases = LABELS if strategy == "projective" else (None,)
	total = 0.0
	for sent in LABELS:
		for basis in bases:
			measurement, exclusion = _strategy_for(strategy, basis)
			transcript = trine_round(sent, 1, {"Bob1": measurement}, name="qkd-round")
			for branch in transcript.possible_branches:
				excluded = exclusion(branch.notes["outcomes"]["Bob1"])
				for announced in (k for k in LABELS if k != sent):
					if sift_round(sent, excluded, announced)[1] is not None:
						total += branch.probability / (2 * len(bases) * len(LABELS))
	return total


def run_qkd_pbc(
	rounds: int,
	receivers: int = 1,
	strategy: str = "projective",
	seed: int | None = None,
) -> QkdResult:
	"""
	Three-state key distribution with a broadcast sender.

	Each round: Alice broadcasts a random trine state; each receiver
	measures (projective: a random basis {psi_l, anti_l}; povm: the
	anti-trine POVM) and reports whether the outcome was conclusive; Alice
	announces a random label she did not send; bits follow the hop rule.
	Alice keeps a separate sifted key with each receiver.

	Returns:
		QkdResult: verdicts ``expected_sifted_fraction``, ``key_disagreements``
			and one ``sifted_fraction_<receiver>`` per receiver
	"""
	if strategy not in STRATEGIES:
		raise ValidationError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
	settings = get_settings()
	rounds = validate_positive_int(rounds, "rounds")
	receivers = validate_positive_int(receivers, "N")
	seed = settings.default_seed if seed is None else int(seed)
	bobs = receiver_names(receivers)

	alice_rng = party_rng(seed, "Alice")
	bob_rngs = {bob: party_rng(seed, bob) for bob in bobs}
	round_seeds = party_rng(seed, "rounds")
	sent, announced = [], []
	bases = {bob: [] for bob in bobs}
	excluded = {bob: [] for bob in bobs}
	keys = {bob: ([], []) for bob in bobs}

	for _ in range(rounds):
		j = int(alice_rng.integers(3))
		k = (j + 1 + int(alice_rng.integers(2))) % 3
		choices = {bob: int(bob_rngs[bob].integers(3)) if strategy == "projective" else None for bob in bobs}
		plans = {bob: _strategy_for(strategy, choices[bob]) for bob in bobs}
		transcript = trine_round(
			j,
			receivers,
			{bob: plan[0] for bob, plan in plans.items()},
			{bob: plan[1] for bob, plan in plans.items()},
			announce=k,
			mode=Mode.SAMPLE,
			seed=int(round_seeds.integers(2**62)),
			name="qkd-round",
		)
		sent.append(j)
		announced.append(k)
		for bob in bobs:
			ruled_out = plans[bob][1](transcript.final_notes["outcomes"][bob])
			bases[bob].append(choices[bob])
			excluded[bob].append(ruled_out)
			alice_bit, bob_bit = sift_round(j, ruled_out, k)
			if bob_bit is not None:
				keys[bob][0].append(alice_bit)
				keys[bob][1].append(bob_bit)

	result = QkdResult(strategy, sent, announced, bases, excluded, keys)
	expected = expected_sifted_fraction(strategy)
	result.add_verdict(
		"expected_sifted_fraction", expected, EXPECTED_SIFTED_FRACTION[strategy], settings.algebraic_tol
	)
	disagreements = sum(int(np.sum(np.array(a) != np.array(b))) for a, b in keys.values())
	result.add_verdict("key_disagreements", disagreements, 0, 0, kind="max")
	sigma = np.sqrt(expected * (1 - expected) / rounds)
	fractions = {}
	for bob in bobs:
		fractions[bob] = len(keys[bob][0]) / rounds
		result.add_verdict(f"sifted_fraction_{bob}", fractions[bob], expected, 3 * sigma)
	result.summary.update(
		{
			"rounds": rounds,
			"receivers": receivers,
			"strategy": strategy,
			"expected_sifted_fraction": expected,
			"sifted_fractions": fractions,
			"key_lengths": {bob: len(keys[bob][0]) for bob in bobs},
		}
	)
	if receivers >= 2:
		both = [
			i
			for i in range(rounds)
			if all(sift_round(sent[i], excluded[bob][i], announced[i])[1] is not None for bob in bobs[:2])
		]
		result.summary["shared_sifted_rounds"] = len(both) / rounds
	report_failures("qkd", result)
	return result
