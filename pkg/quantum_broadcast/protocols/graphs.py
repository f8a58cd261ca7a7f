"""
Graph and Stabilizer Protocols

Distribution of entangled receiver states: templates with a diagonal
entangler on the receiver block, stabilizer states through controlled
stabilizers, teleported phase gates on graph states, graph reduction by
Z measurements and the two GHZ constructions.
"""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.library.gates import (
	PAULI_MATRICES,
	computational_basis,
	controlled_gate,
	cz,
	hadamard,
	pauli,
	rotated_x_basis,
	x_basis,
	z_rotation,
)
from quantum_broadcast.library.graphs import Graph
from quantum_broadcast.library.pauli import PauliString, check_stabilizer_generators, minimal_weight_solution
from quantum_broadcast.library.states import (
	BroadcastSpec,
	dicke_state,
	ghz_state,
	graph_state,
	make_broadcast_state,
	plus_state,
	receiver_labels,
	stabilizer_state,
)
from quantum_broadcast.shared.exceptions import ProtocolViolation, ValidationError
from quantum_broadcast.shared.validators import validate_angles, validate_positive_int, validate_subset
from quantum_broadcast.tensor.service import TensorService
from quantum_broadcast.tensor.types import StateVector

from .broadcast import broadcast_parties, hand_out, receiver_names, run_multisender, sender_names
from .session import ProtocolSession, run_protocol
from .transcript import BROADCAST, BranchRecord, Mode, Party, PartyRole, ProtocolTranscript
from .verification import conclude, worst_fidelity

ALICE = "Alice"
PLUS = np.ones(2) / np.sqrt(2)


@dataclass
class OutcomeRecord:
	"""
	Measurement bits of a graph-state run.

	``s`` holds the sender's outcome per vertex and ``t`` the parity each
	vertex inherits from other outcomes. ``byproducts`` maps a logical wire to
	its pending Pauli exponents (x, z).
	"""

	s: dict = field(default_factory=dict)
	t: dict = field(default_factory=dict)
	byproducts: dict = field(default_factory=dict)

	@property
	def w(self) -> dict:
		"""w_v = s_v XOR t_v."""
		vertices = list(self.s) + [v for v in self.t if v not in self.s]
		return {v: (self.s.get(v, 0) ^ self.t.get(v, 0)) for v in vertices}

	def add_parity(self, vertex, bit: int) -> None:
		self.t[vertex] = self.t.get(vertex, 0) ^ (int(bit) & 1)

	def to_dict(self) -> dict:
		return {
			"s": {str(v): int(b) for v, b in self.s.items()},
			"t": {str(v): int(b) for v, b in self.t.items()},
			"w": {str(v): int(b) for v, b in self.w.items()},
			"byproducts": {str(k): [int(x), int(z)] for k, (x, z) in self.byproducts.items()},
		}


def vertex_labels(graph: Graph, prefix: str = "b") -> tuple[str, ...]:
	return tuple(f"{prefix}{v}" for v in graph.vertices)


def vertex_owners(graph: Graph) -> tuple[str, ...]:
	return tuple(f"Bob{v}" for v in graph.vertices)


def ghz_stabilizers(count: int) -> list[PauliString]:
	"""X...X and Z_i Z_(i+1) for neighbouring positions."""
	count = validate_positive_int(count, "GHZ size", minimum=2)
	generators = [PauliString("X" * count)]
	for i in range(count - 1):
		generators.append(PauliString("I" * i + "ZZ" + "I" * (count - i - 2)))
	return generators


def stabilizer_values(state: StateVector, generators: Iterable[PauliString], labels: Sequence[str]) -> list[float]:
	"""Real expectation of each Pauli string on ``labels``."""
	return [float(TensorService.expectation(state, g.operator(labels)).real) for g in generators]


def correction_for(generators: Sequence[PauliString], signs: Sequence[int]) -> PauliString:
	"""
	Minimal-weight Pauli product flipping exactly the generators with sign bit 1.

	A Pauli P flips S_k iff their symplectic product is 1, so P solves
	[z_k | x_k] . (x, z) = s_k over GF(2).

	Raises:
		ProtocolViolation: If no Pauli product realizes the signs
	"""
	n = generators[0].num_qubits
	matrix = np.array([np.concatenate([g.z_bits, g.x_bits]) for g in generators], dtype=np.uint8)
	solution = minimal_weight_solution(
		matrix, np.array(signs, dtype=np.uint8), lambda v: int(np.count_nonzero(v[:n] | v[n:]))
	)
	if solution is None:
		raise ProtocolViolation(f"No Pauli correction realizes signs {list(signs)}")
	return PauliString.from_bits(solution[:n], solution[n:])


def apply_controlled_stabilizer(
	session: ProtocolSession, party: str, control: str, generator: PauliString, targets: Sequence[str]
) -> None:
	"""Controlled S as a product of two-qubit controlled Paulis; a -1 sign becomes Z on the control."""
	for letter, target in zip(generator.letters, targets):
		if letter != "I":
			gate = controlled_gate(PAULI_MATRICES[letter], name=f"C{letter}")
			session.operate(party, gate.on(control, target), label="control-stabilizer")
	if generator.phase == 2:
		session.operate(party, pauli("Z").on(control), label="control-stabilizer")


def _worst(
	branches: Iterable[BranchRecord],
	evaluate: Callable[[BranchRecord, StateVector], float],
	checkpoint: str | None = None,
	largest: bool = False,
) -> float:
	values = []
	for branch in branches:
		if branch.possible:
			state = branch.checkpoints[checkpoint] if checkpoint else branch.final_state
			values.append(evaluate(branch, state))
	if not values:
		return float("nan")
	return float(max(values) if largest else min(values))


def _with_z(state: StateVector, labels: Iterable[str]) -> StateVector:
	for label in labels:
		state = TensorService.apply(state, pauli("Z").on(label))
	return state


def run_graph_dist_phase(
	spec: BroadcastSpec,
	thetas: Sequence[float] | None = None,
	abort: bool = False,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Broadcast a template whose receiver block carries a diagonal entangler.

	Without abort this is the multi-sender protocol; the correction phases
	commute with the entangler, so receivers end in U (x)_l psi_l. With abort
	every sender measures in the computational basis instead and no
	correction follows; the receivers are left in U|k; N-k>.

	Raises:
		ValidationError: If the spec has no sender or no entangler
	"""
	if spec.entangler is None:
		raise ValidationError("Graph distribution needs an entangler on the receiver block")
	if spec.senders < 1:
		raise ValidationError("At least one sender is required")
	if not abort:
		return run_multisender(
			spec.senders,
			spec.receivers,
			spec.alpha,
			spec.beta,
			thetas,
			mode=mode,
			seed=seed,
			entangler=spec.entangler,
			name="graph-dist-phase",
		)

	alices = sender_names(spec.senders)
	bobs = receiver_names(spec.receivers)
	dim = spec.sender_dim

	def body(session: ProtocolSession) -> dict:
		hand_out(session, alices[0], spec.receiver_labels, bobs)
		counts = []
		for alice, label in zip(alices, spec.sender_labels):
			k = session.measure(alice, computational_basis(dim).on(label), discard=True, label=label)
			session.send(alice, BROADCAST, [k], tag="abort", abort=True)
			counts.append(k)
		return {"k": counts[0], "entangled": not TensorService.is_product_state(session.state)}

	transcript = run_protocol(
		"graph-dist-phase",
		make_broadcast_state(spec),
		broadcast_parties(spec, alices, bobs),
		body,
		mode,
		seed,
		{"M": spec.senders, "N": spec.receivers, "abort": True},
	)
	entangler = spec.entangler.operator().on(*spec.receiver_labels)

	def leftover(branch: BranchRecord) -> StateVector:
		return TensorService.apply(dicke_state(spec.receivers, branch.notes["k"], spec.receiver_labels), entangler)

	transcript.add_verdict(
		"leftover_fidelity",
		worst_fidelity(transcript.branches, leftover),
		1.0,
		get_settings().chained_tol,
		kind="min",
	)
	transcript.summary["aborted"] = True
	transcript.summary["entangled_leftovers"] = sum(b.notes["entangled"] for b in transcript.possible_branches)
	return conclude(transcript)


def _stabilizer_protocol(
	name: str,
	generators: list[PauliString],
	targets: Sequence[str],
	bobs: Sequence[str],
	abort: bool,
	mode: Mode | str,
	seed: int | None,
	byproduct_target: Callable[[list[int]], StateVector] | None = None,
) -> ProtocolTranscript:
	check_stabilizer_generators(generators)
	targets, bobs = tuple(targets), tuple(bobs)
	controls = tuple(f"a{k}" for k in range(1, len(generators) + 1))
	initial = plus_state(len(controls) + len(targets), controls + targets)
	parties = [Party(ALICE, PartyRole.SENDER, controls + targets)]
	parties.extend(Party(bob, PartyRole.RECEIVER) for bob in bobs)

	def body(session: ProtocolSession) -> dict:
		for control, generator in zip(controls, generators):
			apply_controlled_stabilizer(session, ALICE, control, generator, targets)
		hand_out(session, ALICE, targets, bobs)
		basis = computational_basis(2) if abort else x_basis()
		signs = [session.measure(ALICE, basis.on(c), discard=True, label=c) for c in controls]
		message = session.send(ALICE, BROADCAST, signs, tag="abort" if abort else "signs", abort=abort)
		if abort:
			return {"applied": signs}
		session.checkpoint("pre-correction")
		correction = correction_for(generators, signs)
		for letter, target, bob in zip(correction.letters, targets, bobs):
			if letter != "I":
				session.operate(bob, pauli(letter).on(target), depends_on=[message], label="correct")
		return {"signs": signs, "correction": str(correction)}

	transcript = run_protocol(
		name, initial, parties, body, mode, seed, {"stabilizers": [str(g) for g in generators], "abort": abort}
	)
	tol = get_settings().chained_tol

	if abort:
		def entropy(branch: BranchRecord, state: StateVector) -> float:
			return max(TensorService.bipartition_entropies(state).values(), default=0.0)

		transcript.add_verdict(
			"max_entanglement_entropy", _worst(transcript.branches, entropy, largest=True), 0.0, tol, kind="max"
		)
		transcript.summary["aborted"] = True
		return conclude(transcript)

	def signed(branch: BranchRecord, state: StateVector) -> float:
		values = stabilizer_values(state, generators, targets)
		return min((-1) ** s * v for s, v in zip(branch.notes["signs"], values))

	transcript.add_verdict(
		"pre_correction_signs", _worst(transcript.branches, signed, "pre-correction"), 1.0, tol, kind="min"
	)
	transcript.add_verdict(
		"stabilizer_values",
		_worst(transcript.branches, lambda b, s: min(stabilizer_values(s, generators, targets))),
		1.0,
		tol,
		kind="min",
	)
	if byproduct_target is not None:
		transcript.add_verdict(
			"byproduct_fidelity",
			worst_fidelity(transcript.branches, lambda b: byproduct_target(b.notes["signs"]), "pre-correction"),
			1.0,
			tol,
			kind="min",
		)
	fidelity = None
	if len(generators) == generators[0].num_qubits:
		fidelity = worst_fidelity(transcript.branches, stabilizer_state(generators, targets))
	transcript.summary["impossible_branches"] = len(transcript.branches) - len(transcript.possible_branches)
	return conclude(transcript, fidelity)


def run_stabilizer_broadcast(
	stabilizers: Sequence[PauliString | str],
	abort: bool = False,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Broadcast a stabilizer state through controlled stabilizers.

	Alice prepares one |+> control per generator and N |+> targets, applies
	each controlled S_k, hands the targets out and measures the controls.
	X outcomes fix the generator signs and a Pauli correction is announced;
	Z outcomes only record which S_k were applied, leaving a product state.

	Args:
		stabilizers: Signed Pauli strings ("+XZI") or PauliString objects
		abort: Measure the controls in Z instead of X

	Raises:
		ValidationError: If the generators are not an independent commuting
			set of Hermitian Pauli strings
	"""
	generators = [s if isinstance(s, PauliString) else PauliString.parse(s) for s in stabilizers]
	check_stabilizer_generators(generators)
	n = generators[0].num_qubits
	return _stabilizer_protocol(
		"stab-broadcast", generators, receiver_labels(n), receiver_names(n), abort, mode, seed
	)


def distribute_graph_state(
	graph: Graph,
	abort: bool = False,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Stabilizer broadcast with the graph generators K_v.

	Before correction each branch holds (prod_v Z_v^s(v)) |psi_G>; this is
	checked as ``byproduct_fidelity``.
	"""
	if not graph.vertices:
		raise ValidationError("Graph has no vertices")
	targets = vertex_labels(graph)

	def byproduct(signs: list[int]) -> StateVector:
		return _with_z(graph_state(graph, targets), [t for t, s in zip(targets, signs) if s])

	return _stabilizer_protocol(
		"graph-broadcast", graph.stabilizers(), targets, vertex_owners(graph), abort, mode, seed, byproduct
	)


def teleport_phase_gate(
	graph: Graph,
	angles: dict,
	correct: bool = True,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Teleport e^{i theta Z} onto chosen vertices of a graph state.

	Per chosen vertex Alice couples a |+> ancilla to it with CZ before
	handing the graph qubits out, then measures the ancilla in
	{e^{-i theta X}|s>}. The vertex picks up Z^s e^{i theta Z}; the receiver
	undoes Z^s on the announced outcome.

	Args:
		graph: Graph of the shared state
		angles: Mapping vertex -> theta
		correct: Apply the Z^s corrections

	Raises:
		NotFoundError: If a vertex is not in the graph
	"""
	if not angles:
		raise ValidationError("At least one vertex angle is required")
	chosen = validate_subset(angles.keys(), graph.vertices, "vertices")
	thetas = dict(zip(chosen, validate_angles([angles[v] for v in chosen], "angles")))
	labels = dict(zip(graph.vertices, vertex_labels(graph)))
	owners = dict(zip(graph.vertices, vertex_owners(graph)))
	initial = graph_state(graph, tuple(labels.values()))
	parties = [Party(ALICE, PartyRole.SENDER, initial.labels)]
	parties.extend(Party(owners[v], PartyRole.RECEIVER) for v in graph.vertices)

	def body(session: ProtocolSession) -> dict:
		for v in chosen:
			session.attach(ALICE, plus_state(1, [f"a{v}"]))
			session.operate(ALICE, cz().on(f"a{v}", labels[v]), label="couple")
		hand_out(session, ALICE, tuple(labels.values()), tuple(owners.values()))
		outcomes, messages = {}, {}
		for v in chosen:
			ancilla = f"a{v}"
			outcomes[v] = session.measure(ALICE, rotated_x_basis(thetas[v]).on(ancilla), discard=True, label=ancilla)
			messages[v] = session.send(ALICE, owners[v], [outcomes[v]], tag="teleport")
		session.checkpoint("pre-correction")
		if correct:
			for v in chosen:
				if outcomes[v]:
					session.operate(owners[v], pauli("Z").on(labels[v]), depends_on=[messages[v]], label="correct")
		return {"outcomes": {str(v): s for v, s in outcomes.items()}}

	def decorated(outcomes: dict) -> StateVector:
		state = initial
		for v in chosen:
			state = TensorService.apply(state, z_rotation(thetas[v]).on(labels[v]))
		return _with_z(state, [labels[v] for v in chosen if outcomes.get(str(v))])

	transcript = run_protocol(
		"phase-teleport",
		initial,
		parties,
		body,
		mode,
		seed,
		{"angles": {str(v): thetas[v] for v in chosen}, "correct": correct},
	)
	transcript.add_verdict(
		"pre_correction_fidelity",
		worst_fidelity(transcript.branches, lambda b: decorated(b.notes["outcomes"]), "pre-correction"),
		1.0,
		get_settings().chained_tol,
		kind="min",
	)
	if correct:
		fidelity = worst_fidelity(transcript.branches, decorated({}))
	else:
		fidelity = worst_fidelity(transcript.branches, lambda b: decorated(b.notes["outcomes"]))
	return conclude(transcript, fidelity)


def reduction_parities(graph: Graph, keep: Iterable, outcomes: dict) -> dict:
	"""t(v) for kept vertices: parity of the outcomes of dropped neighbours."""
	kept = set(keep)
	parities = {v: 0 for v in graph.vertices if v in kept}
	for u, v in graph.edges:
		if u in kept and v not in kept:
			parities[u] ^= outcomes[v]
		elif v in kept and u not in kept:
			parities[v] ^= outcomes[u]
	return parities


def run_graph_reduction(
	graph: Graph,
	keep: Iterable,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	Distribute a graph state and cut it down to the subgraph induced by ``keep``.

	Controls start in |+>, targets in |0>. Alice measures the controls of kept
	vertices in X and the others in Z. A dropped vertex u is left in |s(u)>;
	a kept vertex v holds the reduced graph state with generator sign
	(-1)^(s(v) + t(v)) and applies Z^(s(v) + t(v)).

	Raises:
		NotFoundError: If ``keep`` names a vertex outside the graph
	"""
	kept = validate_subset(keep, graph.vertices, "keep")
	if not kept:
		raise ValidationError("At least one vertex must be kept")
	reduced = graph.induced(kept)
	dropped = tuple(v for v in graph.vertices if v not in kept)
	controls = vertex_labels(graph, "a")
	labels = dict(zip(graph.vertices, vertex_labels(graph)))
	owners = dict(zip(graph.vertices, vertex_owners(graph)))
	initial = TensorService.make_state(
		[2] * (2 * len(controls)), [(c, PLUS) for c in controls], controls + tuple(labels.values())
	)
	parties = [Party(ALICE, PartyRole.SENDER, initial.labels)]
	parties.extend(Party(owners[v], PartyRole.RECEIVER) for v in graph.vertices)
	targets = tuple(labels.values())

	def body(session: ProtocolSession) -> dict:
		for v, control in zip(graph.vertices, controls):
			apply_controlled_stabilizer(session, ALICE, control, graph.stabilizer(v), targets)
		hand_out(session, ALICE, targets, tuple(owners.values()))
		record = OutcomeRecord()
		for v, control in zip(graph.vertices, controls):
			basis = x_basis() if v in kept else computational_basis(2)
			record.s[v] = session.measure(ALICE, basis.on(control), discard=True, label=control)
		message = session.send(ALICE, BROADCAST, [record.s[v] for v in graph.vertices], tag="reduction")
		for v, bit in reduction_parities(graph, kept, record.s).items():
			record.add_parity(v, bit)
		session.checkpoint("pre-correction")
		for v in kept:
			if record.w[v]:
				session.operate(owners[v], pauli("Z").on(labels[v]), depends_on=[message], label="correct")
		return {"record": record, "outcomes": {str(v): b for v, b in record.s.items()}}

	def expected(branch: BranchRecord, corrected: bool) -> StateVector:
		record = branch.notes["record"]
		state = graph_state(reduced, [labels[v] for v in kept])
		if not corrected:
			state = _with_z(state, [labels[v] for v in kept if record.w[v]])
		if dropped:
			rest = TensorService.basis_state(
				[2] * len(dropped), [record.s[u] for u in dropped], [labels[u] for u in dropped]
			)
			state = TensorService.tensor(state, rest)
		return state

	transcript = run_protocol(
		"graph-reduce",
		initial,
		parties,
		body,
		mode,
		seed,
		{"vertices": list(graph.vertices), "edges": [list(e) for e in graph.edges], "keep": list(kept)},
	)
	transcript.add_verdict(
		"pre_correction_fidelity",
		worst_fidelity(transcript.branches, lambda b: expected(b, False), "pre-correction"),
		1.0,
		get_settings().chained_tol,
		kind="min",
	)
	transcript.summary["reduced_edges"] = [list(e) for e in reduced.edges]
	return conclude(transcript, worst_fidelity(transcript.branches, lambda b: expected(b, True)))


def star_graph(leaves: int) -> Graph:
	"""Centre 0 joined to leaves 1..N."""
	return Graph.from_edges([(0, l) for l in range(1, leaves + 1)])


def ring_graph(size: int) -> Graph:
	"""Periodic chain 1-2-...-size-1."""
	return Graph.from_edges([(v, v % size + 1) for v in range(1, size + 1)])


def run_ghz_star(
	receivers: int,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	GHZ over Alice's centre qubit and N receivers from a star graph state.

	The star is distributed with controlled stabilizers, byproducts Z^s(v)
	are undone and every leaf applies H.
	"""
	n = validate_positive_int(receivers, "N", minimum=2)
	star = star_graph(n)
	leaves = receiver_labels(n)
	bobs = receiver_names(n)
	targets = ("c",) + leaves
	holders = (ALICE,) + bobs
	controls = tuple(f"a{v}" for v in star.vertices)
	initial = plus_state(2 * len(controls), controls + targets)
	parties = [Party(ALICE, PartyRole.SENDER, initial.labels)] + [Party(b, PartyRole.RECEIVER) for b in bobs]

	def body(session: ProtocolSession) -> dict:
		for v, control in zip(star.vertices, controls):
			apply_controlled_stabilizer(session, ALICE, control, star.stabilizer(v), targets)
		hand_out(session, ALICE, leaves, bobs)
		signs = [session.measure(ALICE, x_basis().on(c), discard=True, label=c) for c in controls]
		message = session.send(ALICE, BROADCAST, signs, tag="signs")
		session.checkpoint("pre-correction")
		for holder, target, s in zip(holders, targets, signs):
			if s:
				session.operate(holder, pauli("Z").on(target), depends_on=[message], label="correct")
		for bob, leaf in zip(bobs, leaves):
			session.operate(bob, hadamard().on(leaf), label="to-ghz")
		return {"signs": signs}

	transcript = run_protocol("ghz-star", initial, parties, body, mode, seed, {"N": n})

	def byproduct(branch: BranchRecord) -> StateVector:
		return _with_z(graph_state(star, targets), [t for t, s in zip(targets, branch.notes["signs"]) if s])

	tol = get_settings().chained_tol
	transcript.add_verdict(
		"pre_correction_fidelity",
		worst_fidelity(transcript.branches, byproduct, "pre-correction"),
		1.0,
		tol,
		kind="min",
	)
	generators = ghz_stabilizers(n + 1)
	transcript.add_verdict(
		"ghz_stabilizers",
		_worst(transcript.branches, lambda b, s: min(stabilizer_values(s, generators, targets))),
		1.0,
		tol,
		kind="min",
	)
	return conclude(transcript, worst_fidelity(transcript.branches, ghz_state(n + 1, targets)))


def run_ghz_ring(
	receivers: int,
	mode: Mode | str = Mode.ENUMERATE,
	seed: int | None = None,
) -> ProtocolTranscript:
	"""
	GHZ over N receivers from a 2N-site ring graph state.

	Odd sites go to the receivers (Bob j holds site 2j - 1), even sites stay
	with Alice. After the control measurements Alice removes the byproducts
	on her sites and measures them in X; outcome m_2j turns the generator
	at 2j into (-1)^m_2j Z_(2j-1) Z_(2j+1). Receivers undo their Z^s
	byproducts and flip X by the prefix parity of the even outcomes.
	"""
	n = validate_positive_int(receivers, "N", minimum=2)
	ring = ring_graph(2 * n)
	sites = {v: f"q{v}" for v in ring.vertices}
	odd = [v for v in ring.vertices if v % 2]
	even = [v for v in ring.vertices if not v % 2]
	bobs = receiver_names(n)
	holder = dict(zip(odd, bobs))
	controls = tuple(f"a{v}" for v in ring.vertices)
	targets = tuple(sites.values())
	initial = plus_state(2 * len(controls), controls + targets)
	parties = [Party(ALICE, PartyRole.SENDER, initial.labels)] + [Party(b, PartyRole.RECEIVER) for b in bobs]

	def body(session: ProtocolSession) -> dict:
		for v, control in zip(ring.vertices, controls):
			apply_controlled_stabilizer(session, ALICE, control, ring.stabilizer(v), targets)
		hand_out(session, ALICE, [sites[v] for v in odd], bobs)
		signs = {}
		for v, control in zip(ring.vertices, controls):
			signs[v] = session.measure(ALICE, x_basis().on(control), discard=True, label=control)
		first = session.send(ALICE, BROADCAST, [signs[v] for v in ring.vertices], tag="signs")
		for v in even:
			if signs[v]:
				session.operate(ALICE, pauli("Z").on(sites[v]), depends_on=[first], label="fix")
		marks = {v: session.measure(ALICE, x_basis().on(sites[v]), discard=True, label=sites[v]) for v in even}
		second = session.send(ALICE, BROADCAST, [marks[v] for v in even], tag="even-sites")
		session.checkpoint("pre-correction")
		flip = 0
		for j, v in enumerate(odd):
			if j:
				flip ^= marks[v - 1]
			if signs[v]:
				session.operate(holder[v], pauli("Z").on(sites[v]), depends_on=[first], label="correct")
			if flip:
				session.operate(holder[v], pauli("X").on(sites[v]), depends_on=[second], label="align")
		return {"signs": [signs[v] for v in ring.vertices], "even": {str(v): m for v, m in marks.items()}}

	transcript = run_protocol("ghz-ring", initial, parties, body, mode, seed, {"N": n})
	bob_sites = [sites[v] for v in odd]
	pairs = [(sites[2 * j - 1], sites[(2 * j) % (2 * n) + 1]) for j in range(1, n + 1)]

	def relations(branch: BranchRecord, state: StateVector) -> float:
		values = []
		for j, (left, right) in enumerate(pairs, start=1):
			sign = (-1) ** branch.notes["even"][str(2 * j)]
			values.append(sign * TensorService.expectation(state, PauliString("ZZ").operator((left, right))).real)
		return min(values)

	tol = get_settings().chained_tol
	transcript.add_verdict(
		"ghz_relations", _worst(transcript.branches, relations, "pre-correction"), 1.0, tol, kind="min"
	)
	generators = ghz_stabilizers(n)
	transcript.add_verdict(
		"ghz_stabilizers",
		_worst(transcript.branches, lambda b, s: min(stabilizer_values(s, generators, bob_sites))),
		1.0,
		tol,
		kind="min",
	)
	return conclude(transcript, worst_fidelity(transcript.branches, ghz_state(n, bob_sites)))
