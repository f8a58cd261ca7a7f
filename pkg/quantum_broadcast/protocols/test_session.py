import unittest

import numpy as np

from quantum_broadcast.library import bell_pair, computational_basis, pauli, x_basis
from quantum_broadcast.protocols import (
	BROADCAST,
	Mode,
	Party,
	PartyRole,
	Verdict,
	run_protocol,
)
from quantum_broadcast.shared.exceptions import NotFoundError, ProtocolViolation
from quantum_broadcast.tensor import basis_state, equal_up_to_global_phase, make_state

PARTIES = [Party("Alice", PartyRole.SENDER, ("a", "b")), Party("Bob", PartyRole.RECEIVER)]


def reset_body(session):
	"""Alice measures her half of a Bell pair; Bob flips his half back to |0>."""
	session.transfer("Alice", "b", "Bob")
	outcome = session.measure("Alice", computational_basis(2).on("a"), discard=True, label="a")
	message = session.send("Alice", "Bob", [outcome], tag="outcome")
	if outcome:
		session.operate("Bob", pauli("X").on("b"), depends_on=[message], label="flip")
	return {"outcome": outcome}


class TestEnumeration(unittest.TestCase):
	def setUp(self):
		self.transcript = run_protocol("reset", bell_pair(2, ("a", "b")), PARTIES, reset_body)

	def test_every_outcome_is_visited(self):
		self.assertEqual(sorted(b.outcomes for b in self.transcript.branches), [(0,), (1,)])

	def test_probabilities_sum_to_one(self):
		self.assertAlmostEqual(self.transcript.total_probability, 1.0, places=12)
		for branch in self.transcript.branches:
			self.assertAlmostEqual(branch.probability, 0.5, places=12)

	def test_final_state_on_every_branch(self):
		for branch in self.transcript.branches:
			self.assertTrue(equal_up_to_global_phase(branch.final_state, basis_state([2], [0], ["b"])))

	def test_replay_reproduces_final_state(self):
		for branch in self.transcript.branches:
			np.testing.assert_allclose(branch.replay().amps, branch.final_state.amps, atol=1e-12)

	def test_contracts_hold(self):
		self.transcript.check_contracts()

	def test_messages_are_recorded(self):
		branch = self.transcript.branches[1]
		self.assertEqual(branch.messages[0].payload, (1,))
		self.assertEqual(branch.messages[0].recipients, ("Bob",))
		self.assertEqual(branch.outcome_of("a"), 1)

	def test_owners_after_discard(self):
		branch = self.transcript.branches[0]
		self.assertNotIn("a", branch.owners)
		self.assertEqual(branch.owners["b"], "Bob")

	def test_to_dict_is_plain(self):
		data = self.transcript.to_dict(verbose=True)
		self.assertEqual(data["protocol"], "reset")
		self.assertEqual(data["mode"], "enumerate")
		self.assertEqual(len(data["branches"]), 2)
		self.assertIn("events", data["branches"][0])


class TestSampling(unittest.TestCase):
	def test_single_branch(self):
		transcript = run_protocol("reset", bell_pair(2, ("a", "b")), PARTIES, reset_body, Mode.SAMPLE, seed=7)
		self.assertEqual(len(transcript.branches), 1)

	def test_same_seed_same_history(self):
		first = run_protocol("reset", bell_pair(2, ("a", "b")), PARTIES, reset_body, "sample", seed=11)
		second = run_protocol("reset", bell_pair(2, ("a", "b")), PARTIES, reset_body, "sample", seed=11)
		self.assertEqual(first.branches[0].outcomes, second.branches[0].outcomes)


class TestImpossibleBranches(unittest.TestCase):
	def test_zero_probability_outcome_is_flagged(self):
		def body(session):
			session.measure("Alice", computational_basis(2).on("a"), label="a")
			return {}

		parties = [Party("Alice", PartyRole.SENDER, ("a",))]
		transcript = run_protocol("zero", basis_state([2], [0], ["a"]), parties, body)
		self.assertEqual(len(transcript.branches), 2)
		self.assertEqual(len(transcript.possible_branches), 1)
		impossible = [b for b in transcript.branches if not b.possible][0]
		self.assertIsNone(impossible.final_state)
		with self.assertRaises(ProtocolViolation):
			impossible.replay()

	def test_nested_measurements(self):
		def body(session):
			first = session.measure("Alice", x_basis().on("a"), label="a")
			second = session.measure("Alice", computational_basis(2).on("a"), label="again")
			return {"pair": [first, second]}

		parties = [Party("Alice", PartyRole.SENDER, ("a",))]
		transcript = run_protocol("nested", make_state([2], [1, 0], ["a"]), parties, body)
		self.assertEqual(len(transcript.branches), 4)
		self.assertAlmostEqual(transcript.total_probability, 1.0, places=12)
		for branch in transcript.branches:
			self.assertAlmostEqual(branch.probability, 0.25, places=12)


class TestLocality(unittest.TestCase):
	def test_acting_on_foreign_subsystem(self):
		def body(session):
			session.operate("Bob", pauli("X").on("a"))

		with self.assertRaises(ProtocolViolation):
			run_protocol("bad", bell_pair(2, ("a", "b")), PARTIES, body)

	def test_dependency_on_unseen_message(self):
		def body(session):
			message = session.send("Alice", "Alice", [1])
			session.transfer("Alice", "b", "Bob")
			session.operate("Bob", pauli("Z").on("b"), depends_on=[message])

		with self.assertRaises(ProtocolViolation):
			run_protocol("bad", bell_pair(2, ("a", "b")), PARTIES, body)

	def test_unknown_party(self):
		def body(session):
			session.send("Alice", "Carol", [0])

		with self.assertRaises(NotFoundError):
			run_protocol("bad", bell_pair(2, ("a", "b")), PARTIES, body)

	def test_measuring_a_discarded_subsystem(self):
		def body(session):
			session.measure("Alice", computational_basis(2).on("a"), discard=True)
			session.measure("Alice", computational_basis(2).on("a"))

		with self.assertRaises(ProtocolViolation):
			run_protocol("bad", bell_pair(2, ("a", "b")), PARTIES, body)

	def test_unheld_subsystem_in_initial_state(self):
		with self.assertRaises(ProtocolViolation):
			run_protocol("bad", bell_pair(2, ("a", "b")), [Party("Alice", PartyRole.SENDER, ("a",))], reset_body)

	def test_broadcast_reaches_everyone(self):
		def body(session):
			session.transfer("Alice", "b", "Bob")
			message = session.send("Alice", BROADCAST, [0])
			session.operate("Bob", pauli("Z").on("b"), depends_on=[message])
			return {"inbox": len(session.inbox("Bob"))}

		transcript = run_protocol("broadcast", bell_pair(2, ("a", "b")), PARTIES, body)
		self.assertEqual(transcript.final_notes["inbox"], 1)


class TestVerdict(unittest.TestCase):
	def test_kinds(self):
		self.assertTrue(Verdict("f", 1 - 1e-12, 1.0, 1e-10, "min").passed)
		self.assertFalse(Verdict("f", 0.9, 1.0, 1e-10, "min").passed)
		self.assertTrue(Verdict("e", 1e-11, 0.0, 1e-10, "max").passed)
		self.assertFalse(Verdict("p", 0.3, 0.25, 0.01).passed)

	def test_nan_fails(self):
		self.assertFalse(Verdict("f", float("nan"), 1.0, 1.0, "min").passed)
