import unittest

from quantum_broadcast.library import anti_trine_povm, trine_basis
from quantum_broadcast.protocols import (
	expected_sifted_fraction,
	hop_bit,
	run_authentication,
	run_qkd_pbc,
	sift_round,
	trine_round,
)
from quantum_broadcast.shared.exceptions import ValidationError


class TestHopRule(unittest.TestCase):
	def test_worked_rounds(self):
		self.assertEqual(hop_bit(2, 0), 0)
		self.assertEqual(hop_bit(2, 1), 1)

	def test_every_pair(self):
		for sent in range(3):
			self.assertEqual(hop_bit(sent, (sent + 1) % 3), 0)
			self.assertEqual(hop_bit(sent, (sent + 2) % 3), 1)

	def test_announcing_the_sent_label(self):
		with self.assertRaises(ValidationError):
			hop_bit(1, 1)

	def test_sift_infers_sent_label(self):
		self.assertEqual(sift_round(2, 1, 0), (0, 0))
		self.assertEqual(sift_round(0, 2, 1), (0, 0))

	def test_sift_discards_uninformative_rounds(self):
		self.assertEqual(sift_round(2, 0, 0), (0, None))
		self.assertEqual(sift_round(2, None, 1), (1, None))


class TestTrineRound(unittest.TestCase):
	def test_povm_never_hits_sent_label(self):
		for label in range(3):
			transcript = trine_round(label, 2, {"Bob1": anti_trine_povm(), "Bob2": anti_trine_povm()})
			self.assertTrue(transcript.passed)
			for branch in transcript.possible_branches:
				self.assertNotIn(label, branch.notes["outcomes"].values())

	def test_matching_basis_is_never_conclusive(self):
		transcript = trine_round(1, 1, {"Bob1": trine_basis(1)})
		for branch in transcript.possible_branches:
			self.assertEqual(branch.notes["outcomes"]["Bob1"], 0)

	def test_invalid_label(self):
		with self.assertRaises(ValidationError):
			trine_round(3, 1, {"Bob1": anti_trine_povm()})


class TestAuthentication(unittest.TestCase):
	def test_exact_verdicts(self):
		result = run_authentication(200, receivers=2, seed=3)
		for name in ("sent_label_probability", "marginal_error", "broadcast_fidelity", "sent_label_hits"):
			self.assertTrue(result.verdict(name).passed, name)
		self.assertTrue(result.verdict("agreement_probability").passed)
		self.assertEqual(len(result.labels), 200)

	def test_single_receiver_has_no_agreement(self):
		result = run_authentication(20, receivers=1, seed=1)
		with self.assertRaises(KeyError):
			result.verdict("agreement_rate")

	def test_seeded_runs_repeat(self):
		first = run_authentication(30, seed=9)
		second = run_authentication(30, seed=9)
		self.assertEqual(first.labels, second.labels)
		self.assertEqual(first.outcomes, second.outcomes)


class TestQkd(unittest.TestCase):
	def test_expected_fractions(self):
		self.assertAlmostEqual(expected_sifted_fraction("projective"), 0.25, places=12)
		self.assertAlmostEqual(expected_sifted_fraction("povm"), 0.5, places=12)

	def test_keys_agree(self):
		for strategy in ("projective", "povm"):
			result = run_qkd_pbc(150, receivers=2, strategy=strategy, seed=4)
			self.assertTrue(result.verdict("key_disagreements").passed)
			for alice_key, bob_key in result.keys.values():
				self.assertEqual(alice_key, bob_key)

	def test_unknown_strategy(self):
		with self.assertRaises(ValidationError):
			run_qkd_pbc(10, strategy="guess")


class TestLongRuns(unittest.TestCase):
	rounds = 10_000

	def test_authentication_agreement_rate(self):
		result = run_authentication(self.rounds, receivers=2, seed=21)
		self.assertTrue(result.passed)
		self.assertLessEqual(abs(result.summary["agreement_rate"] - 0.5), 3 * (0.25 / self.rounds) ** 0.5)
		self.assertEqual(result.verdict("sent_label_hits").value, 0)

	def test_qkd_sifted_fractions(self):
		for strategy, expected in (("projective", 0.25), ("povm", 0.5)):
			result = run_qkd_pbc(self.rounds, receivers=2, strategy=strategy, seed=22)
			self.assertTrue(result.passed, strategy)
			self.assertEqual(result.verdict("key_disagreements").value, 0)
			sigma = (expected * (1 - expected) / self.rounds) ** 0.5
			for bob, fraction in result.summary["sifted_fractions"].items():
				self.assertLessEqual(abs(fraction - expected), 3 * sigma, (strategy, bob))
