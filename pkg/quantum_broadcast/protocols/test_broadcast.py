import unittest

import numpy as np

from quantum_broadcast.library import BroadcastSpec, hadamard, make_broadcast_state
from quantum_broadcast.protocols import (
	add_sender,
	delete_sender,
	receiver_names,
	run_bbp,
	run_bbp_rotated,
	run_multisender,
	sender_names,
)
from quantum_broadcast.shared.exceptions import DimensionError, ValidationError
from quantum_broadcast.tensor import equal_up_to_global_phase, fidelity, make_state, partial_trace, reorder

SQ2 = 1 / np.sqrt(2)


class TestNames(unittest.TestCase):
	def test_single_sender_is_alice(self):
		self.assertEqual(sender_names(1), ("Alice",))
		self.assertEqual(sender_names(2), ("Alice1", "Alice2"))

	def test_receiver_offset(self):
		self.assertEqual(receiver_names(2, offset=2), ("Bob3", "Bob4"))


class TestBbp(unittest.TestCase):
	def test_two_receivers_zero_angle(self):
		transcript = run_bbp(SQ2, SQ2, 0.0, receivers=2)
		self.assertTrue(transcript.passed)
		self.assertEqual(len(transcript.branches), 3)
		for branch in transcript.branches:
			self.assertAlmostEqual(branch.probability, 1 / 3, places=12)

	def test_receiver_reduced_state(self):
		theta = 0.3
		transcript = run_bbp(SQ2, SQ2, theta, receivers=2)
		expected = np.array([np.exp(1j * theta), np.exp(-1j * theta)]) * SQ2
		for branch in transcript.possible_branches:
			rho = partial_trace(branch.final_state, ["b1"])
			self.assertAlmostEqual(fidelity(rho, _pure(expected, "b1")), 1.0, places=10)

	def test_unequal_amplitudes_three_receivers(self):
		transcript = run_bbp(np.sqrt(0.3), np.sqrt(0.7), 1.1, receivers=3)
		self.assertTrue(transcript.passed)
		self.assertEqual(len(transcript.branches), 4)

	def test_single_receiver(self):
		self.assertTrue(run_bbp(SQ2, 1j * SQ2, 0.7, receivers=1).passed)

	def test_outcome_is_broadcast(self):
		transcript = run_bbp(theta=0.2)
		for branch in transcript.branches:
			(message,) = branch.messages
			self.assertEqual(message.payload, (branch.outcomes[0],))
			self.assertEqual(message.recipients, ("*",))

	def test_sample_mode(self):
		transcript = run_bbp(theta=0.4, mode="sample", seed=5)
		self.assertEqual(len(transcript.branches), 1)
		self.assertTrue(transcript.passed)

	def test_unnormalized_amplitudes(self):
		with self.assertRaises(ValidationError):
			run_bbp(1.0, 1.0, 0.0)


class TestMultisender(unittest.TestCase):
	def test_angles_add(self):
		transcript = run_multisender(2, 2, thetas=[0.2, 0.5])
		self.assertTrue(transcript.passed)
		self.assertAlmostEqual(transcript.summary["total_theta"], 0.7)
		self.assertEqual(len(transcript.branches), 9)

	def test_inactive_sender_contributes_nothing(self):
		transcript = run_multisender(3, 1, thetas=[0.1, 0.2, 0.4], active=[1, 3])
		self.assertTrue(transcript.passed)
		self.assertAlmostEqual(transcript.summary["total_theta"], 0.5)

	def test_three_senders_one_receiver_branch_count(self):
		transcript = run_multisender(3, 1, thetas=[0.0, 0.0, 0.0])
		self.assertEqual(len(transcript.branches), 8)

	def test_pre_correction_phases(self):
		transcript = run_multisender(2, 2, thetas=[0.3, -0.1])
		self.assertTrue(transcript.verdict("pre_correction_fidelity").passed)

	def test_active_out_of_range(self):
		with self.assertRaises(ValidationError):
			run_multisender(2, 2, active=[3])

	def test_angle_count_mismatch(self):
		with self.assertRaises(ValidationError):
			run_multisender(2, 2, thetas=[0.1])


class TestRotated(unittest.TestCase):
	def test_identity_matches_plain_protocol(self):
		psi = (np.sqrt(0.4), np.sqrt(0.6))
		rotated = run_bbp_rotated(np.eye(2), psi, theta=0.3)
		plain = run_bbp(psi[0], psi[1], 0.3)
		self.assertTrue(rotated.passed)
		for a, b in zip(rotated.branches, plain.branches):
			self.assertTrue(equal_up_to_global_phase(_receivers(a.final_state), _receivers(b.final_state)))

	def test_hadamard_basis(self):
		transcript = run_bbp_rotated(hadamard().mat, (1.0, 0.0), theta=0.25)
		self.assertTrue(transcript.passed)
		self.assertTrue(transcript.verdict("template_fidelity").passed)
		mu = complex(*transcript.summary["mu"])
		self.assertAlmostEqual(abs(mu), SQ2, places=12)

	def test_rejects_non_unitary(self):
		with self.assertRaises(ValidationError):
			run_bbp_rotated(np.array([[1, 1], [0, 1]]))

	def test_rejects_wrong_size(self):
		with self.assertRaises((DimensionError, ValidationError)):
			run_bbp_rotated(np.eye(3))


class TestSenderManagement(unittest.TestCase):
	def test_add_sender(self):
		spec = BroadcastSpec(1, 2, np.sqrt(0.3), np.sqrt(0.7))
		state, transcript = add_sender(spec)
		self.assertTrue(transcript.passed)
		self.assertEqual(state.labels, ("a1", "a2", "b1", "b2"))
		target = make_broadcast_state(BroadcastSpec(2, 2, np.sqrt(0.3), np.sqrt(0.7)))
		self.assertTrue(equal_up_to_global_phase(state, target))

	def test_add_sender_qubit_senders(self):
		_state, transcript = add_sender(BroadcastSpec(1, 1))
		self.assertTrue(transcript.passed)
		self.assertEqual(len(transcript.branches), 2)

	def test_add_sender_wrong_pair_dimension(self):
		with self.assertRaises(DimensionError):
			add_sender(BroadcastSpec(1, 2), pair_dim=4)

	def test_delete_sender(self):
		spec = BroadcastSpec(2, 2)
		transcript = delete_sender(spec, which=1)
		self.assertTrue(transcript.passed)
		self.assertEqual(sorted(transcript.final_state.labels), ["a2", "b1", "b2"])

	def test_add_then_delete_is_identity(self):
		spec = BroadcastSpec(1, 2, np.sqrt(0.2), np.sqrt(0.8))
		grown, _ = add_sender(spec)
		shrunk = BroadcastSpec(2, 2, spec.alpha, spec.beta)
		transcript = delete_sender(shrunk, which=2, state=grown)
		original = make_broadcast_state(spec)
		for branch in transcript.possible_branches:
			self.assertAlmostEqual(fidelity(reorder(branch.final_state, original.labels), original), 1.0, places=10)

	def test_delete_out_of_range(self):
		with self.assertRaises(ValidationError):
			delete_sender(BroadcastSpec(2, 2), which=3)


def _pure(vector, label):
	return make_state([2], vector, [label])


def _receivers(state):
	return reorder(state, sorted(state.labels))


class TestBroadcastSweeps(unittest.TestCase):
	def setUp(self):
		self.rng = np.random.default_rng(11)

	def test_bbp_random_draws(self):
		for draw in range(100):
			alpha, beta = _random_amplitudes(self.rng)
			theta = float(self.rng.uniform(-np.pi, np.pi))
			receivers = draw % 4 + 1
			transcript = run_bbp(alpha, beta, theta, receivers=receivers)
			self.assertTrue(transcript.passed, (alpha, beta, theta, receivers))
			self.assertGreaterEqual(transcript.verdict("min_fidelity").value, 1 - 1e-10)
			target = _pure(np.array([alpha * np.exp(1j * theta), beta * np.exp(-1j * theta)]), "b1")
			for branch in transcript.possible_branches:
				self.assertGreaterEqual(fidelity(partial_trace(branch.final_state, ["b1"]), target), 1 - 1e-10)

	def test_multisender_angles_add(self):
		for senders in (1, 2, 3):
			for receivers in (1, 2, 3):
				thetas = self.rng.uniform(-np.pi, np.pi, senders)
				transcript = run_multisender(senders, receivers, thetas=thetas)
				self.assertTrue(transcript.passed, (senders, receivers))
				self.assertAlmostEqual(transcript.summary["total_theta"], float(np.sum(thetas)), places=12)

	def test_inactive_angle_is_ignored(self):
		thetas = list(self.rng.uniform(-np.pi, np.pi, 3))
		first = run_multisender(3, 2, thetas=thetas, active=[1, 3])
		thetas[1] += 1.234
		second = run_multisender(3, 2, thetas=thetas, active=[1, 3])
		self.assertEqual(len(first.possible_branches), len(second.possible_branches))
		for a, b in zip(first.possible_branches, second.possible_branches):
			np.testing.assert_allclose(a.final_state.amps, b.final_state.amps, atol=1e-12)

	def test_add_then_delete_sweep(self):
		for senders in (1, 2):
			for receivers in (2, 3):
				spec = BroadcastSpec(senders, receivers, np.sqrt(0.35), np.sqrt(0.65))
				grown, added = add_sender(spec)
				self.assertTrue(added.passed, (senders, receivers))
				bigger = BroadcastSpec(senders + 1, receivers, spec.alpha, spec.beta)
				transcript = delete_sender(bigger, which=senders + 1, state=grown)
				original = make_broadcast_state(spec)
				for branch in transcript.possible_branches:
					restored = reorder(branch.final_state, original.labels)
					self.assertGreaterEqual(fidelity(restored, original), 1 - 1e-10)


def _random_amplitudes(rng):
	vector = rng.normal(size=2) + 1j * rng.normal(size=2)
	vector /= np.linalg.norm(vector)
	return complex(vector[0]), complex(vector[1])
