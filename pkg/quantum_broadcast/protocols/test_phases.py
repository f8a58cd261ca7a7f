import unittest

import numpy as np

from quantum_broadcast.protocols import (
	PhaseEncoding,
	closed_form_encoding_fidelity,
	closed_form_rho_b,
	residual_encoding,
	send_phase_general,
	send_phase_restricted,
	threshold_measurement,
)
from quantum_broadcast.shared.exceptions import DimensionError, ProtocolViolation, ValidationError
from quantum_broadcast.tensor import equal_up_to_global_phase, fidelity, probabilities

SQ2 = 1 / np.sqrt(2)


class TestPhaseEncoding(unittest.TestCase):
	def test_restricted_angle(self):
		encoding = PhaseEncoding.restricted(1, 4)
		self.assertAlmostEqual(encoding.theta, np.pi / 2)
		self.assertTrue(encoding.is_restricted)

	def test_restricted_out_of_range(self):
		with self.assertRaises(ValidationError):
			PhaseEncoding.restricted(4, 4)

	def test_state_amplitudes(self):
		state = PhaseEncoding.general(0.3, 5).state()
		np.testing.assert_allclose(state.amps, np.exp(0.3j * np.arange(5)) / np.sqrt(5), atol=1e-12)

	def test_threshold_measurement(self):
		state = PhaseEncoding.general(0.0, 4).state()
		np.testing.assert_allclose(probabilities(state, threshold_measurement(4, 1).on("d")), [0.25, 0.75], atol=1e-12)


class TestRestricted(unittest.TestCase):
	def test_quarter_turn(self):
		transcript = send_phase_restricted(1, 4)
		self.assertTrue(transcript.passed)
		self.assertAlmostEqual(transcript.summary["relative_phase"], -np.pi / 2)

	def test_encoding_is_handed_back(self):
		transcript = send_phase_restricted(2, 5, receivers=3)
		self.assertTrue(transcript.passed)
		for branch in transcript.possible_branches:
			self.assertEqual(branch.owners["d"], "Provider")

	def test_residual_feeds_a_second_run(self):
		first = send_phase_restricted(3, 4)
		residual = residual_encoding(first)
		self.assertTrue(equal_up_to_global_phase(residual, PhaseEncoding.restricted(3, 4).state()))
		second = send_phase_restricted(3, 4, encoding=residual)
		self.assertTrue(second.passed)

	def test_dimension_too_small(self):
		with self.assertRaises(DimensionError):
			send_phase_restricted(0, 2, receivers=2)

	def test_wrong_encoding_state(self):
		with self.assertRaises(DimensionError):
			send_phase_restricted(1, 4, encoding=PhaseEncoding.restricted(1, 5).state())


class TestGeneral(unittest.TestCase):
	def test_destructive(self):
		transcript = send_phase_general(0.7, 4, "destructive")
		self.assertTrue(transcript.passed)
		self.assertAlmostEqual(transcript.summary["success_probability"], 0.5, places=12)

	def test_destructive_consumes_encoding(self):
		transcript = send_phase_general(0.7, 4, "destructive")
		with self.assertRaises(ProtocolViolation):
			residual_encoding(transcript)

	def test_projector_two_uses(self):
		transcript = send_phase_general(0.9, 16, "projector", uses=2)
		self.assertTrue(transcript.passed)
		self.assertAlmostEqual(transcript.summary["success_probability"], 14 / 16, places=12)
		self.assertAlmostEqual(transcript.summary["second_success_probability"], 12 / 14, places=12)
		self.assertTrue(transcript.verdict("residual_fidelity_2").passed)

	def test_projector_single_receiver(self):
		self.assertTrue(send_phase_general(1.3, 3, "projector", receivers=1).passed)

	def test_approximate_matches_closed_form(self):
		transcript = send_phase_general(0.37, 8, "approximate")
		self.assertTrue(transcript.passed)
		self.assertTrue(transcript.verdict("rho_b_error").passed)
		self.assertAlmostEqual(
			transcript.summary["encoding_fidelity"], closed_form_encoding_fidelity(SQ2, SQ2, 0.37, 8), places=10
		)

	def test_approximate_two_uses(self):
		transcript = send_phase_general(0.37, 8, "approximate", uses=2)
		self.assertTrue(transcript.passed)
		self.assertLessEqual(transcript.summary["noise_norm"], 0.5 + 1e-10)

	def test_approximate_commensurate_angle(self):
		transcript = send_phase_general(2 * np.pi * 3 / 8, 8, "approximate", uses=2)
		self.assertTrue(transcript.verdict("noise_proportional_error").passed)

	def test_unknown_variant(self):
		with self.assertRaises(ValidationError):
			send_phase_general(0.1, 4, "guess")

	def test_destructive_twice(self):
		with self.assertRaises(ValidationError):
			send_phase_general(0.1, 8, "destructive", uses=2)

	def test_second_use_needs_room(self):
		with self.assertRaises(ValidationError):
			send_phase_general(0.1, 4, "projector", uses=2)

	def test_small_dimension(self):
		with self.assertRaises(ValidationError):
			send_phase_general(0.1, 2, receivers=1)


class TestClosedForms(unittest.TestCase):
	def test_commensurate_angle_keeps_encoding(self):
		self.assertAlmostEqual(closed_form_encoding_fidelity(0.6, 0.8, 2 * np.pi / 5, 5), 1.0, places=12)

	def test_rho_b_is_a_state(self):
		rho = closed_form_rho_b(0.6, 0.8j, 0.4, 6)
		self.assertAlmostEqual(np.trace(rho).real, 1.0, places=12)
		np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
		self.assertGreaterEqual(np.linalg.eigvalsh(rho).min(), -1e-12)


class TestApproximateStates(unittest.TestCase):
	def test_single_use_states(self):
		alpha, beta, theta, dim = 0.6, 0.8j, 0.37, 8
		transcript = send_phase_general(theta, dim, "approximate", alpha=alpha, beta=beta)
		rho_b, rho_d = transcript.states["rho_b"], transcript.states["rho_d"]
		self.assertEqual(rho_b.labels, ("b1",))
		self.assertEqual(rho_d.labels, ("d",))
		np.testing.assert_allclose(rho_b.mat, closed_form_rho_b(alpha, beta, theta, dim), atol=1e-10)
		self.assertAlmostEqual(
			fidelity(rho_d, PhaseEncoding.general(theta, dim).state()),
			closed_form_encoding_fidelity(alpha, beta, theta, dim),
			places=10,
		)
		self.assertNotIn("rho_noise", transcript.states)

	def test_second_use_noise(self):
		dim = 8
		theta = 2 * np.pi * 3 / dim
		transcript = send_phase_general(theta, dim, "approximate", uses=2)
		rho, noise = transcript.states["rho_bcbc"], transcript.states["rho_noise"]
		self.assertEqual(len(rho.labels), 4)
		vector = np.array([SQ2, SQ2 * np.exp(-1j * theta)])
		product = np.kron(np.kron(vector, vector), np.kron(vector, vector))
		rho_prod = np.outer(product, product.conj())
		np.testing.assert_allclose(rho.mat, (dim - 4) / dim * rho_prod + noise.mat, atol=1e-10)
		np.testing.assert_allclose(noise.mat, 4 / dim * rho_prod, atol=1e-10)

	def test_states_in_verbose_dict(self):
		transcript = send_phase_general(0.2, 6, "approximate", uses=2)
		self.assertNotIn("states", transcript.to_dict())
		states = transcript.to_dict(verbose=True)["states"]
		self.assertEqual(sorted(states), ["rho_b", "rho_bcbc", "rho_d", "rho_noise"])
		self.assertEqual(states["rho_d"]["dims"], [6])

	def test_closed_forms_skipped_beyond_two_receivers(self):
		transcript = send_phase_general(0.4, 8, "approximate", receivers=3)
		self.assertTrue(transcript.passed)
		self.assertTrue(transcript.summary["closed_form_checks"].startswith("not applicable"))
		with self.assertRaises(KeyError):
			transcript.verdict("rho_b_error")
		self.assertIn("rho_b", transcript.states)

	def test_closed_forms_run_for_two_receivers(self):
		transcript = send_phase_general(0.4, 8, "approximate")
		self.assertNotIn("closed_form_checks", transcript.summary)
		self.assertTrue(transcript.verdict("encoding_fidelity_error").passed)


class TestPhaseSweeps(unittest.TestCase):
	def setUp(self):
		self.rng = np.random.default_rng(2024)

	def test_restricted_every_k(self):
		for dim in (3, 4, 8):
			for k in range(dim):
				transcript = send_phase_restricted(k, dim)
				self.assertTrue(transcript.passed, (k, dim))

	def test_success_probability_ignores_theta(self):
		for dim in (3, 5, 8, 16):
			for theta in self.rng.uniform(-np.pi, np.pi, 10):
				transcript = send_phase_general(theta, dim, "destructive")
				self.assertTrue(transcript.passed, (theta, dim))
				self.assertAlmostEqual(transcript.summary["success_probability"], (dim - 2) / dim, places=12)

	def test_projector_second_use_probability(self):
		for dim in (5, 8, 16):
			for theta in self.rng.uniform(-np.pi, np.pi, 10):
				transcript = send_phase_general(theta, dim, "projector", uses=2)
				self.assertTrue(transcript.passed, (theta, dim))
				self.assertAlmostEqual(
					transcript.summary["second_success_probability"], (dim - 4) / (dim - 2), places=12
				)

	def test_closed_forms_random_draws(self):
		for _ in range(50):
			alpha, beta = _random_amplitudes(self.rng)
			theta = float(self.rng.uniform(-np.pi, np.pi))
			dim = int(self.rng.integers(3, 17))
			transcript = send_phase_general(theta, dim, "approximate", alpha=alpha, beta=beta)
			self.assertTrue(transcript.verdict("rho_b_error").passed, (alpha, beta, theta, dim))
			self.assertTrue(transcript.verdict("encoding_fidelity_error").passed, (alpha, beta, theta, dim))

	def test_commensurate_noise_is_proportional(self):
		for dim in (5, 6, 8, 10):
			m = int(self.rng.integers(dim))
			transcript = send_phase_general(2 * np.pi * m / dim, dim, "approximate", uses=2)
			self.assertTrue(transcript.verdict("noise_proportional_error").passed, (m, dim))


def _random_amplitudes(rng):
	vector = rng.normal(size=2) + 1j * rng.normal(size=2)
	vector /= np.linalg.norm(vector)
	return complex(vector[0]), complex(vector[1])
