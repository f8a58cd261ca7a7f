import unittest

import numpy as np

from quantum_broadcast.shared.exceptions import (
	DimensionError,
	NormalizationError,
	NotFoundError,
	RegisterSizeError,
	ValidationError,
)
from quantum_broadcast.shared.rng import party_rng
from quantum_broadcast.tensor import (
	LocalOperator,
	MeasurementBasis,
	Povm,
	apply,
	basis_state,
	bipartition_entropies,
	discard,
	entanglement_entropy,
	enumerate_branches,
	equal_up_to_global_phase,
	expectation,
	fidelity,
	is_product_state,
	make_state,
	measure,
	partial_trace,
	reorder,
	tensor,
)

SQ2 = 1 / np.sqrt(2)
PLUS = np.array([SQ2, SQ2])
CZ = np.diag([1, 1, 1, -1])


def computational(dim, target):
	return MeasurementBasis(np.eye(dim), target, "Z")


def bell():
	return make_state([2, 2], [SQ2, 0, 0, SQ2], labels=["x", "y"])


class TestMakeState(unittest.TestCase):
	def test_basis_state(self):
		state = make_state([2], [(0, [1, 0])])
		np.testing.assert_allclose(state.amps, [1, 0])

	def test_uniform_product(self):
		state = make_state([2, 2], {0: PLUS, 1: PLUS})
		np.testing.assert_allclose(state.amps, [0.5] * 4, atol=1e-12)

	def test_unassigned_subsystems_start_in_zero(self):
		state = make_state([3, 2], [("b", [0, 1])], labels=["a", "b"])
		self.assertAlmostEqual(abs(state.amplitude([0, 1])), 1.0)

	def test_amplitude_array_is_normalized(self):
		# alpha^2, alpha*beta, alpha*beta, beta^2 pattern of the basic template
		amps = np.zeros(12, dtype=complex)
		amps[0b000] = 0.5
		amps[4 + 1] = amps[4 + 2] = 0.5
		amps[8 + 3] = 0.5
		state = make_state([3, 2, 2], amps * 3)
		self.assertAlmostEqual(state.norm(), 1.0, places=12)
		self.assertAlmostEqual(abs(state.amplitude([2, 1, 1])), 0.5)

	def test_mixed_radix_ordering(self):
		state = basis_state([3, 2], [2, 1])
		self.assertEqual(int(np.argmax(np.abs(state.amps))), 2 * 2 + 1)

	def test_errors(self):
		with self.assertRaises(DimensionError):
			make_state([2], [(0, [1, 0, 0])])
		with self.assertRaises(NormalizationError):
			make_state([2], [0, 0])
		with self.assertRaises(DimensionError):
			make_state([2, 2], [1, 0, 0])
		with self.assertRaises(DimensionError):
			make_state([1], [1])
		with self.assertRaises(RegisterSizeError):
			make_state([2] * 23, None)


class TestApply(unittest.TestCase):
	def test_phase_gate_on_qutrit(self):
		theta = np.pi / 4
		gate = LocalOperator(np.diag(np.exp(1j * np.array([2, -2, 0]) * theta)), ("a",))
		state = apply(basis_state([3], [0], ["a"]), gate)
		self.assertAlmostEqual(state.amps[0], np.exp(1j * np.pi / 2))

	def test_identity(self):
		state = make_state([2, 3], np.arange(1, 7))
		same = apply(state, LocalOperator(np.eye(3), (1,)))
		np.testing.assert_allclose(same.amps, state.amps)

	def test_cz(self):
		state = apply(basis_state([2, 2], [1, 1]), LocalOperator(CZ, (0, 1)))
		np.testing.assert_allclose(state.amps, [0, 0, 0, -1])

	def test_target_order_matters(self):
		cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
		state = basis_state([2, 2], [0, 1])
		flipped = apply(state, LocalOperator(cnot, (1, 0)))
		np.testing.assert_allclose(np.abs(flipped.amps), [0, 0, 0, 1])

	def test_norm_preserved_for_random_unitaries(self):
		rng = np.random.default_rng(7)
		state = make_state([2, 3, 2], rng.normal(size=12) + 1j * rng.normal(size=12))
		for _ in range(20):
			q, _r = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
			state = apply(state, LocalOperator(q, (2, 1)))
			self.assertAlmostEqual(state.norm(), 1.0, places=12)

	def test_composition(self):
		rng = np.random.default_rng(3)
		state = make_state([2, 2, 2], rng.normal(size=8) + 0j)
		a, _r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
		b, _r = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
		sequential = apply(apply(state, LocalOperator(a, (0,))), LocalOperator(b, (0, 2)))
		joint = apply(state, LocalOperator(b @ np.kron(a, np.eye(2)), (0, 2)))
		np.testing.assert_allclose(sequential.amps, joint.amps, atol=1e-10)

	def test_errors(self):
		state = basis_state([2, 2], [0, 0])
		with self.assertRaises(NotFoundError):
			apply(state, LocalOperator(np.eye(2), ("missing",)))
		with self.assertRaises(DimensionError):
			apply(state, LocalOperator(np.eye(3), (0,)))
		with self.assertRaises(ValidationError):
			apply(state, LocalOperator(np.eye(2)))
		with self.assertRaises(NormalizationError):
			apply(state, LocalOperator(np.diag([0, 1]), (0,)))


class TestMeasurement(unittest.TestCase):
	def test_plus_in_computational_basis(self):
		state = make_state([2], [(0, PLUS)])
		branches = enumerate_branches(state, computational(2, 0))
		self.assertEqual([b.outcome for b in branches], [0, 1])
		for branch in branches:
			self.assertAlmostEqual(branch.probability, 0.5)

	def test_fourier_zero_vector_is_certain(self):
		u0 = np.ones(3) / np.sqrt(3)
		basis = MeasurementBasis(np.array([[np.exp(2j * np.pi * n * k / 3) / np.sqrt(3) for k in range(3)] for n in range(3)]), 0)
		branches = enumerate_branches(make_state([3], u0), basis)
		self.assertAlmostEqual(branches[0].probability, 1.0, places=12)
		self.assertFalse(branches[1].possible)
		self.assertIsNone(branches[1].state)

	def test_zero_probability_branch_is_flagged(self):
		branches = enumerate_branches(basis_state([2], [0]), computational(2, 0))
		self.assertAlmostEqual(branches[0].probability, 1.0)
		self.assertEqual(branches[1].probability, 0.0)
		self.assertFalse(branches[1].possible)

	def test_branches_sum_to_one(self):
		rng = np.random.default_rng(11)
		state = make_state([3, 2], rng.normal(size=6) + 1j * rng.normal(size=6))
		total = sum(b.probability for b in enumerate_branches(state, computational(3, 0)))
		self.assertAlmostEqual(total, 1.0, places=10)

	def test_discard_removes_subsystem(self):
		branch = enumerate_branches(bell(), computational(2, "x"), discard=True)[1]
		self.assertEqual(branch.state.labels, ("y",))
		np.testing.assert_allclose(np.abs(branch.state.amps), [0, 1], atol=1e-12)

	def test_povm_probabilities(self):
		w = np.exp(2j * np.pi / 3)
		anti = [np.array([1, -1]) * SQ2, np.array([w, -w.conj()]) * SQ2, np.array([w.conj(), -w]) * SQ2]
		povm = Povm(tuple((2 / 3) * np.outer(v, v.conj()) for v in anti), 0, "anti-trine")
		branches = enumerate_branches(make_state([2], PLUS), povm)
		self.assertLess(branches[0].probability, 1e-12)
		self.assertAlmostEqual(branches[1].probability, 0.5, places=12)
		self.assertAlmostEqual(branches[2].probability, 0.5, places=12)
		with self.assertRaises(ValidationError):
			enumerate_branches(make_state([2], PLUS), povm, discard=True)

	def test_invalid_povm(self):
		with self.assertRaises(ValidationError):
			Povm((np.eye(2), np.eye(2)), 0)

	def test_sampling_is_seeded(self):
		state = make_state([2], PLUS)
		first = [measure(state, computational(2, 0), party_rng(5, "bob"))[0].outcome for _ in range(3)]
		self.assertEqual(len(set(first)), 1)

	def test_sampling_frequencies_match_born_rule(self):
		state = make_state([3], [1, 1j, np.sqrt(2)])
		basis = computational(3, 0)
		expected = np.array([b.probability for b in enumerate_branches(state, basis)])
		rng = party_rng(1, "alice")
		trials = 20000
		counts = np.zeros(3)
		for _ in range(trials):
			counts[measure(state, basis, rng)[0].outcome] += 1
		sigma = np.sqrt(expected * (1 - expected) / trials)
		self.assertTrue(np.all(np.abs(counts / trials - expected) <= 3 * sigma + 1e-12))

	def test_non_orthonormal_basis_rejected(self):
		with self.assertRaises(ValidationError):
			MeasurementBasis(np.array([[1, 0], [1, 0]]), 0)


class TestReductions(unittest.TestCase):
	def test_product_partial_trace(self):
		state = make_state([2, 2], {0: [1, 0], 1: PLUS})
		rho = partial_trace(state, [0])
		np.testing.assert_allclose(rho.mat, [[1, 0], [0, 0]], atol=1e-12)

	def test_bell_marginal_is_maximally_mixed(self):
		rho = partial_trace(bell(), ["y"])
		np.testing.assert_allclose(rho.mat, np.eye(2) / 2, atol=1e-12)
		self.assertAlmostEqual(entanglement_entropy(bell(), ["x"]), 1.0)

	def test_partial_trace_of_density_matrix(self):
		rng = np.random.default_rng(2)
		state = make_state([2, 3, 2], rng.normal(size=12) + 1j * rng.normal(size=12))
		direct = partial_trace(state, [2, 0])
		staged = partial_trace(partial_trace(state, [0, 2]), [1, 0])
		np.testing.assert_allclose(direct.mat, staged.mat, atol=1e-12)
		self.assertAlmostEqual(direct.trace().real, 1.0, places=12)
		self.assertLessEqual(direct.purity(), 1 + 1e-10)

	def test_empty_keep(self):
		with self.assertRaises(ValidationError):
			partial_trace(bell(), [])

	def test_fidelity(self):
		zero = basis_state([2], [0])
		one = basis_state([2], [1])
		self.assertAlmostEqual(fidelity(zero, zero), 1.0)
		self.assertAlmostEqual(fidelity(zero, one), 0.0)
		self.assertAlmostEqual(fidelity(partial_trace(bell(), ["x"]), zero), 0.5)
		with self.assertRaises(DimensionError):
			fidelity(zero, bell())

	def test_global_phase(self):
		state = make_state([2, 3], np.arange(6) + 1j)
		rotated = make_state([2, 3], state.amps * np.exp(0.7j))
		self.assertTrue(equal_up_to_global_phase(state, rotated))
		self.assertFalse(equal_up_to_global_phase(basis_state([2], [0]), basis_state([2], [1])))

	def test_expectation(self):
		zz = LocalOperator(np.diag([1, -1, -1, 1]), ("x", "y"))
		self.assertAlmostEqual(expectation(bell(), zz).real, 1.0)


class TestRegisterUtilities(unittest.TestCase):
	def test_reorder(self):
		state = basis_state([3, 2], [2, 0], ["a", "b"])
		swapped = reorder(state, ["b", "a"])
		self.assertEqual(swapped.labels, ("b", "a"))
		self.assertAlmostEqual(abs(swapped.amplitude([0, 2])), 1.0)

	def test_tensor_and_discard(self):
		joint = tensor(bell(), make_state([3], [0, 1, 0], labels=["z"]))
		self.assertEqual(joint.dims, (2, 2, 3))
		back = discard(joint, "z", [0, 1, 0])
		np.testing.assert_allclose(back.amps, bell().amps, atol=1e-12)
		with self.assertRaises(ValidationError):
			discard(bell(), "x", [1, 0])
		with self.assertRaises(ValidationError):
			tensor(bell(), bell())

	def test_product_detection(self):
		self.assertFalse(is_product_state(bell()))
		product = make_state([2, 3, 2], {0: PLUS, 1: [1, 1, 1], 2: [1, 1j]})
		self.assertTrue(is_product_state(product))
		entropies = bipartition_entropies(product)
		self.assertEqual(len(entropies), 3)
		self.assertTrue(all(value < 1e-10 for value in entropies.values()))
