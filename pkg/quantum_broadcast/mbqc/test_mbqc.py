import unittest

import numpy as np

from quantum_broadcast.library import HADAMARD, cz, pauli, plus_state, z_rotation
from quantum_broadcast.mbqc import (
	AngleSchedule,
	BrickworkState,
	PauliFrame,
	ProgramBlock,
	ScheduledAngle,
	block_byproducts,
	block_results,
	euler_rotation,
	logical_input,
	program_unitary,
	run_cnot_block,
	run_program,
	run_rotation_block,
	teleport_step,
	x_measure_step,
)
from quantum_broadcast.protocols import OutcomeRecord, Party, PartyRole, run_protocol, state_fidelity
from quantum_broadcast.shared.exceptions import NormalizationError, ProtocolViolation, ValidationError
from quantum_broadcast.tensor import apply, make_state

COLUMNS = ((1, 6), (2, 7), (3, 8), (4, 9))
PLUS = np.ones(2) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)


def random_input(rng):
	amps = rng.normal(size=4) + 1j * rng.normal(size=4)
	return amps / np.linalg.norm(amps)


def link_pair(session):
	session.operate("Alice", cz().on("a1", "b1"))
	session.transfer("Alice", "b1", "Bob")


def pair_parties():
	return [Party("Alice", PartyRole.SENDER, ("b1", "a1")), Party("Bob", PartyRole.RECEIVER)]


class TestSingleLink(unittest.TestCase):
	def test_teleportation_identity(self):
		rng = np.random.default_rng(11)
		embed = np.kron(np.eye(2), PLUS.reshape(2, 1))
		for _ in range(100):
			theta = rng.uniform(-np.pi, np.pi)
			s, t = rng.integers(0, 2, size=2)
			bra = (MINUS if t else PLUS).conj().reshape(1, 2)
			phase = np.linalg.matrix_power(pauli("Z").mat, s) @ z_rotation(theta).mat
			induced = np.kron(bra, np.eye(2)) @ np.kron(phase, np.eye(2)) @ cz().mat @ embed
			expected = HADAMARD @ z_rotation(theta).mat @ np.linalg.matrix_power(pauli("Z").mat, (s + t) % 2)
			np.testing.assert_allclose(induced, expected / np.sqrt(2), atol=1e-12)


class TestSteps(unittest.TestCase):
	def test_teleported_rotation_on_plus(self):
		def body(session):
			link_pair(session)
			return {"s": teleport_step(session, 1, np.pi / 8, sampled=False)}

		transcript = run_protocol("teleport", plus_state(2, ("b1", "a1")), pair_parties(), body)
		self.assertEqual(len(transcript.branches), 2)
		for branch in transcript.branches:
			target = apply(make_state([2], PLUS, ["b1"]), z_rotation(np.pi / 8).on("b1"))
			if branch.notes["s"]:
				target = apply(target, pauli("Z").on("b1"))
			self.assertAlmostEqual(state_fidelity(branch.final_state, target), 1.0, places=12)

	def test_zero_angle_leaves_state(self):
		def body(session):
			link_pair(session)
			return {"s": teleport_step(session, 1, 0.0, sampled=False)}

		transcript = run_protocol("teleport", plus_state(2, ("b1", "a1")), pair_parties(), body)
		branch = [b for b in transcript.branches if b.notes["s"] == 0][0]
		self.assertAlmostEqual(state_fidelity(branch.final_state, make_state([2], PLUS, ["b1"])), 1.0, places=12)

	def test_teleport_twice(self):
		def body(session):
			link_pair(session)
			teleport_step(session, 1, 0.2)
			teleport_step(session, 1, 0.2)

		with self.assertRaises(ProtocolViolation):
			run_protocol("teleport", plus_state(2, ("b1", "a1")), pair_parties(), body)

	def test_measure_twice(self):
		def body(session):
			link_pair(session)
			x_measure_step(session, 1)
			x_measure_step(session, 1)

		with self.assertRaises(ProtocolViolation):
			run_protocol("measure", plus_state(2, ("b1", "a1")), pair_parties(), body)


class TestSchedules(unittest.TestCase):
	def test_cnot_angles_without_flags(self):
		schedule = AngleSchedule.cnot()
		values = {f"w{v}": 0 for v in (1, 2, 6, 7, 8)}
		values.update({"x1": 0, "z1": 0, "x6": 0, "z6": 0})
		self.assertAlmostEqual(schedule.angle(9, values), -np.pi / 4)
		self.assertAlmostEqual(schedule.angle(3, values), np.pi / 4)
		self.assertAlmostEqual(schedule.angle(7, values), np.pi / 4)
		values["w8"] = 1
		self.assertAlmostEqual(schedule.angle(9, values), np.pi / 4)

	def test_adaptive_angles_read_earlier_columns(self):
		AngleSchedule.cnot().check_causality(COLUMNS)
		AngleSchedule.rotation((0.1, 0.2, 0.3), (0.4, 0.5, 0.6)).check_causality(COLUMNS)

	def test_early_dependency(self):
		angles = {v: ScheduledAngle(0.0) for c in COLUMNS for v in c}
		angles[7] = ScheduledAngle(0.3, ("w2",))
		with self.assertRaises(ProtocolViolation):
			AngleSchedule("bad", angles, np.eye(4)).check_causality(COLUMNS)

	def test_missing_outcome(self):
		with self.assertRaises(ProtocolViolation):
			ScheduledAngle(0.5, ("w3",)).resolve({"w1": 1})

	def test_rotation_target(self):
		schedule = AngleSchedule.rotation((np.pi / 4,) * 3, (0.0, 0.0, 0.0))
		quarter = z_rotation(np.pi / 4).mat
		x_quarter = np.cos(np.pi / 4) * np.eye(2) + 1j * np.sin(np.pi / 4) * pauli("X").mat
		np.testing.assert_allclose(schedule.target, np.kron(quarter @ x_quarter @ quarter, np.eye(2)), atol=1e-12)

	def test_rotation_needs_triples(self):
		with self.assertRaises(ValidationError):
			AngleSchedule.rotation((0.1, 0.2), (0.0, 0.0, 0.0))


class TestFrames(unittest.TestCase):
	def test_closed_forms(self):
		record = OutcomeRecord(s={v: 0 for c in COLUMNS for v in c})
		for v, t in {1: 1, 2: 0, 3: 1, 4: 1, 6: 0, 7: 1, 8: 1, 9: 0}.items():
			record.add_parity(v, t)
		frame = block_byproducts(record, PauliFrame(1, 0, 0, 1))
		self.assertEqual(frame.to_list(), [(0 + 1 + 1) % 2, (1 + 1 + 0) % 2, (1 + 0) % 2, (1 + 0 + 1 + 1) % 2])

	def test_invalid_exponent(self):
		with self.assertRaises(ValidationError):
			PauliFrame(2, 0, 0, 0)
		with self.assertRaises(ValidationError):
			PauliFrame.from_list([0, 1])

	def test_strip_undoes_apply(self):
		psi = logical_input(random_input(np.random.default_rng(3)))
		frame = PauliFrame(1, 1, 0, 1)
		restored = frame.strip(frame.apply(psi, ("b1", "b6")), ("b1", "b6"))
		self.assertAlmostEqual(state_fidelity(restored, psi), 1.0, places=12)

	def test_unnormalized_input(self):
		with self.assertRaises(NormalizationError):
			logical_input([1, 1, 0, 0])


class TestResource(unittest.TestCase):
	def test_graph_state_shape(self):
		block = BrickworkState(logical_input([1, 0, 0, 0]))
		self.assertEqual(len(block.graph_state().labels), 10)
		self.assertEqual(len(block.resource().labels), 18)

	def test_eager_preparation(self):
		psi = random_input(np.random.default_rng(5))
		transcript = run_rotation_block(psi, (np.pi / 4,) * 3, (0.3, -0.2, 0.1), mode="sample", seed=2, lazy=False)
		self.assertTrue(transcript.passed)
		self.assertTrue(transcript.verdict("resource_fidelity").passed)


class TestCnotBlock(unittest.TestCase):
	def test_all_branches(self):
		psi = random_input(np.random.default_rng(21))
		transcript = run_cnot_block(psi)
		self.assertEqual(len(transcript.branches), 256)
		self.assertTrue(transcript.passed)
		self.assertTrue(transcript.verdict("receiver_x_only").passed)

	def test_byproducts_follow_closed_forms(self):
		transcript = run_cnot_block(random_input(np.random.default_rng(8)), PauliFrame(0, 1, 1, 0))
		for result in block_results(transcript):
			self.assertEqual(result.byproducts, block_byproducts(result.record, PauliFrame(0, 1, 1, 0)))

	def test_random_inputs(self):
		rng = np.random.default_rng(4)
		for index in range(20):
			psi = random_input(rng)
			transcript = run_cnot_block(psi, mode="sample", seed=index)
			self.assertTrue(transcript.verdict("stripped_fidelity").passed, index)

	def test_incoming_frame(self):
		rng = np.random.default_rng(9)
		clean = logical_input(random_input(rng))
		frame = PauliFrame(1, 0, 1, 1)
		transcript = run_cnot_block(frame.apply(clean, ("b1", "b6")).amps, frame, mode="sample", seed=1)
		self.assertTrue(transcript.passed)

	def test_fixed_point(self):
		transcript = run_cnot_block([1, 0, 0, 0], mode="sample", seed=6)
		(result,) = block_results(transcript)
		self.assertAlmostEqual(
			state_fidelity(result.stripped(), make_state([2, 2], [1, 0, 0, 0], ["b5", "b10"])), 1.0, places=10
		)


class TestRotationBlock(unittest.TestCase):
	def test_random_euler_triples(self):
		rng = np.random.default_rng(12)
		psi = random_input(rng)
		for index in range(5):
			first, second = rng.uniform(-np.pi, np.pi, size=3), rng.uniform(-np.pi, np.pi, size=3)
			transcript = run_rotation_block(psi, first, second, mode="sample", seed=index)
			self.assertTrue(transcript.passed, index)

	def test_all_branches_with_frame(self):
		psi = random_input(np.random.default_rng(14))
		frame = PauliFrame(1, 1, 1, 0)
		transcript = run_rotation_block(psi, (0.3, 1.1, -0.4), (-0.9, 0.2, 0.5), frame)
		self.assertEqual(len(transcript.branches), 256)
		self.assertTrue(transcript.passed)

	def test_identity(self):
		psi = random_input(np.random.default_rng(2))
		self.assertTrue(run_rotation_block(psi, mode="sample", seed=3).passed)

	def test_euler_rotation(self):
		np.testing.assert_allclose(euler_rotation(0.0, 0.0, 0.0), np.eye(2), atol=1e-12)


class TestProgram(unittest.TestCase):
	def test_rotation_then_cnot(self):
		psi = random_input(np.random.default_rng(30))
		result = run_program([{"kind": "rotation"}, "cnot"], psi, samples=2)
		self.assertTrue(result.passed)
		self.assertEqual(result.summary["histories"], 512)

	def test_cnot_twice_is_identity(self):
		blocks = [ProgramBlock("cnot"), ProgramBlock("cnot")]
		np.testing.assert_allclose(program_unitary(blocks), np.eye(4), atol=1e-12)
		psi = random_input(np.random.default_rng(31))
		self.assertTrue(run_program(blocks, psi, samples=2, mode="sample").passed)

	def test_three_blocks(self):
		rng = np.random.default_rng(32)
		blocks = [
			{"kind": "rotation", "first": rng.uniform(-1, 1, 3).tolist(), "second": rng.uniform(-1, 1, 3).tolist()},
			{"kind": "cnot"},
			{"kind": "rotation", "first": [0.2, -0.7, 0.4], "second": [1.0, 0.1, -0.3]},
		]
		result = run_program(blocks, random_input(rng), samples=16, mode="sample", seed=5)
		self.assertTrue(result.passed)
		self.assertGreaterEqual(result.verdict("stripped_fidelity").value, 1 - 1e-9)

	def test_malformed(self):
		with self.assertRaises(ValidationError):
			run_program([], [1, 0, 0, 0])
		with self.assertRaises(ValidationError):
			run_program([{"kind": "swap"}], [1, 0, 0, 0])
		with self.assertRaises(ValidationError):
			run_program([{"kind": "rotation", "first": [0.1]}], [1, 0, 0, 0])

	def test_output_becomes_next_input(self):
		transcript = run_cnot_block([0, 0, 1, 0], mode="sample", seed=1)
		(result,) = block_results(transcript)
		self.assertEqual(result.as_input().labels, ("b1", "b6"))
