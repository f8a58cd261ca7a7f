"""
Scenario Handlers

Thin adapters from validated scenario parameters to the protocol and MBQC
operations. Each takes (parameters, mode, seed) and returns a result with
verdicts, a summary and ``to_dict(verbose)``.
"""

from quantum_broadcast import mbqc, protocols
from quantum_broadcast.library.graphs import DiagonalPhaseGate
from quantum_broadcast.library.states import BroadcastSpec
from quantum_broadcast.protocols.transcript import Mode


def _spec(p: dict, entangler=None) -> BroadcastSpec:
	return BroadcastSpec(p["senders"], p["receivers"], p["alpha"], p["beta"], entangler)


def bbp(p: dict, mode: Mode, seed: int):
	return protocols.run_bbp(p["alpha"], p["beta"], p["theta"], p["receivers"], mode, seed)


def bbp_rotated(p: dict, mode: Mode, seed: int):
	return protocols.run_bbp_rotated(p["rotation"], p["psi"], p["theta"], p["receivers"], mode, seed)


def multisender(p: dict, mode: Mode, seed: int):
	return protocols.run_multisender(
		p["senders"], p["receivers"], p["alpha"], p["beta"], p["thetas"], p["active"], mode, seed
	)


def add_sender(p: dict, mode: Mode, seed: int):
	_, transcript = protocols.add_sender(_spec(p), mode=mode, seed=seed)
	return transcript


def delete_sender(p: dict, mode: Mode, seed: int):
	return protocols.delete_sender(_spec(p), p["which"], mode=mode, seed=seed)


def phase_restricted(p: dict, mode: Mode, seed: int):
	return protocols.send_phase_restricted(
		p["k"], p["dim"], p["receivers"], p["alpha"], p["beta"], mode=mode, seed=seed
	)


def phase_general(p: dict, mode: Mode, seed: int):
	return protocols.send_phase_general(
		p["theta"], p["dim"], p["variant"], p["receivers"], p["alpha"], p["beta"], p["uses"], mode=mode, seed=seed
	)


def phase_approx(p: dict, mode: Mode, seed: int):
	return protocols.send_phase_general(
		p["theta"], p["dim"], "approximate", p["receivers"], p["alpha"], p["beta"], p["uses"], mode=mode, seed=seed
	)


def authentication(p: dict, mode: Mode, seed: int):
	return protocols.run_authentication(p["rounds"], p["receivers"], seed)


def qkd(p: dict, mode: Mode, seed: int):
	return protocols.run_qkd_pbc(p["rounds"], p["receivers"], p["strategy"], seed)


def graph_dist_phase(p: dict, mode: Mode, seed: int):
	if p["entangler"] == "ccz":
		entangler = DiagonalPhaseGate.ccz()
	else:
		entangler = DiagonalPhaseGate.from_graph(p["graph"])
	spec = BroadcastSpec(p["senders"], entangler.arity, p["alpha"], p["beta"], entangler)
	return protocols.run_graph_dist_phase(spec, p["thetas"], p["abort"], mode, seed)


def stabilizer_broadcast(p: dict, mode: Mode, seed: int):
	return protocols.run_stabilizer_broadcast(p["stabilizers"], p["abort"], mode, seed)


def phase_teleport(p: dict, mode: Mode, seed: int):
	return protocols.teleport_phase_gate(p["graph"], p["angles"], p["correct"], mode, seed)


def graph_reduce(p: dict, mode: Mode, seed: int):
	return protocols.run_graph_reduction(p["graph"], p["keep"], mode, seed)


def ghz_star(p: dict, mode: Mode, seed: int):
	return protocols.run_ghz_star(p["receivers"], mode, seed)


def ghz_ring(p: dict, mode: Mode, seed: int):
	return protocols.run_ghz_ring(p["receivers"], mode, seed)


def mbqc_cnot(p: dict, mode: Mode, seed: int):
	return mbqc.run_cnot_block(p["psi"], p["frame"], mode, seed, p["lazy"])


def mbqc_rotation(p: dict, mode: Mode, seed: int):
	return mbqc.run_rotation_block(p["psi"], p["first"], p["second"], p["frame"], mode, seed, p["lazy"])


def mbqc_program(p: dict, mode: Mode, seed: int):
	return mbqc.run_program(p["blocks"], p["psi"], p["frame"], p["samples"], mode, seed)
