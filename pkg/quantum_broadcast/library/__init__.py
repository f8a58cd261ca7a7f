"""
Quantum Library

Constructors for the named gates, bases and template states.
"""

from .gates import (
	CNOT,
	CZ,
	HADAMARD,
	PAULI_MATRICES,
	anti_trine_povm,
	cnot,
	computational_basis,
	controlled_gate,
	controlled_shift,
	correction_gate,
	cz,
	fourier_basis,
	hadamard,
	pauli,
	permutation_gate,
	rotated_x_basis,
	sender_phase_gate,
	shift_gate,
	trine_basis,
	unitary,
	x_basis,
	x_rotation,
	z_rotation,
)
from .graphs import BrickworkLayout, DiagonalPhaseGate, Graph, brickwork_block
from .pauli import (
	PauliString,
	check_stabilizer_generators,
	gf2_nullspace,
	gf2_rank,
	gf2_solve,
	minimal_weight_solution,
)
from .states import (
	BroadcastSpec,
	TrineSet,
	bell_pair,
	dicke_state,
	ghz_state,
	graph_state,
	make_broadcast_state,
	phase_encoding_state,
	plus_state,
	product_state,
	qubit_state,
	receiver_labels,
	sender_labels,
	stabilizer_state,
	trine_states,
)
# Re-bind the gate constructor: importing the .pauli submodule above shadows it with the module.
from .gates import pauli  # noqa: E402

__all__ = [
	# Gates and measurements
	"CNOT",
	"CZ",
	"HADAMARD",
	"PAULI_MATRICES",
	"anti_trine_povm",
	"cnot",
	"computational_basis",
	"controlled_gate",
	"controlled_shift",
	"correction_gate",
	"cz",
	"fourier_basis",
	"hadamard",
	"pauli",
	"permutation_gate",
	"rotated_x_basis",
	"sender_phase_gate",
	"shift_gate",
	"trine_basis",
	"unitary",
	"x_basis",
	"x_rotation",
	"z_rotation",
	# Graphs
	"BrickworkLayout",
	"DiagonalPhaseGate",
	"Graph",
	"brickwork_block",
	# Pauli strings
	"PauliString",
	"check_stabilizer_generators",
	"gf2_nullspace",
	"gf2_rank",
	"gf2_solve",
	"minimal_weight_solution",
	# States
	"BroadcastSpec",
	"TrineSet",
	"bell_pair",
	"dicke_state",
	"ghz_state",
	"graph_state",
	"make_broadcast_state",
	"phase_encoding_state",
	"plus_state",
	"product_state",
	"qubit_state",
	"receiver_labels",
	"sender_labels",
	"stabilizer_state",
	"trine_states",
]
