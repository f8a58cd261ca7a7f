"""
Protocol Engine

Parties, transcripts and the enumerating session runner, together with every
broadcast, phase-sending, key and graph-distribution protocol.
"""

from .broadcast import (
	add_sender,
	delete_sender,
	receiver_names,
	run_bbp,
	run_bbp_rotated,
	run_multisender,
	sender_names,
)
from .graphs import (
	OutcomeRecord,
	correction_for,
	distribute_graph_state,
	ghz_stabilizers,
	reduction_parities,
	ring_graph,
	run_ghz_ring,
	run_ghz_star,
	run_graph_dist_phase,
	run_graph_reduction,
	run_stabilizer_broadcast,
	stabilizer_values,
	star_graph,
	teleport_phase_gate,
)
from .keys import (
	AuthenticationResult,
	QkdResult,
	expected_sifted_fraction,
	hop_bit,
	run_authentication,
	run_qkd_pbc,
	sift_round,
	trine_round,
)
from .phases import (
	PhaseEncoding,
	closed_form_encoding_fidelity,
	closed_form_rho_b,
	residual_encoding,
	send_phase_general,
	send_phase_restricted,
	threshold_measurement,
)
from .session import ProtocolSession, run_protocol
from .transcript import (
	BROADCAST,
	BranchRecord,
	ClassicalMessage,
	Mode,
	Party,
	PartyRole,
	ProtocolTranscript,
	Verdict,
)
from .verification import conclude, state_fidelity, worst_fidelity

__all__ = [
	# Transcripts and sessions
	"BROADCAST",
	"BranchRecord",
	"ClassicalMessage",
	"Mode",
	"Party",
	"PartyRole",
	"ProtocolSession",
	"ProtocolTranscript",
	"Verdict",
	"conclude",
	"run_protocol",
	"state_fidelity",
	"worst_fidelity",
	# Broadcast
	"add_sender",
	"delete_sender",
	"receiver_names",
	"run_bbp",
	"run_bbp_rotated",
	"run_multisender",
	"sender_names",
	# Phases
	"PhaseEncoding",
	"closed_form_encoding_fidelity",
	"closed_form_rho_b",
	"residual_encoding",
	"send_phase_general",
	"send_phase_restricted",
	"threshold_measurement",
	# Keys
	"AuthenticationResult",
	"QkdResult",
	"expected_sifted_fraction",
	"hop_bit",
	"run_authentication",
	"run_qkd_pbc",
	"sift_round",
	"trine_round",
	# Graphs
	"OutcomeRecord",
	"correction_for",
	"distribute_graph_state",
	"ghz_stabilizers",
	"reduction_parities",
	"ring_graph",
	"run_ghz_ring",
	"run_ghz_star",
	"run_graph_dist_phase",
	"run_graph_reduction",
	"run_stabilizer_broadcast",
	"stabilizer_values",
	"star_graph",
	"teleport_phase_gate",
]
