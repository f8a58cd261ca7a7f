app_name = "quantum_broadcast"
app_title = "Quantum Broadcast"
app_publisher = "Sebastian Ortiz Valencia"
app_description = "Deterministic simulator for entanglement-assisted quantum broadcasting protocols"
app_email = "sebastianortiz989@gmail.com"
app_license = "mit"

# Scenarios
# ---------
# Each named scenario resolves to a handler taking (parameters, mode, seed)
scenarios = {
	# Broadcast
	"bbp": "quantum_broadcast.scenarios.handlers.bbp",
	"bbp-rotated": "quantum_broadcast.scenarios.handlers.bbp_rotated",
	"multisender": "quantum_broadcast.scenarios.handlers.multisender",
	"add-sender": "quantum_broadcast.scenarios.handlers.add_sender",
	"delete-sender": "quantum_broadcast.scenarios.handlers.delete_sender",
	# Phases
	"phase-restricted": "quantum_broadcast.scenarios.handlers.phase_restricted",
	"phase-general": "quantum_broadcast.scenarios.handlers.phase_general",
	"phase-approx": "quantum_broadcast.scenarios.handlers.phase_approx",
	# Keys
	"auth": "quantum_broadcast.scenarios.handlers.authentication",
	"qkd": "quantum_broadcast.scenarios.handlers.qkd",
	# Graphs
	"graph-dist-phase": "quantum_broadcast.scenarios.handlers.graph_dist_phase",
	"stab-broadcast": "quantum_broadcast.scenarios.handlers.stabilizer_broadcast",
	"phase-teleport": "quantum_broadcast.scenarios.handlers.phase_teleport",
	"graph-reduce": "quantum_broadcast.scenarios.handlers.graph_reduce",
	"ghz-star": "quantum_broadcast.scenarios.handlers.ghz_star",
	"ghz-ring": "quantum_broadcast.scenarios.handlers.ghz_ring",
	# MBQC
	"mbqc-cnot": "quantum_broadcast.scenarios.handlers.mbqc_cnot",
	"mbqc-rotation": "quantum_broadcast.scenarios.handlers.mbqc_rotation",
	"mbqc-program": "quantum_broadcast.scenarios.handlers.mbqc_program",
}

# Alternative names accepted on the command line
scenario_aliases = {
	"unknown-phase-general": "phase-general",
	"unknown-phase-approx": "phase-approx",
	"known-phase": "phase-restricted",
	"authentication": "auth",
}
