"""
Tensor Domain

Mixed-dimension dense statevector and density-matrix engine.
"""

from .service import (
	TensorService,
	apply,
	basis_state,
	bipartition_entropies,
	collapse,
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
	probabilities,
	reorder,
	tensor,
	to_density,
)
from .types import (
	Branch,
	DensityMatrix,
	LocalOperator,
	Measurement,
	MeasurementBasis,
	Povm,
	StateVector,
	SubsystemId,
	SubsystemRef,
	psd_sqrt,
)

__all__ = [
	# Types
	"Branch",
	"DensityMatrix",
	"LocalOperator",
	"Measurement",
	"MeasurementBasis",
	"Povm",
	"StateVector",
	"SubsystemId",
	"SubsystemRef",
	# Operations
	"TensorService",
	"apply",
	"basis_state",
	"bipartition_entropies",
	"collapse",
	"discard",
	"entanglement_entropy",
	"enumerate_branches",
	"equal_up_to_global_phase",
	"expectation",
	"fidelity",
	"is_product_state",
	"make_state",
	"measure",
	"partial_trace",
	"probabilities",
	"psd_sqrt",
	"reorder",
	"tensor",
	"to_density",
]
