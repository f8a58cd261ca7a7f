"""
Distributed MBQC

Brickwork blocks driven by teleported rotations from the sender and
X-only measurements by the receiver.
"""

from .brickwork import (
	AngleSchedule,
	BrickworkState,
	LogicalResult,
	PauliFrame,
	ProgramBlock,
	ScheduledAngle,
	block_byproducts,
	euler_rotation,
	logical_input,
)
from .service import (
	ProgramResult,
	block_results,
	grow_vertex,
	program_unitary,
	run_block,
	run_cnot_block,
	run_program,
	run_rotation_block,
	teleport_step,
	x_measure_step,
)

__all__ = [
	# Types
	"AngleSchedule",
	"BrickworkState",
	"LogicalResult",
	"PauliFrame",
	"ProgramBlock",
	"ScheduledAngle",
	"block_byproducts",
	"euler_rotation",
	"logical_input",
	# Runner
	"ProgramResult",
	"block_results",
	"grow_vertex",
	"program_unitary",
	"run_block",
	"run_cnot_block",
	"run_program",
	"run_rotation_block",
	"teleport_step",
	"x_measure_step",
]
