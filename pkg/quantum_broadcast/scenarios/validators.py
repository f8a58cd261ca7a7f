"""
Scenario Validators

Parsing of scenario parameters from their JSON form into the types the
protocol and MBQC operations take.
"""

from collections.abc import Mapping

import numpy as np

from quantum_broadcast.library.graphs import Graph
from quantum_broadcast.mbqc.brickwork import PauliFrame, ProgramBlock
from quantum_broadcast.shared.exceptions import ValidationError
from quantum_broadcast.shared.validators import (
	parse_complex,
	parse_pauli_string,
	validate_angles,
	validate_positive_int,
)


def parse_bool(value, name: str) -> bool:
	if isinstance(value, bool):
		return value
	if isinstance(value, str) and value.lower() in ("true", "false", "1", "0", "yes", "no"):
		return value.lower() in ("true", "1", "yes")
	if isinstance(value, int) and value in (0, 1):
		return bool(value)
	raise ValidationError(f"{name} must be true or false")


def parse_float(value, name: str) -> float:
	return validate_angles([value], name, count=1)[0]


def parse_vertex(value, name: str = "vertex"):
	"""Vertices are integers; JSON object keys arrive as digit strings."""
	if isinstance(value, str) and value.lstrip("-").isdigit():
		return int(value)
	if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
		return int(value)
	if isinstance(value, str) and value:
		return value
	raise ValidationError(f"{name} must be an integer or a name, got {value!r}")


def parse_graph(value, name: str = "graph") -> Graph:
	"""
	Read a graph from an edge list ``[[1, 2], [2, 3]]`` or from
	``{"vertices": [...], "edges": [...]}``.

	Raises:
		ValidationError: If an edge is not a pair
	"""
	vertices = None
	if isinstance(value, Mapping):
		unknown = set(value) - {"vertices", "edges"}
		if unknown:
			raise ValidationError(f"{name} has unknown fields {sorted(unknown)}")
		if "vertices" in value:
			vertices = [parse_vertex(v, f"{name} vertex") for v in value["vertices"]]
		value = value.get("edges", [])
	if not isinstance(value, (list, tuple)):
		raise ValidationError(f"{name} must be an edge list")
	edges = []
	for edge in value:
		if not isinstance(edge, (list, tuple)) or len(edge) != 2:
			raise ValidationError(f"{name} edges must be pairs, got {edge!r}")
		edges.append(tuple(parse_vertex(v, f"{name} vertex") for v in edge))
	if not edges and not vertices:
		raise ValidationError(f"{name} needs at least one edge or vertex")
	return Graph.from_edges(edges, vertices)


def parse_vertices(value, name: str = "vertices") -> list:
	if not isinstance(value, (list, tuple)) or not value:
		raise ValidationError(f"{name} must be a non-empty list")
	return [parse_vertex(v, name) for v in value]


def parse_angle_map(value, name: str = "angles") -> dict:
	"""``{"1": 0.3, "4": -1.2}`` to ``{1: 0.3, 4: -1.2}``."""
	if not isinstance(value, Mapping) or not value:
		raise ValidationError(f"{name} must be a non-empty mapping of vertex to angle")
	return {parse_vertex(k, f"{name} vertex"): parse_float(v, f"{name}[{k}]") for k, v in value.items()}


def parse_stabilizers(value, name: str = "stabilizers") -> list[str]:
	if isinstance(value, str):
		value = [part for part in value.replace(",", " ").split() if part]
	if not isinstance(value, (list, tuple)) or not value:
		raise ValidationError(f"{name} must be a non-empty list of Pauli strings")
	for item in value:
		if not isinstance(item, str):
			raise ValidationError(f"{name} must contain Pauli strings such as \"+XZI\"")
		parse_pauli_string(item)
	return list(value)


def parse_amplitudes(value, name: str = "state", size: int | None = None) -> np.ndarray:
	"""
	Amplitude list with complex entries as plain reals or ``[re, im]`` pairs.

	Raises:
		ValidationError: If the length differs from ``size``
	"""
	if not isinstance(value, (list, tuple)):
		raise ValidationError(f"{name} must be a list of amplitudes")
	amps = np.array([parse_complex(v, f"{name}[{i}]") for i, v in enumerate(value)], dtype=complex)
	if size is not None and amps.size != size:
		raise ValidationError(f"{name} must have {size} amplitudes, got {amps.size}")
	return amps


def parse_matrix(value, name: str = "matrix", size: int | None = None) -> np.ndarray:
	if not isinstance(value, (list, tuple)) or not value:
		raise ValidationError(f"{name} must be a list of rows")
	rows = [parse_amplitudes(row, f"{name} row", size) for row in value]
	if size is not None and len(rows) != size:
		raise ValidationError(f"{name} must have {size} rows")
	return np.vstack(rows)


def parse_int_list(value, name: str, minimum: int = 0) -> list[int]:
	if isinstance(value, (int, float, str)) and not isinstance(value, bool):
		value = [value]
	if not isinstance(value, (list, tuple)):
		raise ValidationError(f"{name} must be a list of integers")
	return [validate_positive_int(v, name, minimum=minimum) for v in value]


def parse_frame(value, name: str = "frame") -> PauliFrame:
	if isinstance(value, Mapping):
		unknown = set(value) - {"x1", "z1", "x2", "z2"}
		if unknown:
			raise ValidationError(f"{name} has unknown exponents {sorted(unknown)}")
		return PauliFrame(**{k: int(parse_bool(v, f"{name}.{k}")) for k, v in value.items()})
	if not isinstance(value, (list, tuple)):
		raise ValidationError(f"{name} must be four exponents [x1, z1, x2, z2]")
	return PauliFrame.from_list([validate_positive_int(v, name, minimum=0) for v in value])


def parse_blocks(value, name: str = "blocks") -> list[ProgramBlock]:
	if isinstance(value, (str, Mapping)) or not isinstance(value, (list, tuple)) or not value:
		raise ValidationError(f"{name} must be a non-empty list of blocks")
	return [ProgramBlock.parse(item) for item in value]
