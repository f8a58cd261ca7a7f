"""
Graphs and Diagonal Entanglers

Graph type for graph-state protocols (backed by networkx), multi-qubit
diagonal phase gates covering CZ products and hypergraph-style CCZ, and the
ten-vertex brickwork block.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from quantum_broadcast.config import get_settings
from quantum_broadcast.shared.exceptions import NotFoundError, ValidationError
from quantum_broadcast.tensor.types import LocalOperator

from .pauli import PauliString


@dataclass(frozen=True)
class Graph:
	"""
	Simple undirected graph with an ordered vertex set.

	Edges are stored as pairs ordered by vertex position.
	"""

	vertices: tuple
	edges: tuple[tuple, ...]

	def __post_init__(self):
		vertices = tuple(self.vertices)
		if len(set(vertices)) != len(vertices):
			raise ValidationError("Graph vertices must be unique")
		position = {v: i for i, v in enumerate(vertices)}
		normalized = set()
		for edge in self.edges:
			u, v = tuple(edge)
			if u not in position or v not in position:
				raise NotFoundError(f"Edge {tuple(edge)} references an unknown vertex")
			if u == v:
				raise ValidationError(f"Self-loop on vertex {u} is not allowed")
			normalized.add((u, v) if position[u] < position[v] else (v, u))
		edges = tuple(sorted(normalized, key=lambda e: (position[e[0]], position[e[1]])))
		object.__setattr__(self, "vertices", vertices)
		object.__setattr__(self, "edges", edges)

	@classmethod
	def from_edges(cls, edges: Iterable, vertices: Sequence | None = None) -> "Graph":
		"""Build a graph from an edge list; vertices default to those edges mention, sorted."""
		edges = [tuple(e) for e in edges]
		if vertices is None:
			vertices = sorted({v for e in edges for v in e})
		return cls(tuple(vertices), tuple(edges))

	@classmethod
	def from_networkx(cls, graph: nx.Graph) -> "Graph":
		return cls(tuple(graph.nodes), tuple(graph.edges))

	def to_networkx(self) -> nx.Graph:
		graph = nx.Graph()
		graph.add_nodes_from(self.vertices)
		graph.add_edges_from(self.edges)
		return graph

	def index(self, vertex) -> int:
		try:
			return self.vertices.index(vertex)
		except ValueError:
			raise NotFoundError(f"Vertex {vertex!r} not in graph")

	def neighbors(self, vertex) -> list:
		self.index(vertex)
		found = {u for e in self.edges for u in e if vertex in e and u != vertex}
		return [v for v in self.vertices if v in found]

	def induced(self, subset: Iterable) -> "Graph":
		"""Subgraph induced by ``subset`` (kept in this graph's vertex order)."""
		chosen = set(subset)
		for v in chosen:
			self.index(v)
		vertices = tuple(v for v in self.vertices if v in chosen)
		return Graph(vertices, tuple(e for e in self.edges if e[0] in chosen and e[1] in chosen))

	def stabilizer(self, vertex) -> PauliString:
		"""K_v = X_v times Z on every neighbour of v."""
		letters = ["I"] * len(self.vertices)
		letters[self.index(vertex)] = "X"
		for u in self.neighbors(vertex):
			letters[self.index(u)] = "Z"
		return PauliString("".join(letters))

	def stabilizers(self) -> list[PauliString]:
		return [self.stabilizer(v) for v in self.vertices]

	def is_connected(self) -> bool:
		return len(self.vertices) > 0 and nx.is_connected(self.to_networkx())


@dataclass(frozen=True, eq=False)
class DiagonalPhaseGate:
	"""
	Diagonal gate on ``arity`` qubits.

	Given as (subset, phase) terms: each computational string with every
	qubit of ``subset`` in |1> picks up e^{i phase}. A CZ on (i, j) is the
	term ({i, j}, pi); CCZ is ({i, j, k}, pi). An explicit diagonal may be
	given instead.
	"""

	arity: int
	terms: tuple[tuple[tuple[int, ...], float], ...] = ()
	explicit: np.ndarray | None = None

	def __post_init__(self):
		if self.arity < 1:
			raise ValidationError("A phase gate needs at least one qubit")
		terms = []
		for subset, phase in self.terms:
			subset = tuple(sorted(int(q) for q in subset))
			if not subset or any(not 0 <= q < self.arity for q in subset) or len(set(subset)) != len(subset):
				raise ValidationError(f"Invalid phase-gate subset {subset} for arity {self.arity}")
			terms.append((subset, float(phase)))
		object.__setattr__(self, "terms", tuple(terms))
		if self.explicit is not None:
			diagonal = np.asarray(self.explicit, dtype=complex).reshape(-1)
			if diagonal.size != 2**self.arity:
				raise ValidationError(f"Explicit diagonal must have {2**self.arity} entries")
			if not np.allclose(np.abs(diagonal), 1, atol=get_settings().algebraic_tol, rtol=0):
				raise ValidationError("Diagonal phase gate entries must have modulus 1")
			diagonal.flags.writeable = False
			object.__setattr__(self, "explicit", diagonal)

	@classmethod
	def identity(cls, arity: int) -> "DiagonalPhaseGate":
		return cls(arity)

	@classmethod
	def from_graph(cls, graph: Graph) -> "DiagonalPhaseGate":
		"""Product of CZ over the graph's edges, qubits in vertex order."""
		terms = [((graph.index(u), graph.index(v)), np.pi) for u, v in graph.edges]
		return cls(len(graph.vertices), tuple(terms))

	@classmethod
	def ccz(cls) -> "DiagonalPhaseGate":
		return cls(3, (((0, 1, 2), np.pi),))

	@classmethod
	def from_hyperedges(cls, arity: int, hyperedges: Iterable[Iterable[int]]) -> "DiagonalPhaseGate":
		"""Hypergraph entangler: a controlled-Z on every hyperedge."""
		return cls(arity, tuple((tuple(e), np.pi) for e in hyperedges))

	def diagonal(self) -> np.ndarray:
		"""Diagonal entries in computational order (qubit 0 most significant)."""
		if self.explicit is not None:
			return np.array(self.explicit)
		strings = np.arange(2**self.arity)
		bits = (strings[:, None] >> (self.arity - 1 - np.arange(self.arity))[None, :]) & 1
		phase = np.zeros(2**self.arity)
		for subset, angle in self.terms:
			phase += angle * np.all(bits[:, list(subset)] == 1, axis=1)
		return np.exp(1j * phase)

	def operator(self) -> LocalOperator:
		return LocalOperator(np.diag(self.diagonal()), name="U_phase")

	def is_identity(self) -> bool:
		return bool(np.allclose(self.diagonal(), 1))


@dataclass(frozen=True)
class BrickworkLayout:
	"""Brickwork block graph with its logical wiring."""

	graph: Graph
	inputs: tuple[int, int]
	outputs: tuple[int, int]
	# measurement columns in order; each pairs a wire-1 vertex with a wire-2 vertex
	columns: tuple[tuple[int, int], ...]


def brickwork_block() -> BrickworkLayout:
	"""
	Ten-vertex brickwork block.

	Wire 1 is 1-2-3-4-5, wire 2 is 6-7-8-9-10, with vertical links 3-8 and
	5-10. Inputs are {1, 6}, outputs {5, 10}.
	"""
	horizontal = [(1, 2), (2, 3), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9), (9, 10)]
	vertical = [(3, 8), (5, 10)]
	graph = Graph(tuple(range(1, 11)), tuple(horizontal + vertical))
	return BrickworkLayout(graph, (1, 6), (5, 10), ((1, 6), (2, 7), (3, 8), (4, 9)))
