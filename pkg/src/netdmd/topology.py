"""Directed-graph model of a networked control system.

Vertices split into state vertices and input vertices; every edge points at
a state vertex (input vertices only emit influence). A vertex's dependence
on itself is structural, not an edge, so self-loops are never stored and the
diagonal coupling block is always estimated. Vertex declaration order fixes
every downstream block ordering.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyNetwork, UnknownVertex


@dataclass(frozen=True)
class NetworkTopology:
    """Interconnection graph with per-vertex component dimensions.

    ``dims`` maps every vertex id to the dimension of its component. The
    dataclass itself admits malformed graphs so that :func:`validate` can
    report violations instead of raising.
    """

    state_vertices: tuple[str, ...]
    input_vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    dims: dict[str, int]

    def __post_init__(self):
        object.__setattr__(self, "state_vertices", tuple(self.state_vertices))
        object.__setattr__(self, "input_vertices", tuple(self.input_vertices))
        object.__setattr__(self, "edges", tuple((s, d) for s, d in self.edges))
        object.__setattr__(self, "dims", dict(self.dims))

    @property
    def total_state_dim(self) -> int:
        return sum(self.dims[v] for v in self.state_vertices)

    @property
    def total_input_dim(self) -> int:
        return sum(self.dims[e] for e in self.input_vertices)

    def state_row_ranges(self) -> dict[str, tuple[int, int]]:
        """Half-open row interval of each state vertex in a stacked state vector."""
        return _ranges(self.state_vertices, self.dims)

    def input_row_ranges(self) -> dict[str, tuple[int, int]]:
        """Half-open row interval of each input vertex in a stacked input vector."""
        return _ranges(self.input_vertices, self.dims)

    def vertex_row_ranges(self) -> dict[str, tuple[int, int]]:
        """Both range maps merged; state ids index state rows, input ids input rows."""
        merged = self.state_row_ranges()
        merged.update(self.input_row_ranges())
        return merged


def _ranges(vertices, dims):
    out = {}
    offset = 0
    for v in vertices:
        out[v] = (offset, offset + dims[v])
        offset += dims[v]
    return out


@dataclass(frozen=True)
class LocalSubsystem:
    """A state vertex plus everything with an edge into it.

    Parents are ordered by their position in the topology's declaration
    order, which makes all block assemblies deterministic. ``local_dim`` is
    the center dimension plus the sum of all parent dimensions.
    """

    center: str
    state_parents: tuple[str, ...]
    input_parents: tuple[str, ...]
    local_dim: int


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate`."""

    code: str
    subject: str
    message: str


def validate(t: NetworkTopology) -> list[Violation]:
    """Check all topology invariants; returns an empty list iff the graph is valid.

    Never raises: every problem becomes a :class:`Violation` naming the
    offending vertex or edge.
    """
    violations = []
    seen = set()
    for v in t.state_vertices + t.input_vertices:
        if v in seen:
            violations.append(Violation("duplicate_id", v, f"vertex id {v!r} declared twice"))
        seen.add(v)
    for v in t.state_vertices + t.input_vertices:
        if v not in t.dims:
            violations.append(Violation("missing_dim", v, f"no dimension for vertex {v!r}"))
        elif t.dims[v] < 1:
            violations.append(Violation("bad_dim", v, f"dimension of {v!r} must be >= 1, got {t.dims[v]}"))
    for v in t.dims:
        if v not in seen:
            violations.append(Violation("unknown_dim", v, f"dimension given for undeclared vertex {v!r}"))
    input_set = set(t.input_vertices)
    seen_edges = set()
    for src, dst in t.edges:
        label = f"{src}->{dst}"
        if src not in seen:
            violations.append(Violation("unknown_vertex", src, f"edge {label} has unknown source {src!r}"))
        if dst not in seen:
            violations.append(Violation("unknown_vertex", dst, f"edge {label} has unknown target {dst!r}"))
        elif dst in input_set:
            violations.append(Violation("input_vertex_has_in_edge", dst, f"edge {label} points into input vertex {dst!r}"))
        if src == dst:
            violations.append(Violation("self_edge", src, f"self edge on {src!r}; self-dependence is implicit"))
        if (src, dst) in seen_edges:
            violations.append(Violation("duplicate_edge", label, f"edge {label} declared twice"))
        seen_edges.add((src, dst))
    return violations


def local_subsystem(t: NetworkTopology, v: str) -> LocalSubsystem:
    """In-neighborhood of state vertex ``v``, split into state and input parents."""
    if v not in set(t.state_vertices):
        raise UnknownVertex(f"{v!r} is not a state vertex")
    state_order = {w: i for i, w in enumerate(t.state_vertices)}
    input_order = {e: i for i, e in enumerate(t.input_vertices)}
    state_parents = []
    input_parents = []
    for src, dst in t.edges:
        if dst != v:
            continue
        if src in state_order:
            state_parents.append(src)
        elif src in input_order:
            input_parents.append(src)
        else:
            raise UnknownVertex(f"edge source {src!r} is not declared")
    state_parents.sort(key=state_order.__getitem__)
    input_parents.sort(key=input_order.__getitem__)
    dim = t.dims[v] + sum(t.dims[w] for w in state_parents) + sum(t.dims[e] for e in input_parents)
    return LocalSubsystem(v, tuple(state_parents), tuple(input_parents), dim)


def max_local_dim(t: NetworkTopology) -> int:
    """Largest local-subsystem dimension over all state vertices."""
    if not t.state_vertices:
        raise EmptyNetwork("topology has no state vertices")
    return max(local_subsystem(t, v).local_dim for v in t.state_vertices)


def topology_to_dict(t: NetworkTopology) -> dict:
    """JSON-ready form; round-trips exactly through :func:`topology_from_dict`."""
    return {
        "state_vertices": [{"id": v, "dim": t.dims[v]} for v in t.state_vertices],
        "input_vertices": [{"id": e, "dim": t.dims[e]} for e in t.input_vertices],
        "edges": [[src, dst] for src, dst in t.edges],
    }


def topology_from_dict(d: dict) -> NetworkTopology:
    dims = {}
    states = []
    inputs = []
    for entry in d["state_vertices"]:
        states.append(entry["id"])
        dims[entry["id"]] = int(entry["dim"])
    for entry in d["input_vertices"]:
        inputs.append(entry["id"])
        dims[entry["id"]] = int(entry["dim"])
    edges = tuple((src, dst) for src, dst in d["edges"])
    return NetworkTopology(tuple(states), tuple(inputs), edges, dims)
