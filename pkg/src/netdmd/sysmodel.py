"""Ground-truth linear network dynamics, simulation, and random generators.

Systems and trajectories are immutable values; simulation is a pure function
of (system, x0, inputs). Random generation goes through one PRNG algorithm
project-wide (PCG64 keyed by integer tuples) so that results are bit-stable
regardless of execution order.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import BadConfig, DimensionMismatch
from .topology import NetworkTopology, local_subsystem

#: Separator used in serialized edge-block keys ("src->dst" with an arrow).
BLOCK_KEY_SEP = "→"


@dataclass(frozen=True, eq=False)
class LinearNetworkSystem:
    """A topology plus the coefficient blocks of each linear transition map.

    ``self_blocks[v]`` is the square block coupling vertex ``v`` to itself;
    ``edge_blocks[(w, v)]`` couples parent ``w`` (state or input) into ``v``.
    Construction verifies block/edge consistency eagerly.
    """

    topology: NetworkTopology
    self_blocks: dict[str, np.ndarray]
    edge_blocks: dict[tuple[str, str], np.ndarray]

    def __post_init__(self):
        t = self.topology
        self_blocks = {v: np.asarray(b, dtype=float) for v, b in self.self_blocks.items()}
        edge_blocks = {e: np.asarray(b, dtype=float) for e, b in self.edge_blocks.items()}
        for v in t.state_vertices:
            if v not in self_blocks:
                raise BadConfig(f"state vertex {v!r} has no self block")
            n = t.dims[v]
            if self_blocks[v].shape != (n, n):
                raise DimensionMismatch(f"self block of {v!r} must be {(n, n)}, got {self_blocks[v].shape}")
        extra = set(self_blocks) - set(t.state_vertices)
        if extra:
            raise BadConfig(f"self blocks for non-state vertices: {sorted(extra)}")
        edge_set = set(t.edges)
        for (src, dst), block in edge_blocks.items():
            if (src, dst) not in edge_set:
                raise BadConfig(f"block for non-edge {src}->{dst}")
            want = (t.dims[dst], t.dims[src])
            if block.shape != want:
                raise DimensionMismatch(f"block for {src}->{dst} must be {want}, got {block.shape}")
        missing = edge_set - set(edge_blocks)
        if missing:
            raise BadConfig(f"edges without blocks: {sorted(missing)}")
        object.__setattr__(self, "self_blocks", self_blocks)
        object.__setattr__(self, "edge_blocks", edge_blocks)


@dataclass(frozen=True, eq=False)
class TrajectoryData:
    """Aligned snapshot triples: states ``z``, inputs ``gamma``, successors ``y``.

    Column k of ``y`` is the successor of column k of ``z`` under column k of
    ``gamma``; when produced by :func:`simulate`, column k+1 of ``z`` equals
    column k of ``y``. ``vertex_row_ranges`` locates each vertex's rows
    (state ids index ``z``/``y`` rows, input ids index ``gamma`` rows).
    """

    z: np.ndarray
    gamma: np.ndarray
    y: np.ndarray
    vertex_row_ranges: dict[str, tuple[int, int]]

    @property
    def n_snapshots(self) -> int:
        return self.z.shape[1]


@dataclass(frozen=True)
class Circular:
    """Ring of scalar state vertices with an input attached every ``input_period``-th one."""

    n_states: int
    input_period: int = 2

    def __post_init__(self):
        if self.n_states < 2:
            raise BadConfig(f"circular family needs n_states >= 2, got {self.n_states}")
        if self.input_period < 1:
            raise BadConfig(f"input_period must be >= 1, got {self.input_period}")


@dataclass(frozen=True)
class ErdosRenyi:
    """Autonomous random digraph: each ordered non-self pair is an edge with probability p."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 1:
            raise BadConfig(f"erdos-renyi family needs n >= 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise BadConfig(f"p must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class GeneratorConfig:
    """Family plus coefficient/input ranges and the seed that fixes all draws."""

    family: Circular | ErdosRenyi
    coeff_range: tuple[float, float] = (-1.0, 1.0)
    input_range: tuple[float, float] = (-1.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        for name, (lo, hi) in (("coeff_range", self.coeff_range), ("input_range", self.input_range)):
            if not lo <= hi:
                raise BadConfig(f"{name} is empty: ({lo}, {hi})")


def derive_rng(*key: int) -> np.random.Generator:
    """PCG64 stream keyed by a tuple of integers.

    The project-wide convention for deriving independent streams, e.g.
    ``derive_rng(master_seed, trial)``; equal keys give bit-identical streams.
    """
    return np.random.default_rng(tuple(int(k) & 0xFFFFFFFFFFFFFFFF for k in key))


def step(system: LinearNetworkSystem, x, u) -> np.ndarray:
    """One transition of the full network.

    Each vertex's next value is its self block times its own component plus
    the edge blocks times the parent components, accumulated in declaration
    order (state parents first, then input parents) with plain double sums.
    """
    t = system.topology
    x = np.asarray(x, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if x.size != t.total_state_dim:
        raise DimensionMismatch(f"state vector has {x.size} entries, topology needs {t.total_state_dim}")
    if u.size != t.total_input_dim:
        raise DimensionMismatch(f"input vector has {u.size} entries, topology needs {t.total_input_dim}")
    srows = t.state_row_ranges()
    irows = t.input_row_ranges()
    out = np.empty_like(x)
    for v in t.state_vertices:
        a, b = srows[v]
        sub = local_subsystem(t, v)
        acc = system.self_blocks[v] @ x[a:b]
        for w in sub.state_parents:
            wa, wb = srows[w]
            acc = acc + system.edge_blocks[(w, v)] @ x[wa:wb]
        for e in sub.input_parents:
            ea, eb = irows[e]
            acc = acc + system.edge_blocks[(e, v)] @ u[ea:eb]
        out[a:b] = acc
    return out


def simulate(system: LinearNetworkSystem, x0, inputs) -> TrajectoryData:
    """Roll the system forward one column of ``inputs`` at a time.

    ``inputs`` is l-by-m (use an l=0 array for autonomous systems; its column
    count still sets the number of snapshot triples m).
    """
    t = system.topology
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2:
        raise DimensionMismatch(f"inputs must be 2-D (l x m), got shape {inputs.shape}")
    if inputs.shape[0] != t.total_input_dim:
        raise DimensionMismatch(f"inputs have {inputs.shape[0]} rows, topology needs {t.total_input_dim}")
    m = inputs.shape[1]
    if m < 1:
        raise DimensionMismatch("need at least one input column (m >= 1)")
    n = t.total_state_dim
    z = np.empty((n, m))
    y = np.empty((n, m))
    x = x0
    for k in range(m):
        z[:, k] = x
        x = step(system, x, inputs[:, k])
        y[:, k] = x
    return TrajectoryData(z=z, gamma=inputs.astype(float).copy(), y=y, vertex_row_ranges=t.vertex_row_ranges())


def _draw_blocks(topology: NetworkTopology, rng: np.random.Generator, coeff_range) -> LinearNetworkSystem:
    """Draw every coefficient block i.i.d. uniform, in a fixed per-vertex order.

    Draw order is: for each state vertex in declaration order, the self block,
    then each in-edge block with state parents before input parents. This
    pins the stream layout so equal seeds give bit-identical systems.
    """
    lo, hi = coeff_range
    self_blocks = {}
    edge_blocks = {}
    for v in topology.state_vertices:
        n = topology.dims[v]
        self_blocks[v] = rng.uniform(lo, hi, size=(n, n))
        sub = local_subsystem(topology, v)
        for w in sub.state_parents + sub.input_parents:
            edge_blocks[(w, v)] = rng.uniform(lo, hi, size=(n, topology.dims[w]))
    return LinearNetworkSystem(topology, self_blocks, edge_blocks)


def gen_circular(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> LinearNetworkSystem:
    """Random ring system: v_j feeds v_{j+1} (wrapping), inputs every ``input_period``-th vertex.

    All component dimensions are 1; input vertices attach starting at the
    first state vertex. Equal (cfg, seed) produce bit-identical systems.
    """
    if not isinstance(cfg.family, Circular):
        raise BadConfig("gen_circular requires a Circular family config")
    if rng is None:
        rng = derive_rng(cfg.seed)
    n = cfg.family.n_states
    states = [f"v{j}" for j in range(1, n + 1)]
    edges = [(states[j], states[(j + 1) % n]) for j in range(n)]
    inputs = []
    for count, j in enumerate(range(0, n, cfg.family.input_period), start=1):
        e = f"e{count}"
        inputs.append(e)
        edges.append((e, states[j]))
    dims = {v: 1 for v in states + inputs}
    topology = NetworkTopology(tuple(states), tuple(inputs), tuple(edges), dims)
    return _draw_blocks(topology, rng, cfg.coeff_range)


def gen_erdos_renyi(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> LinearNetworkSystem:
    """Random autonomous digraph: each ordered non-self pair is an edge w.p. p.

    Edge existence is drawn first (one uniform per ordered pair, row-major),
    then coefficients in the same per-vertex order as every other generator.
    """
    if not isinstance(cfg.family, ErdosRenyi):
        raise BadConfig("gen_erdos_renyi requires an ErdosRenyi family config")
    if rng is None:
        rng = derive_rng(cfg.seed)
    n = cfg.family.n
    states = [f"v{j}" for j in range(1, n + 1)]
    draws = rng.random((n, n))
    edges = [
        (states[i], states[j])
        for i in range(n)
        for j in range(n)
        if i != j and draws[i, j] < cfg.family.p
    ]
    dims = {v: 1 for v in states}
    topology = NetworkTopology(tuple(states), (), tuple(edges), dims)
    return _draw_blocks(topology, rng, cfg.coeff_range)


def true_full_matrices(system: LinearNetworkSystem) -> tuple[np.ndarray, np.ndarray]:
    """Assembled ground-truth (A, B) with exact zeros wherever there is no edge."""
    t = system.topology
    n = t.total_state_dim
    l = t.total_input_dim
    a = np.zeros((n, n))
    b = np.zeros((n, l))
    srows = t.state_row_ranges()
    irows = t.input_row_ranges()
    for v in t.state_vertices:
        ra, rb = srows[v]
        a[ra:rb, ra:rb] = system.self_blocks[v]
    for (src, dst), block in system.edge_blocks.items():
        ra, rb = srows[dst]
        if src in srows:
            ca, cb = srows[src]
            a[ra:rb, ca:cb] = block
        else:
            ca, cb = irows[src]
            b[ra:rb, ca:cb] = block
    return a, b


def system_to_dict(system: LinearNetworkSystem) -> dict:
    """JSON-ready form: the topology plus all coefficient blocks."""
    from .topology import topology_to_dict

    return {
        "topology": topology_to_dict(system.topology),
        "self_blocks": {v: block.tolist() for v, block in system.self_blocks.items()},
        "edge_blocks": {
            f"{src}{BLOCK_KEY_SEP}{dst}": block.tolist() for (src, dst), block in system.edge_blocks.items()
        },
    }


def system_from_dict(d: dict) -> LinearNetworkSystem:
    from .topology import topology_from_dict

    topology = topology_from_dict(d["topology"])
    self_blocks = {v: np.asarray(block, dtype=float) for v, block in d["self_blocks"].items()}
    edge_blocks = {}
    for key, block in d["edge_blocks"].items():
        src, _, dst = key.partition(BLOCK_KEY_SEP)
        edge_blocks[(src, dst)] = np.asarray(block, dtype=float)
    return LinearNetworkSystem(topology, self_blocks, edge_blocks)


def write_trajectory_csv(traj: TrajectoryData, topology: NetworkTopology, path) -> None:
    """CSV export: one row per time index with the state and input columns.

    Header is ``k, <vertex>:<component>..., u:<vertex>:<component>...``. The
    successor matrix is recoverable from the one-step shift plus a final row
    flagged ``y_final`` that carries the last successor column.
    """
    header = ["k"]
    header += [f"{v}:{c}" for v in topology.state_vertices for c in range(topology.dims[v])]
    header += [f"u:{e}:{c}" for e in topology.input_vertices for c in range(topology.dims[e])]
    m = traj.n_snapshots
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for k in range(m):
            row = [str(k + 1)]
            row += [repr(float(x)) for x in traj.z[:, k]]
            row += [repr(float(x)) for x in traj.gamma[:, k]]
            writer.writerow(row)
        final = ["y_final"]
        final += [repr(float(x)) for x in traj.y[:, -1]]
        final += [""] * traj.gamma.shape[0]
        writer.writerow(final)


def read_trajectory_csv(path) -> TrajectoryData:
    """Rebuild a :class:`TrajectoryData` written by :func:`write_trajectory_csv`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    state_cols = []
    input_cols = []
    for idx, name in enumerate(header[1:], start=1):
        if name.startswith("u:"):
            vertex = name[2:].rsplit(":", 1)[0]
            input_cols.append((idx, vertex))
        else:
            vertex = name.rsplit(":", 1)[0]
            state_cols.append((idx, vertex))
    data_rows = [r for r in rows[1:] if r and r[0] != "y_final"]
    final_rows = [r for r in rows[1:] if r and r[0] == "y_final"]
    if not data_rows or len(final_rows) != 1:
        raise DimensionMismatch("trajectory CSV needs data rows and exactly one y_final row")
    m = len(data_rows)
    z = np.empty((len(state_cols), m))
    gamma = np.empty((len(input_cols), m))
    for k, row in enumerate(data_rows):
        for r, (idx, _) in enumerate(state_cols):
            z[r, k] = float(row[idx])
        for r, (idx, _) in enumerate(input_cols):
            gamma[r, k] = float(row[idx])
    y = np.empty_like(z)
    if m > 1:
        y[:, : m - 1] = z[:, 1:]
    for r, (idx, _) in enumerate(state_cols):
        y[r, m - 1] = float(final_rows[0][idx])
    ranges: dict[str, tuple[int, int]] = {}
    for r, (_, vertex) in enumerate(state_cols):
        lo, hi = ranges.get(vertex, (r, r))
        ranges[vertex] = (min(lo, r), r + 1)
    for r, (_, vertex) in enumerate(input_cols):
        lo, hi = ranges.get(vertex, (r, r))
        ranges[vertex] = (min(lo, r), r + 1)
    return TrajectoryData(z=z, gamma=gamma, y=y, vertex_row_ranges=ranges)
