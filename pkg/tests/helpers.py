"""Shared constructors for randomized test systems."""
import numpy as np

from netdmd.sysmodel import LinearNetworkSystem
from netdmd.topology import NetworkTopology


def random_small_system(rng: np.random.Generator, max_states: int = 4, max_inputs: int = 2) -> LinearNetworkSystem:
    """Random scalar-vertex system with arbitrary edges, for oracle comparisons."""
    n = int(rng.integers(1, max_states + 1))
    l = int(rng.integers(0, max_inputs + 1))
    states = [f"v{i}" for i in range(1, n + 1)]
    inputs = [f"e{i}" for i in range(1, l + 1)]
    edges = []
    for src in states:
        for dst in states:
            if src != dst and rng.random() < 0.5:
                edges.append((src, dst))
    for src in inputs:
        for dst in states:
            if rng.random() < 0.5:
                edges.append((src, dst))
    dims = {v: 1 for v in states + inputs}
    topology = NetworkTopology(tuple(states), tuple(inputs), tuple(edges), dims)
    self_blocks = {v: rng.uniform(-1, 1, (1, 1)) for v in states}
    edge_blocks = {e: rng.uniform(-1, 1, (1, 1)) for e in edges}
    return LinearNetworkSystem(topology, self_blocks, edge_blocks)
