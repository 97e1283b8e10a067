import numpy as np
import pytest

from netdmd import LinearNetworkSystem, NetworkTopology, simulate


@pytest.fixture
def two_node_topology():
    """Two scalar state vertices, two inputs: e1->v1, v2->v1, e2->v2."""
    return NetworkTopology(
        state_vertices=("v1", "v2"),
        input_vertices=("e1", "e2"),
        edges=(("e1", "v1"), ("v2", "v1"), ("e2", "v2")),
        dims={"v1": 1, "v2": 1, "e1": 1, "e2": 1},
    )


@pytest.fixture
def two_node_system(two_node_topology):
    """The worked two-node system with coefficients (1.2, -0.5, 0.8, 1, 1)."""
    return LinearNetworkSystem(
        two_node_topology,
        self_blocks={"v1": [[1.2]], "v2": [[0.8]]},
        edge_blocks={("v2", "v1"): [[-0.5]], ("e1", "v1"): [[1.0]], ("e2", "v2"): [[1.0]]},
    )


@pytest.fixture
def two_node_trajectory(two_node_system):
    """Three snapshot triples from x0=(2,5) under the fixed input sequences."""
    inputs = np.array([[0.2, 0.4, 0.8], [0.3, 0.1, 0.3]])
    return simulate(two_node_system, (2.0, 5.0), inputs)
