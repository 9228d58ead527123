import networkx as nx
import pytest

from ftdetect.graph import graph_from_edge_list

# the eight-vertex example graph (vertex vi is index i-1); the first nine
# edges are forced by the share example, the last four are the unique
# completion (up to isomorphism) with minimum values 5, 7, 4, 5
G8_EDGES = [(1, 2), (2, 3), (2, 4), (2, 6), (1, 4), (3, 4), (4, 8), (5, 6), (6, 7),
            (1, 7), (3, 5), (5, 8), (7, 8)]


def v(i):
    return i - 1


@pytest.fixture(scope="session")
def g8():
    return graph_from_edge_list(8, [(a - 1, b - 1) for a, b in G8_EDGES])


def small_graphs(max_n=7):
    """Every graph on 1..max_n vertices up to isomorphism, as edge lists."""
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= max_n:
            yield h.number_of_nodes(), list(h.edges())
