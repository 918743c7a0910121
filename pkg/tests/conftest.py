import pytest

from cglhash import build_graph, build_pair_matrix, stationary_distribution


@pytest.fixture(scope="session")
def graph_cache():
    """Share built graphs across test modules; construction dominates runtime."""
    cache = {}

    def get(p):
        if p not in cache:
            cache[p] = build_graph(p)
        return cache[p]

    return get


@pytest.fixture(scope="session")
def chain_cache(graph_cache):
    """(graph, pair matrix, stationary distribution) per prime, computed once."""
    cache = {}

    def get(p):
        if p not in cache:
            graph = graph_cache(p)
            pm = build_pair_matrix(graph)
            cache[p] = (graph, pm, stationary_distribution(pm))
        return cache[p]

    return get
