"""Multigraph construction, census rules, and serialisation."""

import json

import pytest

from cglhash import (
    build_graph,
    curve_from_j,
    dual_pair_census,
    export_graph,
    is_supersingular,
    make_field_context,
    supersingular_count,
    velu2,
)

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61]


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_node_count_is_the_class_number_formula(p, graph_cache):
    assert graph_cache(p).num_nodes == supersingular_count(p)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_node_set_equals_supersingular_j_scan(p, graph_cache):
    # independent route: test every j in the field for supersingularity
    ctx = make_field_context(p)
    want = {j for j in ctx.elements() if is_supersingular(curve_from_j(j))}
    assert {n.j for n in graph_cache(p).nodes} == want


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_three_out_edges_everywhere(p, graph_cache):
    graph = graph_cache(p)
    for i in range(graph.num_nodes):
        assert len(graph.out_edges(i)) == 3
    assert sum(graph.in_degrees) == 3 * graph.num_nodes


@pytest.mark.parametrize("p", [23, 41, 43, 47])
def test_edges_are_isogenies(p, graph_cache):
    graph = graph_cache(p)
    for edge in graph.edges:
        rep = graph.nodes[edge.from_index].representative
        iso = velu2(rep, edge.kernel_x)
        assert iso.codomain.j_invariant() == edge.to_j
        assert iso.dual_kernel_x == edge.dual_kernel_x


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_every_edge_has_a_return_edge(p, graph_cache):
    graph = graph_cache(p)
    arrows = {(e.from_index, e.to_index) for e in graph.edges}
    assert all((b, a) in arrows for a, b in arrows)


def test_reference_structure_p23(graph_cache):
    graph = graph_cache(23)
    js = [str(n.j) for n in graph.nodes]
    assert js == ["3", "19", "0"]  # discovery order from the j=1728 start
    assert graph.nodes[0].is_j1728 and graph.nodes[2].is_j0
    outs = {str(n.j): sorted(str(e.to_j) for e in graph.out_edges(n.index)) for n in graph.nodes}
    assert outs == {"3": ["19", "19", "3"], "19": ["0", "19", "3"], "0": ["19", "19", "19"]}
    assert graph.in_degrees == [2, 6, 1]
    census = dual_pair_census(graph)
    assert census.dual_pairs == {(0, 0): 1, (0, 1): 1, (1, 1): 1, (1, 2): 1}


def test_zero_node_anomaly_p41(graph_cache):
    graph = graph_cache(41)
    zero = next(n for n in graph.nodes if n.is_j0)
    targets = [str(e.to_j) for e in graph.out_edges(zero.index)]
    assert len(set(targets)) == 1  # all three arrows leave to the same neighbour
    assert graph.in_degrees[zero.index] == 1


def test_1728_node_anomaly_p43(graph_cache):
    graph = graph_cache(43)
    node = next(n for n in graph.nodes if n.is_j1728)
    assert str(node.j) == "8"  # 1728 mod 43
    assert len(graph.out_edges(node.index)) == 3
    assert graph.in_degrees[node.index] == 2


def test_both_anomalies_p47(graph_cache):
    graph = graph_cache(47)
    assert graph.num_nodes == 5
    zero = next(n for n in graph.nodes if n.is_j0)
    node1728 = next(n for n in graph.nodes if n.is_j1728)
    assert graph.in_degrees[zero.index] == 1
    assert graph.in_degrees[node1728.index] == 2
    # 1728 keeps a self-loop from the extra automorphism
    assert any(e.to_index == node1728.index for e in graph.out_edges(node1728.index))


def test_regular_case_p61(graph_cache):
    graph = graph_cache(61)
    assert graph.num_nodes == 5
    assert not any(n.is_j0 or n.is_j1728 for n in graph.nodes)
    assert all(d == 3 for d in graph.in_degrees)


def test_degenerate_single_node_graphs(graph_cache):
    for p, flag in ((5, "is_j0"), (7, "is_j1728"), (13, None)):
        graph = graph_cache(p)
        assert graph.num_nodes == 1
        node = graph.nodes[0]
        if flag:
            assert getattr(node, flag)
        else:
            assert not node.is_j0 and not node.is_j1728
        assert all(e.to_index == 0 for e in graph.edges)  # everything loops


def test_two_node_graph_p11(graph_cache):
    graph = graph_cache(11)
    assert graph.num_nodes == 2
    zero = next(n for n in graph.nodes if n.is_j0)
    node1728 = next(n for n in graph.nodes if n.is_j1728)
    assert graph.in_degrees[zero.index] == 2
    assert graph.in_degrees[node1728.index] == 4


def test_census_counts_add_up(graph_cache):
    for p in (17, 19, 23, 41, 43, 47, 61):
        graph = graph_cache(p)
        census = dual_pair_census(graph)
        assert sum(census.out_counts.values()) == 3 * graph.num_nodes
        for pair, count in census.dual_pairs.items():
            assert 1 <= count <= 3
            assert pair == (min(pair), max(pair))


def test_json_export_round_trips(graph_cache):
    graph = graph_cache(23)
    doc = json.loads(export_graph(graph, fmt="json"))
    assert doc["p"] == 23
    assert doc["convention"] == "lex-walk-v1"
    assert doc["modulus"] == "z^2+1"
    assert len(doc["nodes"]) == 3
    assert len(doc["edges"]) == 9
    assert {n["j"] for n in doc["nodes"]} == {"3", "19", "0"}
    for edge in doc["edges"]:
        assert set(edge) >= {"from", "to", "kernel_x", "dual_kernel_x"}


def test_dot_export_shape(graph_cache):
    text = export_graph(graph_cache(41), fmt="dot")
    assert text.startswith("digraph ")
    assert text.count("{") == text.count("}") == 1
    assert text.rstrip().endswith("}")
    assert text.count("->") == 12  # 3 arrows per node, parallel edges kept
    with pytest.raises(ValueError):
        export_graph(graph_cache(41), fmt="gml")
