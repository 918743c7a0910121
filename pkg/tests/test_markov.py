"""Pair-state chain, exact stationary solve, collision closed forms."""

from fractions import Fraction as F
from itertools import product

import pytest

from cglhash import (
    AmbiguousStationaryError,
    Distribution,
    PairMatrix,
    build_pair_matrix,
    closed_form_collision,
    collision_probability,
    empirical_distribution,
    hash_bits,
    ideal_collision,
    ideal_deviation,
    nearest_prime_in_class,
    node_marginals,
    stationary_distribution,
    theoretical_node_distribution,
    theoretical_pair_distribution,
    to_sigfigs,
    verify_pair_aggregation,
)
from cglhash import markov

import oracles


def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution({"a": F(1, 2)})  # does not sum to 1
    with pytest.raises(ValueError):
        Distribution({"a": F(3, 2), "b": F(-1, 2)})
    d = Distribution({"a": F(1, 3), "b": F(2, 3)})
    e = Distribution({"a": F(2, 3), "b": F(1, 3)})
    assert d.l1_distance(e) == F(2, 3)
    assert d.l1_distance(d) == 0
    assert d["missing"] == 0
    assert d != e


def test_pair_matrix_p23_is_the_reference_chain(chain_cache):
    graph, pm, stationary = chain_cache(23)
    assert pm.dimension == 6
    labels = [(str(a), str(b)) for a, b in pm.labels()]
    assert labels == [("3", "3"), ("3", "19"), ("19", "3"), ("19", "19"), ("19", "0"), ("0", "19")]
    dense = [[str(x) for x in row] for row in pm.as_dense()]
    assert dense == [
        ["0", "1/2", "0", "0", "0", "0"],
        ["0", "0", "0", "1/2", "1/2", "0"],
        ["1", "1/2", "0", "0", "0", "0"],
        ["0", "0", "1/2", "0", "1/2", "0"],
        ["0", "0", "0", "0", "0", "1"],
        ["0", "0", "1/2", "1/2", "0", "0"],
    ]
    got = {(str(a), str(b)): v for (a, b), v in stationary.items()}
    assert got == {
        ("3", "3"): F(1, 11),
        ("3", "19"): F(2, 11),
        ("19", "3"): F(2, 11),
        ("19", "19"): F(2, 11),
        ("19", "0"): F(2, 11),
        ("0", "19"): F(2, 11),
    }
    marg = {str(k): v for k, v in node_marginals(stationary).items()}
    assert marg == {"3": F(3, 11), "19": F(6, 11), "0": F(2, 11)}


def test_columns_are_stochastic(chain_cache):
    for p in (11, 23, 43, 61):
        _, pm, _ = chain_cache(p)
        for c in range(pm.dimension):
            assert sum(pm.entry(r, c) for r in range(pm.dimension)) == 1


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 41, 43, 47, 61, 73, 89])
def test_stationary_hits_the_closed_forms(p, chain_cache):
    graph, pm, stationary = chain_cache(p)
    assert stationary == theoretical_pair_distribution(graph)
    marginal = node_marginals(stationary)
    assert marginal == theoretical_node_distribution(graph)
    assert collision_probability(marginal) == closed_form_collision(p)


def test_modular_and_dense_solvers_agree(graph_cache, monkeypatch):
    # p = 311 has 75 pair states, past the dense cut-over
    graph = graph_cache(311)
    pm = build_pair_matrix(graph)
    assert pm.dimension > markov._DENSE_LIMIT
    fast = stationary_distribution(pm)
    monkeypatch.setattr(markov, "_DENSE_LIMIT", 10**9)
    slow = stationary_distribution(pm, confirm=False)
    assert fast == slow
    assert fast == theoretical_pair_distribution(graph)


def test_ambiguous_fixed_space_is_reported(graph_cache):
    graph = graph_cache(11)
    # two absorbing loops: the fixed space is 2-dimensional
    pm = PairMatrix(graph, [(0, 0), (1, 1)], [{0: F(1)}, {1: F(1)}])
    with pytest.raises(AmbiguousStationaryError) as info:
        stationary_distribution(pm)
    assert info.value.dimension == 2


def test_collision_spot_values():
    assert closed_form_collision(23) == F(49, 121)
    assert closed_form_collision(41) == F(7, 25)
    assert closed_form_collision(43) == F(13, 49)
    assert closed_form_collision(47) == F(121, 529)
    assert closed_form_collision(61) == F(1, 5)
    assert ideal_collision(47) == F(1, 5)
    with pytest.raises(ValueError):
        closed_form_collision(10)


def test_deviation_spot_values():
    assert ideal_deviation(41) == F(3, 100)
    assert ideal_deviation(43) == F(3, 196)
    assert ideal_deviation(47) == F(76, 2645)
    assert ideal_deviation(61) == 0
    assert ideal_deviation(5) == 0 and ideal_deviation(7) == 0  # one-node graphs
    assert ideal_deviation(11) == F(1, 50)


@pytest.mark.parametrize("p", [17, 29, 41, 43, 47, 59, 83, 89, 101, 103, 107, 109])
def test_deviation_equals_difference_route(p):
    # ideal_deviation internally asserts the expanded polynomial forms
    assert ideal_deviation(p) == closed_form_collision(p) - ideal_collision(p)
    assert ideal_deviation(p) >= 0


def test_sigfig_rendering():
    assert to_sigfigs(F(3, 100)) == "3.00e-02"
    assert to_sigfigs(F(76, 2645)) == "2.87e-02"
    assert to_sigfigs(F(1, 3), 4) == "3.333e-01"
    assert to_sigfigs(F(2, 3), 2) == "6.7e-01"
    assert to_sigfigs(F(9996, 10000)) == "1.00e+00"  # carry across a decade
    assert to_sigfigs(F(-1, 8)) == "-1.25e-01"
    assert to_sigfigs(F(0)) == "0"
    assert to_sigfigs(F(1)) == "1.00e+00"
    assert to_sigfigs(F(1, 10**50)) == "1.00e-50"


def test_nearest_prime_small_cases():
    assert nearest_prime_in_class(100, 5) == 101
    assert nearest_prime_in_class(100, 7) == 103
    assert nearest_prime_in_class(100, 11) == 107
    assert nearest_prime_in_class(102, 5) == 101
    p = nearest_prime_in_class(10**6, 11)
    assert p % 12 == 11
    from sympy import isprime

    assert isprime(p)


def test_exhaustive_short_walks_match_the_chain(chain_cache):
    """Every length-6 bit string at p = 23, counted against the exact DP."""
    graph, pm, _ = chain_cache(23)
    counts = {}
    for bits in product((0, 1), repeat=6):
        j = hash_bits(23, list(bits))
        counts[str(j)] = counts.get(str(j), 0) + 1
    # the walk starts in pair state (1728, 1728): the initial forbidden root
    # is the dual of a step that also leaves from (and returns to) j = 1728
    start = next(
        k for k in range(pm.dimension)
        if [str(x) for x in pm.label(k)] == ["3", "3"]
    )
    dp = oracles.walk_distribution_dp(pm.columns, start, 6, pm.dimension)
    want = {}
    for k, mass in enumerate(dp):
        cur = str(pm.label(k)[0])
        want[cur] = want.get(cur, F(0)) + mass * 64
    assert {k: F(v) for k, v in counts.items()} == want


def test_empirical_distribution_is_seeded_and_close(graph_cache):
    res1 = empirical_distribution(23, samples=30_000, bit_length=96, seed=42)
    res2 = empirical_distribution(23, samples=30_000, bit_length=96, seed=42)
    assert res1.distribution == res2.distribution
    assert res1.l1_distance == res2.l1_distance
    assert float(res1.l1_distance) < 0.03
    assert res1.p_value > 1e-6  # a catastrophic mismatch would crater this
    res3 = empirical_distribution(23, samples=30_000, bit_length=96, seed=43)
    assert res3.distribution != res1.distribution


@pytest.mark.parametrize("p", [11, 23, 41])
def test_kernel_level_walk_aggregates_to_the_chain(p, chain_cache):
    graph, pm, _ = chain_cache(p)
    assert verify_pair_aggregation(graph, pm)


def test_theoretical_pair_handles_one_node_graphs(graph_cache):
    for p in (5, 7, 13):
        graph = graph_cache(p)
        dist = theoretical_pair_distribution(graph)
        j = graph.nodes[0].j
        assert dist.as_dict() == {(j, j): F(1)}
        assert theoretical_node_distribution(graph).as_dict() == {j: F(1)}
