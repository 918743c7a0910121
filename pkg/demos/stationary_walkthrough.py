"""Where do long random walks end up?  The p = 23 chain, solved exactly.

The walk remembers (current vertex, previous vertex) because it may not
immediately reverse the edge it came in on.  That pair process is an
honest Markov chain; its stationary vector gives the limiting hash-value
distribution, and it is NOT uniform: ordinary vertices carry weight
6/((p-1)/2), j=1728 carries 3/((p-1)/2), j=0 carries 2/((p-1)/2).
"""

from fractions import Fraction

from cglhash import (
    build_graph,
    build_pair_matrix,
    node_marginals,
    stationary_distribution,
    theoretical_node_distribution,
)

graph = build_graph(23)
pm = build_pair_matrix(graph)
print(f"p = 23: {graph.num_nodes} vertices -> {pm.dimension} pair states\n")

labels = [f"({a},{b})" for a, b in pm.labels()]
width = max(len(s) for s in labels)
print(" " * (width + 1), "  ".join(f"{s:>7}" for s in labels))
for r, row in enumerate(pm.as_dense()):
    print(f"{labels[r]:>{width}} ", "  ".join(f"{str(x):>7}" for x in row))

stationary = stationary_distribution(pm)
print("\nstationary vector (exact):")
for label, mass in stationary.items():
    print(f"  ({label[0]},{label[1]}): {mass}")

print("\ncollapsed to hash values:")
marginal = node_marginals(stationary)
for j, mass in marginal.items():
    print(f"  j = {j}: {mass}")

print("\n6-3-2 law prediction:", dict(
    (str(j), str(m)) for j, m in theoretical_node_distribution(graph).items()))
print("matches:", marginal == theoretical_node_distribution(graph))

# the same exact equality holds for every prime we can enumerate; try a few
for p in (101, 211, 499):
    g = build_graph(p)
    got = node_marginals(stationary_distribution(build_pair_matrix(g)))
    print(f"p = {p}: solved == predicted? {got == theoretical_node_distribution(g)}"
          f"   (ordinary vertex weight {Fraction(6, (p - 1) // 2)})")
