"""The 2-isogeny graphs for the small primes used throughout the tests.

Every vertex is a j-invariant of a supersingular curve, every vertex has
exactly 3 outgoing edges, and the special vertices j = 0 and j = 1728
lose incoming edges to their extra automorphisms.
"""

from cglhash import build_graph, dual_pair_census, export_graph, supersingular_count

for p in (23, 41, 43, 47, 61):
    graph = build_graph(p)
    print(f"\np = {p}  ({graph.num_nodes} vertices; formula says {supersingular_count(p)})")
    for node in graph.nodes:
        tags = []
        if node.is_j0:
            tags.append("j=0")
        if node.is_j1728:
            tags.append("j=1728")
        suffix = f"  [{', '.join(tags)}]" if tags else ""
        outs = ", ".join(str(e.to_j) for e in graph.out_edges(node.index))
        print(f"  {node.j}: out -> {outs}   in-degree {graph.in_degrees[node.index]}{suffix}")
    census = dual_pair_census(graph)
    pairs = {f"{graph.nodes[a].j}~{graph.nodes[b].j}": c
             for (a, b), c in sorted(census.dual_pairs.items())}
    print("  dual edge pairs:", pairs)

print("\nGraphviz source for p = 23:\n")
print(export_graph(build_graph(23), fmt="dot"))
