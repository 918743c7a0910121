"""The supersingular 2-isogeny multigraph over F_{p^2} at the j-level.

Nodes are j-invariants, discovered breadth-first from the canonical initial
curve; every node keeps one representative curve (a fixed model at j = 0
and j = 1728, the discovery model elsewhere).  Edges keep their kernel and
dual-kernel x-coordinates, and parallel edges are preserved — the walk
statistics depend on them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .conventions import convention_tag
from .curve import Curve, curve_from_j, find_initial_curve, supersingular_count
from .errors import GraphIntegrityError
from .field import FieldElement, make_field_context
from .isogeny import velu2


@dataclass(frozen=True)
class NodeRecord:
    index: int
    j: FieldElement
    representative: Curve
    is_j0: bool
    is_j1728: bool


@dataclass(frozen=True)
class EdgeRecord:
    from_index: int
    to_index: int
    from_j: FieldElement
    to_j: FieldElement
    kernel_x: FieldElement
    dual_kernel_x: FieldElement  # on the Velu codomain model of this edge


class IsogenyGraph:
    """Container for nodes (discovery order), edges, and adjacency views."""

    def __init__(self, p: int, nodes, edges):
        self.p = p
        self.ctx = make_field_context(p)
        self.nodes = nodes
        self.edges = edges
        self.node_index = {node.j: node.index for node in nodes}
        self.out = [[] for _ in nodes]
        self.in_degrees = [0] * len(nodes)
        for edge in edges:
            self.out[edge.from_index].append(edge)
            self.in_degrees[edge.to_index] += 1

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def out_edges(self, index: int):
        return list(self.out[index])

    def out_counts(self) -> dict:
        """Multiplicity of edges per ordered node-index pair."""
        counts: dict = {}
        for edge in self.edges:
            key = (edge.from_index, edge.to_index)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def node_for_j(self, j: FieldElement) -> NodeRecord:
        return self.nodes[self.node_index[j]]

    def __repr__(self):
        return f"IsogenyGraph(p={self.p}, nodes={self.num_nodes}, edges={len(self.edges)})"


def build_graph(p: int) -> IsogenyGraph:
    """Breadth-first build of the full 2-isogeny graph on supersingular j's."""
    ctx = make_field_context(p)
    j0 = ctx.zero
    j1728 = ctx.elem(1728)
    start = find_initial_curve(p)

    nodes = []
    node_index = {}
    queue = []

    def discover(j: FieldElement, model: Curve) -> int:
        if j in node_index:
            return node_index[j]
        if j == j0:
            rep = curve_from_j(j0)
        elif j == j1728:
            rep = curve_from_j(j1728)
        else:
            rep = model
        record = NodeRecord(len(nodes), j, rep, j == j0, j == j1728)
        node_index[j] = record.index
        nodes.append(record)
        queue.append(record)
        return record.index

    discover(start.j_invariant(), start)
    edges = []
    pos = 0
    while pos < len(queue):
        node = queue[pos]
        pos += 1
        rep = node.representative
        roots = rep.two_torsion_roots()  # canonical order fixes edge order
        if len(roots) != 3:
            raise GraphIntegrityError(f"node {node.j} has out-degree {len(roots)}")
        for root in roots:
            iso = velu2(rep, root)
            to_j = iso.codomain.j_invariant()
            to_index = discover(to_j, iso.codomain)
            edges.append(
                EdgeRecord(node.index, to_index, node.j, to_j, root, iso.dual_kernel_x)
            )

    graph = IsogenyGraph(p, nodes, edges)
    expected = supersingular_count(p)
    if graph.num_nodes != expected:
        raise GraphIntegrityError(
            f"discovered {graph.num_nodes} nodes over F_{p}^2, count formula says {expected}"
        )
    return graph


@dataclass(frozen=True)
class Census:
    """Edge multiplicities per ordered pair and dual-pair counts per unordered pair."""

    out_counts: dict  # (from_index, to_index) -> multiplicity
    dual_pairs: dict  # (min_index, max_index) -> number of dual pairs


def dual_pair_census(graph: IsogenyGraph) -> Census:
    """Count dual pairs of edges between every adjacent node pair.

    Between two ordinary nodes the edges pair off dual-to-dual, so the count
    per direction is the number of dual pairs (and must be symmetric).  The
    extra automorphisms at j = 0 and j = 1728 glue all parallel arrows into
    a single dual class, and a loop at j = 1728 is its own dual.
    """
    counts = graph.out_counts()
    n = graph.num_nodes
    dual_pairs = {}
    seen = set()
    for (u, v), multiplicity in counts.items():
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        nu, nv = graph.nodes[key[0]], graph.nodes[key[1]]
        if u == v:
            if n == 1:
                # Whole graph is one node with three loops; all its arrows
                # pair among themselves.
                dual_pairs[key] = 1 if (nu.is_j0 or nu.is_j1728) else multiplicity
            elif nu.is_j1728:
                if multiplicity != 1:
                    raise GraphIntegrityError(
                        f"j=1728 node carries {multiplicity} loops, expected exactly 1"
                    )
                dual_pairs[key] = 1  # the canonical self-dual loop
            elif nu.is_j0:
                raise GraphIntegrityError("j=0 node cannot carry a loop in a multi-node graph")
            else:
                if multiplicity > 2:
                    raise GraphIntegrityError(
                        f"node {nu.j} carries {multiplicity} loops; 3 would disconnect it"
                    )
                dual_pairs[key] = multiplicity
            continue
        c_uv = counts.get((key[0], key[1]), 0)
        c_vu = counts.get((key[1], key[0]), 0)
        if nu.is_j0 or nv.is_j0:
            zero, other = (nu, nv) if nu.is_j0 else (nv, nu)
            c_out = counts.get((zero.index, other.index), 0)
            c_in = counts.get((other.index, zero.index), 0)
            if c_out != 3 or c_in not in (1, 2) or (c_in == 2 and not other.is_j1728):
                raise GraphIntegrityError(
                    f"edges between j=0 and {other.j}: {c_out} out / {c_in} back"
                )
            dual_pairs[key] = 1  # all three arrows out of j=0 share one dual
        elif nu.is_j1728 or nv.is_j1728:
            special, other = (nu, nv) if nu.is_j1728 else (nv, nu)
            c_out = counts.get((special.index, other.index), 0)
            c_in = counts.get((other.index, special.index), 0)
            if c_out != 2 or c_in != 1:
                raise GraphIntegrityError(
                    f"edges between j=1728 and {other.j}: {c_out} out / {c_in} back"
                )
            dual_pairs[key] = 1  # the two arrows out of j=1728 share one dual
        else:
            if c_uv != c_vu:
                raise GraphIntegrityError(
                    f"asymmetric multiplicities between ordinary nodes "
                    f"{nu.j} and {nv.j}: {c_uv} vs {c_vu}"
                )
            if c_uv > 2:
                raise GraphIntegrityError(
                    f"{c_uv} dual pairs between distinct nodes {nu.j} and {nv.j};"
                    " 3 is impossible in a connected graph"
                )
            dual_pairs[key] = c_uv
    return Census(counts, dual_pairs)


def _node_label(node: NodeRecord) -> str:
    return str(node.j)


def export_graph(graph: IsogenyGraph, fmt: str = "json") -> str:
    """Deterministic serialisation; "json" (default) or "dot".

    Parallel edges stay separate entries/statements, and the convention
    block rides along so an export pins down the hash it belongs to.
    """
    if fmt == "json":
        return _export_json(graph)
    if fmt == "dot":
        return _export_dot(graph)
    raise ValueError(f"unknown export format {fmt!r}; expected 'dot' or 'json'")


def _export_json(graph: IsogenyGraph) -> str:
    doc = {
        "p": graph.p,
        "modulus": graph.ctx.modulus_str(),
        **convention_tag(),
        "nodes": [
            {
                "index": node.index,
                "j": _node_label(node),
                "curve": {"a": str(node.representative.a), "b": str(node.representative.b)},
                "is_j0": node.is_j0,
                "is_j1728": node.is_j1728,
            }
            for node in graph.nodes
        ],
        "edges": [
            {
                "from": str(edge.from_j),
                "to": str(edge.to_j),
                "from_index": edge.from_index,
                "to_index": edge.to_index,
                "kernel_x": str(edge.kernel_x),
                "dual_kernel_x": str(edge.dual_kernel_x),
            }
            for edge in graph.edges
        ],
    }
    return json.dumps(doc, indent=2)


def _export_dot(graph: IsogenyGraph) -> str:
    lines = [
        f"digraph isogeny_2_graph_{graph.p} {{",
        f'  // p = {graph.p}, modulus {graph.ctx.modulus_str()}, '
        f'convention {convention_tag()["convention"]}',
    ]
    for node in graph.nodes:
        tags = []
        if node.is_j0:
            tags.append("j=0")
        if node.is_j1728:
            tags.append("j=1728")
        suffix = f" ({', '.join(tags)})" if tags else ""
        lines.append(f'  n{node.index} [label="{_node_label(node)}{suffix}"];')
    for edge in graph.edges:
        lines.append(
            f'  n{edge.from_index} -> n{edge.to_index} '
            f'[label="x0={edge.kernel_x}", dual="{edge.dual_kernel_x}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
