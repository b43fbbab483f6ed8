"""Block-cutpoint trees, (i, j)-pruning and blob-chain decompositions.

Only edges with finite weight take part: an edge of weight ``+inf`` has a
zero Dirac entry and does not connect anything.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .chains import Chain
from .graph import DiracOperator, GraphError, WeightedGraph, _check_vertex


def support_graph(g: WeightedGraph | DiracOperator) -> nx.Graph:
    """networkx graph on ``1..n`` holding the finite-weight edges with their weights."""
    G = nx.Graph()
    G.add_nodes_from(range(1, g.n + 1))
    if isinstance(g, DiracOperator):
        for u, v in g.support():
            G.add_edge(u, v, weight=g.weight(u, v))
    else:
        for (u, v) in g.finite_edges():
            G.add_edge(u, v, weight=g.weights[(u, v)])
    return G


@dataclass(frozen=True)
class BlockCutTree:
    """Blocks, cutpoints and the tree joining each block to the cutpoints it contains.

    Tree nodes are ``("B", k)`` for ``blocks[k]`` and ``("C", v)`` for cutpoint ``v``.
    """

    blocks: tuple[frozenset, ...]
    cutpoints: frozenset
    tree: nx.Graph
    bc: dict

    def is_bridge(self, k: int) -> bool:
        return len(self.blocks[k]) == 2

    def path(self, i: int, j: int) -> list:
        return nx.shortest_path(self.tree, self.bc[i], self.bc[j])


def block_cut_tree(g: WeightedGraph | DiracOperator | nx.Graph) -> BlockCutTree:
    G = g if isinstance(g, nx.Graph) else support_graph(g)
    if G.number_of_nodes() == 0 or not nx.is_connected(G):
        raise GraphError("block-cutpoint tree needs a connected graph")
    if G.number_of_nodes() == 1:
        (v,) = G.nodes
        blocks = (frozenset([v]),)
    else:
        blocks = tuple(
            sorted((frozenset(b) for b in nx.biconnected_components(G)), key=lambda b: sorted(b))
        )
    cutpoints = frozenset(nx.articulation_points(G))
    tree = nx.Graph()
    bc = {}
    for k, b in enumerate(blocks):
        tree.add_node(("B", k))
        for v in b:
            if v in cutpoints:
                tree.add_edge(("B", k), ("C", v))
            else:
                bc[v] = ("B", k)
    for c in cutpoints:
        bc[c] = ("C", c)
    return BlockCutTree(blocks, cutpoints, tree, bc)


def prune(g, i: int, j: int, tree: BlockCutTree | None = None) -> frozenset:
    """Vertex set of the (i, j)-pruning: the blocks met on the tree path from i to j."""
    G = g if isinstance(g, nx.Graph) else support_graph(g)
    if i == j:
        raise GraphError("pruning needs two distinct vertices")
    if not nx.has_path(G, i, j):
        raise GraphError(f"vertices {i} and {j} are not connected")
    if tree is None:
        tree = block_cut_tree(G.subgraph(nx.node_connected_component(G, i)).copy())
    out = set()
    for kind, x in tree.path(i, j):
        if kind == "B":
            out |= tree.blocks[x]
    return frozenset(out)


@dataclass(frozen=True)
class Blob:
    """Bridgeless run of blocks, entered at ``entry`` and left at ``exit``.

    A degenerate blob has a single vertex and ``entry == exit``.
    """

    vertices: frozenset
    entry: int
    exit: int

    @property
    def degenerate(self) -> bool:
        return self.entry == self.exit


@dataclass(frozen=True)
class ChainSegment:
    """Maximal run of bridges, as a vertex path with its edge weights."""

    path: tuple[int, ...]
    weights: tuple[float, ...]

    def chain(self) -> Chain:
        return Chain(self.weights)


@dataclass(frozen=True)
class BlobChainDecomposition:
    """Alternation ``b_1 - C_1 - b_2 - ... - C_{k-1} - b_k`` between ``source`` and ``target``."""

    source: int
    target: int
    blobs: tuple[Blob, ...]
    chains: tuple[ChainSegment, ...]
    pruned: frozenset

    @property
    def k(self) -> int:
        return len(self.blobs)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "blobs": [
                {"vertices": sorted(b.vertices), "entry": b.entry, "exit": b.exit} for b in self.blobs
            ],
            "chains": [{"path": list(c.path), "weights": list(c.weights)} for c in self.chains],
        }


def blob_chain(g, i: int, j: int) -> BlobChainDecomposition:
    """Blob-chain decomposition of the (i, j)-pruning.

    The pruned graph's block-cutpoint tree is a path of blocks; consecutive
    bridges form chains and consecutive non-bridge blocks form blobs.  When
    an end of the alternation is a chain, a degenerate one-vertex blob is
    placed there so the sequence always starts and ends with a blob.
    """
    G = g if isinstance(g, nx.Graph) else support_graph(g)
    for v in (i, j):
        _check_vertex(v, G.number_of_nodes())
    if i == j:
        raise GraphError("blob-chain decomposition needs two distinct vertices")
    tree = block_cut_tree(G.subgraph(nx.node_connected_component(G, i)).copy()) if nx.has_path(G, i, j) else None
    pruned = prune(G, i, j, tree)
    path = tree.path(i, j)
    block_ids = [x for kind, x in path if kind == "B"]
    # the vertex through which the walk enters each block
    entries = [i]
    for a, b in zip(block_ids, block_ids[1:]):
        (c,) = tree.blocks[a] & tree.blocks[b]
        entries.append(c)
    exits = entries[1:] + [j]

    # group consecutive blocks of the same kind
    runs = []
    for k, b in enumerate(block_ids):
        bridge = tree.is_bridge(b)
        if runs and runs[-1][0] == bridge:
            runs[-1][1].append(k)
        else:
            runs.append((bridge, [k]))

    blobs, chains = [], []
    if runs[0][0]:
        blobs.append(Blob(frozenset([i]), i, i))
    for bridge, ks in runs:
        start, end = entries[ks[0]], exits[ks[-1]]
        if bridge:
            vertices = [start] + [exits[k] for k in ks]
            weights = [G.edges[a, b]["weight"] for a, b in zip(vertices, vertices[1:])]
            chains.append(ChainSegment(tuple(vertices), tuple(weights)))
        else:
            verts = frozenset().union(*(tree.blocks[block_ids[k]] for k in ks))
            blobs.append(Blob(verts, start, end))
    if runs[-1][0]:
        blobs.append(Blob(frozenset([j]), j, j))
    return BlobChainDecomposition(i, j, tuple(blobs), tuple(chains), pruned)


def amputate(chain: Chain) -> Chain | None:
    """Drop the first and last weights; ``None`` (the empty chain) when ``len <= 2``."""
    if len(chain) <= 2:
        return None
    return Chain(chain.weights[1:-1])
