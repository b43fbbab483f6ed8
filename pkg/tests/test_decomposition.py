import math

import networkx as nx
import numpy as np
import pytest

from ncdistance.chains import Chain
from ncdistance.decomposition import amputate, blob_chain, block_cut_tree, prune, support_graph
from ncdistance.graph import GraphError, WeightedGraph, dirac_from_weights, random_instance, restrict
from ncdistance.solver import nc_distance

from conftest import path_graph, triangle_chain_triangle, unit_triangle


def brute_cutpoints(G):
    out = set()
    for v in G.nodes:
        H = G.copy()
        H.remove_node(v)
        if H.number_of_nodes() and not nx.is_connected(H):
            out.add(v)
    return out


def brute_pruning(G, i, j):
    verts = set()
    for p in nx.all_simple_paths(G, i, j):
        verts |= set(p)
    return frozenset(verts)


def bowtie():
    return WeightedGraph.from_edges(5, [(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)])


def test_block_cut_tree_examples():
    t = block_cut_tree(unit_triangle())
    assert t.blocks == (frozenset({1, 2, 3}),) and not t.cutpoints
    t = block_cut_tree(path_graph([1, 1]))
    assert set(t.blocks) == {frozenset({1, 2}), frozenset({2, 3})}
    assert t.cutpoints == {2}
    t = block_cut_tree(bowtie())
    assert len(t.blocks) == 2 and t.cutpoints == {3}
    with pytest.raises(GraphError):
        block_cut_tree(WeightedGraph.from_edges(3, [(1, 2, 1)]))


def test_infinite_edges_do_not_connect():
    g = WeightedGraph.from_edges(3, [(1, 2, 1), (2, 3, 1), (1, 3, math.inf)])
    assert block_cut_tree(g).cutpoints == {2}


@pytest.mark.parametrize("seed", range(30))
def test_block_cut_tree_invariants(seed):
    g = random_instance(seed, 9, 0.25)
    G = support_graph(g)
    t = block_cut_tree(g)
    assert t.cutpoints == brute_cutpoints(G)
    assert nx.is_tree(t.tree)
    for (kind_b, k), (kind_c, c) in (sorted(e) for e in t.tree.edges):
        assert kind_b == "B" and kind_c == "C" and c in t.blocks[k]
    for a in range(len(t.blocks)):
        for b in range(a + 1, len(t.blocks)):
            assert len(t.blocks[a] & t.blocks[b]) <= 1
    # each block is 2-connected or a single edge, and the blocks cover every edge once
    covered = []
    for b in t.blocks:
        H = G.subgraph(b)
        assert len(b) == 2 or nx.is_biconnected(H)
        covered += [tuple(sorted(e)) for e in H.edges]
    assert sorted(covered) == sorted(tuple(sorted(e)) for e in G.edges)


def test_prune_examples():
    assert prune(support_graph(path_graph([1, 2, 3])), 1, 4) == {1, 2, 3, 4}
    star = WeightedGraph.from_edges(4, [(1, 2, 1), (1, 3, 1), (1, 4, 1)])
    assert prune(support_graph(star), 2, 3) == {1, 2, 3}
    # triangle 1-2-3, chain 3-4-5 to a square 5-6-7-8, dangling branch 4-9-10
    g = WeightedGraph.from_edges(
        10,
        [(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1), (7, 8, 1), (8, 5, 1),
         (4, 9, 1), (9, 10, 1)],
    )
    G = support_graph(g)
    assert prune(G, 1, 7) == brute_pruning(G, 1, 7) == {1, 2, 3, 4, 5, 6, 7, 8}
    with pytest.raises(GraphError):
        prune(G, 1, 1)
    with pytest.raises(GraphError):
        prune(support_graph(WeightedGraph.from_edges(3, [(1, 2, 1)])), 1, 3)


@pytest.mark.parametrize("seed", range(40))
def test_prune_is_union_of_simple_paths(seed):
    g = random_instance(seed, 8, 0.3)
    G = support_graph(g)
    rng = np.random.default_rng(seed)
    i, j = (int(x) for x in rng.choice(np.arange(1, 9), 2, replace=False))
    assert prune(G, i, j) == brute_pruning(G, i, j)


def test_blob_chain_pure_chain():
    dec = blob_chain(support_graph(path_graph([1, 2, 3])), 1, 4)
    assert dec.k == 2
    assert all(b.degenerate for b in dec.blobs)
    assert dec.blobs[0].entry == 1 and dec.blobs[-1].exit == 4
    assert [c.chain() for c in dec.chains] == [Chain((1.0, 2.0, 3.0))]


def test_blob_chain_triangle_bridge_triangle():
    g = WeightedGraph.from_edges(6, [(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (4, 6, 1)])
    dec = blob_chain(support_graph(g), 1, 6)
    assert [b.vertices for b in dec.blobs] == [{1, 2, 3}, {4, 5, 6}]
    assert [(b.entry, b.exit) for b in dec.blobs] == [(1, 3), (4, 6)]
    assert [c.path for c in dec.chains] == [(3, 4)]


def test_blob_chain_shared_vertex_is_one_blob():
    dec = blob_chain(support_graph(bowtie()), 1, 5)
    assert dec.k == 1 and not dec.chains
    assert dec.blobs[0].vertices == {1, 2, 3, 4, 5}


def test_blob_chain_mixed_ends():
    dec = blob_chain(support_graph(triangle_chain_triangle()), 1, 8)
    assert [(b.entry, b.exit) for b in dec.blobs] == [(1, 3), (6, 8)]
    assert dec.chains[0].path == (3, 4, 5, 6)
    g = WeightedGraph(10, {**triangle_chain_triangle().weights, (8, 9): 1.0, (9, 10): 2.0})
    dec = blob_chain(support_graph(g), 2, 10)
    assert dec.blobs[-1].degenerate and dec.blobs[-1].entry == 10
    assert [c.path for c in dec.chains] == [(3, 4, 5, 6), (8, 9, 10)]


@pytest.mark.parametrize("seed", range(30))
def test_blob_chain_structure(seed):
    g = random_instance(seed, 9, 0.22)
    G = support_graph(g)
    dec = blob_chain(G, 1, 9)
    assert dec.blobs[0].entry == 1 and dec.blobs[-1].exit == 9
    assert len(dec.chains) == dec.k - 1
    edges = []
    for b, blob in enumerate(dec.blobs):
        H = G.subgraph(blob.vertices)
        assert not any(nx.bridges(H))
        edges += [frozenset(e) for e in H.edges]
        if b < len(dec.chains):
            chain = dec.chains[b]
            assert chain.path[0] == blob.exit and chain.path[-1] == dec.blobs[b + 1].entry
            edges += [frozenset(e) for e in zip(chain.path, chain.path[1:])]
    # every pruned edge is classified exactly once
    assert len(edges) == len(set(edges))
    assert set(edges) == {frozenset(e) for e in G.subgraph(dec.pruned).edges}


def test_blob_chain_errors():
    with pytest.raises(GraphError):
        blob_chain(support_graph(unit_triangle()), 2, 2)
    with pytest.raises(GraphError):
        blob_chain(support_graph(WeightedGraph.from_edges(3, [(1, 2, 1)])), 1, 3)


def test_amputate():
    assert amputate(Chain((1.0, 2.0, 3.0))) == Chain((2.0,))
    assert amputate(Chain((1.0, 2.0))) is None
    assert amputate(Chain((1.0,))) is None
    assert amputate(Chain((1.0, 2.0, 3.0, 4.0, 5.0))) == Chain((2.0, 3.0, 4.0))


@pytest.mark.parametrize("seed", range(10))
def test_pruning_preserves_distance(seed):
    g = random_instance(seed, 8, 0.25)
    D = dirac_from_weights(g)
    keep = prune(support_graph(g), 1, 8)
    order = sorted(keep)
    sub = restrict(D, keep)
    assert nc_distance(sub, order.index(1) + 1, order.index(8) + 1).value == pytest.approx(
        nc_distance(D, 1, 8).value, rel=1e-6
    )
