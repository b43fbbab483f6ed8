"""Weighted graphs, compatible Dirac operators, geodesics and JSON I/O.

Vertices are labelled ``1..n`` everywhere in the public API.  Matrices are
stored 0-based, so vertex ``v`` lives in row ``v - 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

Edge = tuple[int, int]

HERMITIAN_TOL = 1e-12


class GraphError(ValueError):
    """Raised for malformed documents and violated graph invariants."""


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected loop-free graph with weights in ``(0, inf]``.

    ``phases`` optionally assigns a phase (radians) to an edge; it is applied
    to the ``(u, v)`` entry of the Dirac operator with ``u < v``.
    """

    n: int
    weights: Mapping[Edge, float]
    phases: Mapping[Edge, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        clean = {}
        for (u, v), w in dict(self.weights).items():
            _check_vertex(u, self.n)
            _check_vertex(v, self.n)
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = edge_key(u, v)
            if key in clean:
                raise GraphError(f"duplicate edge {key}")
            w = float(w)
            if not w > 0 or math.isnan(w):
                raise GraphError(f"edge {key} has non-positive weight {w}")
            clean[key] = w
        for key in self.phases:
            if edge_key(*key) not in clean:
                raise GraphError(f"phase given for missing edge {key}")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))
        object.__setattr__(
            self, "phases", {edge_key(*k): float(p) for k, p in self.phases.items()}
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "WeightedGraph":
        """Build from ``(u, v, w)`` or ``(u, v, w, phase)`` tuples."""
        weights, phases = {}, {}
        for e in edges:
            u, v, w = e[:3]
            key = edge_key(u, v)
            if key in weights:
                raise GraphError(f"duplicate edge {key}")
            weights[key] = w
            if len(e) > 3 and e[3]:
                phases[key] = e[3]
        return cls(n, weights, phases)

    @property
    def edges(self) -> list[Edge]:
        return list(self.weights)

    def finite_edges(self) -> list[Edge]:
        return [e for e, w in self.weights.items() if math.isfinite(w)]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.weights if v in e)

    def without_edges(self, edges: Iterable[Edge]) -> "WeightedGraph":
        drop = {edge_key(*e) for e in edges}
        return WeightedGraph(
            self.n,
            {e: w for e, w in self.weights.items() if e not in drop},
            {e: p for e, p in self.phases.items() if e not in drop},
        )


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """Self-adjoint matrix with zero diagonal, supported on a declared edge set.

    A declared edge may carry a zero entry (weight ``+inf``); entries off the
    edge set must vanish.
    """

    matrix: np.ndarray
    edges: frozenset = None

    def __post_init__(self):
        m = np.array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise GraphError(f"Dirac operator must be a square matrix, got shape {m.shape}")
        if np.iscomplexobj(m) and not np.any(m.imag):
            m = m.real
        m = m.astype(complex if np.iscomplexobj(m) else float)
        if not np.all(np.isfinite(m)):
            raise GraphError("Dirac operator has non-finite entries")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * scale:
            raise GraphError("Dirac operator is not Hermitian")
        if np.any(np.diag(m) != 0):
            raise GraphError("Dirac operator must have a vanishing diagonal")
        n = m.shape[0]
        support = {(u + 1, v + 1) for u, v in zip(*np.nonzero(np.triu(m, 1)))}
        if self.edges is None:
            edges = frozenset(support)
        else:
            edges = frozenset(edge_key(*e) for e in self.edges)
            for u, v in edges:
                _check_vertex(u, n)
                _check_vertex(v, n)
                if u == v:
                    raise GraphError(f"loop at vertex {u}")
            stray = support - edges
            if stray:
                raise GraphError(f"nonzero entries off the edge set: {sorted(stray)}")
        # symmetrize exactly so downstream eigensolvers see a Hermitian array
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def entry(self, u: int, v: int):
        return self.matrix[u - 1, v - 1]

    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix)

    def support(self) -> list[Edge]:
        """Edges with a nonzero entry, i.e. finite weight."""
        return sorted(e for e in self.edges if self.matrix[e[0] - 1, e[1] - 1] != 0)

    def weight(self, u: int, v: int) -> float:
        x = abs(self.matrix[u - 1, v - 1])
        return math.inf if x == 0 else 1.0 / x

    def scaled(self, s: float) -> "DiracOperator":
        return DiracOperator(self.matrix * s, self.edges)


def _check_vertex(v, n):
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
        raise GraphError(f"vertex {v!r} is not an integer")
    if not 1 <= v <= n:
        raise GraphError(f"vertex {v} out of range 1..{n}")


def dirac_from_weights(g: WeightedGraph) -> DiracOperator:
    """Entry ``(u, v)`` is ``exp(i phase) / w``; ``+inf`` weights give a zero entry."""
    complex_ = any(g.phases.values())
    m = np.zeros((g.n, g.n), dtype=complex if complex_ else float)
    for (u, v), w in g.weights.items():
        if math.isinf(w):
            continue
        x = 1.0 / w
        phase = g.phases.get((u, v), 0.0)
        if phase:
            x = x * np.exp(1j * phase)
        m[u - 1, v - 1] = x
        m[v - 1, u - 1] = np.conj(x)
    return DiracOperator(m, frozenset(g.weights))


def weights_from_dirac(D: DiracOperator, edges: Iterable[Edge] | None = None) -> WeightedGraph:
    """Weights are ``1/|D_uv|`` on the declared edges (``+inf`` for a zero entry)."""
    if edges is not None:
        D = DiracOperator(D.matrix, frozenset(edges))
    weights, phases = {}, {}
    for u, v in sorted(D.edges):
        x = D.matrix[u - 1, v - 1]
        weights[(u, v)] = math.inf if x == 0 else 1.0 / abs(x)
        if x != 0 and np.iscomplexobj(x) and np.angle(x) != 0:
            phases[(u, v)] = float(np.angle(x))
    return WeightedGraph(D.n, weights, phases)


def restrict(D: DiracOperator, vertices: Iterable[int]) -> DiracOperator:
    """Submatrix on ``vertices``; the k-th smallest kept vertex becomes vertex k."""
    keep = sorted(set(vertices))
    if not keep:
        raise GraphError("cannot restrict to an empty vertex set")
    for v in keep:
        _check_vertex(v, D.n)
    relabel = {v: k + 1 for k, v in enumerate(keep)}
    idx = np.array(keep) - 1
    sub = D.matrix[np.ix_(idx, idx)]
    edges = frozenset(
        (relabel[u], relabel[v]) for u, v in D.edges if u in relabel and v in relabel
    )
    return DiracOperator(sub, edges)


def _adjacency(obj) -> csr_matrix:
    if isinstance(obj, DiracOperator):
        w = np.zeros((obj.n, obj.n))
        for u, v in obj.support():
            w[u - 1, v - 1] = w[v - 1, u - 1] = obj.weight(u, v)
        return csr_matrix(w)
    n = obj.n
    rows, cols, vals = [], [], []
    for (u, v), x in obj.weights.items():
        if math.isfinite(x):
            rows += [u - 1, v - 1]
            cols += [v - 1, u - 1]
            vals += [x, x]
    return csr_matrix((vals, (rows, cols)), shape=(n, n))


def geodesic_distances(g: WeightedGraph | DiracOperator, source: int) -> np.ndarray:
    """Shortest weighted path lengths from ``source``; index ``v - 1`` holds vertex v."""
    _check_vertex(source, g.n)
    return dijkstra(_adjacency(g), directed=False, indices=source - 1)


def geodesic_distance(g: WeightedGraph | DiracOperator, i: int, j: int) -> float:
    _check_vertex(j, g.n)
    return float(geodesic_distances(g, i)[j - 1])


def components(g: WeightedGraph | DiracOperator) -> np.ndarray:
    """Component label per vertex (0-based array) of the finite-weight graph."""
    return connected_components(_adjacency(g), directed=False)[1]


def is_connected(g: WeightedGraph | DiracOperator) -> bool:
    return len(set(components(g))) == 1


def component_of(g: WeightedGraph | DiracOperator, v: int) -> list[int]:
    labels = components(g)
    return [k + 1 for k in np.flatnonzero(labels == labels[v - 1])]


def max_degree(g: WeightedGraph | DiracOperator) -> int:
    """Largest number of edges incident to a vertex.

    For a ``WeightedGraph`` every declared edge counts; for a
    ``DiracOperator`` only edges with a nonzero entry do.
    """
    edges = g.edges if isinstance(g, WeightedGraph) else g.support()
    deg = np.zeros(g.n, dtype=int)
    for u, v in edges:
        deg[u - 1] += 1
        deg[v - 1] += 1
    return int(deg.max())


def random_instance(
    seed: int,
    n: int,
    edge_density: float = 0.5,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> WeightedGraph:
    """Reproducible random connected graph.

    Each pair is an edge with probability ``edge_density``; components are
    then joined by random extra edges until the graph is connected.
    """
    if n < 2:
        raise GraphError("random instances need at least 2 vertices")
    if not 0 <= edge_density <= 1:
        raise GraphError(f"edge density {edge_density} outside [0, 1]")
    lo, hi = weight_range
    if not 0 < lo <= hi:
        raise GraphError(f"invalid weight range {weight_range}")
    rng = np.random.default_rng(seed)
    edges = set()
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < edge_density:
                edges.add((u, v))
    label = list(range(n + 1))

    def find(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for u, v in edges:
        label[find(u)] = find(v)
    while len({find(v) for v in range(1, n + 1)}) > 1:
        u, v = (int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
        if find(u) != find(v):
            edges.add(edge_key(u, v))
            label[find(u)] = find(v)
    weights = {e: float(rng.uniform(lo, hi)) for e in sorted(edges)}
    return WeightedGraph(n, weights)


# --- JSON documents -------------------------------------------------------


def _parse_weight(w):
    if isinstance(w, str):
        if w.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise GraphError(f"unrecognised weight {w!r}")
    if isinstance(w, bool) or not isinstance(w, (int, float)):
        raise GraphError(f"weight must be a number or 'inf', got {w!r}")
    return float(w)


def _dump_weight(w: float):
    return "inf" if math.isinf(w) else w


def parse_graph(text: str) -> WeightedGraph | DiracOperator:
    """Parse a graph document, or a Dirac document when a ``"dirac"`` key is present."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc:
        raise GraphError("document must be an object with an 'n' field")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GraphError(f"'n' must be a positive integer, got {n!r}")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphError("'edges' must be a list")
    for e in raw_edges:
        if not isinstance(e, dict) or "u" not in e or "v" not in e:
            raise GraphError(f"edge entry {e!r} lacks 'u'/'v'")

    if "dirac" in doc:
        flat = doc["dirac"]
        if flat and isinstance(flat[0], list) and flat[0] and isinstance(flat[0][0], list):
            flat = [x for row in flat for x in row]
        if not isinstance(flat, list) or len(flat) != n * n:
            raise GraphError(f"'dirac' must hold {n * n} [re, im] pairs")
        try:
            m = np.array([complex(float(re), float(im)) for re, im in flat]).reshape(n, n)
        except (TypeError, ValueError):
            raise GraphError("'dirac' entries must be [re, im] number pairs") from None
        edges = set()
        for e in raw_edges:
            _check_vertex(e["u"], n)
            _check_vertex(e["v"], n)
            if e["u"] == e["v"]:
                raise GraphError(f"loop at vertex {e['u']}")
            key = edge_key(e["u"], e["v"])
            if key in edges:
                raise GraphError(f"duplicate edge {key}")
            edges.add(key)
        return DiracOperator(m, frozenset(edges))

    edges = []
    for e in raw_edges:
        if "w" not in e:
            raise GraphError(f"edge entry {e!r} lacks a weight 'w'")
        edges.append((e["u"], e["v"], _parse_weight(e["w"]), float(e.get("phase", 0.0))))
    return WeightedGraph.from_edges(n, edges)


def graph_to_dict(g: WeightedGraph) -> dict:
    edges = []
    for (u, v), w in g.weights.items():
        item = {"u": u, "v": v, "w": _dump_weight(w)}
        if g.phases.get((u, v)):
            item["phase"] = g.phases[(u, v)]
        edges.append(item)
    return {"n": g.n, "edges": edges}


def dirac_to_dict(D: DiracOperator) -> dict:
    m = np.asarray(D.matrix, dtype=complex)
    return {
        "n": D.n,
        "dirac": [[float(x.real), float(x.imag)] for x in m.ravel()],
        "edges": [{"u": u, "v": v} for u, v in sorted(D.edges)],
    }


def dump_graph(obj: WeightedGraph | DiracOperator, indent: int | None = None) -> str:
    doc = dirac_to_dict(obj) if isinstance(obj, DiracOperator) else graph_to_dict(obj)
    return json.dumps(doc, indent=indent)


def as_dirac(obj: WeightedGraph | DiracOperator) -> DiracOperator:
    return obj if isinstance(obj, DiracOperator) else dirac_from_weights(obj)
