"""Cheap and structural estimates of the noncommutative distance.

Each estimator returns an interval or a one-sided bound with the name of the
inequality it came from, so several of them can be merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from .chains import Chain, lambda_chain
from .decomposition import amputate, blob_chain, support_graph
from .graph import (
    DiracOperator,
    GraphError,
    WeightedGraph,
    _check_vertex,
    as_dirac,
    edge_key,
    geodesic_distance,
    max_degree,
    restrict,
)
from .solver import DEFAULT_CONFIG, SolverConfig, nc_distance

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class DistanceEstimate:
    lower: float
    upper: float
    provenance: tuple[tuple[str, float], ...] = ()
    exact: float | None = None

    def __post_init__(self):
        if self.lower > self.upper + BOUND_SLACK * max(1.0, abs(self.upper)):
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    def contains(self, value: float, tol: float = 1e-6) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def merge(self, other: "DistanceEstimate") -> "DistanceEstimate":
        exact = self.exact if self.exact is not None else other.exact
        return DistanceEstimate(
            max(self.lower, other.lower),
            min(self.upper, other.upper),
            self.provenance + other.provenance,
            exact,
        )

    def with_exact(self, value: float) -> "DistanceEstimate":
        return DistanceEstimate(self.lower, self.upper, self.provenance, value)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "provenance": [{"bound": name, "value": v} for name, v in self.provenance],
        }


def lower_bound(name: str, value: float) -> DistanceEstimate:
    return DistanceEstimate(value, math.inf, ((name, value),))


def upper_bound(name: str, value: float) -> DistanceEstimate:
    return DistanceEstimate(0.0, value, ((name, value),))


# --- blob-chain sandwich ----------------------------------------------------


def blob_chain_bounds(
    D: DiracOperator | WeightedGraph, i: int, j: int, cfg: SolverConfig = DEFAULT_CONFIG
) -> DistanceEstimate:
    """Bracket ``d(i, j)`` by transverse blob lengths and chain lengths.

    ``upper = sum lambda(b) + sum lambda(C)`` and
    ``lower = max(sum lambda(b) + sum lambda(C'), sum lambda(C))`` where ``C'``
    is ``C`` without its first and last edges.
    """
    D = as_dirac(D)
    dec = blob_chain(support_graph(D), i, j)
    blob_total = 0.0
    for b in dec.blobs:
        if b.degenerate:
            continue
        sub = restrict(D, b.vertices)
        order = sorted(b.vertices)
        blob_total += nc_distance(sub, order.index(b.entry) + 1, order.index(b.exit) + 1, cfg).value
    chains = [c.chain() for c in dec.chains]
    chain_total = math.fsum(lambda_chain(c, cfg) for c in chains)
    amputated = [amputate(c) for c in chains]
    amputated_total = math.fsum(lambda_chain(c, cfg) for c in amputated if c is not None)
    upper = blob_total + chain_total
    lower_amp = blob_total + amputated_total
    return DistanceEstimate(
        max(lower_amp, chain_total),
        upper,
        (
            ("blob_chain_lower_amputated", lower_amp),
            ("blob_chain_lower_chains", chain_total),
            ("blob_chain_upper", upper),
        ),
    )


# --- split graph and the degree bound -----------------------------------------


@dataclass(frozen=True, eq=False)
class SplitTriple:
    """Edges of G made disjoint: split vertex ``2r`` is ``(e_r, -)``, ``2r + 1`` is ``(e_r, +)``."""

    edges: tuple
    orientation: dict
    split_dirac: np.ndarray
    projection: np.ndarray  # 1-based vertex of each split vertex
    degrees: np.ndarray
    scaled_dirac: DiracOperator = field(repr=False)

    def graph_state_basis(self) -> np.ndarray:
        """Columns ``e_v = deg(v)^{-1/2} * sum of split vertices over v`` (zero for isolated v)."""
        n = len(self.degrees)
        basis = np.zeros((len(self.projection), n))
        for x, v in enumerate(self.projection):
            basis[x, v - 1] = 1.0 / math.sqrt(self.degrees[v - 1])
        return basis

    def split_potential(self, a) -> np.ndarray:
        """Pull back a vertex potential to the split vertices."""
        return np.asarray(a, dtype=float)[self.projection - 1]


def split_triple(D: DiracOperator | WeightedGraph, orientation: dict | None = None) -> SplitTriple:
    D = as_dirac(D)
    edges = tuple(D.support())
    if orientation is None:
        orientation = {e: e for e in edges}
    else:
        orientation = {edge_key(*e): tuple(st) for e, st in orientation.items()}
        for e in edges:
            if e not in orientation or set(orientation[e]) != set(e):
                raise GraphError(f"orientation does not cover edge {e}")
    size = 2 * len(edges)
    split = np.zeros((size, size))
    proj = np.zeros(size, dtype=int)
    for r, e in enumerate(edges):
        s, t = orientation[e]
        split[2 * r, 2 * r + 1] = split[2 * r + 1, 2 * r] = 1.0 / D.weight(*e)
        proj[2 * r], proj[2 * r + 1] = s, t
    deg = np.bincount(proj - 1, minlength=D.n) if size else np.zeros(D.n, dtype=int)
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.maximum(deg, 1)), 0.0)
    scaled = DiracOperator(D.matrix * np.outer(inv_sqrt, inv_sqrt), D.edges)
    return SplitTriple(edges, orientation, split, proj, deg, scaled)


def split_distance(D: DiracOperator | WeightedGraph, i: int, j: int) -> float:
    """Distance of the split triple, as the linear program
    ``max a(j) - a(i)`` s.t. ``|a(s) - a(t)| <= w(e)`` for every edge."""
    D = as_dirac(D)
    _check_vertex(i, D.n)
    _check_vertex(j, D.n)
    if i == j:
        return 0.0
    edges = D.support()
    G = nx.Graph(edges)
    G.add_nodes_from(range(1, D.n + 1))
    if not nx.has_path(G, i, j):
        raise GraphError(f"vertices {i} and {j} are not connected")
    rows, rhs = [], []
    for u, v in edges:
        w = D.weight(u, v)
        for sign in (1.0, -1.0):
            row = np.zeros(D.n)
            row[u - 1], row[v - 1] = sign, -sign
            rows.append(row)
            rhs.append(w)
    c = np.zeros(D.n)
    c[j - 1], c[i - 1] = -1.0, 1.0
    bounds = [(None, None)] * D.n
    bounds[i - 1] = (0.0, 0.0)
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"split-distance LP failed: {res.message}")
    return float(-res.fun)


class DegreeBound(NamedTuple):
    geodesic_bound: float  # l / Delta(G)
    scaled_distance: float  # distance for the degree-scaled Dirac operator
    scaled_bound: float  # scaled_distance / Delta(G)
    max_degree: int


def degree_lower_bound(
    D: DiracOperator | WeightedGraph,
    i: int,
    j: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
    scaled: bool = True,
) -> DegreeBound:
    """Lower bounds ``l/Delta(G)`` and ``d_scaled/Delta(G)`` on ``d(i, j)``.

    ``d_scaled`` is the distance for ``Delta^{-1/2} D Delta^{-1/2}`` with
    ``Delta`` the vertex degrees; it satisfies ``l <= d_scaled <= Delta(G) d``.
    Pass ``scaled=False`` to skip that solve.
    """
    D = as_dirac(D)
    ell = geodesic_distance(D, i, j)
    if math.isinf(ell):
        raise GraphError(f"vertices {i} and {j} are not connected")
    delta = max_degree(D)
    if i == j:
        return DegreeBound(0.0, 0.0, 0.0, delta)
    d_scaled = nc_distance(split_triple(D).scaled_dirac, i, j, cfg).value if scaled else math.nan
    return DegreeBound(ell / delta, d_scaled, d_scaled / delta, delta)


# --- adding and removing edges ------------------------------------------------


def perturb(D: DiracOperator, edges: Iterable[tuple]) -> tuple[DiracOperator, list[tuple[int, int, float]]]:
    """Toggle the listed edges: present ones are removed, absent ones added.

    Each item is ``(u, v)`` or ``(u, v, w)``; ``w`` is required for additions
    and must match the current weight for removals.  Returns the perturbed
    operator and the resolved ``(u, v, w)`` list.
    """
    m = D.matrix.copy()
    declared = set(D.edges)
    resolved = []
    touched = set()
    for item in edges:
        u, v = item[0], item[1]
        _check_vertex(u, D.n)
        _check_vertex(v, D.n)
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        if u in touched or v in touched:
            raise GraphError("perturbed edges must be pairwise vertex-disjoint")
        touched |= {u, v}
        current = float(D.weight(u, v))
        if math.isfinite(current):
            w = float(item[2]) if len(item) > 2 else current
            if not math.isclose(w, current, rel_tol=1e-12):
                raise GraphError(f"edge ({u}, {v}) has weight {current}, not {w}")
            m[u - 1, v - 1] = m[v - 1, u - 1] = 0.0
            declared.discard(edge_key(u, v))
        else:
            if len(item) < 3:
                raise GraphError(f"added edge ({u}, {v}) needs a weight")
            w = float(item[2])
            if not w > 0:
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            if math.isfinite(w):
                m[u - 1, v - 1] = m[v - 1, u - 1] = 1.0 / w
            declared.add(edge_key(u, v))
        resolved.append((u, v, w))
    return DiracOperator(m, frozenset(declared)), resolved


def edge_perturbation_bounds(
    D: DiracOperator | WeightedGraph,
    edges: Iterable[tuple],
    x: int,
    y: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
    exact: bool = False,
) -> DistanceEstimate:
    """Interval for ``d'(x, y)`` after toggling pairwise disjoint edges.

    ``d / (1 + m) <= d' <= (1 + m') d`` with ``m = max d(i_s, j_s) / w_s`` on
    the original operator and ``m'`` the same on the perturbed one.  For a
    single edge joining ``x`` and ``y`` the interval is intersected with
    ``|1/d - 1/d'| <= 1/w``.
    """
    D = as_dirac(D)
    D2, resolved = perturb(D, edges)
    d = nc_distance(D, x, y, cfg).value

    def ratio(op):
        return max(
            (nc_distance(op, u, v, cfg).value / w if math.isfinite(w) else 0.0 for u, v, w in resolved),
            default=0.0,
        )

    m = ratio(D)
    m2 = ratio(D2)
    lower, upper = d / (1 + m), (1 + m2) * d
    prov = [
        ("d_original", d),
        ("m", m),
        ("m_perturbed", m2),
        ("perturbation_lower", lower),
        ("perturbation_upper", upper),
    ]
    if len(resolved) == 1 and {resolved[0][0], resolved[0][1]} == {x, y}:
        w = resolved[0][2]
        inv_lo = 1 / d - 1 / w
        lo2 = 1 / (1 / d + 1 / w)
        hi2 = 1 / inv_lo if inv_lo > 0 else math.inf
        prov += [("single_edge_lower", lo2), ("single_edge_upper", hi2)]
        lower, upper = max(lower, lo2), min(upper, hi2)
    est = DistanceEstimate(lower, upper, tuple(prov))
    if exact:
        est = est.with_exact(nc_distance(D2, x, y, cfg).value)
    return est


# --- induced paths ------------------------------------------------------------


class EnumerationCapExceeded(RuntimeError):
    pass


def induced_paths(G: nx.Graph, i: int, j: int, cap: int = 100_000):
    """Yield the induced (chordless) paths from ``i`` to ``j`` as vertex tuples."""
    count = 0
    path = [i]
    on_path = {i}
    # number of path vertices adjacent to each vertex, excluding the path's tail
    blocked = dict.fromkeys(G.nodes, 0)

    def extend():
        nonlocal count
        tail = path[-1]
        for u in sorted(G.neighbors(tail)):
            if u in on_path or blocked[u]:
                continue
            path.append(u)
            on_path.add(u)
            if u == j:
                count += 1
                if count > cap:
                    raise EnumerationCapExceeded(f"more than {cap} induced paths")
                yield tuple(path)
            else:
                for z in G.neighbors(tail):
                    blocked[z] += 1
                yield from extend()
                for z in G.neighbors(tail):
                    blocked[z] -= 1
            path.pop()
            on_path.discard(u)

    if i == j:
        yield (i,)
        return
    yield from extend()


def induced_path_upper_bound(
    D: DiracOperator | WeightedGraph,
    i: int,
    j: int,
    cap: int = 100_000,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """Smallest chain length over the induced paths joining ``i`` and ``j``."""
    return induced_path_witness(D, i, j, cap, cfg)[0]


def induced_path_witness(D, i, j, cap=100_000, cfg=DEFAULT_CONFIG) -> tuple[float, tuple]:
    D = as_dirac(D)
    _check_vertex(i, D.n)
    _check_vertex(j, D.n)
    G = support_graph(D)
    if not nx.has_path(G, i, j):
        raise GraphError(f"vertices {i} and {j} are not connected")
    if i == j:
        return 0.0, (i,)
    best = (math.inf, ())
    for p in induced_paths(G, i, j, cap):
        val = lambda_chain(Chain(tuple(D.weight(a, b) for a, b in zip(p, p[1:]))), cfg)
        if val < best[0]:
            best = (val, p)
    return best


def estimate(
    D: DiracOperator | WeightedGraph,
    i: int,
    j: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
    exact: bool = False,
    induced_cap: int = 10_000,
) -> DistanceEstimate:
    """Merge every available bound on ``d(i, j)`` into one interval."""
    D = as_dirac(D)
    ell = geodesic_distance(D, i, j)
    if math.isinf(ell):
        est = DistanceEstimate(math.inf, math.inf, (("geodesic", math.inf),))
        return est.with_exact(math.inf) if exact else est
    est = upper_bound("geodesic", ell)
    deg = degree_lower_bound(D, i, j, cfg)
    est = est.merge(lower_bound("degree_geodesic", deg.geodesic_bound))
    est = est.merge(lower_bound("degree_scaled", deg.scaled_bound))
    if i != j:
        est = est.merge(blob_chain_bounds(D, i, j, cfg))
        try:
            est = est.merge(upper_bound("induced_paths", induced_path_upper_bound(D, i, j, induced_cap, cfg)))
        except EnumerationCapExceeded:
            pass
    if exact:
        est = est.with_exact(nc_distance(D, i, j, cfg).value)
    return est
