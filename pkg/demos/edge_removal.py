# Does deleting an edge ever bring two vertices closer?
#
# For the triangle it cannot, and on small random graphs it almost never
# does.  This script searches random complete graphs and reports the first
# pair whose distance drops, then double-checks both values with an
# independent derivative-free search and an off-the-shelf SDP solver.
#
# Run with:  python3 demos/edge_removal.py
import numpy as np

from ncdistance import SolverConfig, nc_distance, oracle_distance, random_instance

cfg = SolverConfig(tol=1e-11, max_iterations=2000)
rng = np.random.default_rng(12)
found = None
for seed in range(500):
    n = int(rng.integers(3, 8))
    g = random_instance(4000 + seed, n, float(rng.uniform(0.3, 0.9)))
    edge = g.edges[int(rng.integers(len(g.edges)))]
    x, y = (int(v) for v in rng.choice(np.arange(1, n + 1), size=2, replace=False))
    d = nc_distance(g, x, y).value
    d2 = nc_distance(g.without_edges([edge]), x, y).value
    if d2 < d - 1e-6:
        found = (g, edge, x, y)
        break

if found is None:
    print("no decrease found")
else:
    g, edge, x, y = found
    g2 = g.without_edges([edge])
    before, after = nc_distance(g, x, y, cfg), nc_distance(g2, x, y, cfg)
    print(f"graph on {g.n} vertices with {len(g.edges)} edges; removing {edge}, pair ({x}, {y})")
    print(f"  d  = {before.value:.10f}")
    print(f"  d' = {after.value:.10f}   (duality gap {after.gap:.1e})")
    # the oracle value is attained by an explicit potential, so it is a lower bound on d
    lower = oracle_distance(g, x, y, budget=20_000)
    print(f"  explicit potential certifies d >= {lower:.10f}")
    print(f"  drop = {lower - after.value - after.gap:.3e}")
    try:
        import cvxpy as cp

        from ncdistance import dirac_from_weights

        def sdp(graph):
            m = dirac_from_weights(graph).matrix
            a = cp.Variable(graph.n)
            diff = cp.reshape(a, (1, graph.n), order="C") - cp.reshape(a, (graph.n, 1), order="C")
            h = cp.multiply(m, diff)
            prob = cp.Problem(cp.Maximize(a[y - 1]), [cp.sigma_max(h) <= 1, a[x - 1] == 0])
            prob.solve(solver=cp.CLARABEL)
            return prob.value

        print(f"  cvxpy: d = {sdp(g):.10f}, d' = {sdp(g2):.10f}")
    except ImportError:
        pass
