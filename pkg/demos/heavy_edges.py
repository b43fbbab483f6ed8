# Heavy edges barely matter: bounds from removing two weight-30 edges.
#
# Run with:  python3 demos/heavy_edges.py
from ncdistance import WeightedGraph, edge_perturbation_bounds, nc_distance

x, a, b, c, d, e, f, y = range(1, 9)
g = WeightedGraph.from_edges(
    8,
    [
        (x, a, 30), (x, c, 1), (a, b, 1), (c, b, 1), (b, d, 1),
        (d, e, 1), (e, y, 30), (d, f, 1), (f, y, 1),
    ],
)

# The two heavy edges share no vertex, so they can be removed together.
est = edge_perturbation_bounds(g, [(x, a), (e, y)], x, y, exact=True)
prov = dict(est.provenance)
print(f"m  (before removal) = {prov['m']:.4f}")
print(f"m' (after removal)  = {prov['m_perturbed']:.4f}")
print(f"d' after removal    = {est.exact:.6f}   (the unit chain x-c-b-d-f-y)")
print(f"interval for d'     = [{est.lower:.4f}, {est.upper:.4f}]")

full = nc_distance(g, x, y).value
print(f"d with heavy edges  = {full:.6f}")
print(f"10/11 * 3 = {30 / 11:.4f} <= d <= 11/10 * 3 = {3.3:.4f}")
