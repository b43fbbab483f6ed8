# Cutting a graph at its cutpoints: pruning and blob-chain bounds.
#
# Run with:  python3 demos/blob_chain.py
from ncdistance import WeightedGraph, blob_chain, blob_chain_bounds, nc_distance, prune
from ncdistance.decomposition import support_graph
from ncdistance.estimators import estimate

# Triangle {1,2,3} - chain 3-4-5-6 - triangle {6,7,8}, plus a dangling
# branch 4-9-10 that cannot influence d(1, 7).
g = WeightedGraph.from_edges(
    10,
    [
        (1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1),
        (6, 7, 1), (7, 8, 1), (6, 8, 1), (4, 9, 1), (9, 10, 1),
    ],
)
G = support_graph(g)
print("pruned vertex set:", sorted(prune(G, 1, 7)))

dec = blob_chain(G, 1, 7)
for k, blob in enumerate(dec.blobs):
    print(f"blob  {k + 1}: {sorted(blob.vertices)} entered at {blob.entry}, left at {blob.exit}")
    if k < len(dec.chains):
        print(f"chain {k + 1}: {dec.chains[k].chain()}")

est = blob_chain_bounds(g, 1, 7)
d = nc_distance(g, 1, 7).value
print(f"\nblob-chain interval [{est.lower:.6f}, {est.upper:.6f}] contains d = {d:.6f}")

merged = estimate(g, 1, 7, exact=True)
print("\nevery bound on d(1, 7):")
for name, value in merged.provenance:
    print(f"  {name:28s}{value:.6f}")
