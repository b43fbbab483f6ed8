# A walk through noncommutative lengths of weighted chains.
#
# Run with:  python3 demos/chains_tour.py
import math

from ncdistance import Chain, chain_bounds, lambda_chain
from ncdistance.cli import table1_report

# Two vertices: the noncommutative distance is just the weight.
print("lambda(3)         =", lambda_chain(Chain.parse("3")))

# Two edges: Pythagoras instead of the sum.
print("lambda(1-1)       =", lambda_chain(Chain.parse("1-1")), " sqrt(2) =", math.sqrt(2))

# Three edges: the answer depends on whether the middle weight dominates.
for text in ("1-2-1", "2-1-2"):
    print(f"lambda({text})     =", lambda_chain(Chain.parse(text)))

# Lengths are not additive: gluing two 1-1 chains is shorter than 2*sqrt(2).
print("lambda(1-1-1-1)   =", lambda_chain(Chain.parse("1-1-1-1")), " vs", 2 * math.sqrt(2))

# Longer chains need the numerical solver; the four cheap bounds bracket it.
rep = chain_bounds("1-2-1-2-1", numeric=True)
print()
print("chain 1-2-1-2-1")
for key in ("R1", "R2", "lambda", "L1", "L2"):
    print(f"  {key:7s}{rep.to_dict()[key]:.6f}")

# Recompute the reference table of chain bounds and list any disagreement.
doc = table1_report()
print()
for row in doc["rows"]:
    cells = "  ".join(f"{c['column']}={c['computed']:.4f}" for c in row["cells"])
    print(f"{row['row']:26s} {cells}")
print()
for m in doc["mismatches"]:
    print(f"differs from reference: {m['row']} {m['column']}: computed {m['computed']:.4f}, listed ~{m['reference']}")
