"""Noncommutative (Connes) distances on finite weighted graphs."""

from .chains import (
    Chain,
    ChainBoundsReport,
    ChainDecomposition,
    chain_bounds,
    is_admissible_L1,
    is_admissible_R1,
    is_extremal,
    l1,
    l2,
    lambda_chain,
    r1,
    r2,
)
from .decomposition import (
    Blob,
    BlobChainDecomposition,
    BlockCutTree,
    amputate,
    blob_chain,
    block_cut_tree,
    prune,
)
from .estimators import (
    DistanceEstimate,
    SplitTriple,
    blob_chain_bounds,
    degree_lower_bound,
    edge_perturbation_bounds,
    estimate,
    induced_path_upper_bound,
    split_distance,
    split_triple,
)
from .graph import (
    DiracOperator,
    GraphError,
    WeightedGraph,
    dirac_from_weights,
    geodesic_distance,
    parse_graph,
    random_instance,
    restrict,
    weights_from_dirac,
)
from .solver import DistanceResult, SolverConfig, nc_distance, nc_distance_matrix, oracle_distance
from .spectral import chain_norm_bounds, commutator, eigh, operator_norm

__version__ = "0.1.0"
