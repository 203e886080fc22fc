"""Minimal spanning trees/forests on product graphs with reproducible labels."""

from ._version import __version__
from .errors import CapacityError, ContractError, DisconnectedError, EdgeListFormatError
from .graphs import (
    Graph,
    GraphMeta,
    ProductVertexCodec,
    RootedTreeSpec,
    bfs_distances,
    build_grid_box,
    build_rooted_tree,
    direct_product,
    graph_distance,
    read_edge_list,
    write_edge_list,
)
from .labels import EdgeLabeling, derive_seed, mix64, parse_seed, sort_edges
from .forests import (
    DisjointSet,
    ForestEdgeSet,
    complete_subtree,
    criterion_filter,
    kruskal_mst,
    tree_distance,
    tree_distances_from,
    tree_path,
)
from .windows import (
    CensusRecord,
    EdgeState,
    EdgeVerdict,
    Window,
    WindowClassification,
    census_components,
    classify_edge,
    classify_window,
    full_window,
    grid_window,
    tree_product_window,
)
from .experiments import (
    CensusAggregate,
    TightnessReport,
    TrialRecord,
    census_experiment,
    run_census_trial,
    run_ln_trial,
    tightness_experiment,
)
from .manifest import RunManifest, file_digest64, load_manifest, verify_outputs, write_manifest

__all__ = [
    "__version__",
    "CapacityError",
    "ContractError",
    "DisconnectedError",
    "EdgeListFormatError",
    "Graph",
    "GraphMeta",
    "ProductVertexCodec",
    "RootedTreeSpec",
    "bfs_distances",
    "build_grid_box",
    "build_rooted_tree",
    "direct_product",
    "graph_distance",
    "read_edge_list",
    "write_edge_list",
    "EdgeLabeling",
    "derive_seed",
    "mix64",
    "parse_seed",
    "sort_edges",
    "DisjointSet",
    "ForestEdgeSet",
    "complete_subtree",
    "criterion_filter",
    "kruskal_mst",
    "tree_distance",
    "tree_distances_from",
    "tree_path",
    "CensusRecord",
    "EdgeState",
    "EdgeVerdict",
    "Window",
    "WindowClassification",
    "census_components",
    "classify_edge",
    "classify_window",
    "full_window",
    "grid_window",
    "tree_product_window",
    "CensusAggregate",
    "TightnessReport",
    "TrialRecord",
    "census_experiment",
    "run_census_trial",
    "run_ln_trial",
    "tightness_experiment",
    "RunManifest",
    "file_digest64",
    "load_manifest",
    "verify_outputs",
    "write_manifest",
]
