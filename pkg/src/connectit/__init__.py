"""Composable parallel graph connectivity: sampling + finish algorithms,
spanning forest, batch-incremental streaming and approximate MSF."""

from .atomics import ForestEdges, HookArray, InstrumentedParentArray, ParentArray
from .driver import (
    AlgorithmSpec,
    ComponentReport,
    all_algorithm_specs,
    bfs_oracle,
    canonicalize,
    connectivity,
    spanning_forest,
)
from .graph import (
    EdgeList,
    Graph,
    GraphFormatError,
    barabasi_albert,
    erdos_renyi,
    generate_graph,
    load_adjacency_graph,
    load_edge_list,
    symmetrize,
    torus,
)
from .sampling import SamplingSpec, identify_frequent
from .unionfind import SpecError, UnionFindSpec, validate_spec

__version__ = "0.1.0"
