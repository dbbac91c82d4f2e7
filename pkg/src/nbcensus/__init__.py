"""Exact rooted subgraph and cycle counts via non-backtracking matrices.

The commonly used entry points are re-exported here; the full surface
lives in the submodules (graphs, edge_matrix, catalog, motifs,
cycle_census, connection, oracle, cli).
"""

from .cycle_census import CensusReport, full_census
from .edge_matrix import EdgeSpace, IntegrityError
from .graphs import Graph, GraphError, load_graph

__version__ = "0.1.0"

__all__ = [
    "CensusReport",
    "EdgeSpace",
    "Graph",
    "GraphError",
    "IntegrityError",
    "full_census",
    "load_graph",
    "__version__",
]
