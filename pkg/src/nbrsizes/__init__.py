"""Per-vertex closed/open r-neighbourhood sizes.

A BFS oracle works for any radius; two parameterized backends handle r=2,
one exponential in half the vertex cover size, one in the decomposition
width.  A CNF-to-graph generator doubles as a benchmark source and an
end-to-end correctness check.
"""

from .errors import LimitExceeded, ParseError
from .graph import (Graph, SizesResult, bfs_sizes, closed_one, closed_zero,
                    gnm, grid, open_from_closed, parse_graph, split_graph,
                    write_edge_list)
from .reduction import (CnfFormula, ReductionInstance, SatOutcome, brute_sat,
                        build_reduction, parse_dimacs, random_kcnf,
                        sat_via_sizes)
from .setfamily import (QueryAnswer, WeightedSetFamily, batch_queries,
                        build_family, intersect_weight, mobius_restrict,
                        subset_weight, superset_weight_table)
from .treewidth import (NiceDecomposition, TdReport, TreeDecomposition,
                        banded_td, cover_star_td, future_tables, greedy_td,
                        make_nice, parse_td, past_tables, second_pass,
                        solve_tw, validate_nice, validate_td)
from .vertexcover import (CoverFamilies, VertexCoverPartition,
                          build_families, cover_sizes,
                          cover_to_independent_counts, find_vertex_cover,
                          greedy_cover, partition, solve_vc)

__version__ = "0.1.0"

__all__ = [
    "Graph", "SizesResult", "ParseError", "LimitExceeded",
    "parse_graph", "write_edge_list", "bfs_sizes", "open_from_closed",
    "closed_zero", "closed_one", "gnm", "split_graph", "grid",
    "WeightedSetFamily", "QueryAnswer", "build_family",
    "superset_weight_table", "subset_weight", "mobius_restrict",
    "intersect_weight", "batch_queries",
    "VertexCoverPartition", "CoverFamilies", "find_vertex_cover",
    "greedy_cover", "partition", "cover_sizes",
    "cover_to_independent_counts", "build_families", "solve_vc",
    "TreeDecomposition", "TdReport", "NiceDecomposition", "parse_td",
    "validate_td", "make_nice", "validate_nice", "greedy_td", "banded_td",
    "cover_star_td", "past_tables", "future_tables", "second_pass",
    "solve_tw",
    "CnfFormula", "ReductionInstance", "SatOutcome", "parse_dimacs",
    "random_kcnf", "build_reduction", "brute_sat", "sat_via_sizes",
]
