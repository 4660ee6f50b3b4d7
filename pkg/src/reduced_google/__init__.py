"""Reduced Google matrix analysis of node subsets in large directed networks."""

from ._backend import BACKEND
from .graph import (
    DirectedGraph,
    GoogleOperator,
    SubsetSelection,
    apply_google,
    apply_transition,
    parse_edge_list,
    parse_labels,
    parse_subset,
    reverse_graph,
)
from .interaction import (
    InteractionGraph,
    build_interaction_graph,
    cross_source_consensus,
    extend_closure,
    top_followers,
    top_friends,
)
from .ranking import LocalIndices, RankVector, cheirank, local_indices, nondominated_front, pagerank
from .reduced import (
    BlockPartition,
    DeflationData,
    ReducedDecomposition,
    assemble,
    compute_gpr,
    compute_gqr,
    leading_eigentriple,
    partition,
    reduce,
    reduced_pagerank_residual,
)

__version__ = "0.1.0"
