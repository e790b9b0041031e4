"""Decorated resolution graphs of foliation singularities.

Exact certificates on the graph side (negative definiteness, the h-map,
index sums, separatrix witnesses, approximation chains) and numerical
checks of the local dynamics near reduced singularities.
"""
from .divisor_graph import (
    Component,
    CornerSingularity,
    DecoratedGraph,
    IntersectionMatrix,
    TailSingularity,
    build_graph,
    intersection_matrix,
    is_tree,
    load_graph,
    serialize,
)
from .definiteness import is_negative_definite, leading_minors
from .tree_order_h import compute_h, root_order, verify_h_negative
from .cs_calculus import (
    classify_eigenvalue,
    cs_formula_residual,
    d_star_components,
    find_negative_index_tail,
    separatrix_witnesses,
    strong_separatrix_count_check,
    strong_weak_classify,
)
from .chains import Chain, find_approximation_chain, verify_chain

__version__ = "0.1.0"
