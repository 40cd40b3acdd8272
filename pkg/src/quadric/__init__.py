"""Quadric square complexes, disc diagrams, C(4)-T(4) complexes and their quadrizations."""

from .complex import (
    SquareComplex,
    fill_disc,
    four_flag_completion,
    is_4_flag,
    is_locally_quadric,
    is_quadric,
    vertex_link,
)
from .diagram import DiscDiagram, PlanarMap, reduce_to_locally_minimal
from .dismantling import (
    GroupAction,
    bfs_dismantle,
    bfs_order,
    bi_dismantle,
    invariant_biclique,
    invariant_biclique_complex,
    verify_action,
)
from .errors import *  # noqa: F401,F403
from .graph import SimplicialGraph, is_4_bridged, is_bipartite
from .presentation import (
    PolyDiagram,
    Presentation,
    TwoComplex,
    check_c4,
    check_embedded_cells,
    check_strong_helly,
    check_t4,
    pieces,
    symmetrize,
)
from .quadrization import cayley_ball, incidence_graph, invariant_cell, quadrize, thicken_free_edges, transfer_action
from .verdict import Verdict

__version__ = "0.1.0"
