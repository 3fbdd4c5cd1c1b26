"""Exact perfect-matching counts for planar bipartite graphs, compound graph
constructions built on them, and mechanical checks of divisibility results."""

from .graph import (
    BLACK,
    WHITE,
    Edge,
    FaceWalk,
    PlanarBipartiteGraph,
    build_graph,
    enclosed_vertices,
    mirror,
    trace_faces,
)
from .kasteleyn import (
    construct_sign_function,
    count_matchings,
    kasteleyn_matrix,
    verify_sign_function,
)
from .pbg import format_pbg, parse_pbg, read_pbg, write_pbg
from .report import VerificationReport
from .ring import Poly, RingMatrix, determinant, exact_div

__version__ = "0.1.0"
