"""Exact calculus of toric and circle-equivariant blow-ups of CP^2."""

from .delzant import (
    ChopError,
    DelzantCheck,
    DelzantPolygon,
    PolygonError,
    QuotientData,
    UnchopError,
    canonical_form,
    corner_chop,
    corner_unchop,
    edge_sizes,
    exceptional_corner,
    is_delzant,
    quotient_data,
    standard_cp2,
    subcircle_graph,
    subcircle_pushforward,
)
from .graph import (
    BlowDownError,
    BlowUpError,
    Center,
    DecoratedGraph,
    ExtendedGraph,
    ExtendError,
    GraphError,
    IsolatedVertex,
    Legality,
    Locus,
    SurfaceVertex,
    ZkEdge,
    blowup_legal,
    cp2_graph,
    dh,
    exceptional_loci,
    extend,
    gls_sums,
    graph_blow_down,
    graph_blow_up,
    validate,
    volume,
)
from .lattice import UnimodularAffineMap, primitive, rational_length
from .piecewise import PiecewiseLinear, pl_add, pl_integral, pl_scale
from .search import (
    BlowupCertificate,
    SearchConfig,
    max_equal_circle_blowups,
    max_equal_toric_blowups,
    theorem_table,
)

__version__ = "0.1.0"
