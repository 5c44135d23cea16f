"""Planar point configurations maximizing the product of pairwise distances
under a diameter constraint: evaluation, structure checks, constructions,
constrained optimization, first-order verification, and asymptotic constants.
"""

from .errors import (
    InfeasibleError,
    InvalidConfigError,
    PolydiscError,
    QuadratureError,
    SingularConfigError,
)
from .geometry import (
    EvalReport,
    PointConfig,
    diameter,
    discriminant,
    evaluate,
    is_convex_position,
    log_delta_bar,
    normalize_to_diameter,
    normalized_discriminant,
    objective_gradient,
)
from .diamgraph import (
    DiameterGraph,
    GraphClass,
    GraphKind,
    StructureReport,
    caterpillar_count,
    check_pairwise_intersection,
    classify,
    conjectured_even_graph,
    enumerate_caterpillars,
    enumerate_unicyclic_candidates,
    extract,
    maximizer_structure_report,
    parse_graph_text,
)
from .constructions import (
    ArcPolygon,
    DihedralParams,
    TriwaveConfig,
    arc_polygon,
    dihedral_delta,
    dodecagon12,
    hexagon6,
    kite4,
    regular_ngon,
    sparse_arc,
    triwave,
)
from .kkt import KKTReport, active_set, recover_multipliers, verify
from .optimize import (
    OptimizeOptions,
    OptimizeResult,
    congruent,
    gauge_fix,
    maximize_free,
    maximize_with_graph,
    sweep_graphs,
)
from .asymptotics import (
    CONSTANT_NAMES,
    ConstantReport,
    constant,
    j_riemann,
    j_series,
    regime_integral,
    regime_product,
    rk_integral_check,
    triwave_prediction,
    zeta3,
)

__version__ = "0.1.0"
