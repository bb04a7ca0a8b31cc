"""Discrete cubical homology of finite simple graphs."""

__version__ = "0.1.0"

from .cellular import (
    CellComplex2,
    build_filled_complex,
    cellular_homology,
    compare_covering_cellular,
    covering_complex_homology,
    mv_span_check,
)
from .chains import (
    Chain,
    ChainComplex,
    HomologyResult,
    assemble_complex,
    boundary,
    compute_homology,
    homology,
    homology_two_point,
)
from .cover import (
    LiftedCube,
    TreePoint,
    UniversalCover,
    convex_combination,
    lift_cube,
    project,
    round_toward_root,
    tree_distance,
)
from .cubes import CubeBasis, Restriction, enumerate_cubes, face, is_degenerate, validate_cube
from .errors import (
    CubhomError,
    DomainError,
    GraphParseError,
    LiftObstruction,
    ResourceLimitError,
)
from .graph import (
    Graph,
    box_product,
    covering_by_short_cycles,
    gen_cycle,
    gen_hypercube,
    gen_named,
    graph_from_token,
    has_short_cycles,
    parse_graph,
    times_construction,
)
from .linalg import QQ, ZZ, Ring, SparseMatrix, smith_normal_form
from .subdivision import (
    Subdivider,
    grid_extend,
    grid_round_project,
    prism,
    subdivide_chain,
    subdivide_cube,
    top_face,
    verify_homotopy_identity,
)
