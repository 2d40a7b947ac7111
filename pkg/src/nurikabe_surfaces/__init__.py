"""Exact Nurikabe enumeration on square-tiled surfaces."""

from .bijections import check_bijection, contr, contr_inverse, red, red_inverse
from .enumeration import (
    CapExceeded,
    Constraint,
    EnumerationResult,
    count_valid,
    enumerate_valid,
    refined_rectangle_counts,
    validity_density,
)
from .rules import (
    Clue,
    Coloring,
    Rule,
    ValidityReport,
    check_clues,
    is_valid,
    water_connected,
    whirlpool_orbits,
)
from .sequences import FormulaId, eval_formula, loop_klein_lemma_chain, verify
from .solver import EXAMPLE_PUZZLES, PuzzleSpec, solve, solve_clues
from .surface import (
    Gluing,
    SideRef,
    SquareTiledSurface,
    SurfaceError,
    VertexOrbit,
    adjacency,
    build_annulus,
    build_klein,
    build_mobius,
    build_named,
    build_projective,
    build_rectangle,
    build_staircase,
    build_torus,
    euler_characteristic,
    parse_surface,
    serialize_surface,
    vertex_orbits,
)

__version__ = "0.1.0"
