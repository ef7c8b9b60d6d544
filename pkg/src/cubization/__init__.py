"""Cubization of finite groups: Z_k-homology covers of Cayley graphs, walls and dual cube complexes."""

__version__ = "0.1.0"

from .cayley import CayleyGraph, Multigraph, bridges, build_cayley, cycle_rank, left_mult, spanning_tree
from .cover import (
    CoverGraph,
    Lift,
    VoltageData,
    assign_voltages,
    build_cover,
    cubization_exponent_check,
    cubization_generators,
    cubization_group_explicit,
    cubization_order,
    trivial_product_power_is_identity,
    lift_bfs,
    lift_formula,
    verify_sabidussi,
)
from .cubulate import DualSkeleton, dual_skeleton, is_consistent, is_median_graph, max_cube_dimension
from .errors import PreconditionError, SizeLimitError, StructuralError, ValidationError
from .groups import FiniteGroup, GeneratorSet, evaluate_word, element_order, exponent, group_from_permutations, preset, wreath_product
from .walls import Wall, WallSpace, wall_distance, wall_space_from_bridge, wall_space_from_cover
