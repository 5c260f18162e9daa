"""Ink maximization for partial edge drawings."""

from .baseline import OracleResult, brute_force, shped_ratio
from .decomposition import decompose, make_nice, validate_td
from .drawing import (
    TAU,
    Choice,
    ChoiceKind,
    Drawing,
    DrawingError,
    Mode,
    Solution,
    ink,
    load_drawing,
    load_solution,
    save_drawing,
    save_solution,
    scale_drawing,
    validate_solution,
)
from .forge import GadgetSpec, LayoutSpec, gadget, gadget_graph, random_instance
from .intersection import IntersectionGraph, build_graph, choice_sets, compute_crossings, split_components
from .render import render_svg
from .solve import solve
from .td_dp import solve_ped_td, solve_sped_td
from .tree_dp import solve_ped_tree, solve_sped_tree

__version__ = "0.1.0"
