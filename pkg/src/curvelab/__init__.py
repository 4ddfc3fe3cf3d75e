"""Desk-scale machinery for beta numbers, ball families, cores, and
martingale weights of rectifiable polyline curves in lp spaces."""

from .banach import (Line, JProjection, NormedSpace, antislope,
                     dist_to_line, duality_map, j_projection, norm_eval,
                     project)
from .beta import BetaResult, arc_beta, beta_monotone_check, beta_number, \
    jones_sum
from .core import (CoreNode, build_core, build_core_tree, remainder,
                   verify_ball_chain, verify_core_lemma)
from .curve import (ArcRef, Curve, Fragment, classify, classify_core,
                    curve_length, cylinder_membership, efficient_subarc,
                    is_B_ball, lambda_arcs, maximal_fragment,
                    restricted_measure, window_points)
from .generators import generate
from .martingale import (WeightTree, build_weights, q_hypothesis_scan,
                         s_value, verify_bounds, verify_conservation)
from .net import Ball, MultiresFamily, NetHierarchy, Region, build_nets, \
    make_family, net_ball
from .pipeline import ExperimentConfig, run_pipeline, tsp_ratio_table, \
    verify_all

__version__ = "0.1.0"

__all__ = [
    "ArcRef", "Ball", "BetaResult", "CoreNode", "Curve", "ExperimentConfig",
    "Fragment", "JProjection", "Line", "MultiresFamily", "NetHierarchy",
    "NormedSpace", "Region", "WeightTree", "antislope", "arc_beta",
    "beta_monotone_check", "beta_number", "build_core", "build_core_tree",
    "build_nets", "build_weights", "classify", "classify_core",
    "curve_length", "cylinder_membership", "dist_to_line", "duality_map",
    "efficient_subarc", "generate", "is_B_ball", "j_projection",
    "jones_sum", "lambda_arcs", "make_family", "maximal_fragment",
    "net_ball", "norm_eval", "project", "q_hypothesis_scan",
    "remainder", "restricted_measure", "run_pipeline", "s_value",
    "tsp_ratio_table", "verify_all", "verify_ball_chain",
    "verify_bounds", "verify_conservation", "verify_core_lemma",
    "window_points",
]
