"""Exact quantization and centroidal Voronoi tessellations on dyadic Cantor sets.

The package computes, verifies, counts, and compares CVTs and quantization
errors for the family of self-similar measures generated by S1(x) = r*x and
S2(x) = r*x + (1 - r) with 0 < r < 1/2, entirely in exact rational (and
rational-function-of-r) arithmetic.
"""

from .engine import (
    CvtCertificate,
    DistortionBound,
    VoronoiPartition,
    distortion,
    distortion_over_window,
    family_distortion,
    gate_inequalities,
    partition,
    reflect_codebook,
    resolve_cells,
    verify_cvt,
)
from .families import (
    Codebook,
    alpha,
    beta,
    canonical_codebook,
    count_cvts,
    delta,
    enumerate_cvts,
    make_codebook,
)
from .measure import CantorMeasure
from .oracles import DiscreteMeasure, discretize, dp_optimal, lloyd
from .ratfunc import RationalFunction, isolate_root, scan_sign_changes
from .thresholds import Threshold, format_decimals, solve_all
from .words import AffineMap, compose, cylinder, midpoint, weight_and_scale

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "CantorMeasure",
    "Codebook",
    "CvtCertificate",
    "DiscreteMeasure",
    "DistortionBound",
    "RationalFunction",
    "Threshold",
    "VoronoiPartition",
    "alpha",
    "beta",
    "canonical_codebook",
    "compose",
    "count_cvts",
    "cylinder",
    "delta",
    "discretize",
    "distortion",
    "distortion_over_window",
    "dp_optimal",
    "enumerate_cvts",
    "family_distortion",
    "format_decimals",
    "gate_inequalities",
    "isolate_root",
    "lloyd",
    "make_codebook",
    "midpoint",
    "partition",
    "reflect_codebook",
    "resolve_cells",
    "scan_sign_changes",
    "solve_all",
    "verify_cvt",
    "weight_and_scale",
]
