"""Ideal convergence of nets of partial maps between finite metric spaces."""
from .bornology import Bornology, bornology_from_base, product_bornology, trivial_bornology
from .convergence import MODES, ConvergenceVerdict, Instance, check
from .metric import FiniteMetricSpace, PointSet, box_product, enlargement, excess, gap
from .order import DirectedSet, Filter, Ideal, dual_filter, in_filter, tail_ideal
from .partial_maps import PartialMap, PartialMapNet, graph, image

__all__ = [
    "Bornology", "bornology_from_base", "product_bornology", "trivial_bornology",
    "MODES", "ConvergenceVerdict", "Instance", "check",
    "FiniteMetricSpace", "PointSet", "box_product", "enlargement", "excess", "gap",
    "DirectedSet", "Filter", "Ideal", "dual_filter", "in_filter", "tail_ideal",
    "PartialMap", "PartialMapNet", "graph", "image",
]
