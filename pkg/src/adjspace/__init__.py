"""Exact construction and analysis of generalised adjunction spaces."""
from .adjunction import (AdjSystem, AdjunctionError, EuclideanSpace, GluedPoint, GluedSet,
                         GluedSpace, HypothesisError, InvalidSystemError, build, component_graph,
                         sub_embedding, subsystem, validate)
from .fintop import FinMap, FinSpace
from .regions import DiagAffine, Interval, Region

__all__ = [
    "AdjSystem", "AdjunctionError", "DiagAffine", "EuclideanSpace", "FinMap", "FinSpace",
    "GluedPoint", "GluedSet", "GluedSpace", "HypothesisError", "Interval", "InvalidSystemError",
    "Region", "build", "component_graph", "sub_embedding", "subsystem", "validate",
]
