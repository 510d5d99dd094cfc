"""Equivariant Whitehead moves and star complexes for pointed marked
G-graphs: free group words, graph actions, out/aut/tot norms, ideal
edges, blow-ups, greedy norm descent, and poset retractions with
homology-based contractibility evidence."""

from .errors import (GWError, HypothesisNotMet, IndeterminateAtHorizon,
                     InternalInconsistency, ParseError, PropertyViolation,
                     ValidationError)
from .ggraph import GGraph, Group, rev
from .marking import MarkedGGraph

__all__ = [
    "GWError", "HypothesisNotMet", "IndeterminateAtHorizon",
    "InternalInconsistency", "ParseError", "PropertyViolation",
    "ValidationError", "GGraph", "Group", "MarkedGGraph", "rev",
]

__version__ = "0.1.0"
