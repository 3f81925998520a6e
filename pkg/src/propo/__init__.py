"""Property O toolkit: decide, construct, enumerate and sample oriented k-graphs."""

__version__ = "0.1.0"

from .core import (
    HypergraphParseError,
    InputError,
    InvariantViolation,
    LinearOrder,
    OrientedHypergraph,
    Status,
    Tournament,
    WitnessCertificate,
    consistent_order_count,
    edges_compatible,
    is_consistent,
    parse_hypergraph,
    relabel,
    serialize_hypergraph,
)
from .decide import SearchBudget, cycle_oracle_k2, find_witness, has_property_o, naive_property_o
from .construct import build_gk, find_consistent_edge_gk

__all__ = [
    "HypergraphParseError",
    "InputError",
    "InvariantViolation",
    "LinearOrder",
    "OrientedHypergraph",
    "SearchBudget",
    "Status",
    "Tournament",
    "WitnessCertificate",
    "build_gk",
    "consistent_order_count",
    "cycle_oracle_k2",
    "edges_compatible",
    "find_consistent_edge_gk",
    "find_witness",
    "has_property_o",
    "is_consistent",
    "naive_property_o",
    "parse_hypergraph",
    "relabel",
    "serialize_hypergraph",
]
