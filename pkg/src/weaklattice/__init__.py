"""Weak shift-continuous topologies on the bicyclic monoid with adjoined zero.

The topologies are encoded as pairs of shift-invariant filters on omega
(each slot possibly the top element), so order, join and meet reduce to the
filter lattice, which is decided exactly for the filters represented here.
"""

from .core import ONE, ZERO, Pair, Zero, invert, multiply, parse_element, sigma_class
from .filters import (
    TOP,
    FactorialInduced,
    FilterInduced,
    Frechet,
    JoinOf,
    MeetOf,
    OrderVerdict,
    Verdict,
    base_escape_index,
    base_member,
    compare_filters,
    factorial_filter,
    from_filter_base,
    join_filters,
    meet_filters,
    shift_witness,
)
from .omegasets import OmegaSet, Relation, relate
from .topologies import (
    NbhdParams,
    WeakTopology,
    compare_topologies,
    filter_trace,
    from_pair,
    join_topologies,
    meet_topologies,
    nbhd_member,
    refinement_witness,
    tau_c,
    tau_L,
    tau_min,
    tau_R,
)

__all__ = [
    "ONE", "ZERO", "Pair", "Zero", "invert", "multiply", "parse_element", "sigma_class",
    "TOP", "FactorialInduced", "FilterInduced", "Frechet", "JoinOf", "MeetOf",
    "OrderVerdict", "Verdict", "base_escape_index", "base_member", "compare_filters",
    "factorial_filter", "from_filter_base", "join_filters", "meet_filters", "shift_witness",
    "OmegaSet", "Relation", "relate",
    "NbhdParams", "WeakTopology", "compare_topologies", "filter_trace", "from_pair",
    "join_topologies", "meet_topologies", "nbhd_member", "refinement_witness",
    "tau_c", "tau_L", "tau_min", "tau_R",
]
