"""Hamming-distance recoverable robust problems and universe gadget reductions."""
from .distance import Measure, hamming
from .elements import ElementId, Rel, arc, atom, const, edge, gadget, mark, removal
from .instance import (Instance, Solution, brute_solve, distance_ground_kind,
                       enumerate_solutions, remove_element, verify)
from . import problems  # noqa: F401

__all__ = [
    "ElementId", "Rel", "Instance", "Solution", "Measure", "atom", "const", "gadget",
    "removal", "edge", "arc", "mark", "hamming", "verify", "enumerate_solutions",
    "brute_solve", "remove_element", "distance_ground_kind",
]
