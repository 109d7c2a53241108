"""Game comonads on finite relational structures.

Three resource-indexed comonads (rank-bounded plays, pebbled plays, modal
unfoldings) with their existential, back-and-forth and bijection games, the
coalgebra correspondences for tree-depth, tree-width and modal depth, and
machine-checkable certificates for every verdict.
"""

from .structures import (BoundExceeded, CapExceeded, Graph, PointedStructure,
                         Signature, SignatureMismatch, Structure, StructureError,
                         find_homomorphism, gaifman_graph, is_homomorphism,
                         is_partial_homomorphism, is_partial_isomorphism,
                         structure_from_dict, structure_to_dict, validate_structure)

__all__ = [
    "BoundExceeded", "CapExceeded", "Graph", "PointedStructure", "Signature",
    "SignatureMismatch", "Structure", "StructureError", "find_homomorphism",
    "gaifman_graph", "is_homomorphism", "is_partial_homomorphism",
    "is_partial_isomorphism", "structure_from_dict", "structure_to_dict",
    "validate_structure",
]

__version__ = "0.1.0"
