"""Idele classes, Tate cohomology and genus theory for branched cyclic covers
of a finite window of an infinite link in the 3-sphere."""

from .cohomology import (CyclicModule, hilbert90_solve, induced_module, permutation_module,
                         tate_h0, tate_h1, window_tate)
from .errors import InvariantViolation, ModelError, PreconditionError, ValidationError
from .genus import (Cycle1, GenusVector, chi, commuting_diagram_check, galois_kernel, galois_sum,
                    genus_image, genus_number, realize_class, same_genus, sigma)
from .ideles import (BaseIdele, Chain2, CoverIdele, UnitIdele, artin_symbol, decompose, deck_act,
                     delta, norm, reciprocity_quotient, window_homology)
from .linalg import FinAbGroup, IntMatrix, cokernel, kernel_basis, smith_normal_form, solve_integral
from .link import (CoverSpec, KnotSplitting, LinkWindow, add_synthetic_knot, splitting_invariants,
                   splitting_table, validate_window)

__version__ = "0.1.0"

__all__ = [
    "BaseIdele", "Chain2", "CoverIdele", "CoverSpec", "Cycle1", "CyclicModule", "FinAbGroup",
    "GenusVector", "IntMatrix", "InvariantViolation", "KnotSplitting", "LinkWindow", "ModelError",
    "PreconditionError", "UnitIdele", "ValidationError", "add_synthetic_knot", "artin_symbol",
    "chi", "cokernel", "commuting_diagram_check", "decompose", "deck_act", "delta",
    "galois_kernel", "galois_sum", "genus_image", "genus_number", "hilbert90_solve",
    "induced_module", "kernel_basis", "norm", "permutation_module", "realize_class",
    "reciprocity_quotient", "same_genus", "sigma", "smith_normal_form", "solve_integral",
    "splitting_invariants", "splitting_table", "tate_h0", "tate_h1", "validate_window",
    "window_homology", "window_tate",
]
