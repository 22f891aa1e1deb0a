"""Exact lattice computations for K3 surfaces that double-cover the plane with ADE branch singularities."""

from .ambient import (Configuration, ConfigurationError, admissible_picard, build_M, even_overlattices,
                      orthogonal_complement, picard_lattice, saturation)
from .casebook import CASE_IDS, CaseReport, run_case
from .forms import CapExceeded, FiniteQuadraticForm, discriminant_group, form_isomorphism
from .isometry import genus, lattices_isomorphic
from .lattice import Lattice, LatticeError, ade, direct_sum, hyperbolic_u, k3, lattice_from_name, make_lattice
from .resolution import resolve
from .roots import enumerate_roots, fundamental_weights, longest_element, simple_roots

__all__ = [
    "CASE_IDS", "CapExceeded", "CaseReport", "Configuration", "ConfigurationError", "FiniteQuadraticForm",
    "Lattice", "LatticeError", "ade", "admissible_picard", "build_M", "direct_sum", "discriminant_group",
    "enumerate_roots", "even_overlattices", "form_isomorphism", "fundamental_weights", "genus",
    "hyperbolic_u", "k3", "lattice_from_name", "lattices_isomorphic", "longest_element", "make_lattice",
    "orthogonal_complement", "picard_lattice", "resolve", "run_case", "saturation", "simple_roots",
]
