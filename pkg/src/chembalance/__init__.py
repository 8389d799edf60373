"""Exact linear algebra by pivotal condensation, plus a chemical balancer.

The library computes determinants, kernels, inhomogeneous solutions,
inverses and all four fundamental subspaces of matrices over the integers or
over univariate integer polynomials, entirely in exact arithmetic.  Smith
normal form upgrades rational kernel bases to lattice bases.  On top sits a
chemical-equation balancer: parse a reaction, build its atom-by-compound
matrix, and read stoichiometric coefficients off the kernel.
"""

from .condense import (
    AffineSolution,
    FourSubspaces,
    KernelBasis,
    Singular,
    Trace,
    det,
    det_and_kernel,
    four_subspaces,
    inverse,
    kernel,
    render_trace,
    solve,
    verify_checksums,
)
from .chem import BalanceResult, Formula, Reaction, adjacency, balance, parse_formula, parse_reaction, render
from .matrix import Matrix, format_matrix, matrix_from_json, matrix_to_json, parse_matrix
from .quiver import DeclineQuivering, PruneState, QuiveredSystem, prune_fixpoint, quivered_system, reconstruct
from .ring import (
    DivisionNotExact,
    Frac,
    FractionField,
    IntegerRing,
    Poly,
    PolynomialRing,
    ZZ,
)
from .smith import SmithDecomposition, image_basis, is_saturated, kernel_basis, saturate, smith_nf

__version__ = "0.1.0"

__all__ = [
    "AffineSolution",
    "BalanceResult",
    "DeclineQuivering",
    "DivisionNotExact",
    "Formula",
    "FourSubspaces",
    "Frac",
    "FractionField",
    "IntegerRing",
    "KernelBasis",
    "Matrix",
    "Poly",
    "PolynomialRing",
    "PruneState",
    "QuiveredSystem",
    "Reaction",
    "Singular",
    "SmithDecomposition",
    "Trace",
    "ZZ",
    "adjacency",
    "balance",
    "det",
    "det_and_kernel",
    "format_matrix",
    "four_subspaces",
    "image_basis",
    "inverse",
    "is_saturated",
    "kernel",
    "kernel_basis",
    "matrix_from_json",
    "matrix_to_json",
    "parse_formula",
    "parse_matrix",
    "parse_reaction",
    "prune_fixpoint",
    "quivered_system",
    "reconstruct",
    "render",
    "render_trace",
    "saturate",
    "smith_nf",
    "solve",
    "verify_checksums",
]
