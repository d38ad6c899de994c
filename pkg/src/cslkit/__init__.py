"""Invariant linear manifolds and interpolation for CSL-algebras and nest algebras."""

from .errors import CertificateFailure, CslError, InvalidInput
from .lattice import (
    Atom,
    Lattice,
    NestKind,
    SupportPattern,
    SymbolicNest,
    atoms,
    complete_lattice,
    e_hull,
    independent_atoms,
    is_hyperatomic,
    is_nest,
    p_minus,
    support_pattern,
)
from .interp import (
    in_orbit,
    join_generator,
    lance_sup,
    min_norm_interpolant,
    greedy_nest_interpolant,
    orbit_space,
    orbits_totally_ordered,
    rank_one,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateFailure",
    "CslError",
    "InvalidInput",
    "Atom",
    "Lattice",
    "NestKind",
    "SupportPattern",
    "SymbolicNest",
    "atoms",
    "complete_lattice",
    "e_hull",
    "independent_atoms",
    "is_hyperatomic",
    "is_nest",
    "p_minus",
    "support_pattern",
    "greedy_nest_interpolant",
    "in_orbit",
    "join_generator",
    "lance_sup",
    "min_norm_interpolant",
    "orbit_space",
    "orbits_totally_ordered",
    "rank_one",
]
