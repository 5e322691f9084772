"""Exact analysis of finitely presented partially ordered abelian groups."""

from .rings import BaseRing, ZZ, QQ, z_inv
from .exact import (
    hermite_form,
    hermite_basis,
    smith_form,
    solve_membership,
    saturate,
    quotient_presentation,
    InvariantFactorization,
)

__all__ = [
    "BaseRing",
    "ZZ",
    "QQ",
    "z_inv",
    "hermite_form",
    "hermite_basis",
    "smith_form",
    "solve_membership",
    "saturate",
    "quotient_presentation",
    "InvariantFactorization",
]
