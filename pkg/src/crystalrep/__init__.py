"""Computations with finite-dimensional unitary representations of
virtually free-abelian (crystallographic-type) groups."""

from .exactla import AbelianInvariants
from .groups import Element, VAGroup, make_free_abelian, make_gamma_k, make_z2_rot_c4

__all__ = [
    "AbelianInvariants",
    "Element",
    "VAGroup",
    "make_free_abelian",
    "make_gamma_k",
    "make_z2_rot_c4",
]
