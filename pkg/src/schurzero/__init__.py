"""Exact computations in q-Schur algebras, their q = 0 specialisation, and the 0-Hecke algebra."""

from .core import LinePairs, OrbitMatrix, Segment, compositions, orbit_matrices
from .hecke import Permutation, hecke_mult, t_sigma
from .polyq import QPoly, interpolate, quantum_int
from .qschur import AlgebraElement, basis_product, multiply
from .zeroschur import GeneratorWord, deg_leq, open_orbit, psi_image, star, word_decompose

__all__ = [
    "AlgebraElement",
    "GeneratorWord",
    "LinePairs",
    "OrbitMatrix",
    "Permutation",
    "QPoly",
    "Segment",
    "basis_product",
    "compositions",
    "deg_leq",
    "hecke_mult",
    "interpolate",
    "multiply",
    "open_orbit",
    "orbit_matrices",
    "psi_image",
    "quantum_int",
    "star",
    "t_sigma",
    "word_decompose",
]
