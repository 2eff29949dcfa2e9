"""Fourier-transformed tautological systems: Weyl-algebra presentations,
Chevalley-Eilenberg complexes, b-functions and duality parameters."""

__version__ = "0.1.0"
