"""Combinatorial patchworking of real hypersurfaces over F2.

Primitive triangulations of lattice polytopes, the cubical model of the
real toric variety, T-hypersurfaces and a mod 2 discrete calculus that
predicts their number of connected components.
"""

__version__ = "0.1.0"
