"""rhd2d: 2D special-relativistic hydrodynamics on Cartesian meshes.

Finite-volume solver built around a corner-coupled (genuinely
multidimensional) HLL Riemann solver, with first- and fifth-order
physical-constraints-preserving schemes, a catalog of standard benchmark
problems and a convergence harness.
"""

from .backend import BACKEND_NAME

__version__ = "0.1.0"
__all__ = ["BACKEND_NAME", "__version__"]
