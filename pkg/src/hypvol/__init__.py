"""hypvol: exact volumes of moduli spaces of hyperbolic cone surfaces.

Computes the piecewise-polynomial volume functions of moduli spaces of
hyperbolic surfaces with cone angles up to 4*pi from psi/kappa intersection
numbers, and verifies the identities they satisfy (vanishing at integer
angles, C^1 regularity, Do-Norbury, the integral recursion) in exact
rational arithmetic.
"""

__version__ = "0.1.0"
