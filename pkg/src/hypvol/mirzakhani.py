"""Mirzakhani polynomials from the exponential tautological class.

P^l_{g,n}(a) pairs psi_n^l against exp(-kappa_1/2 + sum a_i^2 psi_i / 2)
on the n-pointed genus-g moduli space; l = 0 gives the plain Mirzakhani
polynomial.  The distinguished psi sits at the LAST marked point.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exactmath import MultiPoly
from .intersections import UnstableError, default_table, dimension, is_stable


@dataclass(frozen=True)
class MirzakhaniPoly:
    genus: int
    n: int
    level: int
    poly: MultiPoly  # in variables a1..an, even in each variable

    def eval(self, point) -> Fraction:
        values = [Fraction(x) for x in point]
        if len(values) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(values)}")
        return self.poly.eval({f"a{i + 1}": v for i, v in enumerate(values)})


_cache: dict[tuple, MirzakhaniPoly] = {}
_lock = threading.Lock()


def _compositions_with_kappa(total: int, slots: int):
    """(m, (d_1..d_slots)) with m + sum d = total, all >= 0."""
    def rec(rem, k):
        if k == 0:
            yield ()
            return
        for first in range(rem + 1):
            for rest in rec(rem - first, k - 1):
                yield (first,) + rest
    for m in range(total + 1):
        for ds in rec(total - m, slots):
            yield m, ds


def mirzakhani_poly(g: int, n: int, level: int = 0) -> MirzakhaniPoly:
    """Exact P^level_{g,n} as a polynomial in a1..an.

    The degree-(D - level) part of the exponential is paired against
    psi_n^level, D = 3g - 3 + n.  Levels above D pair to zero.
    """
    if not is_stable(g, n):
        raise UnstableError(f"unstable ({g}, {n})")
    if level < 0:
        raise ValueError("negative level")
    key = (g, n, level)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    D = dimension(g, n)
    varnames = tuple(f"a{i + 1}" for i in range(n))
    table = default_table()
    terms: dict[tuple, Fraction] = {}
    deg = D - level
    if deg >= 0:
        half = Fraction(1, 2 ** deg)
        for m, ds in _compositions_with_kappa(deg, n):
            exps = list(ds)
            exps[-1] += level
            bracket = table.kappa_psi(g, tuple(exps), m)
            if bracket == 0:
                continue
            coeff = half * (-1) ** m * bracket
            coeff /= factorial(m)
            for d in ds:
                coeff /= factorial(d)
            mono = tuple(2 * d for d in ds)
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
    result = MirzakhaniPoly(g, n, level, MultiPoly(varnames, terms))
    with _lock:
        _cache[key] = result
    return result


def mirzakhani_value(g: int, n: int, point, level: int = 0) -> Fraction:
    """P^level_{g,n} at a rational point; unstable (g, n) count as zero."""
    if not is_stable(g, n):
        return Fraction(0)
    return mirzakhani_poly(g, n, level).eval(point)


def partial_profile(g: int, n: int, head, level: int = 0,
                    var: str = "t") -> MultiPoly:
    """P^level_{g,n}(head, t): substitute the first n-1 slots, keep the last.

    Returns the zero polynomial when (g, n) is unstable.
    """
    if not is_stable(g, n):
        return MultiPoly.zero((var,))
    values = [Fraction(x) for x in head]
    if len(values) != n - 1:
        raise ValueError("head must have n-1 coordinates")
    poly = mirzakhani_poly(g, n, level).poly
    out = poly.eval_partial({f"a{i + 1}": v for i, v in enumerate(values)})
    return out.rename({f"a{n}": var}).in_ring((var,))


def clear_cache():
    with _lock:
        _cache.clear()
