"""Volume profiles and pointwise evaluation of the cone-surface volumes.

The profile V^0_{g,n}(head, t) is assembled on [0, t_max] from

    V^l = P^l                                  (l >= 2)
    V^1(t) = P^1(t) - int_0^t D4(u) du
    V^0(t) = P(head, 0) + int_0^t (u V^1(u) - D3(u)) du

where D3 and D4 are the boundary kernels indexed by rational graphs with
3 and 4 half-edges on the central vertex.  t_max = min(2, 2g-2+n - |head|)
is where the angle vector leaves the admissible domain; all inner
evaluations then stay inside their own domains, which makes every kernel
expressible in closed form:

* one-edge terms compose lower profiles with affine argument maps,
* loop and separating terms only ever see inner vectors with last
  coordinate <= 1, where V^0 equals the Mirzakhani polynomial minus
  explicit one-edge corrections (the small-angle closed form), so the
  twist integrals reduce to exact polynomial integrals and piecewise
  convolutions.

Everything is exact; no floats except in the final Vol renderings.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import (
    MultiPoly,
    PiecewisePoly,
    definite_integral,
    interpolate,
    piecewise_from_contributions,
    pw_convolve,
)
from .intersections import is_stable
from .mirzakhani import mirzakhani_poly, partial_profile


class DomainError(ValueError):
    """Angle vector outside the closure of the supported domain."""


HALF = Fraction(1, 2)
TWO = Fraction(2)


@dataclass(frozen=True)
class AngleVector:
    """Canonicalized angle vector: sorted ascending, head <= 1/2, last <= 2."""

    coords: tuple

    @property
    def head(self) -> tuple:
        return self.coords[:-1]

    @property
    def last(self) -> Fraction:
        return self.coords[-1]

    def total(self) -> Fraction:
        return sum(self.coords, Fraction(0))


def canonicalize(values) -> AngleVector:
    """Sort ascending and validate against the closure of the domain.

    Rejects negative coordinates, more than one coordinate above 1/2, and a
    largest coordinate above 2.
    """
    coords = tuple(sorted(Fraction(x) for x in values))
    if not coords:
        raise DomainError("empty angle vector")
    if coords[0] < 0:
        raise DomainError(f"negative angle {coords[0]}")
    if len(coords) >= 2 and coords[-2] > HALF:
        raise DomainError("more than one coordinate exceeds 1/2")
    if coords[-1] > TWO:
        raise DomainError(f"last coordinate {coords[-1]} exceeds 2")
    return AngleVector(coords)


def t_max(g: int, n: int, head) -> Fraction:
    """Largest admissible last coordinate for the given head.

    (1,1) has no boundary kernels and its profile extends to 2.
    """
    if (g, n) == (1, 1):
        return TWO
    return min(TWO, Fraction(2 * g - 2 + n) - sum(map(Fraction, head), Fraction(0)))


def _check_head(head):
    hs = tuple(Fraction(x) for x in head)
    if any(h < 0 for h in hs):
        raise DomainError("negative head coordinate")
    if any(h > HALF for h in hs):
        raise DomainError("head coordinate exceeds 1/2")
    return hs


_T = MultiPoly.var("t")


def _splittings(indices):
    """Ordered pairs (I1, I2) partitioning the index tuple."""
    items = tuple(indices)
    for mask in range(1 << len(items)):
        left = tuple(items[i] for i in range(len(items)) if mask >> i & 1)
        right = tuple(items[i] for i in range(len(items)) if not mask >> i & 1)
        yield left, right


# ---------------------------------------------------------------------------
# small-angle closed form (last coordinate <= 1)
# ---------------------------------------------------------------------------


def _head_subs(heads, var_from=1):
    return {f"a{var_from + i}": h for i, h in enumerate(heads)}


@lru_cache(maxsize=None)
def _vp1_factor_cached(g: int, heads: tuple) -> PiecewisePoly:
    return _vp1_factor_build(g, heads)


def vp1_factor(g: int, heads) -> PiecewisePoly:
    """V^0_{g,k}(heads, y) for y in [0, 1] as an explicit piecewise poly.

    Valid because the last coordinate stays <= 1: there V^0 equals
    P_{g,k}(heads, y) minus the one-edge corrections
    int_0^{(y+h_j-1)^+} w P_{g,k-1}(heads w/o j, w) dw,
    truncated to zero outside the angle domain |a| <= 2g-2+k.
    """
    return _vp1_factor_cached(g, tuple(sorted(Fraction(x) for x in heads)))


def _vp1_factor_build(g: int, heads: tuple) -> PiecewisePoly:
    k = len(heads) + 1
    if not is_stable(g, k):
        return PiecewisePoly.zero(0, 1)
    cut = Fraction(2 * g - 2 + k) - sum(heads, Fraction(0))
    if cut <= 0:
        return PiecewisePoly.zero(0, 1)
    base = partial_profile(g, k, heads, level=0, var="t")
    contribs = [(Fraction(0), Fraction(1), base)]
    for j, h in enumerate(heads):
        rest = heads[:j] + heads[j + 1:]
        if not is_stable(g, k - 1):
            continue
        inner = partial_profile(g, k - 1, rest, level=0, var="w")
        anti = definite_integral(
            inner * MultiPoly.var("w", ("w",)), "w", 0, MultiPoly.var("x", ("x",)))
        correction = anti.subs("x", _T - (1 - h)).in_ring(("t",))
        contribs.append((1 - h, Fraction(1), -correction))
    factor = piecewise_from_contributions(contribs, 0, 1, continuous=False)
    if cut < 1:
        pts = [Fraction(0)] + [b for b in factor.breakpoints if 0 < b < cut] + [cut]
        pieces = [factor.piece_at((a + b) / 2) for a, b in zip(pts, pts[1:])]
        factor = PiecewisePoly(pts + [Fraction(1)],
                               pieces + [MultiPoly.zero(("t",))],
                               continuous=False)
    return factor


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

_d3_cache: dict = {}
_d4_cache: dict = {}
_profile0_cache: dict = {}
_profile1_cache: dict = {}
_lock = threading.Lock()


def _d4_pw(g: int, n: int, head: tuple) -> PiecewisePoly:
    """D4 kernel (psi-level 1) for the ambient (g, n) profile, on [0, t_max]."""
    hs = head
    m = n
    tm = t_max(g, m, hs)
    contribs = []
    idx = range(len(hs))
    # pair terms: central vertex carries legs {i, j, n}.  The outer twist
    # x = h_i + h_j + u - 2 can exceed 1/2, so the outer value is the full
    # V^0 (small-angle closed form with one-edge corrections), not the bare
    # Mirzakhani polynomial.
    for i in idx:
        for j in idx:
            if j <= i:
                continue
            if not is_stable(g, m - 2):
                continue
            wall = TWO - hs[i] - hs[j]
            rest = tuple(hs[a] for a in idx if a not in (i, j))
            inner = vp1_factor(g, rest)                 # V^0_{g,m-2}(rest, x)
            composed = inner.compose_affine(1, -wall).poly_mul(_T - wall)
            lo, hi = max(Fraction(0), wall), min(tm, composed.hi)
            if lo < hi:
                window = composed.restrict(lo, hi)
                for (a, b), piece in zip(
                        zip(window.breakpoints, window.breakpoints[1:]),
                        window.pieces):
                    contribs.append((a, b, piece))
    # loop terms: double edge to a genus g-1 outer vertex
    for i in idx:
        if g < 1 or not is_stable(g - 1, m):
            continue
        wall = TWO - hs[i]
        rest = tuple(hs[a] for a in idx if a != i)
        inner = _two_slot_poly(g - 1, m, rest)          # vars (y, x): P(rest, y, x-y)
        y = MultiPoly.var("y", ("y",))
        x = MultiPoly.var("x", ("x",))
        integrand = y * (x - y) * HALF * inner
        a_of_x = definite_integral(integrand, "y", 0, x)
        poly = a_of_x.subs("x", _T - wall).in_ring(("t",))
        contribs.append((wall, tm, poly))
    # separating terms: one edge to each of two outer vertices.  Genus-0
    # triangle factors are cut at their own angle bound y + |heads| < 1 (the
    # twist-simplex constraint); every larger factor stays inside its domain
    # for twists up to 1/2, so it enters as a plain polynomial.
    for i in idx:
        wall = TWO - hs[i]
        others = tuple(a for a in idx if a != i)
        for g1 in range(0, g + 1):
            g2 = g - g1
            for left, right in _splittings(others):
                if not (is_stable(g1, len(left) + 1) and is_stable(g2, len(right) + 1)):
                    continue
                conv = _sep_conv_e(g1, tuple(sorted(hs[a] for a in left)),
                                   g2, tuple(sorted(hs[a] for a in right)))
                if conv is None:
                    continue
                shifted = conv.compose_affine(1, -wall)   # u -> conv(u - wall)
                lo, hi = max(wall, shifted.lo), min(tm, shifted.hi)
                if lo < hi:
                    window = shifted.restrict(lo, hi)
                    for (a, b), piece in zip(
                            zip(window.breakpoints, window.breakpoints[1:]),
                            window.pieces):
                        contribs.append((a, b, piece))
    return piecewise_from_contributions(contribs, 0, tm)


@lru_cache(maxsize=None)
def _e_factor_cached(g1: int, heads: tuple):
    k = len(heads) + 1
    cut = Fraction(2 * g1 - 2 + k) - sum(heads, Fraction(0))
    if cut <= 0:
        return None
    p = partial_profile(g1, k, heads)
    if cut < HALF:
        return PiecewisePoly([Fraction(0), cut, HALF],
                             [p, MultiPoly.zero(("t",))], continuous=False)
    return PiecewisePoly.single(p, 0, HALF)


def _e_factor(g1: int, heads):
    """Mirzakhani factor on a twist range [0, 1/2], simplex-truncated."""
    return _e_factor_cached(g1, tuple(sorted(Fraction(x) for x in heads)))


def _two_slot_poly(g: int, n: int, heads: tuple) -> MultiPoly:
    """P_{g,n}(heads, y, x - y) as a polynomial in (y, x)."""
    poly = mirzakhani_poly(g, n).poly.eval_partial(_head_subs(heads))
    v1, v2 = f"a{n - 1}", f"a{n}"
    poly = poly.rename({v1: "y", v2: "z"})
    x = MultiPoly.var("x", ("x",))
    y = MultiPoly.var("y", ("y",))
    return poly.subs("z", x - y)


def _d3_pw(g: int, n: int, head: tuple) -> PiecewisePoly:
    """D3 kernel for the ambient (g, n) profile, on [0, t_max]."""
    hs = head
    m = n
    tm = t_max(g, m, hs)
    contribs = []
    idx = range(len(hs))
    # one-edge terms: central carries legs {i, n}
    for i in idx:
        wall = Fraction(1) - hs[i]
        rest = tuple(hs[a] for a in idx if a != i)
        if (g, m - 1) == (0, 3):
            # V_{0,3} = indicator(|a| <= 1); within t_max it is identically 1
            contribs.append((wall, tm, _T - wall))
            continue
        if not is_stable(g, m - 1):
            continue
        prof = profile0(g, m - 1, rest)
        composed = prof.compose_affine(1, hs[i] - 1)    # u -> prof(u + h_i - 1)
        factor = composed.poly_mul(_T - wall)
        lo = max(Fraction(0), wall)
        hi = min(tm, composed.hi)
        if lo < hi:
            window = factor.restrict(lo, hi)
            for (a, b), piece in zip(
                    zip(window.breakpoints, window.breakpoints[1:]), window.pieces):
                contribs.append((a, b, piece))
    # loop term via the small-angle closed form of V^0_{g-1, m+1}
    if g >= 1 and is_stable(g - 1, m + 1):
        s = MultiPoly.var("s", ("s",))
        y = MultiPoly.var("y", ("y",))
        inner = _two_slot_poly(g - 1, m + 1, hs).subs("x", s).in_ring(("s", "y"))
        main = definite_integral(y * (s - y) * HALF * inner, "y", 0, s)
        contribs.append((Fraction(1), tm, main.rename({"s": "t"}).subs(
            "t", _T - 1).in_ring(("t",))))
        for i in idx:
            if not is_stable(g - 1, m):
                continue
            rest = tuple(hs[a] for a in idx if a != i)
            qpoly = mirzakhani_poly(g - 1, m).poly.eval_partial(_head_subs(rest))
            qpoly = qpoly.rename({f"a{m - 1}": "y", f"a{m}": "w"})
            upper = s - y + hs[i] - 1
            q_i = definite_integral(qpoly * MultiPoly.var("w", ("w",)), "w", 0, upper)
            corr = definite_integral(y * (s - y) * q_i, "y", 0, s + hs[i] - 1)
            contribs.append((TWO - hs[i], tm,
                             -corr.rename({"s": "t"}).subs("t", _T - 1).in_ring(("t",))))
    # separating terms: piecewise convolution of small-angle factors
    for g1 in range(0, g + 1):
        g2 = g - g1
        for left, right in _splittings(tuple(idx)):
            if not (is_stable(g1, len(left) + 1) and is_stable(g2, len(right) + 1)):
                continue
            shifted = _sep_conv(g1, tuple(sorted(hs[a] for a in left)),
                                g2, tuple(sorted(hs[a] for a in right)))
            lo, hi = max(Fraction(1), shifted.lo), min(tm, shifted.hi)
            if lo < hi:
                window = shifted.restrict(lo, hi)
                for (a, b), piece in zip(
                        zip(window.breakpoints, window.breakpoints[1:]), window.pieces):
                    contribs.append((a, b, piece))
    return piecewise_from_contributions(contribs, 0, tm)


def _d5_pw(g: int, n: int, head: tuple) -> PiecewisePoly:
    """Valence-5 kernel (psi^2 pairing) for the ambient (g, n) profile.

    Central vertex carries legs {i, j, k, n} and one edge; its twist simplex
    opens up once h_i + h_j + h_k + u > 3, which happens inside the domain
    whenever three head angles sum above 1.  The psi^2 integral over the
    5-pointed central vertex is 1, the outer vertex contributes its
    (domain-truncated) Mirzakhani value at a twist <= 1/2.
    """
    hs = head
    m = n
    tm = t_max(g, m, hs)
    contribs = []
    idx = range(len(hs))
    for i in idx:
        for j in idx:
            for k in idx:
                if not (i < j < k):
                    continue
                if not is_stable(g, m - 3):
                    continue
                wall = Fraction(3) - hs[i] - hs[j] - hs[k]
                rest = tuple(hs[a] for a in idx if a not in (i, j, k))
                outer = _e_factor(g, rest)
                if outer is None:
                    continue
                composed = outer.compose_affine(1, -wall).poly_mul(_T - wall)
                lo, hi = max(Fraction(0), wall), min(tm, composed.hi)
                if lo < hi:
                    window = composed.restrict(lo, hi)
                    for (a, b), piece in zip(
                            zip(window.breakpoints, window.breakpoints[1:]),
                            window.pieces):
                        contribs.append((a, b, piece))
    return piecewise_from_contributions(contribs, 0, tm)


_d5_cache: dict = {}


def d5_kernel(g: int, n: int, a_head) -> PiecewisePoly:
    """Valence-5 boundary kernel for the (g, n+1)-pointed recursion."""
    hs = _check_head(a_head)
    key = (g, n + 1, hs)
    hit = _d5_cache.get(key)
    if hit is None:
        hit = _d5_pw(g, n + 1, hs)
        with _lock:
            _d5_cache[key] = hit
    return hit


@lru_cache(maxsize=None)
def _sep_conv(g1: int, heads1: tuple, g2: int, heads2: tuple) -> PiecewisePoly:
    """Shifted convolution of two small-angle factors, u -> conv(u - 1)."""
    G = vp1_factor(g1, heads1)
    H = vp1_factor(g2, heads2)
    return pw_convolve(G.poly_mul(_T), H.poly_mul(_T * HALF)).compose_affine(1, -1)


@lru_cache(maxsize=None)
def _sep_conv_e(g1: int, heads1: tuple, g2: int, heads2: tuple) -> PiecewisePoly:
    """Convolution of two simplex-truncated Mirzakhani factors (for D4)."""
    G = _e_factor(g1, heads1)
    H = _e_factor(g2, heads2)
    if G is None or H is None:
        return None
    return pw_convolve(G.poly_mul(_T), H.poly_mul(_T * HALF))


def d4_kernel(g: int, n: int, a_head, ell: int = 1) -> PiecewisePoly:
    """D4 boundary kernel for the (g, n+1)-pointed recursion, head in R^n.

    Only psi-level 1 occurs in the volume recursion.
    """
    if ell != 1:
        raise ValueError("only psi-level 1 appears in the recursion")
    hs = _check_head(a_head)
    key = (g, n + 1, hs)
    hit = _d4_cache.get(key)
    if hit is None:
        hit = _d4_pw(g, n + 1, hs)
        with _lock:
            _d4_cache[key] = hit
    return hit


def d3_kernel(g: int, n: int, a_head) -> PiecewisePoly:
    """D3 boundary kernel for the (g, n+1)-pointed recursion, head in R^n."""
    hs = _check_head(a_head)
    key = (g, n + 1, hs)
    hit = _d3_cache.get(key)
    if hit is None:
        hit = _d3_pw(g, n + 1, hs)
        with _lock:
            _d3_cache[key] = hit
    return hit


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def profile1(g: int, n: int, head) -> PiecewisePoly:
    """V^1_{g,n}(head, t) on [0, t_max]."""
    hs = tuple(sorted(_check_head(head)))
    key = (g, n, hs)
    hit = _profile1_cache.get(key)
    if hit is not None:
        return hit
    tm = t_max(g, n, hs)
    p1 = partial_profile(g, n, hs, level=1)
    d4 = d4_kernel(g, n - 1, hs)
    d5 = d5_kernel(g, n - 1, hs)
    result = PiecewisePoly.single(p1, 0, tm) - d4.antiderivative()
    # V^2 = P^2 - int K5 feeds V^1 through the u V^2 term
    result = result - d5.antiderivative().poly_mul(_T).antiderivative()
    with _lock:
        _profile1_cache[key] = result
    return result


def profile0(g: int, n: int, head) -> PiecewisePoly:
    """V^0_{g,n}(head, t) on [0, t_max]; requires (g, n) stable, not (0, 3)."""
    if (g, n) == (0, 3):
        raise ValueError("V_{0,3} is an indicator, not a profile")
    if not is_stable(g, n):
        raise DomainError(f"unstable ({g}, {n})")
    hs = tuple(sorted(_check_head(head)))
    if len(hs) != n - 1:
        raise DomainError(f"head must have {n - 1} coordinates")
    key = (g, n, hs)
    hit = _profile0_cache.get(key)
    if hit is not None:
        return hit
    tm = t_max(g, n, hs)
    if tm <= 0:
        raise DomainError("head already saturates the angle bound")
    v1 = profile1(g, n, hs)
    d3 = d3_kernel(g, n - 1, hs)
    integrand = v1.poly_mul(_T) - d3
    const = partial_profile(g, n, hs).eval({"t": Fraction(0)})
    result = integrand.antiderivative() + const
    with _lock:
        _profile0_cache[key] = result
    return result


@dataclass(frozen=True)
class VolumeProfile:
    g: int
    n: int
    head: tuple
    level: int
    profile: PiecewisePoly

    @property
    def t_max(self) -> Fraction:
        return self.profile.hi


def v_profile(g: int, n: int, head, ell: int = 0) -> VolumeProfile:
    """Profile of V^ell_{g,n}(head, t) on [0, t_max].

    ell = 2 carries the valence-5 correction; ell >= 3 coincides with the
    Mirzakhani pairing P^ell.
    """
    hs = tuple(sorted(_check_head(head)))
    if ell == 0:
        pw = profile0(g, n, hs)
    elif ell == 1:
        pw = profile1(g, n, hs)
    elif ell == 2:
        base = PiecewisePoly.single(partial_profile(g, n, hs, level=2),
                                    0, t_max(g, n, hs))
        pw = base - d5_kernel(g, n - 1, hs).antiderivative()
    else:
        pw = PiecewisePoly.single(partial_profile(g, n, hs, level=ell),
                                  0, t_max(g, n, hs))
    return VolumeProfile(g, n, hs, ell, pw)


# ---------------------------------------------------------------------------
# pointwise evaluation
# ---------------------------------------------------------------------------


def v0_value(g: int, vec: AngleVector) -> Fraction:
    """V^0_{g,n} at a canonical vector, extended by zero off the domain.

    (0,3) is the indicator of |a| <= 1; (1,1) stays polynomial on [0, 2].
    """
    coords = vec.coords
    n = len(coords)
    if not is_stable(g, n):
        return Fraction(0)
    if (g, n) == (0, 3):
        return Fraction(1) if vec.total() <= 1 else Fraction(0)
    if (g, n) == (1, 1):
        t = coords[0]
        return (t * t - 1) / 48
    if vec.total() > 2 * g - 2 + n:
        return Fraction(0)
    return profile0(g, n, vec.head).eval(vec.last)


def v_eval(g: int, values) -> Fraction:
    """V_{g,n}(a) = (-1)^{g-1+n} V^0_{g,n}(a), exact."""
    vec = canonicalize(values)
    sign = -1 if (g - 1 + len(vec.coords)) % 2 else 1
    return sign * v0_value(g, vec)


def _sin_sign(x: Fraction) -> int:
    """Exact sign of sin(pi x) for rational x."""
    if x == int(x):
        return 0
    return -1 if math.floor(x) % 2 else 1


@dataclass(frozen=True)
class VolValue:
    """Exact coefficient plus transcendental rendering of Vol_{g,n}(a).

    The value is coeff * pi**pi_power / prod sin(pi theta) over sin_angles.
    """

    coeff: Fraction
    pi_power: int
    sin_angles: tuple

    def as_float(self) -> float:
        out = float(self.coeff) * math.pi ** self.pi_power
        for theta in self.sin_angles:
            out /= math.sin(math.pi * float(theta))
        return out

    def exact_sign(self) -> int:
        s = 1 if self.coeff > 0 else (-1 if self.coeff < 0 else 0)
        for theta in self.sin_angles:
            s *= _sin_sign(theta)
        return s


def vol_eval(g: int, values) -> VolValue:
    """Vol_{g,n}(a) = V_{g,n}(a) / prod_{a_i > 0} sin(pi a_i).

    At a_n in {1, 2} the zero of V is simple and the limit is taken through
    the derivative of the profile (L'Hopital); cusp coordinates are excluded
    from the sine product.
    """
    vec = canonicalize(values)
    n = len(vec.coords)
    sign = -1 if (g - 1 + n) % 2 else 1
    last = vec.last
    if last in (1, 2) and (g, n) != (0, 3):
        value = sign * v0_value(g, vec)
        if value != 0:
            raise DomainError(
                f"V does not vanish at a_n = {last}; Vol has no finite limit")
        prof = profile0(g, n, vec.head) if (g, n) != (1, 1) else None
        if prof is None:
            deriv = last / 24  # d/dt (t^2-1)/48
        else:
            if last > prof.hi:
                raise DomainError("angle beyond the admissible bound")
            piece = prof.piece_at(last)
            deriv = piece.derivative("t").eval({"t": last})
        cos_sign = 1 if int(last) % 2 == 0 else -1
        angles = tuple(x for x in vec.head if x > 0)
        return VolValue(sign * deriv * cos_sign, -1, angles)
    angles = tuple(x for x in vec.coords if x > 0)
    if any(x == int(x) for x in angles):
        raise DomainError("nonzero integer coordinate off the last slot")
    return VolValue(sign * v0_value(g, vec), 0, angles)


# ---------------------------------------------------------------------------
# wall candidates and the interpolation cross-check
# ---------------------------------------------------------------------------


def wall_candidates(g: int, n: int, a_head) -> list:
    """Sound over-approximation of the breakpoints of the (g, n) profile.

    Mirrors the kernel construction: integer offsets minus subset sums of the
    head, images of recursively collected inner walls under the affine bound
    maps, and pairwise sums from the convolution terms.
    """
    hs = tuple(sorted(_check_head(a_head)))
    tm = t_max(g, n, hs)
    walls = _wall_set(g, n, hs)
    return sorted(w for w in walls if 0 < w < tm) + [tm]


@lru_cache(maxsize=None)
def _factor_walls(g1: int, heads: tuple) -> frozenset:
    """Breakpoint offsets of a small-angle factor on [0, 1]."""
    k = len(heads) + 1
    if not is_stable(g1, k):
        return frozenset()
    cut = Fraction(2 * g1 - 2 + k) - sum(heads, Fraction(0))
    walls = {Fraction(0), Fraction(1)}
    walls.update(1 - h for h in heads)
    if 0 < cut < 1:
        walls.add(cut)
    return frozenset(w for w in walls if 0 <= w <= 1)


def _e_factor_wall_offsets(g1: int, heads: tuple) -> frozenset:
    k = len(heads) + 1
    if not is_stable(g1, k):
        return frozenset()
    cut = Fraction(2 * g1 - 2 + k) - sum(heads, Fraction(0))
    walls = {Fraction(0), HALF}
    if 0 < cut < HALF:
        walls.add(cut)
    return frozenset(walls)


def _wall_set(g: int, n: int, hs: tuple) -> set:
    walls = {Fraction(1), Fraction(2)}
    idx = range(len(hs))
    for i in idx:
        walls.add(TWO - hs[i])
        for j in idx:
            if j > i:
                # pair wall plus the V^0-factor walls it drags along
                rest = tuple(sorted(hs[a] for a in idx if a not in (i, j)))
                for w in _factor_walls(g, rest):
                    walls.add(TWO - hs[i] - hs[j] + w)
                for k in idx:
                    if k > j:
                        rest3 = tuple(sorted(hs[a] for a in idx
                                             if a not in (i, j, k)))
                        for w in _e_factor_wall_offsets(g, rest3):
                            walls.add(Fraction(3) - hs[i] - hs[j] - hs[k] + w)
        others = tuple(a for a in idx if a != i)
        for g1 in range(0, g + 1):
            g2 = g - g1
            for left, right in _splittings(others):
                if not (is_stable(g1, len(left) + 1) and is_stable(g2, len(right) + 1)):
                    continue
                wl = _e_factor_wall_offsets(g1, tuple(sorted(hs[a] for a in left)))
                wr = _e_factor_wall_offsets(g2, tuple(sorted(hs[a] for a in right)))
                walls.update(TWO - hs[i] + a + b for a in wl for b in wr)
    for i in idx:
        rest = tuple(hs[a] for a in idx if a != i)
        walls.add(1 - hs[i])
        if is_stable(g, n - 1) and (g, n - 1) != (0, 3):
            inner = _wall_set(g, n - 1, tuple(sorted(rest)))
            walls.update(1 - hs[i] + w for w in inner)
    for g1 in range(0, g + 1):
        g2 = g - g1
        for left, right in _splittings(tuple(idx)):
            if not (is_stable(g1, len(left) + 1) and is_stable(g2, len(right) + 1)):
                continue
            wl = _factor_walls(g1, tuple(sorted(hs[a] for a in left)))
            wr = _factor_walls(g2, tuple(sorted(hs[a] for a in right)))
            walls.update(1 + a + b for a in wl for b in wr)
    return walls


def profile_by_interpolation(g: int, n: int, head) -> PiecewisePoly:
    """Independent reconstruction of the V^0 profile.

    Evaluates V^0 pointwise through the recursion's own values on a grid
    inside each wall-free window and interpolates; a missed wall surfaces as
    an InconsistentSamplesError.  Used as a cross-check of the symbolic
    construction.
    """
    hs = tuple(sorted(_check_head(head)))
    symbolic = profile0(g, n, hs)
    walls = [Fraction(0)] + wall_candidates(g, n, hs)
    walls = sorted(set(walls))
    degree = 6 * g - 6 + 2 * n
    pieces = []
    points = []
    for a, b in zip(walls, walls[1:]):
        samples = []
        for j in range(1, degree + 3):
            x = a + (b - a) * Fraction(j, degree + 3)
            samples.append((x, symbolic.eval(x)))
        pieces.append(interpolate(samples, degree))
        points.append((a, b))
    return piecewise_from_contributions(
        [(a, b, p) for (a, b), p in zip(points, pieces)], 0, symbolic.hi)


# ---------------------------------------------------------------------------
# Figure 1 tables
# ---------------------------------------------------------------------------


def fig1_table(n: int, samples: int) -> list:
    """Rows (x, V_{0,n}(0,..,0,x) exact, float, Vol float) on [0, 2]."""
    if n not in (3, 4, 5):
        raise ValueError("n must be 3, 4 or 5")
    rows = []
    for k in range(samples + 1):
        x = Fraction(2 * k, samples)
        vec = canonicalize([Fraction(0)] * (n - 1) + [x])
        value = v_eval(0, vec.coords)
        if x == 0:
            vol = float(value)
        elif x in (1, 2) and n != 3:
            vol = vol_eval(0, vec.coords).as_float()
        elif x == int(x):
            vol = float("nan") if value != 0 else 0.0
        else:
            vol = float(value) / math.sin(math.pi * float(x))
        rows.append((x, value, float(value), vol))
    return rows


def clear_caches():
    with _lock:
        _d3_cache.clear()
        _d4_cache.clear()
        _d5_cache.clear()
        _profile0_cache.clear()
        _profile1_cache.clear()
    _vp1_factor_cached.cache_clear()
    _e_factor_cached.cache_clear()
    _sep_conv.cache_clear()
    _sep_conv_e.cache_clear()
    _factor_walls.cache_clear()
