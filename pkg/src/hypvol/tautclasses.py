"""Decorated-graph tautological classes: the class-valued route to the
volumes.

A class is a formal Q-combination of decorated stable graphs: each vertex
carries a genus, a set of marking labels, a kappa_1 power and psi powers on
its legs; edges carry psi powers at both ends.  The class-valued recursion
integrates, degree by degree,

    ds/dt = t psi_n s - sum_Gamma int_{Delta_Gamma} m/|Aut| zeta_*(x s(b(v)))

over the last angle, summing over rational graphs of central valence 3, 4
and 5.  Inner classes along twist segments with last coordinate <= 1 are
expanded by the small-angle closed form (exponential class minus one-edge
corrections, truncated at the twist simplex), so every coefficient is an
exact polynomial integral.  No relations are imposed: equality of classes
is only ever tested through integral pairings.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .exactmath import (
    MultiPoly,
    PiecewisePoly,
    definite_integral,
    piecewise_from_contributions,
    pw_convolve,
)
from .intersections import default_table, dimension, is_stable
from .volumes import DomainError, _check_head, _splittings, canonicalize, t_max

HALF = Fraction(1, 2)

# TermKey: (vertices, edges) with
#   vertices: tuple of (genus, legs, kappa, psi_pows) -- legs sorted labels,
#             psi_pows aligned with legs
#   edges: sorted tuple of (v_i, v_j, pow_at_i, pow_at_j)


def _canonical(vertices, edges):
    k = len(vertices)
    best = None
    for perm in permutations(range(k)):
        inv = [0] * k
        for old, new in enumerate(perm):
            inv[new] = old
        vs = tuple(vertices[inv[i]] for i in range(k))
        es = []
        for a, b, pa, pb in edges:
            na, nb = perm[a], perm[b]
            if na <= nb:
                es.append((na, nb, pa, pb))
            else:
                es.append((nb, na, pb, pa))
        cand = (vs, tuple(sorted(es)))
        if best is None or cand < best:
            best = cand
    return best


def term_degree(key) -> int:
    vertices, edges = key
    deg = len(edges)
    for genus, legs, kappa, pows in vertices:
        deg += kappa + sum(pows)
    for _, _, pa, pb in edges:
        deg += pa + pb
    return deg


def _vertex_integral(genus, legs_pows, edge_pows, kappa) -> Fraction:
    pows = tuple(legs_pows) + tuple(edge_pows)
    return default_table().kappa_psi(genus, pows, kappa)


def term_integral(key) -> Fraction:
    """Product of per-vertex kappa/psi integrals (pushforward pairing)."""
    vertices, edges = key
    out = Fraction(1)
    for i, (genus, legs, kappa, pows) in enumerate(vertices):
        epows = []
        for a, b, pa, pb in edges:
            if a == i:
                epows.append(pa)
            if b == i:
                epows.append(pb)
        val = _vertex_integral(genus, pows, epows, kappa)
        if val == 0:
            return Fraction(0)
        out *= val
    return out


@dataclass(frozen=True)
class DecoratedClass:
    """Formal Q-combination of decorated stable graphs on (g, n)."""

    g: int
    n: int
    terms: tuple  # tuple of (TermKey, Fraction), canonical order

    @staticmethod
    def from_dict(g, n, data) -> "DecoratedClass":
        items = tuple(sorted((k, v) for k, v in data.items() if v != 0))
        return DecoratedClass(g, n, items)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def graded_part(self, d: int) -> "DecoratedClass":
        return DecoratedClass.from_dict(
            self.g, self.n, {k: v for k, v in self.terms if term_degree(k) == d})

    def degrees(self):
        return sorted({term_degree(k) for k, _ in self.terms})

    def __add__(self, other):
        data = self.as_dict()
        for k, v in other.terms:
            data[k] = data.get(k, Fraction(0)) + v
        return DecoratedClass.from_dict(self.g, self.n, data)

    def scale(self, c):
        c = Fraction(c)
        return DecoratedClass.from_dict(
            self.g, self.n, {k: c * v for k, v in self.terms})

    def to_text(self) -> str:
        """One line per term: coeff * [graph] * kappa/psi monomial."""
        lines = []
        for key, coeff in self.terms:
            vertices, edges = key
            vbits = []
            mono = []
            for i, (genus, legs, kappa, pows) in enumerate(vertices):
                vbits.append(f"v{i}:({genus}|{','.join(map(str, legs))})")
                if kappa:
                    mono.append(f"kappa1(v{i})^{kappa}" if kappa > 1 else f"kappa1(v{i})")
                for leg, p in zip(legs, pows):
                    if p:
                        mono.append(f"psi{leg}^{p}" if p > 1 else f"psi{leg}")
            for j, (a, b, pa, pb) in enumerate(edges):
                vbits.append(f"e:({a}-{b})")
                if pa:
                    mono.append(f"psi(e{j}@v{a})^{pa}" if pa > 1 else f"psi(e{j}@v{a})")
                if pb:
                    mono.append(f"psi(e{j}@v{b})^{pb}" if pb > 1 else f"psi(e{j}@v{b})")
            body = "[" + " ".join(vbits) + "]"
            if mono:
                body += " * " + "*".join(mono)
            lines.append(f"{coeff} * {body}")
        return "\n".join(lines) if lines else "0"


def _trivial_term(g, n, kappa, pows):
    key = (((g, tuple(range(1, n + 1)), kappa, tuple(pows)),), ())
    return key


def e_class(g, n, a, max_degree=None) -> DecoratedClass:
    """exp(-kappa_1/2 + sum a_i^2 psi_i / 2) truncated at max_degree."""
    if not is_stable(g, n):
        raise DomainError(f"unstable ({g}, {n})")
    angles = [Fraction(x) for x in a]
    if len(angles) != n:
        raise ValueError("angle vector arity mismatch")
    D = dimension(g, n) if max_degree is None else max_degree
    data = {}
    for kappa, pows, coeff in _e_expansion_scalar(angles, D):
        key = _trivial_term(g, n, kappa, pows)
        data[key] = data.get(key, Fraction(0)) + coeff
    return DecoratedClass.from_dict(g, n, data)


def _e_expansion_scalar(angles, maxdeg):
    """(kappa, psi-powers, coefficient) of the exponential class."""
    n = len(angles)

    def rec(i, budget):
        if i == n:
            yield (), Fraction(1)
            return
        for d in range(budget + 1):
            if angles[i] == 0 and d > 0:
                continue
            c = (angles[i] ** 2 / 2) ** d / factorial(d)
            for rest, cr in rec(i + 1, budget - d):
                yield (d,) + rest, c * cr
    out = []
    for kappa in range(maxdeg + 1):
        ck = Fraction((-1) ** kappa, 2 ** kappa) / factorial(kappa)
        for pows, c in rec(0, maxdeg - kappa):
            out.append((kappa, pows, ck * c))
    return out


def _e_expansion_symbolic(slots, maxdeg):
    """Exponential expansion with symbolic angles.

    ``slots``: list of (label, angle) where angle is Fraction or MultiPoly.
    Yields (kappa, ((label, pow), ...), coeff) with coeff a MultiPoly or
    Fraction.
    """
    labels = [lab for lab, _ in slots]
    angles = [ang for _, ang in slots]

    def rec(i, budget):
        if i == n_slots:
            yield (), Fraction(1)
            return
        ang = angles[i]
        for d in range(budget + 1):
            if isinstance(ang, Fraction) and ang == 0 and d > 0:
                continue
            c = (ang * ang * HALF) ** d * Fraction(1, factorial(d))
            for rest, cr in rec(i + 1, budget - d):
                yield ((labels[i], d),) + rest if d else rest, c * cr

    n_slots = len(slots)
    for kappa in range(maxdeg + 1):
        ck = Fraction((-1) ** kappa, 2 ** kappa) / factorial(kappa)
        for pows, c in rec(0, maxdeg - kappa):
            yield kappa, pows, ck * c


def psi_multiply(c: DecoratedClass) -> DecoratedClass:
    """Multiply by psi at the last marking (leg n)."""
    data = {}
    for key, coeff in c.terms:
        data2 = _psi_bump(key, c.n)
        data[data2] = data.get(data2, Fraction(0)) + coeff
    return DecoratedClass.from_dict(c.g, c.n, data)


def _psi_bump(key, leg):
    vertices, edges = key
    out = []
    for genus, legs, kappa, pows in vertices:
        if leg in legs:
            i = legs.index(leg)
            pows = pows[:i] + (pows[i] + 1,) + pows[i + 1:]
        out.append((genus, legs, kappa, pows))
    return _canonical(tuple(out), edges)


def integrate_top(c: DecoratedClass) -> Fraction:
    """Pair a homogeneous top-degree class against the fundamental cycle."""
    D = dimension(c.g, c.n)
    degs = c.degrees()
    if degs and degs != [D]:
        raise ValueError(f"class not homogeneous of degree {D}: degrees {degs}")
    return sum((coeff * term_integral(key) for key, coeff in c.terms), Fraction(0))


def pair_psi(c: DecoratedClass, ell: int) -> Fraction:
    """int psi_n^ell * c; off-dimension terms pair to zero."""
    if ell < 0:
        raise ValueError("negative psi power")
    D = dimension(c.g, c.n)
    out = Fraction(0)
    for key, coeff in c.terms:
        if term_degree(key) + ell != D:
            continue
        bumped = key
        for _ in range(ell):
            bumped = _psi_bump(bumped, c.n)
        out += coeff * term_integral(bumped)
    return out


# ---------------------------------------------------------------------------
# class-valued profiles
# ---------------------------------------------------------------------------

_profile_cache: dict = {}
_lock = threading.Lock()

_T = MultiPoly.var("t")


def s_class(g, n, a) -> DecoratedClass:
    """The class-valued volume function at a rational angle vector.

    The vector is canonicalized (largest coordinate last, head <= 1/2); the
    class is symmetric under permutations that preserve the angle values, so
    the canonical evaluation determines it.
    """
    vec = canonicalize(a)
    if len(vec.coords) != n:
        raise ValueError("angle vector arity mismatch")
    if not is_stable(g, n):
        raise DomainError(f"unstable ({g}, {n})")
    if vec.total() > 2 * g - 2 + n and (g, n) != (1, 1):
        # (1,1) has no boundary kernels and stays polynomial up to 2
        raise DomainError("outside the angle domain")
    profile = class_profile(g, n, vec.head)
    data = {}
    for key, pw in profile.items():
        val = pw.eval(min(vec.last, pw.hi))
        if val != 0:
            data[key] = val
    return DecoratedClass.from_dict(g, n, data)


def class_profile(g, n, head) -> dict:
    """s_{g,n}(head, t) as {TermKey: PiecewisePoly on [0, t_max]}."""
    hs = tuple(sorted(_check_head(head)))
    key = (g, n, hs)
    hit = _profile_cache.get(key)
    if hit is not None:
        return hit
    result = _class_profile_build(g, n, hs)
    with _lock:
        _profile_cache[key] = result
    return result


def _class_profile_build(g, n, hs):
    tm = t_max(g, n, hs)
    D = dimension(g, n)
    if (g, n) == (0, 3):
        return {_trivial_term(0, 3, 0, (0, 0, 0)): PiecewisePoly.from_const(1, 0, tm)}
    kernel = _class_kernel(g, n, hs, tm, D)
    profile: dict = {_trivial_term(g, n, 0, (0,) * n):
                     PiecewisePoly.from_const(1, 0, tm)}
    by_degree = {0: dict(profile)}
    angles0 = list(hs) + [Fraction(0)]
    e0 = {}
    for kappa, pows, coeff in _e_expansion_scalar(angles0, D):
        e0key = _trivial_term(g, n, kappa, pows)
        e0[e0key] = e0.get(e0key, Fraction(0)) + coeff
    for d in range(1, D + 1):
        terms_d: dict = {}
        for e0key, coeff in e0.items():
            if term_degree(e0key) == d:
                terms_d[e0key] = PiecewisePoly.from_const(coeff, 0, tm)
        for pkey, pw in by_degree.get(d - 1, {}).items():
            bumped = _psi_bump(pkey, n)
            add = pw.poly_mul(_T).antiderivative()
            terms_d[bumped] = terms_d.get(bumped, PiecewisePoly.zero(0, tm)) + add
        for kkey, kpw in kernel.items():
            if term_degree(kkey) == d:
                sub = kpw.antiderivative()
                terms_d[kkey] = terms_d.get(kkey, PiecewisePoly.zero(0, tm)) - sub
        terms_d = {k: v for k, v in terms_d.items() if any(not p.is_zero() for p in v.pieces)}
        by_degree[d] = terms_d
        profile.update(terms_d)
    return profile


def _relabel_inner(ikey, label_map):
    """Relabel an inner profile term into ambient labels.

    label_map sends inner leg labels to ambient labels; the inner label
    len(label_map)+1 (its last slot) becomes an edge end: the vertex
    carrying it is returned together with the psi power sitting on it.
    """
    vertices, edges = ikey
    last_label = len(label_map) + 1
    out_vertices = []
    attach_vertex = None
    attach_pow = 0
    for vi, (genus, legs, kappa, pows) in enumerate(vertices):
        new_legs = []
        new_pows = []
        for leg, p in zip(legs, pows):
            if leg == last_label:
                attach_vertex = vi
                attach_pow = p
                continue
            new_legs.append(label_map[leg])
            new_pows.append(p)
        order = sorted(range(len(new_legs)), key=lambda i: new_legs[i])
        out_vertices.append((genus,
                             tuple(new_legs[i] for i in order),
                             kappa,
                             tuple(new_pows[i] for i in order)))
    if attach_vertex is None:
        raise AssertionError("inner term does not carry its last marking")
    return tuple(out_vertices), edges, attach_vertex, attach_pow


def _glue_one_edge(g, n, central_legs, inner_key, label_map):
    """Ambient term: central genus-0 vertex joined to an inner profile term."""
    ivertices, iedges, attach, attach_pow = _relabel_inner(inner_key, label_map)
    legs_c = tuple(sorted(central_legs))
    vertices = ((0, legs_c, 0, (0,) * len(legs_c)),) + ivertices
    edges = [(a + 1, b + 1, pa, pb) for a, b, pa, pb in iedges]
    edges.append((0, attach + 1, 0, attach_pow))
    return _canonical(vertices, tuple(edges))


def _class_kernel(g, n, hs, tm, D):
    """All graph contributions to ds/dt, as {TermKey: PiecewisePoly}."""
    contribs: dict = {}

    def add(key, lo, hi, poly):
        if lo >= hi:
            return
        if term_degree(key) > D:
            return
        contribs.setdefault(key, []).append((lo, hi, poly))

    idx = range(len(hs))
    all_labels = list(range(1, n))

    # one-edge families: central legs S u {n}, |S| = valence - 2 in {1, 2, 3}
    for size in (1, 2, 3):
        for subset in combinations(idx, size):
            inner_n = n - size
            if not is_stable(g, inner_n):
                continue
            wall = Fraction(size) - sum(hs[a] for a in subset)
            if wall >= tm:
                continue
            kept = [a for a in idx if a not in subset]
            kept_labels = [all_labels[a] for a in kept]
            kept_values = [hs[a] for a in kept]
            order = sorted(range(len(kept)), key=lambda i: kept_values[i])
            label_map = {i + 1: kept_labels[order[i]] for i in range(len(kept))}
            inner = class_profile(g, inner_n, tuple(sorted(kept_values)))
            central_legs = [all_labels[a] for a in subset] + [n]
            for ikey, ipw in inner.items():
                key = _glue_one_edge(g, n, central_legs, ikey, label_map)
                if term_degree(key) > D:
                    continue
                composed = ipw.compose_affine(1, -wall).poly_mul(_T - wall)
                lo, hi = max(Fraction(0), wall), min(tm, composed.hi)
                if lo < hi:
                    window = composed.restrict(lo, hi)
                    for (a, b), piece in zip(
                            zip(window.breakpoints, window.breakpoints[1:]),
                            window.pieces):
                        add(key, a, b, piece)

    # loop families: central legs {n} (valence 3) or {i, n} (valence 4),
    # double edge to a genus g-1 vertex
    for extra in [None] + list(idx):
        inner_n = n + 1 if extra is None else n
        if g >= 1 and is_stable(g - 1, inner_n):
            _loop_terms(g, n, hs, tm, D, add, extra)

    # separating families: central legs {n} or {i, n}, one edge each way
    for extra in [None] + list(idx):
        pool = tuple(a for a in idx if a != extra)
        for g1 in range(0, g + 1):
            g2 = g - g1
            for left, right in _splittings(pool):
                if not (is_stable(g1, len(left) + 1) and is_stable(g2, len(right) + 1)):
                    continue
                _sep_terms(g, n, hs, tm, D, g1, left, g2, right, add, extra)

    return {key: piecewise_from_contributions(parts, 0, tm)
            for key, parts in contribs.items()}


def _loop_terms(g, n, hs, tm, D, add, extra=None):
    """Double-edge graph: main exponential part plus one-edge corrections.

    ``extra`` names a head leg carried by the central vertex (valence 4);
    its twists then stay below 1/2 and the corrections are window-empty.
    """
    labels = list(range(1, n))
    wall = Fraction(1) if extra is None else Fraction(2) - hs[extra]
    if wall >= tm:
        return
    kept = [i for i in range(len(hs)) if i != extra]
    y = MultiPoly.var("y", ("y",))
    s = MultiPoly.var("s", ("s",))
    z = s - y
    central = (n,) if extra is None else (labels[extra], n)
    slots = [(labels[i], hs[i]) for i in kept] + [("m1", y), ("m2", z)]
    weight = y * z * HALF
    maxdeg = D - 2  # two edges
    for kappa, pows, coeff in _e_expansion_symbolic(slots, maxdeg):
        poly = weight * coeff
        val = definite_integral(poly.in_ring(tuple(sorted(set(poly.vars) | {"y"},
                                                          key=_vkey))), "y", 0, s)
        val = _at_u_minus_wall(val, wall)
        if val.is_zero():
            continue
        key = _loop_key(g, n, central, kept, kappa, pows)
        add(key, wall, tm, val)
    # corrections: the far slot crosses its one-edge wall z + h_j > 1
    if not is_stable(g - 1, n - (0 if extra is None else 1)):
        return
    for j in kept:
        onset = wall + 1 - hs[j]
        if onset >= tm:
            continue
        rest = [(labels[i], hs[i]) for i in kept if i != j]
        w = MultiPoly.var("w", ("w",))
        slots_in = rest + [("m1", y), ("m3", w)]
        upper = s - y + hs[j] - 1
        maxdeg = D - 3  # three edges in the composed graph
        for kappa, pows, coeff in _e_expansion_symbolic(slots_in, maxdeg):
            q = definite_integral((w * coeff).in_ring(
                tuple(sorted(set((w * coeff).vars) | {"w"}, key=_vkey))), "w", 0, upper)
            integrand = (y * z * q).in_ring(
                tuple(sorted(set((y * z * q).vars) | {"y"}, key=_vkey)))
            val = definite_integral(integrand, "y", 0, s + hs[j] - 1)
            val = _at_u_minus_wall(val, wall)
            if val.is_zero():
                continue
            key = _loop_correction_key(g, n, central, labels[j], kept, kappa, pows)
            add(key, onset, tm, -val)


def _vkey(name):
    from .exactmath import var_sort_key
    return var_sort_key(name)


def _at_u_minus_wall(val: MultiPoly, wall) -> MultiPoly:
    """Substitute s = t - wall and land in the univariate t ring."""
    val = val.rename({"s": "t"})
    if "t" not in val.vars:
        val = val.in_ring(tuple(sorted(set(val.vars) | {"t"}, key=_vkey)))
    return val.subs("t", _T - wall).in_ring(("t",))


def _loop_key(g, n, central, kept, kappa, pows):
    """central genus-0 vertex ==double edge== outer (g-1, kept heads)."""
    pow_map = dict(pows)
    labels = list(range(1, n))
    legs = tuple(sorted(labels[i] for i in kept))
    leg_pows = tuple(pow_map.get(leg, 0) for leg in legs)
    central_legs = tuple(sorted(central))
    vertices = ((0, central_legs, 0, (0,) * len(central_legs)),
                (g - 1, legs, kappa, leg_pows))
    edges = ((0, 1, 0, pow_map.get("m1", 0)), (0, 1, 0, pow_map.get("m2", 0)))
    return _canonical(vertices, edges)


def _loop_correction_key(g, n, central, leg_j, kept, kappa, pows):
    """Triangle: ambient central, split vertex (0,{j}), outer (g-1)."""
    pow_map = dict(pows)
    labels = list(range(1, n))
    legs = tuple(sorted(labels[i] for i in kept if labels[i] != leg_j))
    leg_pows = tuple(pow_map.get(leg, 0) for leg in legs)
    central_legs = tuple(sorted(central))
    vertices = ((0, central_legs, 0, (0,) * len(central_legs)),
                (0, (leg_j,), 0, (0,)),
                (g - 1, legs, kappa, leg_pows))
    edges = ((0, 1, 0, 0),                      # ambient edge at the z-slot
             (0, 2, 0, pow_map.get("m1", 0)),   # ambient edge at the y-slot
             (1, 2, 0, pow_map.get("m3", 0)))   # the inner correction edge
    return _canonical(vertices, edges)


def _sep_terms(g, n, hs, tm, D, g1, left, g2, right, add, extra=None):
    y = MultiPoly.var("y", ("y",))
    labels = list(range(1, n))
    wall = Fraction(1) if extra is None else Fraction(2) - hs[extra]
    if wall >= tm:
        return
    central = (n,) if extra is None else (labels[extra], n)
    f1 = list(_factor_expansion(g1, [(labels[a], hs[a]) for a in left], D))
    f2 = list(_factor_expansion(g2, [(labels[a], hs[a]) for a in right], D))
    for verts1, epow1_src, lo1, hi1, p1, deg1 in f1:
        for verts2, epow2_src, lo2, hi2, p2, deg2 in f2:
            if deg1 + deg2 + 2 > D:
                continue
            G = PiecewisePoly.single((y * p1).rename({"y": "t"}).in_ring(("t",)),
                                     lo1, hi1, continuous=False) if lo1 < hi1 else None
            H = PiecewisePoly.single((y * p2 * HALF).rename({"y": "t"}).in_ring(("t",)),
                                     lo2, hi2, continuous=False) if lo2 < hi2 else None
            if G is None or H is None:
                continue
            conv = pw_convolve(G, H)
            shifted = conv.compose_affine(1, -wall)
            lo, hi = max(wall, shifted.lo), min(tm, shifted.hi)
            if lo >= hi:
                continue
            key = _sep_key(g, n, central, verts1, epow1_src, verts2, epow2_src)
            if term_degree(key) > D:
                continue
            window = shifted.restrict(lo, hi)
            for (a, b), piece in zip(
                    zip(window.breakpoints, window.breakpoints[1:]), window.pieces):
                add(key, a, b, piece)


def _factor_expansion(g1, slot_list, D):
    """Expansion of one separating factor as a function of its twist y.

    Yields (vertices, edge_pow_info, lo, hi, coeff_poly_in_y, degree):
    ``vertices`` is a tuple of decorated vertices local to the factor, and
    ``edge_pow_info`` = (attach_vertex_index, psi_power, internal_edges).
    """
    k1 = len(slot_list) + 1
    labels = [lab for lab, _ in slot_list]
    values = [val for lab, val in slot_list]
    bound = Fraction(2 * g1 - 2 + k1)
    cut = bound - sum(values, Fraction(0))
    top = min(Fraction(1), cut)
    if top <= 0:
        return
    y = MultiPoly.var("y", ("y",))
    # main part: exponential class on the single factor vertex
    slots = list(zip(labels, values)) + [("m", y)]
    for kappa, pows, coeff in _e_expansion_symbolic(slots, D):
        pow_map = dict(pows)
        legs = tuple(sorted(labels))
        leg_pows = tuple(pow_map.get(leg, 0) for leg in legs)
        verts = ((g1, legs, kappa, leg_pows),)
        deg = kappa + sum(leg_pows) + pow_map.get("m", 0)
        cp = coeff if isinstance(coeff, MultiPoly) else MultiPoly.const(coeff, ("y",))
        yield verts, (0, pow_map.get("m", 0), ()), Fraction(0), top, cp.in_ring(("y",)), deg
    # one-edge corrections beyond the walls y + h_j > 1
    if not is_stable(g1, k1 - 1):
        return
    w = MultiPoly.var("w", ("w",))
    for j, (lab_j, val_j) in enumerate(slot_list):
        lo = Fraction(1) - val_j
        if lo >= top:
            continue
        rest = [slot_list[i] for i in range(len(slot_list)) if i != j]
        slots_in = rest + [("mw", w)]
        for kappa, pows, coeff in _e_expansion_symbolic(slots_in, D):
            pow_map = dict(pows)
            q = definite_integral(
                (w * coeff).in_ring(tuple(sorted(set((w * coeff).vars) | {"w"},
                                                 key=_vkey))),
                "w", 0, y + val_j - 1)
            if q.is_zero():
                continue
            legs_out = tuple(sorted(lab for lab, _ in rest))
            leg_pows = tuple(pow_map.get(leg, 0) for leg in legs_out)
            # split vertex (0, {j, twist}) -- edge -- outer (g1, rest)
            verts = ((0, (lab_j,), 0, (0,)), (g1, legs_out, kappa, leg_pows))
            internal = ((0, 1, 0, pow_map.get("mw", 0)),)
            deg = kappa + sum(leg_pows) + pow_map.get("mw", 0) + 1
            yield (verts, (0, 0, internal), lo, top,
                   (-q).in_ring(("y",)), deg)


def _sep_key(g, n, central_legs, verts1, info1, verts2, info2):
    attach1, pow1, internal1 = info1
    attach2, pow2, internal2 = info2
    legs_c = tuple(sorted(central_legs))
    central = ((0, legs_c, 0, (0,) * len(legs_c)),)
    vertices = central + verts1 + verts2
    off1 = 1
    off2 = 1 + len(verts1)
    edges = [(0, off1 + attach1, 0, pow1), (0, off2 + attach2, 0, pow2)]
    for a, b, pa, pb in internal1:
        edges.append((off1 + a, off1 + b, pa, pb))
    for a, b, pa, pb in internal2:
        edges.append((off2 + a, off2 + b, pa, pb))
    return _canonical(vertices, tuple(edges))


def clear_cache():
    with _lock:
        _profile_cache.clear()
