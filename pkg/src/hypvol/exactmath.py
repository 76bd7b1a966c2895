"""Exact rational scalars, sparse multivariate polynomials and univariate
piecewise polynomials.

Everything in this module is pure and exact: coefficients are
``fractions.Fraction``, no floats enter any computation.  Values are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]

# Canonical variable order: a1 < a2 < ... < an < t < u < y < w < x < z.
_TAIL_ORDER = ("s", "t", "u", "v", "w", "x", "y", "z")


class UnknownVariableError(ValueError):
    """Raised when an operation names a variable outside the ring."""


class InconsistentSamplesError(ValueError):
    """Raised when interpolation samples do not lie on one polynomial.

    In the volume recursion this signals a missed wall and is fatal.
    """


def var_sort_key(name: str):
    if name.startswith("a") and name[1:].isdigit():
        return (0, int(name[1:]), "")
    if name in _TAIL_ORDER:
        return (1, _TAIL_ORDER.index(name), "")
    return (2, 0, name)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class MultiPoly:
    """Sparse multivariate polynomial over Q.

    ``vars`` is the ordered tuple of variable names, ``terms`` maps
    exponent tuples (one entry per variable) to nonzero coefficients.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Fraction] | None = None):
        vs = tuple(variables)
        if list(vs) != sorted(vs, key=var_sort_key):
            raise ValueError(f"variables not in canonical order: {vs}")
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variables: {vs}")
        self.vars = vs
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_fraction(coeff)
                if len(exps) != len(vs):
                    raise ValueError("exponent vector length mismatch")
                if c != 0:
                    clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(variables: Sequence[str] = ()) -> "MultiPoly":
        return MultiPoly(variables, {})

    @staticmethod
    def const(value, variables: Sequence[str] = ()) -> "MultiPoly":
        c = _as_fraction(value)
        n = len(tuple(variables))
        return MultiPoly(variables, {(0,) * n: c})

    @staticmethod
    def var(name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        vs = (name,) if variables is None else tuple(variables)
        if name not in vs:
            raise UnknownVariableError(name)
        exps = tuple(1 if v == name else 0 for v in vs)
        return MultiPoly(vs, {exps: Fraction(1)})

    # -- ring housekeeping ----------------------------------------------

    def in_ring(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express the polynomial in a larger (or equal) ring."""
        vs = tuple(variables)
        if vs == self.vars:
            return self
        missing = set(self.vars) - set(vs)
        if missing:
            raise UnknownVariableError(f"target ring lacks {sorted(missing)}")
        pos = {v: vs.index(v) for v in self.vars}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(vs)
            for v, e in zip(self.vars, exps):
                new[pos[v]] = e
            terms[tuple(new)] = c
        return MultiPoly(vs, terms)

    @staticmethod
    def _common_ring(p: "MultiPoly", q: "MultiPoly"):
        if p.vars == q.vars:
            return p, q
        vs = tuple(sorted(set(p.vars) | set(q.vars), key=var_sort_key))
        return p.in_ring(vs), q.in_ring(vs)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.vars)
        p, q = MultiPoly._common_ring(self, other)
        terms = dict(p.terms)
        for exps, c in q.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return MultiPoly(p.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.vars)
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = _as_fraction(other)
            return MultiPoly(self.vars, {e: k * c for e, k in self.terms.items()})
        p, q = MultiPoly._common_ring(self, other)
        terms: dict[tuple, Fraction] = {}
        get = terms.get
        arity = len(p.vars)
        zero = Fraction(0)
        if arity == 1:
            for (e1,), c1 in p.terms.items():
                for (e2,), c2 in q.terms.items():
                    key = (e1 + e2,)
                    terms[key] = get(key, zero) + c1 * c2
        elif arity == 2:
            for (e1, f1), c1 in p.terms.items():
                for (e2, f2), c2 in q.terms.items():
                    key = (e1 + e2, f1 + f2)
                    terms[key] = get(key, zero) + c1 * c2
        else:
            for e1, c1 in p.terms.items():
                for e2, c2 in q.terms.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    terms[key] = get(key, zero) + c1 * c2
        return MultiPoly(p.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return self.is_const() and self.const_value() == other
        p, q = MultiPoly._common_ring(self, other)
        return p.terms == q.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficient_of(self, name: str, power: int) -> "MultiPoly":
        i = self._index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        terms = {}
        for exps, c in self.terms.items():
            if exps[i] == power:
                key = exps[:i] + exps[i + 1:]
                terms[key] = terms.get(key, Fraction(0)) + c
        return MultiPoly(rest, terms)

    def _index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    # -- evaluation and substitution ---------------------------------------

    def eval(self, point: Mapping[str, RationalLike]) -> Fraction:
        """Full evaluation; every variable must receive a value."""
        vals = []
        for v in self.vars:
            if v not in point:
                raise UnknownVariableError(f"no value for {v}")
            vals.append(_as_fraction(point[v]))
        total = Fraction(0)
        for exps, c in self.terms.items():
            m = c
            for val, e in zip(vals, exps):
                if e:
                    m *= val ** e
            total += m
        return total

    def eval_partial(self, point: Mapping[str, RationalLike]) -> "MultiPoly":
        """Substitute rational values for a subset of the variables."""
        for v in point:
            self._index(v)
        keep = [i for i, v in enumerate(self.vars) if v not in point]
        vals = {i: _as_fraction(point[v]) for i, v in enumerate(self.vars) if v in point}
        new_vars = tuple(self.vars[i] for i in keep)
        terms: dict[tuple, Fraction] = {}
        for exps, c in self.terms.items():
            for i, val in vals.items():
                if exps[i]:
                    c = c * val ** exps[i]
            if c == 0:
                continue
            key = tuple(exps[i] for i in keep)
            terms[key] = terms.get(key, Fraction(0)) + c
        return MultiPoly(new_vars, terms)

    def subs(self, name: str, value: "MultiPoly | RationalLike") -> "MultiPoly":
        """Substitute a polynomial (or rational) for one variable."""
        if not isinstance(value, MultiPoly):
            return self.eval_partial({name: value})
        i = self._index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        merged = tuple(sorted(set(rest) | set(value.vars), key=var_sort_key))
        out = MultiPoly.zero(merged)
        powers: dict[int, MultiPoly] = {0: MultiPoly.const(1, value.vars)}
        by_power: dict[int, dict[tuple, Fraction]] = {}
        for exps, c in self.terms.items():
            key = exps[:i] + exps[i + 1:]
            by_power.setdefault(exps[i], {})[key] = c
        for e in sorted(by_power):
            if e not in powers:
                powers[e] = value ** e
            out = out + MultiPoly(rest, by_power[e]) * powers[e]
        return out

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        new_names = [mapping.get(v, v) for v in self.vars]
        order = sorted(range(len(new_names)), key=lambda i: var_sort_key(new_names[i]))
        vs = tuple(new_names[i] for i in order)
        terms = {tuple(exps[i] for i in order): c for exps, c in self.terms.items()}
        return MultiPoly(vs, terms)

    def derivative(self, name: str) -> "MultiPoly":
        i = self._index(name)
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                key = exps[:i] + (e - 1,) + exps[i + 1:]
                terms[key] = terms.get(key, Fraction(0)) + c * e
        return MultiPoly(self.vars, terms)

    def antiderivative(self, name: str) -> "MultiPoly":
        if name not in self.vars:
            vs = tuple(sorted(set(self.vars) | {name}, key=var_sort_key))
            return self.in_ring(vs).antiderivative(name)
        i = self._index(name)
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            key = exps[:i] + (e + 1,) + exps[i + 1:]
            terms[key] = c / (e + 1)
        return MultiPoly(self.vars, terms)

    def negate_vars(self, names: Iterable[str]) -> "MultiPoly":
        idx = [self._index(n) for n in names]
        terms = {}
        for exps, c in self.terms.items():
            sign = -1 if sum(exps[i] for i in idx) % 2 else 1
            terms[exps] = sign * c
        return MultiPoly(self.vars, terms)

    # -- canonical text ----------------------------------------------------

    def to_text(self) -> str:
        """Canonical serialization: graded-lex descending, coefficients p/q."""
        if not self.terms:
            return "0"
        def key(exps):
            return (sum(exps), exps)
        parts = []
        for exps in sorted(self.terms, key=key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, exps) if e
            )
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("- " if c < 0 else "+ ") + body)
        first = parts[0]
        text = (first[2:] if first.startswith("+ ") else "-" + first[2:])
        return " ".join([text] + parts[1:])

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"


# -- spec-level operations ----------------------------------------------


def definite_integral(p: MultiPoly, var: str, lo, hi) -> MultiPoly:
    """Exact definite integral of ``p`` in ``var`` between polynomial bounds.

    ``var`` must belong to the ring of ``p``; the bounds must not involve it.
    """
    p._index(var)
    anti = p.antiderivative(var)
    for bound in (lo, hi):
        if isinstance(bound, MultiPoly) and var in bound.vars and bound.degree_in(var) > 0:
            raise ValueError(f"bound involves integration variable {var}")
    return anti.subs(var, hi) - anti.subs(var, lo)


def odd_part(p: MultiPoly, pivot: str) -> MultiPoly:
    """Projector onto monomials odd in ``pivot`` and even in the complement.

    Implements (P(x,A) + P(x,-A) - P(-x,A) - P(-x,-A)) / 4 where A is the
    block of all non-pivot variables.
    """
    p._index(pivot)
    block = [v for v in p.vars if v != pivot]
    q = (p + p.negate_vars(block)
         - p.negate_vars([pivot]) - p.negate_vars([pivot] + block))
    return q * Fraction(1, 4)


def interpolate(samples: Sequence[tuple], degree_bound: int, var: str = "t") -> MultiPoly:
    """Unique polynomial of degree <= degree_bound through the samples.

    Fits the first degree_bound + 1 points by Newton divided differences and
    checks every remaining sample; a mismatch raises
    :class:`InconsistentSamplesError`.
    """
    pts = [(_as_fraction(x), _as_fraction(y)) for x, y in samples]
    if len(pts) < degree_bound + 1:
        raise ValueError("not enough samples for the requested degree bound")
    if len({x for x, _ in pts}) != len(pts):
        raise ValueError("duplicate abscissae")
    head = pts[: degree_bound + 1]
    xs = [x for x, _ in head]
    coeffs = [y for _, y in head]
    for j in range(1, len(head)):
        for i in range(len(head) - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    x = MultiPoly.var(var)
    poly = MultiPoly.const(coeffs[-1], (var,))
    for k in range(len(head) - 2, -1, -1):
        poly = poly * (x - xs[k]) + coeffs[k]
    for x0, y0 in pts[degree_bound + 1:]:
        if poly.eval({var: x0}) != y0:
            raise InconsistentSamplesError(
                f"sample ({x0}, {y0}) off the degree-{degree_bound} fit "
                f"(got {poly.eval({var: x0})})")
    return poly


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")


class PiecewisePoly:
    """Univariate piecewise polynomial with rational breakpoints.

    Piece ``j`` is valid on the closed interval [b_{j-1}, b_j].  By default
    adjacent pieces must agree at shared breakpoints (the represented
    function is C^0); internal helpers may opt out via ``continuous=False``,
    in which case evaluation at a breakpoint uses the left piece.
    """

    __slots__ = ("breakpoints", "pieces", "var", "continuous")

    def __init__(self, breakpoints: Sequence, pieces: Sequence[MultiPoly],
                 var: str = "t", continuous: bool = True):
        bps = [_as_fraction(b) for b in breakpoints]
        if len(bps) != len(pieces) + 1:
            raise ValueError("need exactly one more breakpoint than pieces")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        ps = []
        for p in pieces:
            if not isinstance(p, MultiPoly):
                p = MultiPoly.const(p, (var,))
            if set(p.vars) - {var}:
                raise ValueError(f"piece involves variables other than {var}")
            ps.append(p.in_ring((var,)) if p.vars != (var,) else p)
        if continuous:
            for j in range(1, len(ps)):
                b = bps[j]
                left, right = ps[j - 1].eval({var: b}), ps[j].eval({var: b})
                if left != right:
                    raise ValueError(f"pieces disagree at breakpoint {b}: {left} != {right}")
        self.breakpoints = bps
        self.pieces = ps
        self.var = var
        self.continuous = continuous

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_const(value, lo, hi, var: str = "t") -> "PiecewisePoly":
        return PiecewisePoly([lo, hi], [MultiPoly.const(value, (var,))], var)

    @staticmethod
    def zero(lo, hi, var: str = "t") -> "PiecewisePoly":
        return PiecewisePoly.from_const(0, lo, hi, var)

    @staticmethod
    def single(poly: MultiPoly, lo, hi, var: str = "t",
               continuous: bool = True) -> "PiecewisePoly":
        return PiecewisePoly([lo, hi], [poly], var, continuous)

    @property
    def lo(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def hi(self) -> Fraction:
        return self.breakpoints[-1]

    def piece_at(self, x) -> MultiPoly:
        x = _as_fraction(x)
        if x < self.lo or x > self.hi:
            raise ValueError(f"{x} outside domain [{self.lo}, {self.hi}]")
        j = bisect.bisect_left(self.breakpoints, x, 1, len(self.breakpoints) - 1)
        return self.pieces[j - 1] if x <= self.breakpoints[j] else self.pieces[j]

    def eval(self, x) -> Fraction:
        return self.piece_at(x).eval({self.var: _as_fraction(x)})

    # -- structural ops ----------------------------------------------------

    def with_breakpoints(self, extra: Iterable) -> "PiecewisePoly":
        pts = sorted(set(self.breakpoints) | {
            _as_fraction(x) for x in extra if self.lo < _as_fraction(x) < self.hi})
        pieces = []
        for a, b in zip(pts, pts[1:]):
            pieces.append(self.piece_at((a + b) / 2))
        return PiecewisePoly(pts, pieces, self.var, self.continuous)

    def _aligned(self, other: "PiecewisePoly"):
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise ValueError("domain mismatch")
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        return self.with_breakpoints(pts), other.with_breakpoints(pts), pts

    def __add__(self, other):
        if not isinstance(other, PiecewisePoly):
            other = PiecewisePoly.from_const(other, self.lo, self.hi, self.var)
        p, q, pts = self._aligned(other)
        return PiecewisePoly(pts, [a + b for a, b in zip(p.pieces, q.pieces)],
                             self.var, self.continuous and other.continuous)

    def __sub__(self, other):
        if not isinstance(other, PiecewisePoly):
            other = PiecewisePoly.from_const(other, self.lo, self.hi, self.var)
        return self + (-other)

    def __neg__(self):
        return PiecewisePoly(self.breakpoints, [-p for p in self.pieces],
                             self.var, self.continuous)

    def scale(self, c) -> "PiecewisePoly":
        c = _as_fraction(c)
        return PiecewisePoly(self.breakpoints, [p * c for p in self.pieces],
                             self.var, self.continuous)

    def poly_mul(self, q: MultiPoly) -> "PiecewisePoly":
        q = q.in_ring((self.var,)) if q.vars != (self.var,) else q
        return PiecewisePoly(self.breakpoints, [p * q for p in self.pieces],
                             self.var, self.continuous)

    def mul(self, other: "PiecewisePoly") -> "PiecewisePoly":
        p, q, pts = self._aligned(other)
        return PiecewisePoly(pts, [a * b for a, b in zip(p.pieces, q.pieces)],
                             self.var, self.continuous and other.continuous)

    def restrict(self, lo, hi) -> "PiecewisePoly":
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo < self.lo or hi > self.hi or lo >= hi:
            raise ValueError("bad restriction window")
        cut = self.with_breakpoints([lo, hi])
        i = cut.breakpoints.index(lo)
        j = cut.breakpoints.index(hi)
        return PiecewisePoly(cut.breakpoints[i:j + 1], cut.pieces[i:j],
                             self.var, self.continuous)

    def extend_zero(self, hi) -> "PiecewisePoly":
        """Append a zero piece on [self.hi, hi] (function must vanish there
        or the object must be flagged discontinuous by the caller)."""
        hi = _as_fraction(hi)
        if hi <= self.hi:
            return self
        cont = self.continuous and self.eval(self.hi) == 0
        return PiecewisePoly(self.breakpoints + [hi],
                             self.pieces + [MultiPoly.zero((self.var,))],
                             self.var, cont)

    def compose_affine(self, slope, shift) -> "PiecewisePoly":
        """Return x -> self(slope*x + shift) on the pulled-back domain."""
        slope, shift = _as_fraction(slope), _as_fraction(shift)
        if slope == 0:
            raise ValueError("slope must be nonzero")
        new_pts = [(b - shift) / slope for b in self.breakpoints]
        if slope in (1, -1):
            pieces = []
            for p in self.pieces:
                if slope == -1:
                    p = p.negate_vars([self.var])
                pieces.append(_univar_shift(p, self.var, shift * slope))
        else:
            arg = MultiPoly.var(self.var) * slope + shift
            pieces = [p.subs(self.var, arg).in_ring((self.var,)) for p in self.pieces]
        if slope < 0:
            new_pts.reverse()
            pieces.reverse()
        return PiecewisePoly(new_pts, pieces, self.var, self.continuous)

    # -- calculus ----------------------------------------------------------

    def antiderivative(self) -> "PiecewisePoly":
        """Cumulative integral from the left endpoint; always continuous."""
        acc = Fraction(0)
        pieces = []
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            anti = p.antiderivative(self.var)
            pieces.append(anti + (acc - anti.eval({self.var: a})))
            acc += anti.eval({self.var: b}) - anti.eval({self.var: a})
        return PiecewisePoly(self.breakpoints, pieces, self.var, True)

    def integrate(self, lo, hi) -> Fraction:
        """Exact integral over [lo, hi] inside the domain."""
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        sign = 1
        if lo > hi:
            lo, hi, sign = hi, lo, -1
        if lo < self.lo or hi > self.hi:
            raise ValueError("integration window outside domain")
        total = Fraction(0)
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            aa, bb = max(a, lo), min(b, hi)
            if aa >= bb:
                continue
            anti = p.antiderivative(self.var)
            total += anti.eval({self.var: bb}) - anti.eval({self.var: aa})
        return sign * total

    def derivative(self) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints,
                             [p.derivative(self.var) for p in self.pieces],
                             self.var, continuous=False)

    def is_c1(self):
        """Exact C^1 check at interior breakpoints.

        Returns (ok, report) where report lists every interior breakpoint
        with one-sided values and derivatives.
        """
        report = []
        ok = True
        for j in range(1, len(self.pieces)):
            b = self.breakpoints[j]
            left, right = self.pieces[j - 1], self.pieces[j]
            v_l = left.eval({self.var: b})
            v_r = right.eval({self.var: b})
            d_l = left.derivative(self.var).eval({self.var: b})
            d_r = right.derivative(self.var).eval({self.var: b})
            match = (v_l == v_r) and (d_l == d_r)
            ok = ok and match
            report.append({"breakpoint": b, "value_left": v_l, "value_right": v_r,
                           "deriv_left": d_l, "deriv_right": d_r, "c1": match})
        return ok, report

    def max_piece_degree(self) -> int:
        return max((p.total_degree() for p in self.pieces), default=0)

    def simplify(self) -> "PiecewisePoly":
        """Merge adjacent pieces carrying the same polynomial."""
        pts = [self.breakpoints[0]]
        pieces = []
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            if pieces and pieces[-1] == p:
                pts[-1] = b
            else:
                pieces.append(p)
                pts.append(b)
        return PiecewisePoly(pts, pieces, self.var, self.continuous)

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        a, b = self.simplify(), other.simplify()
        return (a.breakpoints == b.breakpoints and a.pieces == b.pieces
                and a.var == b.var)

    def __hash__(self):
        s = self.simplify()
        return hash((tuple(s.breakpoints), tuple(s.pieces), s.var))

    def __repr__(self):
        chunks = [f"[{a},{b}]: {p.to_text()}" for (a, b), p in
                  zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces)]
        return "PiecewisePoly(" + "; ".join(chunks) + ")"


def _univar_shift(p: MultiPoly, var: str, c: Fraction) -> MultiPoly:
    """Taylor shift p(t) -> p(t + c) for a univariate polynomial."""
    if c == 0:
        return p
    deg = p.degree_in(var)
    coeffs = [Fraction(0)] * (deg + 1)
    for exps, coeff in p.terms.items():
        coeffs[exps[0]] += coeff
    for i in range(deg):
        for j in range(deg - 1, i - 1, -1):
            coeffs[j] += c * coeffs[j + 1]
    return MultiPoly((var,), {(k,): v for k, v in enumerate(coeffs) if v})


def pw_integrate(f: PiecewisePoly, lo, hi) -> Fraction:
    return f.integrate(lo, hi)


def pw_is_c1(f: PiecewisePoly):
    return f.is_c1()


def piecewise_from_contributions(contribs, lo, hi, var: str = "t",
                                 continuous: bool = True) -> PiecewisePoly:
    """Sum of locally supported polynomial contributions on [lo, hi].

    ``contribs`` is an iterable of (a, b, poly); each contributes poly on
    [a, b] and 0 elsewhere.  Windows are clipped to [lo, hi].
    """
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    pts = {lo, hi}
    kept = []
    for a, b, poly in contribs:
        a, b = max(_as_fraction(a), lo), min(_as_fraction(b), hi)
        if a >= b:
            continue
        kept.append((a, b, poly if isinstance(poly, MultiPoly)
                     else MultiPoly.const(poly, (var,))))
        pts.update((a, b))
    cuts = sorted(pts)
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        acc = MultiPoly.zero((var,))
        for (x, y, poly) in kept:
            if x <= a and b <= y:
                acc = acc + poly
        pieces.append(acc.in_ring((var,)))
    return PiecewisePoly(cuts, pieces, var, continuous)


def pw_convolve(g: PiecewisePoly, h: PiecewisePoly, var: str = "t") -> PiecewisePoly:
    """Exact convolution (g * h)(s) = integral of g(y) h(s - y) dy.

    Both inputs are treated as identically zero outside their domains.  The
    result lives on [g.lo + h.lo, g.hi + h.hi].
    """
    y, s = "y", "s"
    contribs = []
    lo, hi = g.lo + h.lo, g.hi + h.hi
    for (ga, gb), gp in zip(zip(g.breakpoints, g.breakpoints[1:]), g.pieces):
        gp_y = gp.rename({g.var: y})
        for (ha, hb), hp in zip(zip(h.breakpoints, h.breakpoints[1:]), h.pieces):
            if gp.is_zero() or hp.is_zero():
                continue
            hp_sy = hp.rename({h.var: "z"}).subs(
                "z", MultiPoly.var(s, (s,)) - MultiPoly.var(y, (y,)))
            integrand = gp_y * hp_sy
            anti = integrand.antiderivative(y)
            s_poly = MultiPoly.var(s, (s,))
            # active y-range: [max(ga, s-hb), min(gb, s-ha)]
            corners = sorted({ga + ha, ga + hb, gb + ha, gb + hb})
            for c0, c1 in zip(corners, corners[1:]):
                low = s_poly - hb if c0 >= ga + hb else MultiPoly.const(ga, (s,))
                upp = s_poly - ha if c1 <= gb + ha else MultiPoly.const(gb, (s,))
                val = anti.subs(y, upp) - anti.subs(y, low)
                contribs.append((c0, c1, val.rename({s: var}).in_ring((var,))))
    return piecewise_from_contributions(contribs, lo, hi, var,
                                        continuous=g.continuous and h.continuous)
