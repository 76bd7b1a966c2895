"""Exact psi-class and mixed kappa_1/psi intersection numbers.

psi numbers are computed by the Virasoro (DVV) recursion on the largest
index, with string and dilaton reductions applied first; the base constants
are <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24.  kappa_1 powers are converted to
pure psi brackets by the composition sum over added marked points.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from itertools import combinations
from math import factorial
from pathlib import Path


class UnstableError(ValueError):
    """Raised for (g, n) with 2g - 2 + n <= 0 or n < 1."""


class CacheFormatError(ValueError):
    """Raised on malformed or mismatched cache files."""


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n > 0


def dimension(g: int, n: int) -> int:
    return 3 * g - 3 + n


def _double_factorial(k: int) -> int:
    # (2k+1)!! for k >= -1
    out = 1
    for i in range(2 * k + 1, 0, -2):
        out *= i
    return out


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


class IntersectionTable:
    """Memoized table of psi and kappa_1/psi intersection numbers.

    Many readers may query concurrently; inserts go through one lock and are
    idempotent, so results do not depend on scheduling.
    """

    def __init__(self):
        self._psi: dict[tuple, Fraction] = {}
        self._kappa: dict[tuple, Fraction] = {}
        self._lock = threading.Lock()
        self.dirty = False

    # -- psi numbers -----------------------------------------------------

    def psi(self, g: int, exponents) -> Fraction:
        """<tau_{d_1} ... tau_{d_n}>_g, zero off the dimension 3g-3+n."""
        d = tuple(sorted(exponents, reverse=True))
        if not is_stable(g, len(d)):
            raise UnstableError(f"unstable ({g}, {len(d)})")
        if any(e < 0 for e in d):
            raise ValueError("negative psi exponent")
        return self._psi_inner(g, d)

    def _psi_inner(self, g: int, d: tuple) -> Fraction:
        n = len(d)
        if not is_stable(g, n):
            return Fraction(0)
        if sum(d) != dimension(g, n):
            return Fraction(0)
        key = (g, d)
        hit = self._psi.get(key)
        if hit is not None:
            return hit
        val = self._psi_compute(g, d)
        with self._lock:
            self._psi[key] = val
            self.dirty = True
        return val

    def _psi_compute(self, g: int, d: tuple) -> Fraction:
        n = len(d)
        if (g, d) == (0, (0, 0, 0)):
            return Fraction(1)
        if (g, d) == (1, (1,)):
            return Fraction(1, 24)
        rest = list(d)
        if d[-1] == 0:
            # string equation
            rest.pop()
            total = Fraction(0)
            for j, e in enumerate(rest):
                if e >= 1:
                    total += self._psi_inner(
                        g, tuple(sorted(rest[:j] + [e - 1] + rest[j + 1:], reverse=True)))
            return total
        if d[-1] == 1:
            # dilaton equation
            rest.pop()
            return (2 * g - 2 + n - 1) * self._psi_inner(g, tuple(rest))
        # DVV recursion on the largest index
        k = rest.pop(0)
        total = Fraction(0)
        denom = _double_factorial(k)  # (2k+1)!!
        for j, e in enumerate(rest):
            coeff = Fraction(_double_factorial(k + e - 1), denom * _double_factorial(e - 1))
            total += coeff * self._psi_inner(
                g, tuple(sorted(rest[:j] + [k + e - 1] + rest[j + 1:], reverse=True)))
        for a in range(0, k - 1):
            b = k - 2 - a
            w = Fraction(_double_factorial(a) * _double_factorial(b), 2 * denom)
            if g >= 1:
                total += w * self._psi_inner(
                    g - 1, tuple(sorted(rest + [a, b], reverse=True)))
            idx = range(len(rest))
            for g1 in range(0, g + 1):
                g2 = g - g1
                for subset in _subsets(tuple(idx)):
                    inside = set(subset)
                    d1 = tuple(sorted([a] + [rest[i] for i in subset], reverse=True))
                    d2 = tuple(sorted([b] + [rest[i] for i in idx if i not in inside],
                                      reverse=True))
                    if not (is_stable(g1, len(d1)) and is_stable(g2, len(d2))):
                        continue
                    total += w * self._psi_inner(g1, d1) * self._psi_inner(g2, d2)
        return total

    # -- kappa_1 conversion ------------------------------------------------

    def kappa_psi(self, g: int, exponents, m: int) -> Fraction:
        """<kappa_1^m psi_1^{d_1} ... psi_n^{d_n}>_g by adding marked points.

        Uses the composition sum
            sum_{k>=1} ((-1)^{m-k} / k!) sum_{m_1+...+m_k=m, m_j>=1}
                m!/(m_1!...m_k!) <prod tau_{d_i} prod_j tau_{m_j+1}>.
        """
        d = tuple(sorted(exponents, reverse=True))
        n = len(d)
        if not is_stable(g, n):
            raise UnstableError(f"unstable ({g}, {n})")
        if m < 0:
            raise ValueError("negative kappa power")
        if m == 0:
            return self.psi(g, d)
        if sum(d) + m != dimension(g, n):
            return Fraction(0)
        key = (g, m, d)
        hit = self._kappa.get(key)
        if hit is not None:
            return hit
        total = Fraction(0)
        for k in range(1, m + 1):
            sign = Fraction((-1) ** (m - k), factorial(k))
            for comp in _compositions(m, k):
                mult = Fraction(factorial(m))
                for part in comp:
                    mult /= factorial(part)
                bracket = tuple(sorted(d + tuple(p + 1 for p in comp), reverse=True))
                total += sign * mult * self._psi_inner(g, bracket)
        with self._lock:
            self._kappa[key] = total
            self.dirty = True
        return total

    # -- persistence -------------------------------------------------------

    HEADER = "wkcache v1"

    def store(self, path):
        """Write all entries, sorted, as UTF-8 text."""
        lines = [self.HEADER]
        for (g, d) in sorted(self._psi):
            v = self._psi[(g, d)]
            lines.append(f"psi {g} {','.join(map(str, d))} {v.numerator}/{v.denominator}")
        for (g, m, d) in sorted(self._kappa):
            v = self._kappa[(g, m, d)]
            lines.append(f"kap {g} {m} {','.join(map(str, d))} {v.numerator}/{v.denominator}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.dirty = False

    def load(self, path):
        """Load entries, replacing nothing that is already present."""
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or lines[0].strip() != self.HEADER:
            raise CacheFormatError(f"{path}: missing '{self.HEADER}' header")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            try:
                if parts[0] == "psi" and len(parts) == 4:
                    g = int(parts[1])
                    d = tuple(int(x) for x in parts[2].split(","))
                    val = _parse_fraction(parts[3])
                    key = (g, tuple(sorted(d, reverse=True)))
                    old = self._psi.get(key)
                    if old is not None and old != val:
                        raise CacheFormatError("conflicting value")
                    self._psi[key] = val
                elif parts[0] == "kap" and len(parts) == 5:
                    g, m = int(parts[1]), int(parts[2])
                    d = tuple(int(x) for x in parts[3].split(","))
                    val = _parse_fraction(parts[4])
                    key = (g, m, tuple(sorted(d, reverse=True)))
                    old = self._kappa.get(key)
                    if old is not None and old != val:
                        raise CacheFormatError("conflicting value")
                    self._kappa[key] = val
                else:
                    raise CacheFormatError("unrecognized record")
            except (ValueError, IndexError) as exc:
                raise CacheFormatError(f"{path}:{lineno}: {line!r}: {exc}") from exc

    def stats(self) -> dict:
        return {"psi_entries": len(self._psi), "kappa_entries": len(self._kappa),
                "dirty": self.dirty}

    def clear(self):
        with self._lock:
            self._psi.clear()
            self._kappa.clear()
            self.dirty = False


def _parse_fraction(text: str) -> Fraction:
    if "/" not in text:
        raise ValueError(f"expected p/q, got {text!r}")
    num, den = text.split("/")
    return Fraction(int(num), int(den))


def _compositions(total: int, parts: int):
    """Ordered compositions of `total` into `parts` positive integers."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_DEFAULT = IntersectionTable()


def default_table() -> IntersectionTable:
    return _DEFAULT


def psi_number(g: int, exponents) -> Fraction:
    return _DEFAULT.psi(g, exponents)


def kappa_psi_number(g: int, exponents, m: int) -> Fraction:
    return _DEFAULT.kappa_psi(g, exponents, m)


def cache_load(path):
    _DEFAULT.load(path)


def cache_store(path):
    _DEFAULT.store(path)


def genus0_closed_form(exponents) -> Fraction:
    """(n-3)!/prod(d_i!) when sum d_i = n - 3; independent genus-0 oracle."""
    d = tuple(exponents)
    n = len(d)
    if n < 3:
        raise UnstableError(f"unstable (0, {n})")
    if sum(d) != n - 3:
        return Fraction(0)
    out = Fraction(factorial(n - 3))
    for e in d:
        out /= factorial(e)
    return out
