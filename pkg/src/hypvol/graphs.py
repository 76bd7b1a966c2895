"""Rational stable graphs: the combinatorial index set of the boundary
kernels.

A rational graph has a genus-0 central vertex carrying the last leg, with
every edge joining the central vertex to an outer vertex.  Twists live on
edges; the admissible region for fixed cone angles is an open polytope cut
out by one equality at the central vertex and strict inequalities at the
outer vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial



@dataclass(frozen=True)
class StableGraph:
    """General stable graph with labelled legs.

    ``vertices``: tuple of (genus, legs) with legs a sorted tuple of labels;
    ``edges``: tuple of (i, j) vertex-index pairs, i <= j, repetitions give
    parallel edges.
    """

    vertices: tuple
    edges: tuple

    def h1(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def total_genus(self) -> int:
        return sum(g for g, _ in self.vertices) + self.h1()

    def valence(self, i: int) -> int:
        g, legs = self.vertices[i]
        return len(legs) + sum((a == i) + (b == i) for a, b in self.edges)

    def validate(self):
        seen = set()
        for g, legs in self.vertices:
            if g < 0:
                raise ValueError("negative genus")
            for leg in legs:
                if leg in seen:
                    raise ValueError(f"leg {leg} repeated")
                seen.add(leg)
        for i in range(len(self.vertices)):
            g, _ = self.vertices[i]
            if 2 * g - 2 + self.valence(i) <= 0:
                raise ValueError(f"unstable vertex {i}")
        if not self._connected():
            raise ValueError("graph not connected")

    def _connected(self) -> bool:
        if len(self.vertices) == 1:
            return True
        adj = {i: set() for i in range(len(self.vertices))}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, todo = {0}, [0]
        while todo:
            for nb in adj[todo.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return len(seen) == len(self.vertices)

    def canonical_key(self):
        """Lexicographically minimal relabeling; instances are tiny."""
        best = None
        n = len(self.vertices)
        for perm in permutations(range(n)):
            # perm maps old index -> new index
            inv = [0] * n
            for old, new in enumerate(perm):
                inv[new] = old
            verts = tuple(self.vertices[inv[i]] for i in range(n))
            edges = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in self.edges))
            cand = (verts, edges)
            if best is None or cand < best:
                best = cand
        return best


@dataclass(frozen=True)
class OuterVertex:
    genus: int
    legs: tuple
    edges: int  # number of parallel edges to the central vertex

    def valence(self) -> int:
        return len(self.legs) + self.edges


@dataclass(frozen=True)
class RationalGraph:
    """Star-shaped stable graph: genus-0 central vertex carrying leg n."""

    g: int
    n: int
    central_legs: tuple       # sorted, contains n
    outer: tuple              # tuple of OuterVertex, canonically sorted

    def num_edges(self) -> int:
        return sum(v.edges for v in self.outer)

    def h1(self) -> int:
        return self.num_edges() - len(self.outer)

    def central_valence(self) -> int:
        return len(self.central_legs) + self.num_edges()

    def automorphism_order(self) -> int:
        """Order of the leg-fixing automorphism group: parallel edges may be
        permuted, and identical legless outer vertices may be swapped."""
        order = 1
        for v in self.outer:
            order *= factorial(v.edges)
        legless: dict = {}
        for v in self.outer:
            if not v.legs:
                legless[v] = legless.get(v, 0) + 1
        for count in legless.values():
            order *= factorial(count)
        return order

    def to_stable(self) -> StableGraph:
        verts = [(0, self.central_legs)] + [(v.genus, v.legs) for v in self.outer]
        edges = []
        for i, v in enumerate(self.outer, start=1):
            edges.extend([(0, i)] * v.edges)
        return StableGraph(tuple(verts), tuple(edges))

    def to_line(self) -> str:
        """One-line canonical text form, central vertex first."""
        chunks = [f"v:(0|{','.join(map(str, self.central_legs))})"]
        for v in self.outer:
            chunks.append(f"v:({v.genus}|{','.join(map(str, v.legs))})")
        for i, v in enumerate(self.outer, start=1):
            chunks.extend([f"e:(0-{i})"] * v.edges)
        return " ".join(chunks)


def _set_partitions(items):
    """All partitions of a list into unordered nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_rational_graphs(g: int, n: int) -> list:
    """All rational graphs of genus g with n legs, up to isomorphism.

    Deterministic order: sorted by the canonical line serialization.
    """
    if 2 * g - 2 + n <= 0:
        raise ValueError(f"unstable ({g}, {n})")
    head_legs = list(range(1, n))
    out: list[RationalGraph] = []
    seen = set()
    for mask in range(1 << len(head_legs)):
        central_extra = tuple(head_legs[i] for i in range(len(head_legs)) if mask >> i & 1)
        remaining = [x for x in head_legs if x not in central_extra]
        central = tuple(sorted(central_extra + (n,)))
        for blocks in _set_partitions(remaining):
            # legged outer vertices from the blocks, plus 0..g legless ones
            for extra_count in range(0, g + 1):
                k = len(blocks) + extra_count
                if k == 0:
                    continue
                # distribute vertex genus; the rest of g sits in h^1 = E - k
                assignments = (
                    (genera, mults)
                    for vertex_genus_total in range(0, g + 1)
                    for genera in _weak_compositions(vertex_genus_total, k)
                    for extra in _weak_compositions(g - vertex_genus_total, k)
                    for mults in [tuple(1 + e for e in extra)]
                )
                for genera, mults in assignments:
                    outer = []
                    ok = True
                    for idx in range(k):
                        legs = tuple(sorted(blocks[idx])) if idx < len(blocks) else ()
                        v = OuterVertex(genera[idx], legs, mults[idx])
                        if 2 * v.genus - 2 + v.valence() <= 0:
                            ok = False
                            break
                        outer.append(v)
                    if not ok:
                        continue
                    if len(central) + sum(mults) < 3:
                        continue
                    graph = RationalGraph(
                        g, n, central,
                        tuple(sorted(outer, key=lambda v: (v.genus, v.legs, v.edges))))
                    key = graph.to_line()
                    if key not in seen:
                        seen.add(key)
                        graph.to_stable().validate()
                        out.append(graph)
    out.sort(key=lambda gr: gr.to_line())
    return out


@dataclass(frozen=True)
class TwistSimplex:
    """Admissible edge twists for a rational graph at fixed angles.

    Variables are the edge twists b_e > 0 (edges listed outer vertex by
    outer vertex).  ``edge_sum`` is the value forced on sum(b_e) by the
    central-vertex equality; ``outer_bounds`` lists, per outer vertex, the
    strict upper bound on the sum of its incident edge twists.
    """

    graph: RationalGraph
    edge_sum: Fraction
    outer_bounds: tuple
    nonempty: bool
    dimension: int | None = field(default=None)

    def contains(self, twists) -> bool:
        """Exact membership test for a per-edge twist assignment."""
        ts = [Fraction(t) for t in twists]
        if len(ts) != self.graph.num_edges():
            raise ValueError("wrong number of edge twists")
        if any(t <= 0 for t in ts):
            return False
        if sum(ts) != self.edge_sum:
            return False
        pos = 0
        for v, bound in zip(self.graph.outer, self.outer_bounds):
            chunk = sum(ts[pos:pos + v.edges])
            pos += v.edges
            if chunk >= bound:
                return False
        return True


def twist_simplex(graph: RationalGraph, a) -> TwistSimplex:
    """Exact twist polytope of ``graph`` at the angle vector ``a``.

    Central equality: sum of leg angles at the central vertex minus the sum
    of edge twists equals n(v_c) - 2.  Outer vertex v: leg angles plus
    incident twists stay strictly below 2 g(v) - 2 + n(v).
    """
    angles = [Fraction(x) for x in a]
    if len(angles) != graph.n:
        raise ValueError("angle vector length mismatch")
    c = sum(angles[i - 1] for i in graph.central_legs) - (graph.central_valence() - 2)
    bounds = []
    for v in graph.outer:
        r = (2 * v.genus - 2 + v.valence()) - sum(angles[i - 1] for i in v.legs)
        bounds.append(r)
    nonempty = c > 0 and all(r > 0 for r in bounds) and c < sum(bounds)
    dim = graph.num_edges() - 1 if nonempty else None
    return TwistSimplex(graph, c, tuple(bounds), nonempty, dim)


def multiplicity(graph: RationalGraph, twists):
    """Product of edge twists; exact, symbolic when twists are polynomials."""
    values = list(twists)
    if len(values) != graph.num_edges():
        raise ValueError("wrong number of edge twists")
    out = Fraction(1)
    for t in values:
        out = out * t
    return out


def contributing_graphs(g: int, n: int, a) -> list:
    """Rational graphs whose twist simplex at ``a`` is nonempty."""
    return [gr for gr in enumerate_rational_graphs(g, n)
            if twist_simplex(gr, a).nonempty]
