"""Rank-two toric models: cones, weight gradings, plumbing graphs and Z_o.

The semigroup ring of a two-dimensional cone is graded by a weight vector
``u`` via ``chi^v -> <u, v>``; a family of weights gives a multi-index
filtration.  For the cyclic quotient ``X(n, q)`` we use the dual cone
``<(1,0), (q,n)>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import sympy

from .series import (
    ExponentPolynomial,
    RationalExpr,
    SeriesError,
    TruncatedSeries,
    expand,
    integral_part,
    poincare_from_quotients,
    specialize_to_one,
)

Vec = tuple[int, int]


class ToricError(ValueError):
    pass


class NonPositiveWeight(ToricError):
    """A weight vector is not strictly positive on the cone."""


class NotNegativeDefinite(ToricError):
    pass


def _det(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True)
class Cone2D:
    gen1: Vec
    gen2: Vec

    def __post_init__(self):
        for g in (self.gen1, self.gen2):
            if len(g) != 2 or math.gcd(*g) != 1:
                raise ToricError(f"cone generator {g} is not a primitive lattice vector")
        if _det(self.gen1, self.gen2) == 0:
            raise ToricError("cone generators are linearly dependent")

    @property
    def det(self) -> int:
        return _det(self.gen1, self.gen2)

    def coords(self, v: Vec) -> tuple[Fraction, Fraction]:
        """Coordinates ``(a, b)`` with ``v = a*gen1 + b*gen2``."""
        d = self.det
        return Fraction(_det(v, self.gen2), d), Fraction(_det(self.gen1, v), d)

    def contains(self, v: Vec) -> bool:
        a, b = self.coords(v)
        return a >= 0 and b >= 0

    def box(self, a_max: Fraction, b_max: Fraction) -> Iterator[Vec]:
        """Lattice points of the parallelogram ``0 <= a <= a_max, 0 <= b <= b_max``."""
        corners = [
            (0, 0),
            (a_max * self.gen1[0], a_max * self.gen1[1]),
            (b_max * self.gen2[0], b_max * self.gen2[1]),
            (a_max * self.gen1[0] + b_max * self.gen2[0], a_max * self.gen1[1] + b_max * self.gen2[1]),
        ]
        x0, x1 = math.floor(min(c[0] for c in corners)), math.ceil(max(c[0] for c in corners))
        y0, y1 = math.floor(min(c[1] for c in corners)), math.ceil(max(c[1] for c in corners))
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                a, b = self.coords((x, y))
                if 0 <= a <= a_max and 0 <= b <= b_max:
                    yield (x, y)

    @classmethod
    def from_json(cls, data: Mapping) -> Cone2D:
        if "cyclic" in data:
            n, q = data["cyclic"]
            return cyclic_quotient_cone(int(n), int(q))
        return cls(tuple(data["gen1"]), tuple(data["gen2"]))


def cyclic_quotient_cone(n: int, q: int) -> Cone2D:
    """Dual cone of ``X(n, q)``: ``<(1,0), (q,n)>``; ``X(5,2)`` gives ``<(1,0),(2,5)>``."""
    if not (0 < q < n) or math.gcd(n, q) != 1:
        raise ToricError(f"invalid cyclic quotient data (n, q) = ({n}, {q})")
    return Cone2D((1, 0), (q, n))


def _fundamental_points(cone: Cone2D) -> list[Vec]:
    """Lattice points ``a*gen1 + b*gen2`` with ``0 <= a, b < 1``."""
    return [v for v in cone.box(Fraction(1), Fraction(1)) if all(c < 1 for c in cone.coords(v))]


def _angle_key(cone: Cone2D, v: Vec) -> Fraction:
    a, b = cone.coords(v)
    return b / (a + b)


def _is_reducible(cone: Cone2D, v: Vec) -> bool:
    a, b = cone.coords(v)
    for y in cone.box(a, b):
        if y != (0, 0) and y != v and cone.contains((v[0] - y[0], v[1] - y[1])):
            return True
    return False


def hilbert_basis(cone: Cone2D) -> list[Vec]:
    """Minimal generating set of the lattice points of ``cone``, ordered by angle from ``gen1``."""
    candidates = {cone.gen1, cone.gen2}
    candidates.update(v for v in _fundamental_points(cone) if v != (0, 0))
    basis = [v for v in candidates if not _is_reducible(cone, v)]
    return sorted(basis, key=lambda v: _angle_key(cone, v))


def check_weights(cone: Cone2D, weights: Sequence[Vec]) -> None:
    if not weights:
        raise ToricError("need at least one weight vector")
    for u in weights:
        for g in (cone.gen1, cone.gen2, *hilbert_basis(cone)):
            if _dot(u, g) <= 0:
                raise NonPositiveWeight(f"weight {tuple(u)} is not positive on {g}")


def enumerate_weighted_points(
    cone: Cone2D, weights: Sequence[Vec], bound: int
) -> Iterator[tuple[Vec, tuple[int, ...]]]:
    """Every lattice point ``v`` of the cone with ``min_i <u_i, v> <= bound``, once each."""
    check_weights(cone, weights)
    if bound < 0:
        return
    a_max = max(Fraction(bound, _dot(u, cone.gen1)) for u in weights)
    b_max = max(Fraction(bound, _dot(u, cone.gen2)) for u in weights)
    for v in cone.box(a_max, b_max):
        ws = tuple(_dot(u, v) for u in weights)
        if min(ws) <= bound:
            yield v, ws


def poincare_toric_enumerated(cone: Cone2D, weights: Sequence[Vec], order: int) -> TruncatedSeries:
    """Normalized Poincaré series of the weight filtration, by counting lattice points."""
    if order < 0:
        raise ToricError("order must be nonnegative")
    weights = [tuple(u) for u in weights]
    points = [ws for _, ws in enumerate_weighted_points(cone, weights, order)]

    def quotient_dim(lo: tuple, hi: tuple) -> int:
        # points in F(lo) but not in F(hi); membership in F(hi) fails only below ``order + 1``
        n = 0
        for ws in points:
            if all(w >= x for w, x in zip(ws, lo)) and any(w < x for w, x in zip(ws, hi)):
                n += 1
        return n

    return poincare_from_quotients(quotient_dim, len(weights), order)


def poincare_toric_closed(cone: Cone2D, weight: Vec) -> RationalExpr:
    """Closed form ``sum_{s in strip} t^<u,s> / ((1 - t^<u,gen1>)(1 - t^<u,gen2>))``.

    Every lattice point is uniquely ``s + j*gen2 + k*gen1`` with ``s`` in the
    half-open fundamental parallelogram, so ``gen2`` plays the role of the period.
    """
    check_weights(cone, [weight])
    num = ExponentPolynomial(1, {})
    for s in _fundamental_points(cone):
        num = num + ExponentPolynomial.monomial((_dot(weight, s),))
    return RationalExpr(num, [(_dot(weight, cone.gen1),), (_dot(weight, cone.gen2),)])


# plumbing graphs ---------------------------------------------------------


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple[int, ...]
    edges: frozenset = field(default_factory=frozenset)
    arrows: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(e) for e in self.vertices))
        n = len(self.vertices)
        if n == 0:
            raise ToricError("empty plumbing graph")
        edges = set()
        for e in self.edges:
            i, j = sorted(int(x) for x in e)
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ToricError(f"bad edge {tuple(e)}")
            edges.add((i, j))
        object.__setattr__(self, "edges", frozenset(edges))
        arrows = {int(k): int(v) for k, v in dict(self.arrows).items() if int(v)}
        for k, v in arrows.items():
            if not 0 <= k < n or v < 0:
                raise ToricError(f"bad arrow entry {k}: {v}")
        object.__setattr__(self, "arrows", arrows)
        if not self._connected():
            raise ToricError("plumbing graph is not connected")

    def __hash__(self):
        return hash((self.vertices, self.edges, tuple(sorted(self.arrows.items()))))

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def neighbours(self, v: int) -> list[int]:
        return sorted({j for i, j in self.edges if i == v} | {i for i, j in self.edges if j == v})

    def valency(self, v: int) -> int:
        return len(self.neighbours(v))

    def intersection_matrix(self) -> sympy.Matrix:
        n = len(self.vertices)
        m = sympy.zeros(n, n)
        for i, e in enumerate(self.vertices):
            m[i, i] = e
        for i, j in self.edges:
            m[i, j] = m[j, i] = 1
        return m

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in sorted(self.edges)],
            "arrows": {str(k): v for k, v in sorted(self.arrows.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> PlumbingGraph:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            tuple(data["vertices"]),
            frozenset(tuple(e) for e in data.get("edges", [])),
            {int(k): int(v) for k, v in data.get("arrows", {}).items()},
        )


def hirzebruch_jung(n: int, q: int) -> list[int]:
    """Continued fraction ``n/q = b_1 - 1/(b_2 - ...)`` with all ``b_i >= 2``."""
    if not (0 < q < n) or math.gcd(n, q) != 1:
        raise ToricError(f"invalid cyclic quotient data (n, q) = ({n}, {q})")
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return out


def cyclic_quotient_graph(n: int, q: int, arrow_vertex: int = 0) -> PlumbingGraph:
    """Minimal resolution chain of ``X(n, q)`` with one arrow (the strict transform)."""
    bs = hirzebruch_jung(n, q)
    return PlumbingGraph(
        tuple(-b for b in bs),
        frozenset((i, i + 1) for i in range(len(bs) - 1)),
        {arrow_vertex: 1},
    )


@lru_cache(maxsize=256)
def _inverse_columns(g: PlumbingGraph) -> tuple[tuple[Fraction, ...], ...]:
    m = g.intersection_matrix()
    if not m.is_negative_definite:
        raise NotNegativeDefinite("intersection matrix is not negative definite")
    inv = -m.inv()
    n = len(g.vertices)
    return tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for i in range(n)) for j in range(n)
    )


def intersection_matrix_inverse_columns(g: PlumbingGraph) -> list[tuple[Fraction, ...]]:
    """Columns ``E_v^*`` of ``-I^{-1}`` as exact fractions."""
    return list(_inverse_columns(g))


def compute_zo(g: PlumbingGraph, tracked: Sequence[int] | None = None) -> RationalExpr:
    """Topological Poincaré series ``prod_v (1 - t^{E_v^*})^(valency(v) - 2)``.

    Variable ``i`` belongs to vertex ``tracked[i]`` (default: vertex order).
    Arrows do not change the product: each arrow raises the valency by one and
    contributes its own factor ``(1 - t^{E_v^*})^-1``, which cancel.
    """
    n = len(g.vertices)
    tracked = list(range(n)) if tracked is None else [int(v) for v in tracked]
    if sorted(tracked) != list(range(n)):
        raise ToricError("every vertex must be tracked exactly once")
    cols = _inverse_columns(g)
    num = ExponentPolynomial.constant(n)
    one = ExponentPolynomial.constant(n)
    den: dict = {}
    for v in range(n):
        k = g.valency(v) - 2
        if k == 0:
            continue
        exp = tuple(cols[v][w] for w in tracked)
        if k > 0:
            num = num * (one - ExponentPolynomial.monomial(exp)) ** k
        else:
            den[exp] = den.get(exp, 0) - k
    return RationalExpr(num, den)


def blowup_graph_at_arrow(g: PlumbingGraph, vertex: int, times: int = 1) -> PlumbingGraph:
    """Blow up ``times`` times at the point where an arrow of ``vertex`` meets it.

    Each step appends a ``-1`` vertex, moves the arrow there and lowers the
    self-intersection of the previous arrow vertex by one.
    """
    if times < 0:
        raise ToricError("number of blow-ups must be nonnegative")
    if g.arrows.get(vertex, 0) < 1:
        raise ToricError(f"vertex {vertex} carries no arrow")
    verts = list(g.vertices)
    edges = set(g.edges)
    arrows = dict(g.arrows)
    cur = vertex
    for _ in range(times):
        new = len(verts)
        verts.append(-1)
        verts[cur] -= 1
        edges.add((cur, new))
        arrows[cur] -= 1
        if not arrows[cur]:
            del arrows[cur]
        arrows[new] = 1
        cur = new
    return PlumbingGraph(tuple(verts), frozenset(edges), arrows)


def arrow_vertex_after_blowups(g: PlumbingGraph, vertex: int, times: int) -> int:
    return vertex if times == 0 else len(g.vertices) + times - 1


def reduce_zo_to_p(z: RationalExpr, keep: Sequence[int], order) -> TruncatedSeries:
    """Integral part of ``z``, then every variable outside ``keep`` set to 1.

    The expansion order is chosen so that the specialization is certified:
    every term with kept degree ``r`` has eliminated degree at most
    ``max_num_elim + slope * r``, where ``slope`` is the largest
    eliminated/kept ratio among the denominator factors.
    """
    keep = [int(k) for k in keep]
    if not keep or len(set(keep)) != len(keep) or not all(0 <= k < z.nvars for k in keep):
        raise ToricError(f"bad kept variables {keep}")
    order = Fraction(order)
    drop = [i for i in range(z.nvars) if i not in keep]
    if not drop:
        return integral_part(expand(z, order)).permute(keep)

    slope = Fraction(0)
    for a, _ in z.factors:
        r = sum(a[i] for i in keep)
        e = sum(a[i] for i in drop)
        if r == 0:
            raise SeriesError(
                "a denominator factor involves only eliminated variables; the specialization diverges"
            )
        slope = max(slope, e / r)
    num_elim = max((sum(e[i] for i in drop) for e, _ in z.numerator.items()), default=Fraction(0))
    bound = num_elim + slope * order
    internal = order + bound
    s = integral_part(expand(z, internal))
    s = specialize_to_one(s, drop, order, elim_bound=bound)
    # remaining variables are in increasing index order; put them in ``keep`` order
    remaining = sorted(keep)
    return s.permute([remaining.index(k) for k in keep])
