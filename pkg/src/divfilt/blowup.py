"""Symbolic blow-up towers: chart substitutions, exceptional orders, branches.

A ``BlowupScript`` is a list of chart substitutions and coordinate changes.
Pulling a polynomial back through it is plain substitution, so every
exceptional order computed here is exact.  Branches are given by
parametrizations ``t -> (x(t), y(t))`` and followed point by point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .poly import Polynomial, parse_polynomial
from .series import ExponentPolynomial, RationalExpr, TruncatedSeries

INFINITE = math.inf
"""Valuation of a function vanishing identically on the object measured."""

DEFAULT_WORK_PRECISION = 64


class BlowupError(ValueError):
    pass


class OrderInsufficient(BlowupError):
    """The requested truncation order drops every term of a nonzero pullback."""


class UncertifiableOrder(BlowupError):
    """The parametrization is not known far enough to certify a valuation."""

    def __init__(self, lower_bound: int):
        super().__init__(f"order is at least {lower_bound} but cannot be certified")
        self.lower_bound = lower_bound


@dataclass(frozen=True)
class ChartBlowup:
    """Blow up ``{x_i = 0 : i in center}``; ``x_j -> x_p * x_j`` for ``j != p``."""

    center: tuple[int, ...]
    principal: int


@dataclass(frozen=True)
class CoordinateChange:
    """New ``x_target`` is old ``x_target - poly``; i.e. substitute ``x_target + poly``."""

    target: int
    poly: Polynomial


Step = Union[ChartBlowup, CoordinateChange]


@dataclass(frozen=True)
class BlowupScript:
    nvars: int
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for st in self.steps:
            if isinstance(st, ChartBlowup):
                c = tuple(st.center)
                if len(set(c)) < 2:
                    raise BlowupError("a blow-up center needs at least two coordinates")
                if not all(0 <= i < self.nvars for i in c) or st.principal not in c:
                    raise BlowupError(f"invalid chart {st}")
            elif isinstance(st, CoordinateChange):
                if not 0 <= st.target < self.nvars or st.poly.nvars != self.nvars:
                    raise BlowupError(f"invalid coordinate change {st}")
                if st.poly.involves(st.target):
                    raise BlowupError("a coordinate change may not involve its own target")
            else:
                raise BlowupError(f"unknown step {st!r}")

    def then(self, *steps: Step) -> BlowupScript:
        return BlowupScript(self.nvars, self.steps + tuple(steps))

    def blowup_count(self) -> int:
        return sum(isinstance(s, ChartBlowup) for s in self.steps)

    def exceptional_var(self) -> int:
        """Coordinate slot whose zero set is the last exceptional divisor."""
        last = None
        for i, st in enumerate(self.steps):
            if isinstance(st, ChartBlowup):
                last = i
        if last is None:
            raise BlowupError("script contains no blow-up")
        p = self.steps[last].principal
        for st in self.steps[last + 1:]:
            if isinstance(st, CoordinateChange) and st.target == p:
                raise BlowupError("a later coordinate change moves the exceptional coordinate")
        return p

    def to_json(self) -> list:
        names = [f"x{i + 1}" for i in range(self.nvars)]
        out = []
        for st in self.steps:
            if isinstance(st, ChartBlowup):
                out.append({"blowup": {"center": list(st.center), "principal": st.principal}})
            else:
                out.append({"change": {"target": st.target, "poly": st.poly.format(names)}})
        return out

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> BlowupScript:
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, Mapping):
            nvars = int(data.get("nvars", nvars or 0))
            data = data["steps"]
        if not nvars:
            raise BlowupError("script needs the number of variables")
        steps: list[Step] = []
        for item in data:
            if "blowup" in item:
                b = item["blowup"]
                steps.append(ChartBlowup(tuple(int(i) for i in b["center"]), int(b["principal"])))
            elif "change" in item:
                c = item["change"]
                steps.append(CoordinateChange(int(c["target"]), parse_polynomial(str(c["poly"]), nvars)))
            else:
                raise BlowupError(f"unknown script step {item!r}")
        return cls(nvars, tuple(steps))


def pullback_images(script: BlowupScript) -> list[Polynomial]:
    """Images of the original coordinates in the final chart."""
    n = script.nvars
    imgs = [Polynomial.var(n, i) for i in range(n)]
    for st in script.steps:
        step: list[Polynomial | None] = [None] * n
        if isinstance(st, ChartBlowup):
            xp = Polynomial.var(n, st.principal)
            for j in st.center:
                if j != st.principal:
                    step[j] = xp * Polynomial.var(n, j)
        else:
            step[st.target] = Polynomial.var(n, st.target) + st.poly
        imgs = [g.substitute(step) for g in imgs]
    return imgs


def pullback_polynomial(f: Polynomial, script: BlowupScript) -> Polynomial:
    if f.nvars != script.nvars:
        raise BlowupError(f"polynomial has {f.nvars} variables, script {script.nvars}")
    return f.substitute(pullback_images(script))


def pullback(f: Polynomial, script: BlowupScript, order=None) -> TruncatedSeries:
    """Pullback of ``f`` to the final chart, truncated at total degree ``order``."""
    g = pullback_polynomial(f, script)
    order = Fraction(g.degree() if order is None else order)
    s = TruncatedSeries(script.nvars, g.terms, order)
    if s.is_zero() and not g.is_zero():
        raise OrderInsufficient(f"order {order} drops every term of the pullback")
    return s


def exceptional_order(f: Polynomial, script: BlowupScript) -> int | float:
    """Order of ``f`` along the last exceptional divisor; ``INFINITE`` for ``f == 0``."""
    u = script.exceptional_var()
    if f.is_zero():
        return INFINITE
    return pullback_polynomial(f, script).order_in(u)


# one-variable power series for branch parametrizations --------------------


@dataclass(frozen=True)
class PSeries:
    """``sum c_k t^k`` known modulo ``t^prec`` (``prec`` may be ``math.inf``)."""

    coeffs: Mapping[int, Fraction]
    prec: float = math.inf

    def __post_init__(self):
        clean = {int(k): Fraction(c) for k, c in dict(self.coeffs).items() if c and k < self.prec}
        if any(k < 0 for k in clean):
            raise BlowupError("negative power in a parametrization")
        object.__setattr__(self, "coeffs", clean)

    def __hash__(self) -> int:
        return hash((frozenset(self.coeffs.items()), self.prec))

    @property
    def order(self) -> float:
        return min(self.coeffs, default=math.inf if self.prec == math.inf else self.prec)

    def is_certified_zero(self) -> bool:
        return not self.coeffs and self.prec == math.inf

    def constant(self) -> Fraction:
        if self.prec <= 0:
            raise UncertifiableOrder(0)
        return self.coeffs.get(0, Fraction(0))

    def __add__(self, other: PSeries) -> PSeries:
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return PSeries(out, prec)

    def scale(self, c) -> PSeries:
        return PSeries({k: v * c for k, v in self.coeffs.items()}, self.prec)

    def __mul__(self, other: PSeries) -> PSeries:
        oa = min(self.coeffs, default=self.prec)
        ob = min(other.coeffs, default=other.prec)
        prec = min(self.prec + ob, other.prec + oa)
        out: dict = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                k = ka + kb
                if k < prec:
                    out[k] = out.get(k, 0) + ca * cb
        return PSeries(out, prec)

    def divide(self, other: PSeries, work: int = DEFAULT_WORK_PRECISION) -> PSeries:
        """``self / other`` assuming ``ord(self) >= ord(other)``."""
        a = other.order
        if a == math.inf or a not in other.coeffs:
            raise UncertifiableOrder(int(min(a, other.prec)))
        num = {k - a: c for k, c in self.coeffs.items()}
        if any(k < 0 for k in num):
            raise BlowupError("division would produce negative powers")
        den = {k - a: c for k, c in other.coeffs.items()}
        num_prec = self.prec - a
        den_prec = other.prec - a
        if len(den) == 1 and num_prec == math.inf and den_prec == math.inf:
            c = den[0]
            return PSeries({k: v / c for k, v in num.items()}, math.inf)
        prec = min(num_prec, den_prec, work)
        prec = int(prec)
        inv0 = 1 / den[0]
        q: dict[int, Fraction] = {}
        for k in range(prec):
            acc = num.get(k, Fraction(0))
            for j, dj in den.items():
                if 0 < j <= k:
                    acc -= dj * q.get(k - j, 0)
            if acc:
                q[k] = acc * inv0
        return PSeries(q, prec)


@dataclass(frozen=True)
class BranchParametrization:
    coords: tuple[PSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.coords:
            raise BlowupError("empty parametrization")
        if all(c.is_certified_zero() for c in self.coords):
            raise BlowupError("parametrization is identically zero")

    @property
    def nvars(self) -> int:
        return len(self.coords)

    @classmethod
    def from_terms(cls, coords: Sequence[Mapping[int, object] | Sequence], prec=math.inf) -> BranchParametrization:
        """Each coordinate as ``{order: coeff}`` or a list of ``(order, coeff)`` pairs."""
        out = []
        for c in coords:
            d = dict(c) if isinstance(c, Mapping) else {int(k): v for k, v in c}
            out.append(PSeries({int(k): Fraction(v) for k, v in d.items()}, prec))
        return cls(tuple(out))

    @classmethod
    def monomial_curve(cls, *exps: int) -> BranchParametrization:
        return cls.from_terms([{e: 1} for e in exps])

    def orders(self) -> tuple[float, ...]:
        return tuple(c.order for c in self.coords)

    def to_json(self) -> dict:
        out = {"coords": [[[k, str(v)] for k, v in sorted(c.coeffs.items())] for c in self.coords]}
        precs = {c.prec for c in self.coords}
        if precs != {math.inf}:
            out["precision"] = int(min(precs))
        return out

    @classmethod
    def from_json(cls, data) -> BranchParametrization:
        if isinstance(data, str):
            data = json.loads(data)
        prec = data.get("precision", math.inf)
        return cls.from_terms([[(int(k), Fraction(str(v))) for k, v in c] for c in data["coords"]], prec)


def compose(f: Polynomial, gamma: BranchParametrization) -> PSeries:
    if f.nvars != gamma.nvars:
        raise BlowupError(f"polynomial has {f.nvars} variables, branch {gamma.nvars}")
    powers = [{0: PSeries({0: 1})} for _ in gamma.coords]

    def pw(i: int, k: int) -> PSeries:
        cache = powers[i]
        if k not in cache:
            top = max(cache)
            p = cache[top]
            for j in range(top + 1, k + 1):
                p = p * gamma.coords[i]
                cache[j] = p
        return cache[k]

    out = PSeries({})
    for e, c in f.terms.items():
        term = PSeries({0: c})
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        out = out + term
    return out


def curve_valuation(f: Polynomial, gamma: BranchParametrization) -> int | float:
    """``ord_t f(gamma(t))``; ``INFINITE`` when the composition vanishes exactly."""
    for c in gamma.coords:
        if c.coeffs.get(0):
            raise BlowupError("branch does not pass through the origin")
    s = compose(f, gamma)
    if s.coeffs:
        return min(s.coeffs)
    if s.prec == math.inf:
        return INFINITE
    raise UncertifiableOrder(int(s.prec))


@dataclass(frozen=True)
class BranchTower:
    """Result of following a plane branch through ``m`` point blow-ups."""

    script: BlowupScript
    branch: BranchParametrization
    resolved_at: int | None
    """First blow-up count after which the branch is embedded-resolved (None if not yet)."""


def branch_blowup_tower(
    gamma: BranchParametrization,
    m: int,
    tie_break: str = "first",
    work: int = DEFAULT_WORK_PRECISION,
) -> BranchTower:
    """Blow up ``m`` times, always at the point of the strict transform.

    The chart is the coordinate of smallest parameter order (ties: first or
    last index); afterwards the other coordinate is recentred by the constant
    term of its transformed parametrization.
    """
    if gamma.nvars != 2:
        raise BlowupError("branch blow-ups are implemented for plane branches")
    if m < 1:
        raise BlowupError("need at least one blow-up")
    if tie_break not in ("first", "last"):
        raise BlowupError(f"unknown tie break {tie_break!r}")
    coords = list(gamma.coords)
    for c in coords:
        if c.prec > 0 and c.coeffs.get(0):
            raise BlowupError("branch does not pass through the origin")
    script = BlowupScript(2)
    through: set[int] = set()
    resolved_at = None
    for k in range(1, m + 1):
        orders = [c.order for c in coords]
        low = min(orders)
        if low == math.inf:
            raise BlowupError("parametrization is constant")
        cands = [i for i, o in enumerate(orders) if o == low]
        p = cands[0] if tie_break == "first" else cands[-1]
        if low not in coords[p].coeffs:
            raise UncertifiableOrder(int(coords[p].prec))
        j = 1 - p
        quotient = coords[j].divide(coords[p], work)
        c0 = quotient.constant()
        steps: list[Step] = [ChartBlowup((0, 1), p)]
        if c0:
            steps.append(CoordinateChange(j, Polynomial.constant(2, c0)))
            quotient = quotient + PSeries({0: -c0}, quotient.prec)
        script = script.then(*steps)
        coords[j] = quotient
        through = {p} | ({j} if j in through and not c0 else set())
        if resolved_at is None and coords[p].order == 1 and through == {p}:
            resolved_at = k
    return BranchTower(script, BranchParametrization(tuple(coords)), resolved_at)


def branch_blowup_script(
    gamma: BranchParametrization, m: int, tie_break: str = "first"
) -> tuple[BlowupScript, BranchParametrization]:
    tower = branch_blowup_tower(gamma, m, tie_break)
    return tower.script, tower.branch


def resolution_length(gamma: BranchParametrization, limit: int = 64) -> int:
    """Number of point blow-ups until the branch is embedded-resolved."""
    for m in range(1, limit + 1):
        tower = branch_blowup_tower(gamma, m)
        if tower.resolved_at is not None:
            return tower.resolved_at
    raise BlowupError(f"branch not resolved within {limit} blow-ups")


# the quadric cone xy - z^2 ----------------------------------------------

QUADRIC = Polynomial(3, {(1, 1, 0): 1, (0, 0, 2): -1})


def quadric_script(m: int) -> BlowupScript:
    """Blow up the origin of C^3, recentre ``v -> v - w^2``, then blow up C ``m`` times."""
    if m < 0:
        raise BlowupError("m must be nonnegative")
    steps: list[Step] = [
        ChartBlowup((0, 1, 2), 0),
        CoordinateChange(1, Polynomial.monomial((0, 0, 2))),
    ]
    steps += [ChartBlowup((0, 1), 0)] * m
    return BlowupScript(3, tuple(steps))


@dataclass(frozen=True)
class HypersurfaceModel:
    """``xy - z^2`` in ``C^3`` after ``m`` extra blow-ups of the curve ``C``."""

    m: int
    c: int = 2

    def __post_init__(self):
        if self.m < 0:
            raise BlowupError("m must be nonnegative")

    def script(self) -> BlowupScript:
        return quadric_script(self.m)

    def poincare(self) -> RationalExpr:
        return poincare_hypersurface(self)

    def dim_quotient(self, ell: int) -> int:
        return dim_quotient_hypersurface(self, ell)


def dim_quotient_hypersurface(model: HypersurfaceModel, ell: int) -> int:
    """``#{(i,j,k,l) : k in {0,1}, i + j + k + (m+2) l = ell}``."""
    if ell < 0:
        raise BlowupError("ell must be nonnegative")
    w = model.m + model.c
    n = 0
    for l in range(ell // w + 1):
        for k in (0, 1):
            rest = ell - k - w * l
            if rest >= 0:
                n += rest + 1
    return n


def poincare_hypersurface(model: HypersurfaceModel) -> RationalExpr:
    """``(1 - t^2) / ((1 - t)^3 (1 - t^(m+2)))``."""
    num = ExponentPolynomial(1, {(0,): 1, (2,): -1})
    return RationalExpr(num, {(1,): 3, (model.m + model.c,): 1})


def poincare_abstract_hypersurface(weights: Sequence[int], d: int) -> RationalExpr:
    """Hilbert series ``(1 - t^d) / prod (1 - t^{w_i})`` of a weighted hypersurface."""
    if d <= 0 or not weights or any(w <= 0 for w in weights):
        raise BlowupError("weights and degree must be positive")
    den: dict = {}
    for w in weights:
        den[(w,)] = den.get((w,), 0) + 1
    return RationalExpr(ExponentPolynomial(1, {(0,): 1, (d,): -1}), den)


def quadric_normal_form(f: Polynomial) -> Polynomial:
    """Rewrite ``z^2 -> xy`` until every term has ``z``-degree at most one."""
    if f.nvars != 3:
        raise BlowupError("the quadric model lives in three variables")
    out: dict = {}
    for (i, j, k), c in f.terms.items():
        q, r = divmod(k, 2)
        e = (i + q, j + q, r)
        out[e] = out.get(e, 0) + c
    return Polynomial(3, out)


def membership_g(f: Polynomial) -> int | float:
    """Valuation of ``f`` restricted to the cone ``xy = z^2`` (lowest degree of its normal form)."""
    nf = quadric_normal_form(f)
    if nf.is_zero():
        return INFINITE
    return nf.min_degree()
