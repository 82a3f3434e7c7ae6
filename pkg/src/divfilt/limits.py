"""Stabilization harness: sandwich checks on valuations, convergence of Poincaré series.

A ``FiltrationFamily`` supplies, for every blow-up index ``m``, the
valuations ``val_{E_{i,m}}`` together with the limiting valuations
``val_{C_i}``.  ``check_sandwich`` verifies that for every ``m``

    min(target, m) <= val_m <= target     and     val_m <= val_{m+1},

which is the filtration inclusion ``F_m(l) ⊂ G(l)`` combined with
``G(l) ⊂ F_m(l)`` once ``m >= l``.  ``check_series_convergence`` compares the
Poincaré series of the members with the limit coefficient by coefficient and
reports, per degree, the first index from which they agree.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

from .blowup import (
    INFINITE,
    BlowupError,
    BranchParametrization,
    HypersurfaceModel,
    branch_blowup_tower,
    compose,
    curve_valuation,
    exceptional_order,
    membership_g,
    poincare_abstract_hypersurface,
    poincare_hypersurface,
    pullback_images,
    quadric_script,
    resolution_length,
)
from .poly import Polynomial
from .series import ExponentPolynomial, RationalExpr, TruncatedSeries, expand
from .toric import ToricError, cyclic_quotient_cone, poincare_toric_closed, poincare_toric_enumerated

ExtInt = Union[int, float]
SeriesLike = Union[RationalExpr, TruncatedSeries]


class FamilyError(ValueError):
    pass


def stabilization_bound(ell: Sequence[int] | int) -> int:
    """``M(l) = max_i l_i``."""
    ell = (ell,) if isinstance(ell, int) else tuple(ell)
    if any(x < 0 for x in ell):
        raise FamilyError(f"negative index component in {ell}; clip with max(0, l) first")
    return max(ell, default=0)


def format_ext(v: ExtInt) -> str:
    return "inf" if v == INFINITE else str(v)


# filtration families and the sandwich check -------------------------------


@dataclass(frozen=True)
class FiltrationFamily:
    valuation: Callable[[int, Polynomial], Sequence[ExtInt]]
    target: Callable[[Polynomial], Sequence[ExtInt]]
    nindices: int = 1
    description: str = ""
    names: Sequence[str] | None = None


@dataclass(frozen=True)
class SandwichCase:
    poly: str
    index: int
    m: int
    value: ExtInt | None
    target: ExtInt | None
    status: str
    detail: str = ""

    def line(self) -> str:
        s = (
            f"f={self.poly} i={self.index} m={self.m} "
            f"val={format_ext(self.value) if self.value is not None else '?'} "
            f"target={format_ext(self.target) if self.target is not None else '?'} {self.status}"
        )
        return f"{s} ({self.detail})" if self.detail else s


@dataclass
class SandwichReport:
    description: str
    cases: list[SandwichCase] = field(default_factory=list)

    @property
    def violations(self) -> list[SandwichCase]:
        return [c for c in self.cases if c.status == "VIOLATION"]

    @property
    def errors(self) -> list[SandwichCase]:
        return [c for c in self.cases if c.status == "ERROR"]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.errors

    def summary(self) -> dict:
        return {
            "check": "sandwich",
            "family": self.description,
            "cases": len(self.cases),
            "violations": len(self.violations),
            "errors": len(self.errors),
            "status": "PASS" if self.ok else "FAIL",
        }

    def render(self) -> str:
        return "\n".join([c.line() for c in self.cases] + [_summary_block(self.summary())])


def _summary_block(d: dict) -> str:
    return "\n".join(["[summary]"] + [f"{k}={v}" for k, v in d.items()])


def check_sandwich(fam: FiltrationFamily, corpus: Sequence[Polynomial], m_max: int) -> SandwichReport:
    """Check ``min(T, m) <= val_m <= T`` and monotonicity for ``0 <= m <= m_max``."""
    if not corpus:
        raise FamilyError("corpus is empty")
    if m_max < 0:
        raise FamilyError("m_max must be nonnegative")
    report = SandwichReport(fam.description)
    for f in corpus:
        label = f.format(fam.names)
        try:
            targets = tuple(fam.target(f))
        except (BlowupError, ToricError) as exc:
            report.cases.append(SandwichCase(label, -1, -1, None, None, "ERROR", str(exc)))
            continue
        prev: list[ExtInt | None] = [None] * fam.nindices
        for m in range(m_max + 1):
            try:
                vals = tuple(fam.valuation(m, f))
            except (BlowupError, ToricError) as exc:
                report.cases.append(SandwichCase(label, -1, m, None, None, "ERROR", str(exc)))
                continue
            for i, (v, t) in enumerate(zip(vals, targets)):
                problems = []
                if v > t:
                    problems.append("above target")
                if v < min(t, m):
                    problems.append(f"below min(target, m) = {format_ext(min(t, m))}")
                if prev[i] is not None and v < prev[i]:
                    problems.append(f"decreased from {format_ext(prev[i])}")
                prev[i] = v
                status = "VIOLATION" if problems else ("EQUAL" if v == t else "ok")
                report.cases.append(SandwichCase(label, i, m, v, t, status, "; ".join(problems)))
    return report


# series families and convergence -----------------------------------------


@dataclass(frozen=True)
class SeriesFamily:
    member: Callable[[int], SeriesLike]
    limit: SeriesLike
    description: str = ""


def _as_series(x: SeriesLike, order: int) -> TruncatedSeries:
    if isinstance(x, RationalExpr):
        return expand(x, order)
    if x.order < order:
        raise FamilyError(f"series known only to order {x.order}, need {order}")
    return x.truncate(order)


@dataclass(frozen=True)
class DegreeProfile:
    degree: int
    stable_from: int | None
    bound: int
    mismatches: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.stable_from is not None and self.stable_from <= self.bound

    def line(self) -> str:
        sf = "never" if self.stable_from is None else str(self.stable_from)
        return f"degree={self.degree} stable_from={sf} bound={self.bound} {'ok' if self.ok else 'VIOLATION'}"


@dataclass
class ConvergenceReport:
    description: str
    order: int
    m_max: int
    limit: str
    profile: list[DegreeProfile] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.profile)

    def summary(self) -> dict:
        return {
            "check": "convergence",
            "family": self.description,
            "order": self.order,
            "mmax": self.m_max,
            "limit": self.limit,
            "degrees": len(self.profile),
            "violations": sum(not p.ok for p in self.profile),
            "status": "PASS" if self.ok else "FAIL",
        }

    def render(self) -> str:
        return "\n".join([p.line() for p in self.profile] + [_summary_block(self.summary())])


def check_series_convergence(fam: SeriesFamily, order: int, m_max: int | None = None) -> ConvergenceReport:
    """Per total degree ``l <= order``: first ``m`` from which every member agrees with the limit."""
    if order < 0:
        raise FamilyError("order must be nonnegative")
    m_max = order if m_max is None else m_max
    if m_max < order:
        raise FamilyError(f"family must be defined up to m >= order = {order}, got {m_max}")
    limit = _as_series(fam.limit, order)
    members = []
    for m in range(m_max + 1):
        try:
            members.append(_as_series(fam.member(m), order))
        except (ToricError, BlowupError) as exc:
            raise FamilyError(f"member {m} unavailable: {exc}") from exc
    nv = limit.nvars
    if any(s.nvars != nv for s in members):
        raise FamilyError("members do not share the variable count")

    def by_degree(s: TruncatedSeries) -> dict:
        out: dict = {}
        for e, c in s.items():
            out.setdefault(sum(e), {})[e] = c
        return out

    lim_deg = by_degree(limit)
    mem_deg = [by_degree(s) for s in members]
    degrees = sorted({Fraction(d) for d in range(order + 1)} | set(lim_deg) | {d for md in mem_deg for d in md})
    report = ConvergenceReport(fam.description, order, m_max, _limit_label(fam.limit))
    for d in degrees:
        if d > order:
            continue
        target = lim_deg.get(d, {})
        agree = [md.get(d, {}) == target for md in mem_deg]
        stable = None
        for m in range(m_max, -1, -1):
            if not agree[m]:
                break
            stable = m
        bound = stabilization_bound(math.ceil(d))
        report.profile.append(
            DegreeProfile(int(d) if d.denominator == 1 else d, stable, bound, tuple(m for m, a in enumerate(agree) if not a))
        )
    return report


def _limit_label(x: SeriesLike) -> str:
    return x.format() if isinstance(x, RationalExpr) else x.format()


# model families ------------------------------------------------------------


def quadric_filtration_family() -> FiltrationFamily:
    return FiltrationFamily(
        valuation=lambda m, f: (exceptional_order(f, quadric_script(m)),),
        target=lambda f: (membership_g(f),),
        description="quadric xy - z^2",
    )


def quadric_series_family() -> SeriesFamily:
    return SeriesFamily(
        member=lambda m: poincare_hypersurface(HypersurfaceModel(m)),
        limit=poincare_abstract_hypersurface((1, 1, 1), 2),
        description="quadric xy - z^2",
    )


def toric_series_family(n: int, q: int, enumerated: bool = False, order: int | None = None) -> SeriesFamily:
    """Weights ``(1, m)`` on the dual cone of ``X(n, q)``; the limit is ``1/(1 - t)``."""
    cone = cyclic_quotient_cone(n, q)
    if enumerated:
        if order is None:
            raise FamilyError("enumerated members need an order")
        member = lambda m: poincare_toric_enumerated(cone, [(1, m)], order)  # noqa: E731
    else:
        member = lambda m: poincare_toric_closed(cone, (1, m))  # noqa: E731
    limit = RationalExpr(ExponentPolynomial.constant(1), {(1,): 1})
    return SeriesFamily(member, limit, f"toric X({n},{q})")


def toric_filtration_family(n: int, q: int) -> FiltrationFamily:
    """A polynomial in ``a, b`` stands for ``sum c * chi^(a, b)`` on ``X(n, q)``.

    ``val_m`` is the smallest ``a + m*b`` over the support; the limit
    valuation keeps only the support on the face ``b = 0``.
    """
    cone = cyclic_quotient_cone(n, q)

    def support(f: Polynomial) -> list[tuple[int, int]]:
        if f.nvars != 2:
            raise ToricError("toric corpus elements have two exponent variables")
        pts = list(f.terms)
        bad = [p for p in pts if not cone.contains(p)]
        if bad:
            raise ToricError(f"exponents {bad} lie outside the dual cone of X({n},{q})")
        return pts

    def val(m: int, f: Polynomial):
        pts = support(f)
        return (min((a + m * b for a, b in pts), default=INFINITE),)

    def target(f: Polynomial):
        pts = support(f)
        return (min((a for a, b in pts if b == 0), default=INFINITE),)

    return FiltrationFamily(val, target, description=f"toric X({n},{q})", names=("a", "b"))


@lru_cache(maxsize=64)
def _branch_towers(gamma: BranchParametrization, total: int, tie_break: str):
    return branch_blowup_tower(gamma, total, tie_break)


def branch_filtration_family(
    gamma: BranchParametrization, indexing: str = "resolution", tie_break: str = "first"
) -> FiltrationFamily:
    """Divisors ``E_m`` following a plane branch.

    With ``indexing="resolution"`` index 0 is the last divisor of the minimal
    embedded resolution; with ``"absolute"`` index ``m`` means ``m`` point
    blow-ups from the origin (index 0 is then undefined and reported as 0).
    """
    if indexing not in ("resolution", "absolute"):
        raise FamilyError(f"unknown indexing {indexing!r}")
    offset = resolution_length(gamma) if indexing == "resolution" else 0

    def val(m: int, f: Polynomial):
        total = offset + m
        if total == 0:
            return (0,)
        return (exceptional_order(f, _branch_towers(gamma, total, tie_break).script),)

    return FiltrationFamily(
        val,
        lambda f: (curve_valuation(f, gamma),),
        description=f"branch {gamma.to_json()['coords']} ({indexing})",
    )


def _rank(rows: list[dict]) -> int:
    """Rank of sparse rational row vectors by Gaussian elimination."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            col = min(r)
            if col not in pivots:
                pivots[col] = r
                rank += 1
                break
            p = pivots[col]
            factor = r[col] / p[col]
            for k, v in p.items():
                nv = r.get(k, 0) - factor * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


def _monomials_below(degree: int) -> list[tuple[int, int]]:
    return [(a, d - a) for d in range(degree) for a in range(d + 1)]


def _codims(images: dict, order: int, key) -> list[int]:
    """``dim O/F(l)`` for ``l = 0..order+1``; ``images`` maps a monomial to its coefficient dict."""
    out = []
    for ell in range(order + 2):
        rows = []
        for mono in _monomials_below(ell):
            rows.append({e: c for e, c in images[mono].items() if key(e) < ell})
        out.append(_rank(rows))
    return out


def _series_from_codims(codims: list[int], order: int) -> TruncatedSeries:
    return TruncatedSeries(1, {(ell,): codims[ell + 1] - codims[ell] for ell in range(order + 1)}, order)


def branch_poincare_divisorial(gamma: BranchParametrization, m: int, order: int, tie_break: str = "first") -> TruncatedSeries:
    """Poincaré series of ``val_{E_m}`` on ``C{x, y}``, ``m`` counted from the embedded resolution.

    ``F(l)`` contains ``m^l``, so ``dim O/F(l)`` is the rank of the linear map
    sending polynomials of degree ``< l`` to their pullback coefficients of
    exceptional order ``< l``.
    """
    script = _branch_towers(gamma, resolution_length(gamma) + m, tie_break).script
    u = script.exceptional_var()
    x, y = pullback_images(script)
    xs, ys = [Polynomial.constant(2)], [Polynomial.constant(2)]
    for _ in range(order):
        xs.append(xs[-1] * x)
        ys.append(ys[-1] * y)
    images = {(a, b): (xs[a] * ys[b]).terms for a, b in _monomials_below(order + 1)}
    return _series_from_codims(_codims(images, order, key=lambda e: e[u]), order)


def branch_poincare_curve(gamma: BranchParametrization, order: int) -> TruncatedSeries:
    """Poincaré series of ``v_S`` on ``C{x, y}``: the indicator of the value semigroup."""
    images = {}
    for mono in _monomials_below(order + 1):
        s = compose(Polynomial.monomial(mono), gamma)
        if s.prec <= order:
            raise BlowupError(f"parametrization known only to order {s.prec}, need {order + 1}")
        images[mono] = {(k,): c for k, c in s.coeffs.items()}
    return _series_from_codims(_codims(images, order, key=lambda e: e[0]), order)


def branch_series_family(gamma: BranchParametrization, order: int) -> SeriesFamily:
    return SeriesFamily(
        member=lambda m: branch_poincare_divisorial(gamma, m, order),
        limit=branch_poincare_curve(gamma, order),
        description=f"branch {gamma.to_json()['coords']}",
    )


# corpora -------------------------------------------------------------------


def _random_poly(rng: random.Random, monomials: list[tuple[int, ...]], nterms: int) -> Polynomial:
    picks = rng.sample(monomials, min(nterms, len(monomials)))
    terms = {}
    for e in picks:
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        terms[e] = c or Fraction(1)
    return Polynomial(len(monomials[0]), terms)


def quadric_corpus(n_random: int = 20, seed: int = 0) -> list[Polynomial]:
    """Monomial-type elements ``x^i y^j z^k (xy - z^2)^l`` plus seeded random polynomials."""
    x, y, z = (Polynomial.var(3, i) for i in range(3))
    f0 = x * y - z * z
    out = []
    for l in range(2):
        for k in range(2):
            for i in range(3):
                for j in range(3):
                    out.append(x ** i * y ** j * z ** k * f0 ** l)
    out += [z * z, x + f0 * y, x * x - y * z + f0 * f0]
    rng = random.Random(seed)
    monos = [(i, j, k) for i in range(4) for j in range(4) for k in range(4) if 0 < i + j + k <= 4]
    for _ in range(n_random):
        p = _random_poly(rng, monos, rng.randint(1, 4))
        if rng.random() < 0.5:
            p = p + f0 * _random_poly(rng, monos, 2)
        out.append(p)
    return out


def toric_corpus(n: int, q: int, n_random: int = 20, seed: int = 0) -> list[Polynomial]:
    cone = cyclic_quotient_cone(n, q)
    pts = [(a, b) for a in range(12) for b in range(6) if cone.contains((a, b)) and (a, b) != (0, 0)]
    out = [Polynomial.monomial(p) for p in pts[:20]]
    rng = random.Random(seed)
    for _ in range(n_random):
        out.append(_random_poly(rng, pts, rng.randint(1, 4)))
    return out


def branch_corpus(n_random: int = 10, seed: int = 0) -> list[Polynomial]:
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    out = [x, y, y - x, y * y - x ** 3 + x ** 4, y * y - x ** 3, x * y, y ** 2 - 2 * x ** 3]
    rng = random.Random(seed)
    monos = [(i, j) for i in range(5) for j in range(5) if 0 < i + j <= 5]
    for _ in range(n_random):
        out.append(_random_poly(rng, monos, rng.randint(1, 4)))
    return out
