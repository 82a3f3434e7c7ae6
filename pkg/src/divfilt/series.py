"""Exact sparse multivariate series with (possibly fractional) exponents.

Exponents are stored as integer tuples scaled by one shared denominator
``denom`` per object, so ``(2, 1)`` with ``denom == 5`` means ``t^(2/5) s^(1/5)``.
Every object is kept in canonical form: ``denom`` is the smallest positive
integer that clears all exponents and no stored coefficient is zero.

Three kinds of objects live here:

  ExponentPolynomial   a finite sum  sum c_e t^e
  TruncatedSeries      a power series known up to total degree ``order``
  RationalExpr         numerator / prod (1 - t^a)^mult

Coefficients are ints or Fractions; nothing is ever floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

class SeriesError(ValueError):
    """Base class for invalid series operations."""


class VarCountMismatch(SeriesError):
    pass


class UnsoundTruncation(SeriesError):
    """Raised when a specialization cannot be certified from the stored terms."""


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _clean_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _to_fraction_exp(exp: Iterable) -> tuple[Fraction, ...]:
    out = tuple(Fraction(e) for e in exp)
    if any(e < 0 for e in out):
        raise SeriesError(f"negative exponent {exp}")
    return out


def _scale_terms(terms: Mapping, nvars: int) -> tuple[int, dict]:
    """Turn a ``{fraction-tuple: coeff}`` mapping into ``(denom, scaled)``."""
    fterms = {}
    for exp, c in terms.items():
        e = _to_fraction_exp(exp)
        if len(e) != nvars:
            raise VarCountMismatch(f"exponent {exp} does not have {nvars} components")
        if c:
            fterms[e] = fterms.get(e, 0) + c
    d = 1
    for e in fterms:
        for x in e:
            d = _lcm(d, x.denominator)
    scaled = {}
    for e, c in fterms.items():
        if c:
            scaled[tuple(int(x * d) for x in e)] = _clean_coeff(c)
    return d, scaled


def _canonical(denom: int, terms: dict) -> tuple[int, dict]:
    """Reduce ``denom`` to the smallest value clearing all exponents."""
    if not terms:
        return 1, terms
    g = denom
    for e in terms:
        for x in e:
            g = math.gcd(g, x)
        if g == 1:
            return denom, terms
    return denom // g, {tuple(x // g for x in e): c for e, c in terms.items()}


def _rescale(terms: dict, factor: int) -> dict:
    if factor == 1:
        return terms
    return {tuple(x * factor for x in e): c for e, c in terms.items()}


def format_exponent(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def default_var_names(nvars: int) -> list[str]:
    if nvars == 1:
        return ["t"]
    if nvars == 2:
        return ["t", "s"]
    return [f"t{i + 1}" for i in range(nvars)]


def _format_monomial(exp: Sequence[Fraction], names: Sequence[str]) -> str:
    parts = []
    for x, name in zip(exp, names):
        if x == 0:
            continue
        if x == 1:
            parts.append(name)
        elif x.denominator == 1:
            parts.append(f"{name}^{x.numerator}")
        else:
            parts.append(f"{name}^({format_exponent(x)})")
    return "*".join(parts)


def _format_terms(items: list, names: Sequence[str]) -> str:
    if not items:
        return "0"
    out = []
    for i, (exp, c) in enumerate(items):
        mono = _format_monomial(exp, names)
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if i == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


class _Sparse:
    """Shared storage for polynomials and truncated series."""

    __slots__ = ("nvars", "denom", "_terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        if nvars < 1:
            raise SeriesError("need at least one variable")
        self.nvars = nvars
        d, scaled = _scale_terms(terms or {}, nvars)
        self.denom, self._terms = _canonical(d, scaled)

    @classmethod
    def _from_scaled(cls, nvars: int, denom: int, terms: dict, **kw):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        terms = {e: _clean_coeff(c) for e, c in terms.items() if c}
        obj.denom, obj._terms = _canonical(denom, terms)
        for k, v in kw.items():
            setattr(obj, k, v)
        return obj

    def items(self) -> Iterator[tuple[tuple[Fraction, ...], object]]:
        """Yield ``(exponent, coeff)`` sorted by total degree, then lexicographically."""
        d = self.denom
        for e in sorted(self._terms, key=lambda e: (sum(e), e)):
            yield tuple(Fraction(x, d) for x in e), self._terms[e]

    def coefficient(self, exp: Iterable) -> object:
        e = _to_fraction_exp(exp)
        scaled = []
        for x in e:
            y = x * self.denom
            if y.denominator != 1:
                return 0
            scaled.append(int(y))
        return self._terms.get(tuple(scaled), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def to_dict(self) -> dict:
        return dict(self.items())

    def _aligned(self, other) -> tuple[int, dict, dict]:
        if self.nvars != other.nvars:
            raise VarCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        d = _lcm(self.denom, other.denom)
        return d, _rescale(self._terms, d // self.denom), _rescale(other._terms, d // other.denom)


class ExponentPolynomial(_Sparse):
    """A finite sum of monomials with nonnegative rational exponents."""

    __slots__ = ()

    @classmethod
    def constant(cls, nvars: int, c=1) -> ExponentPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Sequence, c=1) -> ExponentPolynomial:
        return cls(len(exp), {tuple(exp): c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExponentPolynomial):
            return NotImplemented
        return (self.nvars, self.denom, self._terms) == (other.nvars, other.denom, other._terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.denom, frozenset(self._terms.items())))

    def __add__(self, other: ExponentPolynomial) -> ExponentPolynomial:
        d, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return ExponentPolynomial._from_scaled(self.nvars, d, out)

    def __neg__(self) -> ExponentPolynomial:
        return ExponentPolynomial._from_scaled(
            self.nvars, self.denom, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other: ExponentPolynomial) -> ExponentPolynomial:
        return self + (-other)

    def __mul__(self, other) -> ExponentPolynomial:
        if not isinstance(other, ExponentPolynomial):
            return ExponentPolynomial._from_scaled(
                self.nvars, self.denom, {e: c * other for e, c in self._terms.items()}
            )
        d, a, b = self._aligned(other)
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return ExponentPolynomial._from_scaled(self.nvars, d, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ExponentPolynomial:
        if k < 0:
            raise SeriesError("negative power of a polynomial")
        result = ExponentPolynomial.constant(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def max_degree(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return Fraction(max(sum(e) for e in self._terms), self.denom)

    def truncate(self, order) -> TruncatedSeries:
        return TruncatedSeries._from_scaled(
            self.nvars, self.denom, dict(self._terms), order=Fraction(order)
        )._retruncated()

    def format(self, names: Sequence[str] | None = None) -> str:
        return _format_terms(list(self.items()), names or default_var_names(self.nvars))

    def __repr__(self) -> str:
        return f"ExponentPolynomial({self.format()})"


class TruncatedSeries(_Sparse):
    """A power series known exactly for every monomial of total degree <= ``order``."""

    __slots__ = ("order",)

    def __init__(self, nvars: int, terms: Mapping | None = None, order=0):
        super().__init__(nvars, terms)
        self.order = Fraction(order)
        if self.order < 0:
            raise SeriesError("truncation order must be nonnegative")
        self._retruncated(inplace=True)

    def _limit(self, denom: int | None = None) -> int:
        d = self.denom if denom is None else denom
        return math.floor(self.order * d)

    def _retruncated(self, inplace: bool = False):
        lim = self._limit()
        terms = {e: c for e, c in self._terms.items() if sum(e) <= lim}
        if inplace:
            self.denom, self._terms = _canonical(self.denom, terms)
            return self
        return TruncatedSeries._from_scaled(self.nvars, self.denom, terms, order=self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.order, self.denom, self._terms) == (
            other.nvars, other.order, other.denom, other._terms,
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.order, self.denom, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.format()} + O(deg > {format_exponent(self.order)}))"

    def format(self, names: Sequence[str] | None = None) -> str:
        return _format_terms(list(self.items()), names or default_var_names(self.nvars))

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._from_scaled(
            self.nvars, self.denom, {e: -c for e, c in self._terms.items()}, order=self.order
        )

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, -other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def truncate(self, order) -> TruncatedSeries:
        order = Fraction(order)
        if order > self.order:
            raise SeriesError(f"cannot raise truncation order {self.order} to {order}")
        return TruncatedSeries._from_scaled(
            self.nvars, self.denom, dict(self._terms), order=order
        )._retruncated()

    def coefficients_1d(self) -> list:
        """Dense coefficient list ``[c_0, ..., c_N]`` of a one-variable integral series."""
        if self.nvars != 1 or self.denom != 1:
            raise SeriesError("dense coefficient list needs one variable and integral exponents")
        n = math.floor(self.order)
        out = [0] * (n + 1)
        for (e,), c in self._terms.items():
            out[e] = c
        return out

    def permute(self, perm: Sequence[int]) -> TruncatedSeries:
        """New series whose variable ``i`` is old variable ``perm[i]``."""
        if sorted(perm) != list(range(self.nvars)):
            raise SeriesError(f"{perm} is not a permutation")
        terms = {tuple(e[p] for p in perm): c for e, c in self._terms.items()}
        return TruncatedSeries._from_scaled(self.nvars, self.denom, terms, order=self.order)

    # golden-file format -------------------------------------------------

    def dumps(self) -> str:
        lines = [f"vars={self.nvars} order={format_exponent(self.order)} denom={self.denom}"]
        for exp, c in self.items():
            lines.append(f"{c}  " + " ".join(format_exponent(x) for x in exp))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> TruncatedSeries:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise SeriesError("empty series text")
        header = dict(kv.split("=", 1) for kv in lines[0].split())
        nvars = int(header["vars"])
        order = Fraction(header["order"])
        terms = {}
        for ln in lines[1:]:
            fields = ln.split()
            if len(fields) != nvars + 1:
                raise SeriesError(f"bad series line: {ln!r}")
            terms[tuple(Fraction(x) for x in fields[1:])] = _clean_coeff(Fraction(fields[0]))
        out = cls(nvars, terms, order)
        if out.denom != int(header.get("denom", out.denom)) and terms:
            raise SeriesError("declared denominator does not match the exponents")
        return out


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    d, ta, tb = a._aligned(b)
    out = dict(ta)
    for e, c in tb.items():
        out[e] = out.get(e, 0) + c
    order = min(a.order, b.order)
    return TruncatedSeries._from_scaled(a.nvars, d, out, order=order)._retruncated()


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    d, ta, tb = a._aligned(b)
    order = min(a.order, b.order)
    lim = math.floor(order * d)
    bl = sorted(((sum(e), e, c) for e, c in tb.items()), key=lambda x: x[0])
    out: dict = {}
    for ea, ca in ta.items():
        da = sum(ea)
        for db, eb, cb in bl:
            if da + db > lim:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return TruncatedSeries._from_scaled(a.nvars, d, out, order=order)


def integral_part(s: TruncatedSeries) -> TruncatedSeries:
    """Keep exactly the terms whose exponents are all integers."""
    d = s.denom
    terms = {e: c for e, c in s._terms.items() if all(x % d == 0 for x in e)}
    return TruncatedSeries._from_scaled(s.nvars, d, terms, order=s.order)


def specialize_to_one(
    s: TruncatedSeries,
    var: int | Sequence[int],
    order,
    elim_bound=None,
) -> TruncatedSeries:
    """Set the variable(s) ``var`` to 1, keeping output terms up to ``order``.

    The output coefficient of ``t^r`` sums infinitely many input terms in
    general, so the input must be known far enough out.  With ``elim_bound``
    (a proven bound on the eliminated degree of every term whose remaining
    degree is <= ``order``) the check is ``s.order >= order + elim_bound``.
    Without it the bound is estimated from the stored terms (largest
    eliminated/remaining slope); this can only see terms that survived the
    input truncation, so pass ``elim_bound`` whenever the support is known.
    Either failure raises ``UnsoundTruncation``.
    """
    drop = sorted({var} if isinstance(var, int) else set(var))
    if not drop or drop[0] < 0 or drop[-1] >= s.nvars:
        raise SeriesError(f"bad variable index {var}")
    if len(drop) >= s.nvars:
        raise SeriesError("cannot eliminate every variable")
    keep = [i for i in range(s.nvars) if i not in drop]
    order = Fraction(order)
    d = s.denom
    lim_out = math.floor(order * d)
    contributing = []
    for e, c in s._terms.items():
        rem = sum(e[i] for i in keep)
        if rem <= lim_out:
            contributing.append((rem, sum(e[i] for i in drop), e, c))

    if elim_bound is not None:
        if s.order < order + Fraction(elim_bound):
            raise UnsoundTruncation(
                f"input order {s.order} < output order {order} + eliminated-degree bound {elim_bound}"
            )
    else:
        e0 = max((el for rem, el, _, _ in contributing if rem == 0), default=0)
        slope = max((Fraction(el, rem) for rem, el, _, _ in contributing if rem > 0), default=Fraction(0))
        estimate = Fraction(e0, d) + slope * order
        if s.order < order + estimate:
            raise UnsoundTruncation(
                f"input order {s.order} < output order {order} + estimated eliminated degree {estimate}"
            )

    out: dict = {}
    for _, _, e, c in contributing:
        k = tuple(e[i] for i in keep)
        out[k] = out.get(k, 0) + c
    return TruncatedSeries._from_scaled(len(keep), d, out, order=order)


@dataclass(frozen=True)
class Discrepancy:
    exponent: tuple
    left: object
    right: object


def series_equal_up_to(a: TruncatedSeries, b: TruncatedSeries, order=None) -> tuple[bool, Discrepancy | None]:
    """Compare all coefficients of total degree <= ``order``.

    Returns ``(True, None)`` or ``(False, first_discrepancy)`` where the
    discrepancy is the smallest disagreeing exponent (degree, then lex).
    """
    if a.nvars != b.nvars:
        raise VarCountMismatch(f"{a.nvars} vs {b.nvars} variables")
    order = min(a.order, b.order) if order is None else Fraction(order)
    if order > a.order or order > b.order:
        raise SeriesError(f"comparison order {order} exceeds a truncation order")
    ta, tb = a.truncate(order), b.truncate(order)
    da, db = dict(ta.items()), dict(tb.items())
    bad = [e for e in set(da) | set(db) if da.get(e, 0) != db.get(e, 0)]
    if not bad:
        return True, None
    first = min(bad, key=lambda e: (sum(e), e))
    return False, Discrepancy(first, da.get(first, 0), db.get(first, 0))


class RationalExpr:
    """``numerator / prod_a (1 - t^a)^mult`` with every ``a`` of positive degree."""

    __slots__ = ("nvars", "numerator", "factors")

    def __init__(self, numerator: ExponentPolynomial, factors: Mapping | Iterable = ()):
        self.nvars = numerator.nvars
        self.numerator = numerator
        merged: dict = {}
        pairs = factors.items() if isinstance(factors, Mapping) else ((a, 1) for a in factors)
        for a, mult in pairs:
            a = _to_fraction_exp(a)
            if len(a) != self.nvars:
                raise VarCountMismatch(f"factor exponent {a} does not have {self.nvars} components")
            if sum(a) <= 0:
                raise SeriesError("denominator factor (1 - t^0) is zero in the formal ring")
            if mult < 0:
                raise SeriesError("negative factor multiplicity")
            if mult:
                merged[a] = merged.get(a, 0) + mult
        self.factors = tuple(sorted(merged.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    @classmethod
    def polynomial(cls, p: ExponentPolynomial) -> RationalExpr:
        return cls(p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalExpr):
            return NotImplemented
        return self.numerator == other.numerator and self.factors == other.factors

    def __hash__(self) -> int:
        return hash((self.numerator, self.factors))

    def denominator_polynomial(self) -> ExponentPolynomial:
        out = ExponentPolynomial.constant(self.nvars)
        one = ExponentPolynomial.constant(self.nvars)
        for a, mult in self.factors:
            out = out * (one - ExponentPolynomial.monomial(a)) ** mult
        return out

    def _common(self, other: RationalExpr):
        if self.nvars != other.nvars:
            raise VarCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        fa, fb = dict(self.factors), dict(other.factors)
        common = {a: max(fa.get(a, 0), fb.get(a, 0)) for a in set(fa) | set(fb)}
        one = ExponentPolynomial.constant(self.nvars)

        def lift(expr, f):
            p = expr.numerator
            for a, mult in common.items():
                extra = mult - f.get(a, 0)
                if extra:
                    p = p * (one - ExponentPolynomial.monomial(a)) ** extra
            return p

        return lift(self, fa), lift(other, fb), common

    def __add__(self, other: RationalExpr) -> RationalExpr:
        pa, pb, common = self._common(other)
        return RationalExpr(pa + pb, common)

    def __neg__(self) -> RationalExpr:
        return RationalExpr(-self.numerator, dict(self.factors))

    def __sub__(self, other: RationalExpr) -> RationalExpr:
        return self + (-other)

    def __mul__(self, other) -> RationalExpr:
        if isinstance(other, ExponentPolynomial):
            return RationalExpr(self.numerator * other, dict(self.factors))
        f = dict(self.factors)
        for a, mult in other.factors:
            f[a] = f.get(a, 0) + mult
        return RationalExpr(self.numerator * other.numerator, f)

    def equivalent(self, other: RationalExpr) -> bool:
        """Equality as rational functions, by cross-multiplication."""
        if self.nvars != other.nvars:
            raise VarCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        return self.numerator * other.denominator_polynomial() == (
            other.numerator * self.denominator_polynomial()
        )

    def expand(self, order) -> TruncatedSeries:
        return expand(self, order)

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or default_var_names(self.nvars)
        num = self.numerator.format(names)
        if not self.factors:
            return num
        if len(self.numerator) > 1:
            num = f"({num})"
        dens = []
        for a, mult in self.factors:
            f = f"(1 - {_format_monomial(a, names)})"
            dens.append(f if mult == 1 else f"{f}^{mult}")
        den = "".join(dens)
        if len(dens) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalExpr({self.format()})"


def expand(expr: RationalExpr, order) -> TruncatedSeries:
    """Power-series expansion of ``expr`` up to total degree ``order``.

    Each ``(1 - t^a)^-1`` becomes ``sum_j t^(j a)``.
    """
    order = Fraction(order)
    if order < 0:
        raise SeriesError("expansion order must be nonnegative")
    d = expr.numerator.denom
    for a, _ in expr.factors:
        for x in a:
            d = _lcm(d, x.denominator)
    lim = math.floor(order * d)
    cur = {
        e: c
        for e, c in _rescale(expr.numerator._terms, d // expr.numerator.denom).items()
        if sum(e) <= lim
    }
    for a, mult in expr.factors:
        sa = tuple(int(x * d) for x in a)
        step = sum(sa)
        if step <= 0:
            raise SeriesError("denominator factor (1 - t^0) is zero in the formal ring")
        for _ in range(mult):
            nxt: dict = {}
            for e, c in cur.items():
                k = sum(e)
                while k <= lim:
                    nxt[e] = nxt.get(e, 0) + c
                    e = tuple(x + y for x, y in zip(e, sa))
                    k += step
            cur = {e: c for e, c in nxt.items() if c}
    return TruncatedSeries._from_scaled(expr.nvars, d, cur, order=order)


def normalization_factor(k: int) -> RationalExpr:
    """``prod_i (t_i - 1) / (prod_i t_i - 1)`` written as ``-prod(t_i - 1) / (1 - t_1...t_k)``."""
    if k < 1:
        raise SeriesError("normalization factor needs k >= 1")
    num = ExponentPolynomial.constant(k, -1)
    for i in range(k):
        e = [0] * k
        e[i] = 1
        num = num * (ExponentPolynomial.monomial(e) - ExponentPolynomial.constant(k))
    return RationalExpr(num, {(1,) * k: 1})


def poincare_from_quotients(
    quotient_dim: Callable[[tuple, tuple], int],
    k: int,
    order: int,
) -> TruncatedSeries:
    """Normalized Poincaré series of a ``k``-index filtration, to total degree ``order``.

    ``quotient_dim(lo, hi)`` must return ``dim F(lo)/F(hi)`` for nonnegative
    multi-indices ``lo <= hi``.  The raw sum runs over all of ``Z^k`` (indices
    are clipped at zero); multiplying by ``prod(t_i - 1)`` kills every term with
    a negative component, so only the window ``l >= -1`` is ever evaluated
    before the final division by ``1 - t_1...t_k``.
    """
    if k < 1:
        raise SeriesError("need at least one filtration index")
    if order < 0:
        raise SeriesError("order must be nonnegative")

    cache: dict = {}

    def raw(ell: tuple) -> int:
        lo = tuple(max(0, x) for x in ell)
        hi = tuple(max(0, x + 1) for x in ell)
        if lo == hi:
            return 0
        if ell not in cache:
            cache[ell] = quotient_dim(lo, hi)
        return cache[ell]

    subsets = list(itertools.product((0, 1), repeat=k))
    q: dict = {}
    for ell in _multi_indices(k, order):
        val = 0
        for sub in subsets:
            sign = -1 if (k - sum(sub)) % 2 else 1
            val += sign * raw(tuple(x - s for x, s in zip(ell, sub)))
        if val:
            q[ell] = val
    diag = tuple([1] * k)
    out: dict = {}
    for ell, c in q.items():
        e = ell
        while sum(e) <= order:
            out[e] = out.get(e, 0) - c
            e = tuple(x + y for x, y in zip(e, diag))
    return TruncatedSeries._from_scaled(k, 1, out, order=Fraction(order))


def _multi_indices(k: int, order: int) -> Iterator[tuple]:
    for total in range(order + 1):
        for combo in itertools.combinations(range(total + k - 1), k - 1):
            prev = -1
            parts = []
            for c in combo:
                parts.append(c - prev - 1)
                prev = c
            parts.append(total + k - 2 - prev)
            yield tuple(parts)
