"""Sparse polynomials with rational coefficients, plus a small text parser."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

ALIASES = ("x", "y", "z", "w")


class PolyParseError(ValueError):
    pass


class Polynomial:
    """``{exponent tuple: Fraction}`` with no zero coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> Polynomial:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = {e: c for e, c in terms.items() if c}
        return p

    @classmethod
    def constant(cls, nvars: int, c=1) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> Polynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> Polynomial:
        return cls(len(exp), {tuple(exp): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"{self.nvars} vs {other.nvars} variables")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def order_in(self, i: int) -> int | None:
        """Largest ``a`` with ``x_i^a`` dividing the polynomial; None for zero."""
        return min((e[i] for e in self.terms), default=None)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def substitute(self, images: Sequence[Polynomial | None]) -> Polynomial:
        """Replace ``x_i`` by ``images[i]`` (``None`` keeps ``x_i``)."""
        imgs = [Polynomial.var(self.nvars, i) if p is None else p for i, p in enumerate(images)]
        nv = imgs[0].nvars if imgs else self.nvars
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(nv)} for _ in imgs]

        def pw(i: int, k: int) -> Polynomial:
            cache = powers[i]
            if k not in cache:
                top = max(cache)
                p = cache[top]
                for j in range(top + 1, k + 1):
                    p = p * imgs[i]
                    cache[j] = p
            return cache[k]

        out = Polynomial(nv)
        for e, c in self.terms.items():
            term = Polynomial.constant(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self.format()})"

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def default_names(nvars: int) -> list[str]:
    if nvars <= len(ALIASES):
        return list(ALIASES[:nvars])
    return [f"x{i + 1}" for i in range(nvars)]


_SPARSE_LINE = re.compile(r"^\s*[-+]?\d+(/\d+)?(\s+\d+)+\s*$")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse ``"x*y - z^2"`` style infix text or sparse ``"coeff i j k"`` lines.

    Variables are ``x1..xn`` or the aliases ``x, y, z, w`` for the first four.
    """
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if lines and all(_SPARSE_LINE.match(ln) for ln in lines):
        terms: dict = {}
        for ln in lines:
            fields = ln.split()
            if len(fields) != nvars + 1:
                raise PolyParseError(f"expected {nvars} exponents in {ln!r}")
            e = tuple(int(x) for x in fields[1:])
            terms[e] = terms.get(e, 0) + Fraction(fields[0])
        return Polynomial(nvars, terms)

    symbols = sympy.symbols(f"x1:{nvars + 1}")
    local = {f"x{i + 1}": s for i, s in enumerate(symbols)}
    for alias, s in zip(ALIASES, symbols):
        local[alias] = s
    if not re.fullmatch(r"[\sA-Za-z0-9+\-*^()/]*", text):
        raise PolyParseError(f"unexpected characters in {text!r}")
    unknown = set(re.findall(r"[A-Za-z_]\w*", text)) - set(local)
    if unknown:
        raise PolyParseError(f"unknown variable(s) {sorted(unknown)} for {nvars} variables")
    try:
        expr = parse_expr(
            text,
            local_dict=local,
            transformations=standard_transformations + (convert_xor, implicit_multiplication_application),
            evaluate=True,
        )
        poly = sympy.Poly(sympy.expand(expr), *symbols, domain="QQ")
    except (SyntaxError, TypeError, sympy.PolynomialError, sympy.SympifyError) as exc:
        raise PolyParseError(f"cannot parse {text!r}: {exc}") from exc
    terms = {
        tuple(int(k) for k in mono): Fraction(int(c.p), int(c.q)) for mono, c in poly.terms()
    }
    return Polynomial(nvars, terms)
