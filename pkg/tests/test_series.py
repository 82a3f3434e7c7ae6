from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divfilt.series import (
    ExponentPolynomial,
    RationalExpr,
    SeriesError,
    TruncatedSeries,
    UnsoundTruncation,
    VarCountMismatch,
    expand,
    integral_part,
    normalization_factor,
    poincare_from_quotients,
    series_equal_up_to,
    specialize_to_one,
)

F = Fraction


def one_var(coeffs, order):
    return TruncatedSeries(1, {(i,): c for i, c in enumerate(coeffs)}, order)


def geometric(*exps, num=None):
    num = num or ExponentPolynomial.constant(1)
    return RationalExpr(num, [(e,) for e in exps])


def count_quadric(ell, w):
    # oracle: #{(i,j,k,l): k in {0,1}, i + j + k + w*l = ell}
    return sum(
        1
        for i in range(ell + 1)
        for j in range(ell + 1)
        for k in (0, 1)
        for l in range(ell + 1)
        if i + j + k + w * l == ell
    )


# expand ---------------------------------------------------------------------------


def test_expand_geometric():
    assert expand(geometric(1), 5).coefficients_1d() == [1] * 6


def test_expand_quadric_m1_matches_enumeration():
    num = ExponentPolynomial(1, {(0,): 1, (2,): -1})
    expr = RationalExpr(num, {(1,): 3, (3,): 1})
    assert expand(expr, 4).coefficients_1d() == [1, 3, 5, 8, 12]
    assert expand(expr, 12).coefficients_1d() == [count_quadric(l, 3) for l in range(13)]


def test_expand_cyclic_quotient_m0_uses_lattice_count():
    # the lattice points (a, b) of the cone <(1,0),(2,5)> with a = ell number 1, 3, 6, 8
    num = ExponentPolynomial(1, {(0,): 1, (1,): 2, (2,): 2})
    expr = RationalExpr(num, [(1,), (2,)])
    counts = [sum(1 for b in range(0, 5 * a // 2 + 1)) for a in range(4)]
    assert counts == [1, 3, 6, 8]
    assert expand(expr, 3).coefficients_1d() == counts


def test_expand_fractional_exponents():
    expr = geometric(F(2, 5))
    s = expand(expr, 1)
    assert dict(s.items()) == {(F(0),): 1, (F(2, 5),): 1, (F(4, 5),): 1}
    assert s.denom == 5


def test_expand_zero_numerator_is_zero():
    assert expand(RationalExpr(ExponentPolynomial(1, {}), [(1,)]), 4).is_zero()


def test_zero_factor_rejected():
    with pytest.raises(SeriesError):
        RationalExpr(ExponentPolynomial.constant(1), [(0,)])


def test_negative_exponent_rejected():
    with pytest.raises(SeriesError):
        ExponentPolynomial(1, {(-1,): 1})


# add / mul ----------------------------------------------------------------------


def test_add_examples():
    a = one_var([1, 1], 3)
    assert (a + one_var([-1, -1], 3)).is_zero()
    assert (a + one_var([0, 1], 3)).coefficients_1d() == [1, 2, 0, 0]
    tel = expand(geometric(1), 8) + expand(geometric(1, num=ExponentPolynomial(1, {(1,): -1})), 8)
    assert tel == one_var([1], 8)


def test_add_takes_min_order_and_mismatch():
    assert (one_var([1], 3) + one_var([1, 1, 1, 1, 1], 5)).order == 3
    with pytest.raises(VarCountMismatch):
        one_var([1], 2) + TruncatedSeries(2, {(0, 0): 1}, 2)


def test_mul_examples():
    assert (one_var([1, -1], 9) * expand(geometric(1), 9)) == one_var([1], 9)
    assert (one_var([1, 1], 4) * one_var([1, 1], 4)).coefficients_1d() == [1, 2, 1, 0, 0]
    base = RationalExpr(ExponentPolynomial(1, {(0,): 1, (2,): -1}), {(1,): 3})
    prod = expand(base, 15) * expand(geometric(3), 15)
    assert prod == expand(base * geometric(3), 15)


# integral part / specialization ------------------------------------------------------


def test_integral_part_definition():
    s = TruncatedSeries(2, {(0, 0): 1, (F(2, 5), F(1, 5)): 1, (1, 3): 1}, 10)
    assert integral_part(s) == TruncatedSeries(2, {(0, 0): 1, (1, 3): 1}, 10)
    assert integral_part(integral_part(s)) == integral_part(s)


def test_specialize_definition():
    s = TruncatedSeries(2, {(0, 0): 1, (1, 1): 1, (1, 2): 1}, 5)
    assert specialize_to_one(s, 1, 1) == one_var([1, 2], 1)


def test_specialize_without_eliminated_terms_is_identity():
    s = TruncatedSeries(2, {(0, 0): 1, (2, 0): 3}, 6)
    assert specialize_to_one(s, 1, 3) == one_var([1, 0, 3], 3)


def test_specialize_rejects_insufficient_input_order():
    # 1/(1 - t s) truncated at degree 6: the coefficient of t^3 needs t^3 s^3 (degree 6)
    s = expand(RationalExpr(ExponentPolynomial.constant(2), [(1, 1)]), 5)
    with pytest.raises(UnsoundTruncation):
        specialize_to_one(s, 1, 3)
    s = expand(RationalExpr(ExponentPolynomial.constant(2), [(1, 1)]), 6)
    assert specialize_to_one(s, 1, 3) == one_var([1, 1, 1, 1], 3)


def test_specialize_explicit_bound():
    s = expand(RationalExpr(ExponentPolynomial.constant(2), [(1, 2)]), 8)
    with pytest.raises(UnsoundTruncation):
        specialize_to_one(s, 1, 3, elim_bound=6)
    assert specialize_to_one(s, 1, 2, elim_bound=4) == one_var([1, 1, 1], 2)


def test_specialize_bad_variable():
    with pytest.raises(SeriesError):
        specialize_to_one(one_var([1], 2), 0, 1)


# normalization -----------------------------------------------------------------------


def test_normalization_factor_one_is_identity():
    s = one_var([3, 1, 4, 1, 5], 4)
    assert expand(normalization_factor(1), 4) * s == s


def test_normalization_factor_two_on_diagonal_series():
    diag = TruncatedSeries(2, {(l, l): 1 for l in range(5)}, 8)
    out = expand(normalization_factor(2), 8) * diag
    assert out.order == 8 and not out.is_zero()


def test_poincare_product_of_box_algebras():
    # C[x]/(x^a) ⊗ C[y]/(y^b) with the two monomial weights: P = P1 * P2
    a, b, order = 3, 2, 8
    monos = [(i, j) for i in range(a) for j in range(b)]

    def qdim(lo, hi):
        return sum(
            1
            for v in monos
            if all(x >= l for x, l in zip(v, lo)) and any(x < h for x, h in zip(v, hi))
        )

    p = poincare_from_quotients(qdim, 2, order)
    p1 = TruncatedSeries(2, {(i, 0): 1 for i in range(a)}, order)
    p2 = TruncatedSeries(2, {(0, j): 1 for j in range(b)}, order)
    assert p == p1 * p2


def test_poincare_single_index_is_plain_sum():
    dims = [1, 2, 0, 5]
    p = poincare_from_quotients(lambda lo, hi: sum(dims[lo[0]:hi[0]]) if lo[0] < 4 else 0, 1, 5)
    assert p.coefficients_1d() == dims + [0, 0]


# comparison / golden format --------------------------------------------------------


def test_equal_up_to():
    a = one_var([1, 1], 3)
    assert series_equal_up_to(a, a) == (True, None)
    ok, disc = series_equal_up_to(a, one_var([1, 2], 3), 1)
    assert not ok and disc.exponent == (F(1),) and (disc.left, disc.right) == (1, 2)
    with pytest.raises(SeriesError):
        series_equal_up_to(a, one_var([1], 2), 3)


def test_golden_roundtrip():
    s = TruncatedSeries(2, {(0, 0): 1, (F(2, 5), F(1, 5)): -3, (1, 0): F(1, 2)}, F(7, 2))
    text = s.dumps()
    assert text.splitlines()[0] == "vars=2 order=7/2 denom=5"
    assert text.splitlines()[1] == "1  0 0"
    assert TruncatedSeries.loads(text) == s


def test_format_rational_expr():
    num = ExponentPolynomial(1, {(0,): 1, (4,): 1})
    assert RationalExpr(num, [(1,), (17,)]).format() == "(1 + t^4)/((1 - t)(1 - t^17))"
    assert RationalExpr(ExponentPolynomial.constant(1), {(1,): 2}).format() == "1/(1 - t)^2"


def test_equivalent_cross_multiplication():
    a = RationalExpr(ExponentPolynomial(1, {(0,): 1, (1,): 1}), {(1,): 1})
    b = RationalExpr(ExponentPolynomial(1, {(0,): 1, (1,): 1, (2,): -1, (3,): -1}), {(1,): 1, (2,): 1})
    assert a.equivalent(b)
    assert not a.equivalent(geometric(1))


# properties ------------------------------------------------------------------------

coeff = st.integers(-4, 4)
exp2 = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def series2(draw, order=5):
    terms = draw(st.dictionaries(exp2, coeff, max_size=6))
    return TruncatedSeries(2, terms, order)


@st.composite
def frac_series(draw):
    terms = draw(
        st.dictionaries(
            st.tuples(st.fractions(0, 3, max_denominator=5), st.fractions(0, 3, max_denominator=5)),
            coeff,
            max_size=6,
        )
    )
    return TruncatedSeries(2, terms, 4)


@settings(max_examples=200, deadline=None)
@given(series2(), series2(), series2())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=200, deadline=None)
@given(
    st.dictionaries(st.integers(0, 6), coeff, max_size=5),
    st.integers(1, 4),
    st.integers(0, 12),
)
def test_expand_multiply_back(num_terms, a, order):
    num = ExponentPolynomial(1, {(e,): c for e, c in num_terms.items()})
    s = expand(RationalExpr(num, [(a,)]), order)
    back = s * TruncatedSeries(1, {(0,): 1, (a,): -1}, order)
    assert back == num.truncate(order)


@settings(max_examples=200, deadline=None)
@given(frac_series(), frac_series())
def test_integral_part_linear_idempotent(a, b):
    assert integral_part(a + b) == integral_part(a) + integral_part(b)
    assert integral_part(integral_part(a)) == integral_part(a)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(2, 12), st.integers(0, 8))
def test_specialize_soundness(r, e, in_order, out_order):
    # 1/(1 - t^r s^e): the coefficient of t^(jr) needs input degree j(r + e)
    s = expand(RationalExpr(ExponentPolynomial.constant(2), [(r, e)]), in_order)
    needed = (out_order // r) * (r + e)
    if out_order > in_order or (needed > in_order and r + e <= in_order):
        with pytest.raises(UnsoundTruncation):
            specialize_to_one(s, 1, out_order)
        return
    if r + e > in_order:
        return  # no term shows the slope; only an explicit bound can certify this case
    if in_order < out_order + Fraction(e, r) * out_order:
        with pytest.raises(UnsoundTruncation):
            specialize_to_one(s, 1, out_order)
        return
    got = specialize_to_one(s, 1, out_order)
    assert got == TruncatedSeries(1, {(j * r,): 1 for j in range(out_order // r + 1)}, out_order)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 12), st.integers(0, 8))
def test_specialize_explicit_bound_is_exact_criterion(r, e, in_order, out_order):
    s = expand(RationalExpr(ExponentPolynomial.constant(2), [(r, e)]), in_order)
    bound = Fraction(e, r) * out_order
    if in_order < out_order + bound:
        with pytest.raises(UnsoundTruncation):
            specialize_to_one(s, 1, out_order, elim_bound=bound)
    else:
        got = specialize_to_one(s, 1, out_order, elim_bound=bound)
        assert got == TruncatedSeries(1, {(j * r,): 1 for j in range(out_order // r + 1)}, out_order)


@settings(max_examples=200, deadline=None)
@given(series2(order=8), series2(order=8))
def test_specialize_commutes_with_addition(a, b):
    try:
        lhs = specialize_to_one(a + b, 1, 2, elim_bound=6)
    except UnsoundTruncation:
        return
    rhs = specialize_to_one(a, 1, 2, elim_bound=6) + specialize_to_one(b, 1, 2, elim_bound=6)
    assert lhs == rhs
