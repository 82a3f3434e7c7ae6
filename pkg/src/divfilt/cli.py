"""Command-line entry point.

Exit codes: 0 success, 1 disagreement or violation, 2 invalid input,
3 uncertifiable order.  On a nonzero exit every output line carries an
``ERROR`` prefix.  The default truncation order can be set with the
``DIVFILT_ORDER`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .blowup import (
    BlowupError,
    BlowupScript,
    BranchParametrization,
    ChartBlowup,
    HypersurfaceModel,
    UncertifiableOrder,
    branch_blowup_tower,
    curve_valuation,
    dim_quotient_hypersurface,
    exceptional_order,
    membership_g,
    poincare_abstract_hypersurface,
    poincare_hypersurface,
    quadric_script,
    resolution_length,
)
from .limits import (
    FamilyError,
    branch_corpus,
    branch_filtration_family,
    branch_series_family,
    check_sandwich,
    check_series_convergence,
    format_ext,
    quadric_corpus,
    quadric_filtration_family,
    quadric_series_family,
    toric_corpus,
    toric_filtration_family,
    toric_series_family,
)
from .poly import PolyParseError, parse_polynomial
from .series import (
    ExponentPolynomial,
    RationalExpr,
    SeriesError,
    TruncatedSeries,
    default_var_names,
    expand,
    series_equal_up_to,
)
from .toric import (
    Cone2D,
    PlumbingGraph,
    ToricError,
    arrow_vertex_after_blowups,
    blowup_graph_at_arrow,
    compute_zo,
    cyclic_quotient_cone,
    cyclic_quotient_graph,
    hilbert_basis,
    intersection_matrix_inverse_columns,
    poincare_toric_closed,
    poincare_toric_enumerated,
    reduce_zo_to_p,
)

ORDER_ENV = "DIVFILT_ORDER"
FALLBACK_ORDER = 10

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class Result:
    status: int = EXIT_OK
    lines: list[str] = field(default_factory=list)
    series: TruncatedSeries | None = None

    def add(self, line: str = "") -> None:
        self.lines.append(line)


def default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return FALLBACK_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{ORDER_ENV}={raw!r} is not an integer") from None
    if value < 0:
        raise InputError(f"{ORDER_ENV} must be nonnegative")
    return value


def _order(args) -> int:
    order = default_order() if args.order is None else args.order
    if order < 0:
        raise InputError("order must be nonnegative")
    return order


def _read_json(path: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _parse_vec(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"expected 'a,b', got {text!r}") from None
    return a, b


# toric-poincare -------------------------------------------------------------


def cmd_toric_poincare(args) -> Result:
    res = Result()
    order = _order(args)
    if args.cyclic:
        cone = cyclic_quotient_cone(*args.cyclic)
    elif args.cone:
        cone = Cone2D.from_json(_read_json(args.cone))
    else:
        raise InputError("give --cyclic N Q or --cone FILE")
    if args.weight:
        weights = [_parse_vec(w) for w in args.weight]
    elif args.m is not None:
        weights = [(1, args.m)]
    else:
        raise InputError("give --weight a,b or --m M")
    res.add(f"cone: gen1={cone.gen1} gen2={cone.gen2}")
    res.add("hilbert basis: " + " ".join(str(v) for v in hilbert_basis(cone)))
    res.add("weights: " + " ".join(str(w) for w in weights))
    enum = poincare_toric_enumerated(cone, weights, order)
    res.series = enum
    res.add(f"enumerated: {enum.format()}")
    if len(weights) == 1:
        closed = poincare_toric_closed(cone, weights[0])
        res.add(f"closed form: {closed.format()}")
        same, disc = series_equal_up_to(enum, expand(closed, order))
        if same:
            res.add("verdict: AGREE")
        else:
            res.status = EXIT_FAIL
            res.add(f"verdict: DISAGREE at {disc}")
    return res


# zo -----------------------------------------------------------------------------


def _keep_index(token: str, names: list[str], arrow: int | None) -> int:
    if token == "arrow":
        if arrow is None:
            raise InputError("graph has no arrow vertex")
        return arrow
    if token in names:
        return names.index(token)
    try:
        idx = int(token)
    except ValueError:
        raise InputError(f"unknown variable {token!r}; expected one of {names}, an index or 'arrow'") from None
    if not 0 <= idx < len(names):
        raise InputError(f"variable index {idx} out of range")
    return idx


def cmd_zo(args) -> Result:
    res = Result()
    if args.cyclic:
        g = cyclic_quotient_graph(*args.cyclic)
    elif args.graph:
        g = PlumbingGraph.from_json(_read_json(args.graph))
    else:
        raise InputError("give --graph FILE or --cyclic N Q")
    arrow = None
    if g.arrows:
        arrow = args.arrow_vertex if args.arrow_vertex is not None else min(g.arrows)
    if args.blowups:
        if arrow is None:
            raise InputError("--blowups needs a graph with an arrow")
        g0 = g
        g = blowup_graph_at_arrow(g0, arrow, args.blowups)
        arrow = arrow_vertex_after_blowups(g0, arrow, args.blowups)
    names = default_var_names(len(g.vertices))
    res.add("vertices: " + " ".join(f"{n}:{e}" for n, e in zip(names, g.vertices)))
    res.add("edges: " + " ".join(f"{names[a]}-{names[b]}" for a, b in sorted(g.edges)))
    if arrow is not None:
        cols = intersection_matrix_inverse_columns(g)
        res.add(f"arrow vertex: {names[arrow]} exponents: " + " ".join(str(x) for x in cols[arrow]))
    z = compute_zo(g)
    res.add(f"Z_o: {z.format(names)}")
    if args.reduce is not None:
        keep = _keep_index(args.reduce, names, arrow)
        order = _order(args)
        p = reduce_zo_to_p(z, [keep], order)
        res.series = p
        res.add(f"reduced ({names[keep]} kept, order {order}): {p.format()}")
    return res


# blowup-val -------------------------------------------------------------------


def _poly_arg(args, nvars: int):
    text = args.poly
    if args.poly_file:
        if not Path(args.poly_file).is_file():
            raise InputError(f"no such file: {args.poly_file}")
        text = Path(args.poly_file).read_text()
    if text is None:
        raise InputError("give --poly or --poly-file")
    return parse_polynomial(text, nvars)


def cmd_blowup_val(args) -> Result:
    res = Result()
    if args.quadric is not None:
        if args.quadric < 0:
            raise InputError("m must be nonnegative")
        f = _poly_arg(args, 3)
        res.add(f"f: {f.format()}")
        for m in range(args.quadric + 1):
            res.add(f"m={m} val={format_ext(exceptional_order(f, quadric_script(m)))}")
        res.add(f"G-valuation: {format_ext(membership_g(f))}")
    elif args.script:
        data = _read_json(args.script)
        script = BlowupScript.from_json(data, args.nvars)
        f = _poly_arg(args, script.nvars)
        res.add(f"f: {f.format()}")
        res.add(f"blow-ups: {script.blowup_count()}")
        res.add(f"val={format_ext(exceptional_order(f, script))}")
    elif args.branch:
        gamma = BranchParametrization.from_json(_read_json(args.branch))
        if args.m is None or args.m < 1:
            raise InputError("--branch needs --m M with M >= 1")
        f = _poly_arg(args, gamma.nvars)
        target = curve_valuation(f, gamma)
        res.add(f"f: {f.format()}")
        res.add(f"resolution after: {resolution_length(gamma)} blow-ups")
        tower = branch_blowup_tower(gamma, args.m, args.tie_break)
        vals = []
        for m in range(1, args.m + 1):
            script = BlowupScript(2, tower.script.steps[: _steps_for(tower.script, m)])
            vals.append(exceptional_order(f, script))
            res.add(f"m={m} val={format_ext(vals[-1])}")
        res.add(f"curve valuation: {format_ext(target)}")
        stable = None
        for m in range(args.m, 0, -1):
            if vals[m - 1] != target:
                break
            stable = m
        res.add(f"equal to curve valuation from m={stable}" if stable else "not yet equal to curve valuation")
    else:
        raise InputError("give --quadric M, --script FILE or --branch FILE")
    return res


def _steps_for(script: BlowupScript, m: int) -> int:
    """Number of steps covering the first ``m`` blow-ups (including their recentring)."""
    seen = 0
    for i, st in enumerate(script.steps):
        if isinstance(st, ChartBlowup):
            if seen == m:
                return i
            seen += 1
    return len(script.steps)


# hyp-poincare -------------------------------------------------------------------


def cmd_hyp_poincare(args) -> Result:
    res = Result()
    order = _order(args)
    if args.weights:
        try:
            weights = [int(w) for w in args.weights.split(",")]
        except ValueError:
            raise InputError(f"bad weights {args.weights!r}") from None
        if args.degree is None:
            raise InputError("--weights needs --degree")
        p = poincare_abstract_hypersurface(weights, args.degree)
        res.add(f"P: {p.format()}")
        res.series = expand(p, order)
        res.add(f"expanded: {res.series.format()}")
        return res
    if args.m is None:
        raise InputError("give --m M or --weights W --degree D")
    model = HypersurfaceModel(args.m)
    p = poincare_hypersurface(model)
    res.add(f"P: {p.format()}")
    s = expand(p, order)
    res.series = s
    res.add(f"expanded: {s.format()}")
    base = poincare_abstract_hypersurface((1, 1, 1), 2)
    shift = RationalExpr(ExponentPolynomial.monomial((model.m + model.c,)))
    fe = p.equivalent(p * shift + base)
    res.add(f"functional equation P = P*t^{model.m + model.c} + {base.format()}: {'HOLDS' if fe else 'FAILS'}")
    coeffs = s.coefficients_1d()
    counts = [dim_quotient_hypersurface(model, ell) for ell in range(order + 1)]
    res.add("brute-force dims: " + " ".join(str(c) for c in counts))
    ok = [int(c) for c in coeffs] == counts
    res.add(f"dims vs series: {'AGREE' if ok else 'DISAGREE'}")
    if not (fe and ok):
        res.status = EXIT_FAIL
    return res


# converge -------------------------------------------------------------------------


def cmd_converge(args) -> Result:
    res = Result()
    order = _order(args)
    m_max = order if args.mmax is None else args.mmax
    if m_max < order:
        raise InputError(f"--mmax must be at least the order ({order})")
    if args.toric:
        n, q = args.toric
        sfam = toric_series_family(n, q)
        ffam = toric_filtration_family(n, q)
        corpus = toric_corpus(n, q, args.corpus_size, args.seed)
    elif args.quadric:
        sfam = quadric_series_family()
        ffam = quadric_filtration_family()
        corpus = quadric_corpus(args.corpus_size, args.seed)
    elif args.branch:
        gamma = BranchParametrization.from_json(_read_json(args.branch))
        sfam = branch_series_family(gamma, order)
        ffam = branch_filtration_family(gamma)
        corpus = branch_corpus(args.corpus_size, args.seed)
        res.add(f"index m counts blow-ups after the embedded resolution ({resolution_length(gamma)} blow-ups)")
    else:
        raise InputError("give --toric N Q, --quadric or --branch FILE")
    conv = check_series_convergence(sfam, order, m_max)
    res.add(f"limit: {conv.limit}")
    res.add("stabilization profile (degree, first agreeing m, bound M(l) = l):")
    res.lines += [p.line() for p in conv.profile]
    sand = check_sandwich(ffam, corpus, m_max)
    shown = sand.cases if args.verbose else sand.violations + sand.errors
    res.add(f"sandwich: {len(corpus)} elements, m = 0..{m_max}")
    res.lines += [c.line() for c in shown]
    res.add("[summary]")
    res.add(f"convergence={'PASS' if conv.ok else 'FAIL'}")
    res.add(f"sandwich={'PASS' if sand.ok else 'FAIL'}")
    res.add(f"sandwich_cases={len(sand.cases)}")
    ok = conv.ok and sand.ok
    res.add(f"status={'PASS' if ok else 'FAIL'}")
    if not ok:
        res.status = EXIT_FAIL
    return res


# expand ----------------------------------------------------------------------------


def parse_rational_expr(data) -> tuple[RationalExpr, list[str] | None]:
    """``{"vars": [...], "numerator": [[coeff, [exps]]...], "denominator": [[[exps], mult]...]}``."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        names = data.get("vars")
        num_terms = {}
        for coeff, exps in data["numerator"]:
            key = tuple(Fraction(str(e)) for e in exps)
            num_terms[key] = num_terms.get(key, 0) + Fraction(str(coeff))
        nvars = len(next(iter(num_terms))) if num_terms else len(names or [])
        factors = {}
        for exps, mult in data.get("denominator", []):
            key = tuple(Fraction(str(e)) for e in exps)
            factors[key] = factors.get(key, 0) + int(mult)
        expr = RationalExpr(ExponentPolynomial(nvars, num_terms), factors)
    except (KeyError, TypeError, ValueError, StopIteration) as exc:
        raise InputError(f"malformed expression: {exc}") from exc
    if names is not None and len(names) != expr.nvars:
        raise InputError("number of variable names does not match the exponents")
    return expr, names


def cmd_expand(args) -> Result:
    res = Result()
    order = _order(args)
    if args.expr_file:
        data = _read_json(args.expr_file)
    elif args.expr:
        try:
            data = json.loads(args.expr)
        except json.JSONDecodeError as exc:
            raise InputError(f"--expr is not valid JSON ({exc})") from exc
    else:
        raise InputError("give --expr JSON or --expr-file FILE")
    expr, names = parse_rational_expr(data)
    res.add(f"expression: {expr.format(names)}")
    s = expand(expr, order)
    res.series = s
    res.add(f"series: {s.format(names)}")
    return res


# parser and main -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divfilt",
        description="Poincaré series of divisorial filtrations and their limits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def order_opt(p):
        p.add_argument("--order", type=int, default=None, help=f"truncation order (default ${ORDER_ENV} or {FALLBACK_ORDER})")

    def output_opt(p):
        p.add_argument("--output", help="write the resulting series in golden-file format")

    p = sub.add_parser("toric-poincare", help="Poincaré series of a weight filtration on a 2-dimensional cone")
    p.add_argument("--cyclic", nargs=2, type=int, metavar=("N", "Q"))
    p.add_argument("--cone", help="JSON file {\"gen1\": [a, b], \"gen2\": [c, d]}")
    p.add_argument("--weight", action="append", help="weight vector a,b (repeat for several indices)")
    p.add_argument("--m", type=int, help="shorthand for --weight 1,M")
    order_opt(p)
    output_opt(p)
    p.set_defaults(func=cmd_toric_poincare)

    p = sub.add_parser("zo", help="topological Poincaré series of a plumbing graph")
    p.add_argument("--graph", help="JSON file {\"vertices\": [...], \"edges\": [...], \"arrows\": {...}}")
    p.add_argument("--cyclic", nargs=2, type=int, metavar=("N", "Q"))
    p.add_argument("--blowups", type=int, default=0, help="blow up this many times at the arrow")
    p.add_argument("--arrow-vertex", type=int)
    p.add_argument("--reduce", metavar="VAR", help="keep this variable (name, index or 'arrow')")
    order_opt(p)
    output_opt(p)
    p.set_defaults(func=cmd_zo)

    p = sub.add_parser("blowup-val", help="exceptional orders along blow-up towers")
    p.add_argument("--poly", help="polynomial, infix text or sparse 'coeff i j k' lines")
    p.add_argument("--poly-file")
    p.add_argument("--quadric", type=int, metavar="M", help="the xy - z^2 tower with M extra blow-ups")
    p.add_argument("--script", help="JSON blow-up script")
    p.add_argument("--nvars", type=int, help="variable count for a script given as a bare list")
    p.add_argument("--branch", help="JSON branch parametrization")
    p.add_argument("--m", type=int, help="number of point blow-ups along the branch")
    p.add_argument("--tie-break", choices=("first", "last"), default="first")
    p.set_defaults(func=cmd_blowup_val)

    p = sub.add_parser("hyp-poincare", help="Poincaré series of the quadric tower or a weighted hypersurface")
    p.add_argument("--m", type=int)
    p.add_argument("--weights", help="comma separated positive weights")
    p.add_argument("--degree", type=int)
    order_opt(p)
    output_opt(p)
    p.set_defaults(func=cmd_hyp_poincare)

    p = sub.add_parser("converge", help="stabilization and convergence checks")
    p.add_argument("--toric", nargs=2, type=int, metavar=("N", "Q"))
    p.add_argument("--quadric", action="store_true")
    p.add_argument("--branch", help="JSON branch parametrization")
    p.add_argument("--mmax", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corpus-size", type=int, default=20, help="number of random corpus elements")
    p.add_argument("--verbose", action="store_true", help="print every sandwich case")
    order_opt(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("expand", help="expand a rational expression into a truncated series")
    p.add_argument("--expr", help="inline JSON expression")
    p.add_argument("--expr-file")
    order_opt(p)
    output_opt(p)
    p.set_defaults(func=cmd_expand)
    return parser


def run(argv: Sequence[str] | None = None) -> Result:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = args.func(args)
    except UncertifiableOrder as exc:
        return Result(EXIT_UNCERTIFIED, [f"uncertifiable order: {exc}"])
    except (InputError, ToricError, BlowupError, PolyParseError, SeriesError, FamilyError) as exc:
        return Result(EXIT_INPUT, [f"{type(exc).__name__}: {exc}"])
    out = getattr(args, "output", None)
    if out and res.series is not None and res.status == EXIT_OK:
        Path(out).write_text(res.series.dumps())
        res.add(f"wrote {out}")
    return res


def main(argv: Sequence[str] | None = None) -> int:
    res = run(argv)
    if res.status == EXIT_OK:
        for line in res.lines:
            print(line)
    else:
        for line in res.lines:
            print(f"ERROR: {line}", file=sys.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
