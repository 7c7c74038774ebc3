"""Log canonical thresholds: exact for plane curves, bounds in higher dimension."""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Any

import sympy

from .errors import InputError, TruncationError
from .linalg import inverse
from .numfield import NumberField, extend, factor_squarefree, squarefree_decomposition
from .polyring import Germ, WeightVector, blowup_chart, taylor_component, weighted_leading, weighted_order
from .singclass import classify_cubic
from .symbridge import from_poly, repeated_factor_through_origin, require_reduced, to_poly


class Kind(str, Enum):
    EXACT = "Exact"
    UPPER = "UpperBound"
    LOWER = "LowerBound"


@dataclass(frozen=True)
class Threshold:
    """A log canonical threshold or a one-sided bound for it.

    ``strict`` marks a lower bound that is known to be strict. ``variables``
    records which coordinates the germ depends on, so that sums over
    disjoint variable sets can be checked.
    """

    value: Fraction
    kind: Kind
    upper: str | None = None
    lower: str | None = None
    variables: frozenset[int] = frozenset()
    strict: bool = False
    certificate: Any = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.value <= 0:
            raise InputError("thresholds are positive")
        if self.kind is Kind.EXACT and (self.upper is None or self.lower is None):
            raise InputError("an exact threshold needs both certificates")

    def with_variables(self, variables: set[int] | frozenset[int]) -> Threshold:
        return replace(self, variables=frozenset(variables))

    def exceeds(self, bound: Fraction) -> bool:
        """Whether the true threshold is certified to be ``> bound``."""
        if self.kind is Kind.UPPER:
            return False
        return self.value > bound or (self.strict and self.value >= bound)


# --- plane curves ------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceptionalDivisor:
    """One blow-up of the embedded resolution.

    ``mult`` is the order of the total transform along the divisor and
    ``discrepancy`` its coefficient in ``K_Y - pi^* K``. ``parents`` are the
    earlier divisors through the blown-up point.
    """

    index: int
    mult: int
    discrepancy: int
    parents: tuple[int, ...]
    center_mult: int
    conjugates: int = 1
    field_degree: int = 1

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.discrepancy + 1, self.mult)


@dataclass(frozen=True)
class ResolutionTree:
    divisors: tuple[ExceptionalDivisor, ...]

    def threshold(self) -> Fraction:
        return min([Fraction(1)] + [d.ratio for d in self.divisors])

    def realizing(self) -> list[ExceptionalDivisor]:
        t = self.threshold()
        return [d for d in self.divisors if d.ratio == t]


_EXACT_ORDER = 10**6
_MAX_BLOWUPS = 2000


def _restrict_to_axis(g: Germ, var: int) -> list[Any]:
    """Coefficients (low degree first) of ``g`` on ``{x_var = 0}`` in the other variable."""
    other = 1 - var
    coeffs: dict[int, Any] = {}
    for e, c in g.items():
        if e[var] == 0:
            coeffs[e[other]] = c
    if not coeffs:
        return []
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


def _root_order(poly: list[Any]) -> int:
    return next(i for i, c in enumerate(poly) if c != 0)


class _Resolver:
    def __init__(self, trunc: int) -> None:
        self.trunc = trunc
        self.divisors: list[ExceptionalDivisor] = []

    def visit(self, f: Germ, divs: dict[int, int], field_: NumberField | None, conj: int) -> None:
        m = f.mult()
        if m == 0:
            return
        if m == 1:
            if not divs:
                return
            if len(divs) == 1:
                (var,) = divs
                other = tuple(int(i != var) for i in range(2))
                if f.coeff(other) != 0:
                    return
        parents = tuple(sorted(divs.values()))
        mult = m + sum(self.divisors[p].mult for p in parents)
        if m >= 2 and mult > self.trunc:
            raise TruncationError(
                f"resolution needs order {mult} terms but the germ is known to order {self.trunc}"
            )
        if len(self.divisors) >= _MAX_BLOWUPS:
            raise ArithmeticError("resolution did not terminate")
        disc = 1 + sum(self.divisors[p].discrepancy for p in parents)
        degree = 1 if field_ is None else len(field_.minpoly) - 1
        idx = len(self.divisors)
        self.divisors.append(ExceptionalDivisor(idx, mult, disc, parents, m, conj, degree))

        # chart A: x2 -> x1*x2, exceptional divisor {x1 = 0}
        sa, _ = blowup_chart(f, [0, 1], 0)
        old_a = {1: divs[1]} if 1 in divs else {}
        on_e = _restrict_to_axis(sa, 0)
        k0 = _root_order(on_e)
        if k0 >= 2 or (k0 >= 1 and old_a):
            self.visit(sa, {0: idx, **old_a}, field_, conj)
        rest = on_e[k0:]
        if len(rest) > 1:
            self._visit_roots(sa, rest, idx, field_, conj)

        # chart B origin: x1 -> x1*x2, exceptional divisor {x2 = 0}
        sb, _ = blowup_chart(f, [0, 1], 1)
        old_b = {0: divs[0]} if 0 in divs else {}
        kb = _root_order(_restrict_to_axis(sb, 1))
        if kb >= 2 or (kb >= 1 and old_b):
            self.visit(sb, {1: idx, **old_b}, field_, conj)

    def _visit_roots(self, sa: Germ, poly: list[Any], idx: int, field_: NumberField | None, conj: int) -> None:
        for part, mult in squarefree_decomposition(poly):
            if mult < 2:
                continue
            for factor, data in factor_squarefree(field_, part):
                if len(factor) == 2:
                    root, g, fld = -factor[0], sa, field_
                    scale = 1
                else:
                    fld, embed, root = extend(field_, factor, data, f"a{idx}")
                    g = sa.map_coeffs(embed)
                    scale = len(factor) - 1
                shifted = g.compose([Germ.variable(0, 2, g.order), Germ.variable(1, 2, g.order) + root])
                self.visit(shifted, {0: idx}, fld, conj * scale)


def resolve_curve(g: Germ) -> ResolutionTree:
    """Embedded resolution of a reduced plane curve germ at the origin."""
    if g.nvars != 2:
        raise InputError("curve germs need exactly two variables")
    require_reduced(g)
    if g.coeff((0, 0)) != 0:
        raise InputError("curve germ does not pass through the origin")
    resolver = _Resolver(g.order)
    resolver.visit(Germ(2, g.terms, _EXACT_ORDER), {}, None, 1)
    return ResolutionTree(tuple(resolver.divisors))


def curve_lct(g: Germ) -> Threshold:
    """Exact threshold of a reduced plane curve germ via embedded resolution."""
    tree = resolve_curve(g)
    value = tree.threshold()
    return Threshold(
        value,
        Kind.EXACT,
        upper="divisorial valuation on the resolution",
        lower="embedded log resolution",
        variables=frozenset(g.variables_used()),
        certificate=tree,
    )


# --- weights -------------------------------------------------------------------------------


def _squarefree(g: Germ) -> bool:
    p = to_poly(g)
    common = p
    for x in p.gens:
        common = sympy.gcd(common, p.diff(x))
    return common.total_degree() == 0


def weighted_bound(w: WeightVector, g: Germ) -> Threshold:
    """Upper bound ``sum(w) / w(g)``, upgraded to exact when the leading part allows it."""
    value = w.total() / weighted_order(w, g)
    lead = weighted_leading(w, g)
    variables = frozenset(g.variables_used())
    cert = f"weights {w}"
    exact = False
    if g.nvars == 2 and _squarefree(lead):
        exact = True
    elif g.nvars == 3 and len(set(w.weights)) == 1 and lead.is_homogeneous(3) and classify_cubic(lead).is_lc:
        exact = True
    if exact:
        return Threshold(
            min(Fraction(1), value),
            Kind.EXACT,
            upper=cert,
            lower="weighted leading part is log canonical away from the origin",
            variables=variables,
            certificate=w,
        )
    return Threshold(value, Kind.UPPER, upper=cert, variables=variables, certificate=w)


def _newton_vertices(g: Germ) -> list[tuple[int, ...]]:
    support = sorted(set(g.terms))
    return [a for a in support if not any(b != a and all(x <= y for x, y in zip(b, a)) for b in support)]


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    try:
        inv = inverse(rows)
    except ValueError:
        return None
    return [sum(r * b for r, b in zip(row, rhs)) for row in inv]


def weight_search(g: Germ) -> tuple[WeightVector, Threshold]:
    """Weights minimizing ``sum(w) / w(g)`` over the Newton polyhedron.

    Solves the linear program ``min sum(w)`` subject to ``a . w >= 1`` for
    exponents ``a`` of ``g`` and ``w >= 0`` by exact vertex enumeration.
    """
    if g.is_zero():
        raise InputError("weight search needs a nonzero germ")
    n = g.nvars
    exps = _newton_vertices(g)
    if any(sum(a) == 0 for a in exps):
        raise InputError("germ does not vanish at the origin")
    constraints = [([Fraction(x) for x in a], Fraction(1)) for a in exps]
    constraints += [([Fraction(int(i == j)) for j in range(n)], Fraction(0)) for i in range(n)]

    def feasible(w: list[Fraction]) -> bool:
        return all(v >= 0 for v in w) and all(sum(a * x for a, x in zip(row, w)) >= 1 for row, _ in constraints[: len(exps)])

    vertices = set()
    for combo in combinations(constraints, n):
        w = _solve([row for row, _ in combo], [b for _, b in combo])
        if w is not None and feasible(w):
            vertices.add(tuple(w))
    best = min(sum(v) for v in vertices)
    optimal = [v for v in vertices if sum(v) == best]
    candidates = [v for v in optimal if all(x > 0 for x in v)]
    if not candidates:
        candidates = [tuple((x + y) / 2 for x, y in zip(a, b)) for a, b in combinations(optimal, 2)]
        candidates = [v for v in candidates if all(x > 0 for x in v)]
    if not candidates:
        eps = Fraction(1, 100)
        candidates = [tuple(x + eps for x in v) for v in optimal]
    w = WeightVector(min(candidates, key=lambda v: (sum(v), v))).primitive()
    return w, weighted_bound(w, g)


# --- combinations and lemmas -------------------------------------------------------------------------


def sum_lct(t1: Threshold, t2: Threshold) -> Threshold:
    """Threshold of ``f1 + f2`` in disjoint variables: ``min(1, c1 + c2)``."""
    if t1.variables & t2.variables:
        raise InputError("summands share variables")
    kinds = {t1.kind, t2.kind}
    if kinds == {Kind.EXACT}:
        kind = Kind.EXACT
    elif kinds <= {Kind.EXACT, Kind.UPPER}:
        kind = Kind.UPPER
    elif kinds <= {Kind.EXACT, Kind.LOWER}:
        kind = Kind.LOWER
    else:
        raise InputError("cannot combine an upper bound with a lower bound")
    total = t1.value + t2.value
    value = min(Fraction(1), total)
    strict = kind is Kind.LOWER and (t1.strict or t2.strict) and total <= 1
    return Threshold(
        value,
        kind,
        upper="sum of upper bounds" if kind is not Kind.LOWER else None,
        lower="sum of lower bounds" if kind is not Kind.UPPER else None,
        variables=t1.variables | t2.variables,
        strict=strict,
        certificate=(t1, t2),
    )


def double_point_klt(g: Germ) -> bool:
    """``(C^n, g/2)`` is klt when ``g`` is reduced of multiplicity exactly 2."""
    require_reduced(g)
    return g.coeff((0,) * g.nvars) == 0 and taylor_component(g, 1).is_zero() and not taylor_component(g, 2).is_zero()


RECORDED_TRIPLE_POINT = Threshold(
    Fraction(1, 2), Kind.LOWER, lower="recorded bound for triple points with non-lc cubic cone", strict=True
)


@dataclass(frozen=True)
class PencilCertificate:
    """Outcome of checking generic members of a pencil of plane sections.

    On success ``thresholds`` holds the exact curve thresholds at the
    sampled parameters. On failure ``reason`` explains what was degenerate.
    """

    ok: bool
    pencil: tuple[int, int]
    samples: tuple[int, ...] = ()
    thresholds: tuple[Threshold, ...] = ()
    witness: str | None = None
    reason: str | None = None

    @property
    def minimum(self) -> Fraction | None:
        return min((t.value for t in self.thresholds), default=None)


def pencil_klt_certificate(
    g: Germ, pencil: tuple[int, int] = (1, 2), samples: int = 5, seed: int = 0
) -> PencilCertificate:
    """Inversion-of-adjunction check along sections ``x_a = lam * x_b``.

    ``pencil = (a, b)`` (0-based). The witness is the first coefficient of
    the restricted quartic, as a polynomial in ``lam``, that keeps the curve
    in the corollary form; sampled parameters avoid its roots.
    """
    if g.nvars != 3:
        raise InputError("pencil certificates need a germ in three variables")
    a, b = pencil
    if a == b or not {a, b} <= {0, 1, 2}:
        raise InputError("pencil needs two distinct variable indices")
    lead = ({0, 1, 2} - {a, b}).pop()
    xs = sympy.symbols("x1:4")
    lam = sympy.Symbol("lam")
    expr = to_poly(g, xs).as_expr().subs(xs[a], lam * xs[b])
    curve = sympy.Poly(expr, xs[lead], xs[b])
    cubic = {m: c for m, c in curve.terms() if sum(m) == 3}
    if len(cubic) != 1 or next(iter(cubic))[0] not in (2, 3):
        return PencilCertificate(False, pencil, reason="cubic term is not x^2*y or x^3 on the sections")
    (lead_exp, cubic_coeff), = cubic.items()
    k = lead_exp[0] - 1
    quartic = dict((m, c) for m, c in curve.terms() if sum(m) == 4)
    witness = next((quartic[(i, 4 - i)] for i in range(k) if sympy.expand(quartic.get((i, 4 - i), 0)) != 0), None)
    if witness is None:
        return PencilCertificate(False, pencil, reason="quartic conditions vanish identically on the pencil")
    rng = random.Random(seed)
    chosen: list[int] = []
    results: list[Threshold] = []
    tried: set[int] = set()
    while len(chosen) < samples and len(tried) < 101:
        val = rng.randint(-50, 50)
        if val in tried:
            continue
        tried.add(val)
        if witness.subs(lam, val) == 0 or cubic_coeff.subs(lam, val) == 0:
            continue
        sec = sympy.Poly(curve.as_expr().subs(lam, val), xs[lead], xs[b])
        germ = from_poly(sec, 2, g.order)
        germ = Germ(2, germ.terms, g.order, g.dropped)
        if repeated_factor_through_origin(germ):
            continue
        chosen.append(val)
        results.append(curve_lct(germ))
    if len(chosen) < samples:
        return PencilCertificate(False, pencil, reason="too few admissible section parameters")
    ok = all(t.value > Fraction(1, 2) for t in results)
    return PencilCertificate(
        ok,
        pencil,
        tuple(chosen),
        tuple(results),
        witness=str(witness),
        reason=None if ok else "a sampled section has threshold at most 1/2",
    )
