"""Classification of hypersurface germs by their low-order Taylor data."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any

import sympy

from .errors import InputError, NotSingularError
from .linalg import det, inverse, rank
from .polyring import (
    DEFAULT_ORDER,
    Germ,
    LinearChange,
    WeightVector,
    implicit_eliminate,
    restrict,
    substitute,
    taylor_component,
)
from .symbridge import from_poly, linear_factors, require_reduced, to_poly


# --- quadratic part -----------------------------------------------------------------


def quadratic_matrix(g: Germ) -> list[list[Fraction]]:
    """Symmetric matrix ``Q`` with ``f_2(x) = x^T Q x``."""
    n = g.nvars
    q = [[Fraction(0)] * n for _ in range(n)]
    for e, c in taylor_component(g, 2).items():
        idx = [i for i, a in enumerate(e) for _ in range(a)]
        i, j = idx
        if i == j:
            q[i][i] = c
        else:
            q[i][j] = q[j][i] = c / 2
    return q


def _congruence_diagonalize(q: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """``P`` invertible with ``P^T Q P = diag(d_1..d_r, 0..0)``; returns ``(P, [d_1..d_r])``."""
    n = len(q)
    a = [row[:] for row in q]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i: int, j: int) -> None:
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    def add_col(dst: int, src: int, c: Fraction) -> None:
        # basis change e_dst += c * e_src
        for row in a:
            row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        for row in p:
            row[dst] += c * row[src]

    diag: list[Fraction] = []
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            add_col(pair[0], pair[1], Fraction(1))
            piv = pair[0]
        swap(k, piv)
        d = a[k][k]
        for j in range(k + 1, n):
            if a[k][j] != 0:
                add_col(j, k, -a[k][j] / d)
        diag.append(d)
    return p, diag


@dataclass(frozen=True)
class QuadReport:
    """Hessian rank and the residual germ of the splitting lemma.

    ``tail`` lives in the last ``n - rank`` coordinates after ``change``;
    it is ``None`` when the quadratic part is nondegenerate.
    """

    rank: int
    tail: Germ | None
    change: LinearChange
    squares: tuple[Fraction, ...]


def hessian_split(g: Germ) -> QuadReport:
    """Split off the nondegenerate quadratic part: ``g ~ sum d_i y_i^2 + tail(z)``."""
    n = g.nvars
    if g.coeff((0,) * n) != 0 or not taylor_component(g, 1).is_zero():
        raise NotSingularError("germ has a nonzero constant or linear part")
    q = quadratic_matrix(g)
    p, diag = _congruence_diagonalize(q)
    r = len(diag)
    change = LinearChange(p)
    g1 = substitute(g, change)
    if r == n:
        return QuadReport(r, None, change, tuple(diag))
    if r == 0:
        return QuadReport(0, g1, change, ())
    work = max(g.order - 1, 1)
    system = [g1.derivative(i).scale(1 / (2 * diag[i])).with_order(work) for i in range(r)]
    phi = implicit_eliminate(system, list(range(r)), work)
    images = [phi[i] if i < r else Germ.variable(i, n, g.order) for i in range(n)]
    tail = g1.compose(images, g.order)
    return QuadReport(r, tail.select_variables(list(range(r, n))), change, tuple(diag))


# --- plane cubics -------------------------------------------------------------------


class CubicTag(str, Enum):
    ZERO = "Zero"
    SMOOTH = "SmoothCubic"
    NODAL = "NodalCubic"
    CUSPIDAL = "CuspidalCubic"
    CONIC_TRANSVERSAL_LINE = "ConicPlusTransversalLine"
    CONIC_TANGENT_LINE = "ConicPlusTangentLine"
    TRIANGLE = "Triangle"
    CONCURRENT_LINES = "ThreeConcurrentLines"
    DOUBLE_LINE_PLUS_LINE = "DoubleLinePlusLine"
    TRIPLE_LINE = "TripleLine"


LC_CUBICS = frozenset({CubicTag.SMOOTH, CubicTag.NODAL, CubicTag.CONIC_TRANSVERSAL_LINE, CubicTag.TRIANGLE})


@dataclass(frozen=True)
class CubicPlaneType:
    tag: CubicTag
    is_lc: bool

    @classmethod
    def of(cls, tag: CubicTag) -> CubicPlaneType:
        return cls(tag, tag in LC_CUBICS)


def _monomials(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def tjurina_total(c: Germ, degree: int = 6) -> int:
    """Total Tjurina number of a reduced plane cubic.

    Equals ``dim (S/J)_degree`` for the Jacobian ideal ``J``; the Hilbert
    function of ``S/J`` is already constant in degree 6 for cubics.
    """
    partials = [c.derivative(i) for i in range(3)]
    cols = {e: k for k, e in enumerate(_monomials(3, degree))}
    rows = []
    for m in _monomials(3, degree - 2):
        for p in partials:
            row = [Fraction(0)] * len(cols)
            for e, v in p.items():
                row[cols[tuple(a + b for a, b in zip(e, m))]] = v
            rows.append(row)
    return len(cols) - rank(rows)


def _conic_det(p: sympy.Poly) -> Any:
    g = from_poly(p, 3, 2)
    return det(quadratic_matrix(g))


def classify_cubic(c: Germ) -> CubicPlaneType:
    """Projective orbit type of a ternary cubic form."""
    if c.nvars != 3:
        raise InputError("a plane cubic needs three variables")
    if c.is_zero():
        return CubicPlaneType.of(CubicTag.ZERO)
    if not c.is_homogeneous(3):
        raise InputError("cubic must be homogeneous of degree 3")
    p = to_poly(c.with_order(max(c.order, 3)))
    common = p
    for x in p.gens:
        common = sympy.gcd(common, p.diff(x))
    sing_deg = common.total_degree()
    if sing_deg == 2:
        return CubicPlaneType.of(CubicTag.TRIPLE_LINE)
    if sing_deg == 1:
        return CubicPlaneType.of(CubicTag.DOUBLE_LINE_PLUS_LINE)
    tau = tjurina_total(c)
    if tau == 0:
        return CubicPlaneType.of(CubicTag.SMOOTH)
    if tau == 1:
        return CubicPlaneType.of(CubicTag.NODAL)
    if tau == 4:
        return CubicPlaneType.of(CubicTag.CONCURRENT_LINES)
    lines = linear_factors(p)
    if tau == 2:
        return CubicPlaneType.of(CubicTag.CONIC_TRANSVERSAL_LINE if lines else CubicTag.CUSPIDAL)
    if tau == 3:
        for line, _ in lines:
            conic = sympy.div(p, line)[0]
            if _conic_det(conic) != 0:
                return CubicPlaneType.of(CubicTag.CONIC_TANGENT_LINE)
        return CubicPlaneType.of(CubicTag.TRIANGLE)
    raise ArithmeticError(f"unexpected Tjurina number {tau} for a reduced cubic")


# --- coordinate normalization helpers ---------------------------------------------------


def _complete_basis(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Extend independent row vectors to an invertible ``n x n`` matrix."""
    out = [list(r) for r in rows]
    for i in range(n):
        if len(out) == n:
            break
        cand = out + [[Fraction(int(j == i)) for j in range(n)]]
        if rank(cand) == len(cand):
            out = cand
    return out


def change_to_forms(forms: list[list[Fraction]], n: int) -> LinearChange:
    """Change after which the given linear forms become ``y_1, y_2, ...``."""
    m = _complete_basis(forms, n)
    return LinearChange(inverse(m))


def _linear_coeffs(p: sympy.Poly, n: int) -> list[Fraction]:
    g = from_poly(p, n, 1)
    return [g.coeff(tuple(int(j == i) for j in range(n))) for i in range(n)]


# --- screens ---------------------------------------------------------------------------------


class Lc1Tag(str, Enum):
    MULT_AT_LEAST_3 = "MultAtLeast3"
    RANK_ONE_CUBIC_ZERO = "RankOneCubicZero"
    RANK_ONE_CUBIC_CUBE = "RankOneCubicCube"
    NOT_STRICTLY_LC = "NotStrictlyLc"


@dataclass(frozen=True)
class Lc1Verdict:
    tag: Lc1Tag
    rank: int
    normalized: Germ | None = None


def _check_surface_germ(g: Germ) -> None:
    if g.nvars != 3:
        raise InputError("screens expect a germ in three variables")
    require_reduced(g)
    if g.coeff((0, 0, 0)) != 0:
        raise InputError("germ does not vanish at the origin")
    if not taylor_component(g, 1).is_zero():
        raise NotSingularError("germ has a nonzero linear part")


def strict_lc1_screen(g: Germ) -> Lc1Verdict:
    """Necessary Taylor conditions for ``(C^3, D)`` to be strictly lc."""
    _check_surface_germ(g)
    q = quadratic_matrix(g)
    r = rank(q)
    if r == 0:
        return Lc1Verdict(Lc1Tag.MULT_AT_LEAST_3, 0)
    if r >= 2:
        return Lc1Verdict(Lc1Tag.NOT_STRICTLY_LC, r)
    l = next(row for row in q if any(row))
    g1 = substitute(g, change_to_forms([l], 3))
    c3 = taylor_component(restrict(g1, 0), 3)
    if c3.is_zero():
        return Lc1Verdict(Lc1Tag.RANK_ONE_CUBIC_ZERO, 1, g1)
    p = to_poly(c3)
    common = p
    for x in p.gens:
        common = sympy.gcd(common, p.diff(x))
    if common.total_degree() != 2:
        return Lc1Verdict(Lc1Tag.NOT_STRICTLY_LC, 1, g1)
    m = _linear_coeffs(linear_factors(p)[0][0], 3)
    g2 = substitute(g1, change_to_forms([[Fraction(1), Fraction(0), Fraction(0)], m], 3))
    quartic = taylor_component(restrict(restrict(g2, 0), 1), 4)
    tag = Lc1Tag.RANK_ONE_CUBIC_CUBE if quartic.is_zero() else Lc1Tag.NOT_STRICTLY_LC
    return Lc1Verdict(tag, 1, g2)


class Lc2Tag(str, Enum):
    CUBIC_ZERO = "CubicZero"
    DOUBLE_LINE_PLUS_LINE = "DoubleLinePlusLineCase"
    TRIPLE_LINE = "TripleLineCase"
    KLT = "KltCertified"
    NOT_STRICTLY_LC = "NotStrictlyLc"


class Certificate(str, Enum):
    DOUBLE_POINT = "double-point lemma"
    TRIPLE_POINT_WEIGHTED = "triple-point lemma (lc cubic cone, weights 1,1,1)"
    TRIPLE_POINT_RECORDED = "triple-point lemma (recorded external bound > 1/2)"
    X2Y_COROLLARY = "x1^2*x2 corollary"
    X3_COROLLARY = "x1^3 corollary"


@dataclass(frozen=True)
class Lc2Verdict:
    """Outcome of the 2-complement screen.

    For weighted certificates ``weights`` applies to ``witness``, a germ in
    which the cited weight bound exceeds 1/2.
    """

    tag: Lc2Tag
    certificate: Certificate | None = None
    cubic: CubicPlaneType | None = None
    normalized: Germ | None = None
    weights: WeightVector | None = None
    witness: Germ | None = None
    notes: dict = field(default_factory=dict)


def _section_curve(g: Germ, lam: int) -> Germ:
    """Restriction of ``g`` to ``y3 = lam*y2`` as a germ in ``(y1, y2)``."""
    repl = Germ.variable(1, 3, g.order).scale(lam)
    return restrict(g, 2, repl).select_variables([0, 1])


def strict_lc2_screen(g: Germ) -> Lc2Verdict:
    """Screen for ``(C^3, D/2)`` being strictly lc, with klt certificates."""
    _check_surface_germ(g)
    if not taylor_component(g, 2).is_zero():
        return Lc2Verdict(Lc2Tag.KLT, Certificate.DOUBLE_POINT)
    f3 = taylor_component(g, 3)
    if f3.is_zero():
        return Lc2Verdict(Lc2Tag.CUBIC_ZERO)
    cubic = classify_cubic(f3)
    if cubic.tag not in (CubicTag.DOUBLE_LINE_PLUS_LINE, CubicTag.TRIPLE_LINE):
        if cubic.is_lc:
            return Lc2Verdict(
                Lc2Tag.KLT, Certificate.TRIPLE_POINT_WEIGHTED, cubic, weights=WeightVector([1, 1, 1]), witness=g
            )
        return Lc2Verdict(Lc2Tag.KLT, Certificate.TRIPLE_POINT_RECORDED, cubic)

    p = to_poly(f3)
    common = p
    for x in p.gens:
        common = sympy.gcd(common, p.diff(x))
    l1 = _linear_coeffs(linear_factors(common)[0][0], 3)
    if cubic.tag is CubicTag.DOUBLE_LINE_PLUS_LINE:
        rest = sympy.div(p, sympy.Poly(sum(c * x for c, x in zip(l1, p.gens)), *p.gens) ** 2)[0]
        l2 = _linear_coeffs(rest, 3)
        g1 = substitute(g, change_to_forms([l1, l2], 3))
        lead = taylor_component(g1, 3).coeff((2, 1, 0))
        g1 = substitute(g1, LinearChange([[1, 0, 0], [0, 1 / lead, 0], [0, 0, 1]]))
        f4 = taylor_component(g1, 4)
        if restrict(f4, 0).is_zero():
            return Lc2Verdict(Lc2Tag.DOUBLE_LINE_PLUS_LINE, cubic=cubic, normalized=g1)
        lam = next(k for k in range(1, 10) if _section_curve(f4, k).coeff((0, 4)) != 0)
        witness = _section_curve(g1, lam)
        return Lc2Verdict(
            Lc2Tag.KLT, Certificate.X2Y_COROLLARY, cubic, g1, WeightVector([3, 2]), witness, {"section": lam}
        )

    g1 = substitute(g, change_to_forms([l1], 3))
    lead = taylor_component(g1, 3).coeff((3, 0, 0))
    g1 = substitute(g1, LinearChange([[1 / _cube_root(lead), 0, 0], [0, 1, 0], [0, 0, 1]])) if lead != 1 else g1
    f4 = taylor_component(g1, 4)
    if all(e[0] >= 2 for e in f4.terms):
        return Lc2Verdict(Lc2Tag.TRIPLE_LINE, cubic=cubic, normalized=g1)
    for k in range(1, 10):
        sec = _section_curve(f4, k)
        if sec.coeff((0, 4)) != 0:
            weights = WeightVector([4, 3])
            break
        if sec.coeff((1, 3)) != 0:
            weights = WeightVector([3, 2])
            break
    witness = _section_curve(g1, k)
    return Lc2Verdict(Lc2Tag.KLT, Certificate.X3_COROLLARY, cubic, g1, weights, witness, {"section": k})


def _cube_root(c: Fraction) -> Fraction:
    """Rational cube root when it exists, otherwise 1 (scaling is cosmetic)."""
    sign = -1 if c < 0 else 1
    a = abs(c)
    num = round(a.numerator ** (1 / 3))
    den = round(a.denominator ** (1 / 3))
    for nn in (num - 1, num, num + 1):
        for dd in (den - 1, den, den + 1):
            if nn > 0 and dd > 0 and Fraction(nn, dd) ** 3 == a:
                return sign * Fraction(nn, dd)
    return Fraction(1)


# --- normal forms -------------------------------------------------------------------------


@dataclass(frozen=True)
class Cusp:
    p: int
    q: int
    r: int


@dataclass(frozen=True)
class SimpleEllipticQuartic:
    """``x1^2 + q(x2, x3)`` with ``q`` a binary quartic given by 5 coefficients."""

    coeffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class SimpleEllipticSextic:
    a: Fraction
    b: Fraction


def normal_form(kind: Cusp | SimpleEllipticQuartic | SimpleEllipticSextic, order: int = DEFAULT_ORDER) -> Germ:
    if isinstance(kind, Cusp):
        p, q, r = kind.p, kind.q, kind.r
        if not (2 <= p <= q <= r):
            raise InputError("cusp exponents must satisfy 2 <= p <= q <= r")
        if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1:
            raise InputError("cusp exponents must satisfy 1/p + 1/q + 1/r < 1")
        order = max(order, r)
        return Germ(3, {(p, 0, 0): 1, (0, q, 0): 1, (0, 0, r): 1, (1, 1, 1): 1}, order)
    if isinstance(kind, SimpleEllipticQuartic):
        if len(kind.coeffs) != 5:
            raise InputError("binary quartic needs five coefficients")
        terms = {(2, 0, 0): 1}
        for i, c in enumerate(kind.coeffs):
            terms[(0, 4 - i, i)] = c
        return Germ(3, terms, order)
    if isinstance(kind, SimpleEllipticSextic):
        return Germ(3, {(2, 0, 0): 1, (0, 3, 0): 1, (0, 1, 4): kind.a, (0, 0, 6): kind.b}, order)
    raise InputError(f"unknown normal form {kind!r}")
