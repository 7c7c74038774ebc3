"""Codimension counts in spaces of forms: linear conditions and parametrized loci."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import sympy

from .errors import InputError
from .linalg import rank

Monomial = tuple[int, ...]

SAMPLE_RADIUS = 10**4


def monomials(nvars: int, degree: int) -> list[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class CoeffSpace:
    """Coefficients of forms of the given degrees; projective dimension is ``dim - 1``."""

    nvars: int
    degrees: tuple[int, ...]

    @property
    def basis(self) -> tuple[Monomial, ...]:
        return tuple(m for d in self.degrees for m in monomials(self.nvars, d))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def projective_dim(self) -> int:
        return self.dim - 1

    @classmethod
    def forms(cls, nvars: int, degree: int) -> CoeffSpace:
        return cls(nvars, (degree,))


def linear_codim(space: CoeffSpace, vanishing: Sequence[Monomial]) -> int:
    """Number of independent conditions ``coeff(m) = 0`` for ``m`` in ``vanishing``."""
    basis = set(space.basis)
    chosen = {tuple(m) for m in vanishing}
    unknown = chosen - basis
    if unknown:
        raise InputError(f"monomials not in the space: {sorted(unknown)}")
    return len(chosen)


@dataclass(frozen=True)
class Parametrization:
    """Polynomial map from ``source_dim`` parameters into a coefficient space."""

    source_dim: int
    coords: tuple[sympy.Expr, ...]
    params: tuple[sympy.Symbol, ...]
    target: CoeffSpace
    name: str = ""

    @property
    def degree(self) -> int:
        return max((sympy.Poly(c, *self.params).total_degree() for c in self.coords if c != 0), default=0)


def _generic_form(xs: Sequence[sympy.Symbol], degree: int, prefix: str) -> tuple[sympy.Expr, list[sympy.Symbol]]:
    mons = monomials(len(xs), degree)
    params = list(sympy.symbols(f"{prefix}0:{len(mons)}"))
    expr = sum(p * sympy.Mul(*[x**k for x, k in zip(xs, m)]) for p, m in zip(params, mons))
    return expr, params


def _coords(expr: sympy.Expr, xs: Sequence[sympy.Symbol], target: CoeffSpace) -> tuple[sympy.Expr, ...]:
    poly = sympy.Poly(sympy.expand(expr), *xs)
    if any(sum(m) not in target.degrees for m in poly.monoms()):
        raise InputError("map does not land in the target space")
    table = dict(poly.terms())
    return tuple(sympy.expand(table.get(m, 0)) for m in target.basis)


def product_locus(target: CoeffSpace, factors: Sequence[tuple[int, int]], name: str = "") -> Parametrization:
    """Products ``prod g_i^{e_i}`` of generic forms, ``factors = [(deg_i, e_i), ...]``."""
    xs = sympy.symbols(f"x1:{target.nvars + 1}")
    expr = sympy.Integer(1)
    params: list[sympy.Symbol] = []
    for k, (deg, exp) in enumerate(factors):
        form, ps = _generic_form(xs, deg, f"c{k}_")
        expr *= form**exp
        params += ps
    return Parametrization(len(params), _coords(expr, xs, target), tuple(params), target, name)


def composed_locus(
    target: CoeffSpace, outer_vars: int, outer_degree: int, inner_degree: int = 1, name: str = ""
) -> Parametrization:
    """Forms ``c(l_1, ..., l_k)`` with ``c`` generic of ``outer_degree`` and ``l_i`` generic."""
    xs = sympy.symbols(f"x1:{target.nvars + 1}")
    inner, params = [], []
    for k in range(outer_vars):
        form, ps = _generic_form(xs, inner_degree, f"l{k}_")
        inner.append(form)
        params += ps
    ys = sympy.symbols(f"y1:{outer_vars + 1}")
    outer, ps = _generic_form(ys, outer_degree, "c_")
    params += ps
    expr = outer.subs(dict(zip(ys, inner)), simultaneous=True)
    return Parametrization(len(params), _coords(expr, xs, target), tuple(params), target, name)


def custom_locus(target: CoeffSpace, expr: str, name: str = "") -> Parametrization:
    """Locus swept by a polynomial in ``x1..xn`` whose other symbols are parameters."""
    xs = sympy.symbols(f"x1:{target.nvars + 1}")
    parsed = sympy.sympify(expr, locals={str(x): x for x in xs})
    params = tuple(sorted(parsed.free_symbols - set(xs), key=str))
    return Parametrization(len(params), _coords(parsed, xs, target), params, target, name)


def orbit_locus(target: CoeffSpace, form: str, name: str = "") -> Parametrization:
    """Orbit of a fixed form under ``GL_n`` acting on the variables."""
    n = target.nvars
    xs = sympy.symbols(f"x1:{n + 1}")
    entries = sympy.symbols(f"g0:{n * n}")
    f = sympy.sympify(form, locals={str(x): x for x in xs})
    images = [sum(entries[i * n + j] * xs[j] for j in range(n)) for i in range(n)]
    expr = f.subs(dict(zip(xs, images)), simultaneous=True)
    return Parametrization(n * n, _coords(expr, xs, target), tuple(entries), target, name)


@dataclass(frozen=True)
class CodimReport:
    """Codimension of a cone-shaped locus, with its Schwartz-Zippel failure bound."""

    image_dim: int
    codim: int
    ranks: tuple[int, ...]
    failure_bound: Fraction
    seed: int


def jacobian(p: Parametrization) -> list[list[sympy.Expr]]:
    return [[sympy.diff(c, s) for s in p.params] for c in p.coords]


def locus_codim(p: Parametrization, target: CoeffSpace | None = None, trials: int = 3, seed: int = 0) -> CodimReport:
    """Projective codimension of the closure of the image of ``p``.

    The generic rank of the Jacobian is estimated as the maximum rank at
    ``trials`` random integer points; all loci here are cones, so the
    projective image dimension is ``rank - 1``.
    """
    if trials < 1:
        raise InputError("need at least one trial")
    target = target or p.target
    if target != p.target:
        raise InputError("parametrization does not map into the target")
    rng = random.Random(seed)
    jac = jacobian(p)
    funcs = sympy.lambdify(p.params, jac, modules="sympy")
    ranks = []
    for _ in range(trials):
        point = [rng.randint(-SAMPLE_RADIUS, SAMPLE_RADIUS) for _ in p.params]
        rows = [[Fraction(int(v)) for v in row] for row in funcs(*point)]
        ranks.append(rank(rows))
    r = max(ranks)
    per_trial = Fraction(r * max(p.degree - 1, 0), 2 * SAMPLE_RADIUS + 1)
    failure = min(Fraction(1), per_trial) ** trials
    return CodimReport(r - 1, target.dim - r, tuple(ranks), failure, seed)


@dataclass(frozen=True)
class IncidenceSetup:
    """A bad locus whose fibre over each point has codimension ``fiber_codim``.

    ``threshold`` defaults to ``n``, the dimension of the point-parameter space.
    """

    n: int
    fiber_codim: int
    threshold: int | None = None

    def __post_init__(self) -> None:
        if self.fiber_codim < 0:
            raise InputError("fibre codimension is non-negative")


def avoid_generic(setup: IncidenceSetup) -> bool:
    """A general member avoids the bad locus when the fibre codimension reaches the threshold."""
    need = setup.n if setup.threshold is None else setup.threshold
    return setup.fiber_codim >= need


# A condition on the cubic term of the restricted equation costs three fewer
# conditions on the germ: the cubic term is only determined up to f_2 times a
# free linear form.
ON_F_OFFSET = 3

CUBIC_LOCI = {
    "triple_line": lambda t: product_locus(t, [(1, 3)], "triple line"),
    "double_line_plus_line": lambda t: product_locus(t, [(1, 2), (1, 1)], "double line plus line"),
    "concurrent_lines": lambda t: composed_locus(t, 2, 3, 1, "three concurrent lines"),
    "conic_tangent_line": lambda t: custom_locus(
        t,
        "(a1*x1+a2*x2+a3*x3)*((a1*x1+a2*x2+a3*x3)*(b1*x1+b2*x2+b3*x3)+(c1*x1+c2*x2+c3*x3)**2)",
        "conic plus tangent line",
    ),
    "cuspidal": lambda t: orbit_locus(t, "x2**2*x3 - x1**3", "cuspidal cubic"),
}
