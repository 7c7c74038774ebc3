"""Truncated multivariate polynomial germs with exact coefficients.

A :class:`Germ` stores a sparse map from exponent tuples to coefficients.
Coefficients are :class:`fractions.Fraction` by default; any exact field
element supporting ``+ - * /`` and comparison with zero also works (the
number fields of :mod:`coregkit.numfield` rely on this).

Terms of total degree above ``order`` are never stored.  When an operation
would have produced such a term, it is discarded and the result carries
``dropped=True``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import InputError, ParseError, TruncationError, UndefinedOrderError
from .linalg import det, inverse

DEFAULT_ORDER = 8

Exponent = tuple[int, ...]


def as_coeff(c: Any) -> Any:
    """Promote Python ints (and numeric strings) to Fraction; keep field elements."""
    if isinstance(c, bool):
        raise TypeError("boolean coefficient")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not exact")
    return c


def as_rational(value: Any) -> Fraction:
    """Parse ``'p/q'`` strings, ints and Fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"not an exact rational: {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not an exact rational: {value!r}") from exc


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Germ:
    """Immutable truncated polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "order", "dropped", "_terms", "_hash")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Exponent, Any] | Iterable[tuple[Exponent, Any]] | None = None,
        order: int = DEFAULT_ORDER,
        dropped: bool = False,
    ) -> None:
        if nvars < 1:
            raise InputError("a germ needs at least one variable")
        if order < 0:
            raise InputError("truncation order must be non-negative")
        clean: dict[Exponent, Any] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise InputError(f"bad exponent {exp} for {nvars} variables")
            c = as_coeff(c)
            if sum(exp) > order:
                if c != 0:
                    dropped = True
                continue
            total = clean.get(exp)
            c = c if total is None else total + c
            if c == 0:
                clean.pop(exp, None)
            else:
                clean[exp] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "dropped", bool(dropped))
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("Germ is immutable")

    # constructors

    @classmethod
    def zero(cls, nvars: int, order: int = DEFAULT_ORDER) -> Germ:
        return cls(nvars, {}, order)

    @classmethod
    def constant(cls, c: Any, nvars: int, order: int = DEFAULT_ORDER) -> Germ:
        return cls(nvars, {(0,) * nvars: c}, order)

    @classmethod
    def variable(cls, i: int, nvars: int, order: int = DEFAULT_ORDER) -> Germ:
        if not 0 <= i < nvars:
            raise InputError(f"variable index {i} out of range")
        exp = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, {exp: 1}, order)

    @classmethod
    def monomial(cls, exp: Exponent, nvars: int, c: Any = 1, order: int = DEFAULT_ORDER) -> Germ:
        return cls(nvars, {tuple(exp): c}, order)

    # accessors

    @property
    def terms(self) -> dict[Exponent, Any]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Any]]:
        return iter(self._terms.items())

    def coeff(self, exp: Sequence[int]) -> Any:
        return self._terms.get(tuple(exp), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Largest stored total degree (-1 for the zero germ)."""
        return max((sum(e) for e in self._terms), default=-1)

    def mult(self) -> int:
        """Ordinary multiplicity at the origin (lowest stored total degree)."""
        if not self._terms:
            raise UndefinedOrderError("multiplicity of the zero germ")
        return min(sum(e) for e in self._terms)

    def variables_used(self) -> set[int]:
        return {i for e in self._terms for i, a in enumerate(e) if a}

    def homogeneous_part(self, k: int) -> Germ:
        return Germ(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == k}, self.order, self.dropped)

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if k is None:
            return len(degs) <= 1
        return degs <= {k}

    # structural

    def with_order(self, order: int) -> Germ:
        return Germ(self.nvars, self._terms, order, self.dropped)

    def with_nvars(self, nvars: int) -> Germ:
        """Embed into more variables (new ones appended) or drop unused trailing ones."""
        if nvars >= self.nvars:
            pad = (0,) * (nvars - self.nvars)
            return Germ(nvars, {e + pad: c for e, c in self._terms.items()}, self.order, self.dropped)
        if any(any(e[nvars:]) for e in self._terms):
            raise InputError("cannot drop variables that occur in the germ")
        return Germ(nvars, {e[:nvars]: c for e, c in self._terms.items()}, self.order, self.dropped)

    def select_variables(self, keep: Sequence[int]) -> Germ:
        """Renumber onto the variables ``keep`` (others must not occur)."""
        others = set(range(self.nvars)) - set(keep)
        if self.variables_used() & others:
            raise InputError("germ involves variables outside the selection")
        return Germ(len(keep), {tuple(e[i] for i in keep): c for e, c in self._terms.items()}, self.order, self.dropped)

    def map_coeffs(self, fn: Callable[[Any], Any]) -> Germ:
        return Germ(self.nvars, {e: fn(c) for e, c in self._terms.items()}, self.order, self.dropped)

    def scale(self, c: Any) -> Germ:
        c = as_coeff(c)
        return Germ(self.nvars, {e: c * v for e, v in self._terms.items()}, self.order, self.dropped)

    # arithmetic

    def _coerce(self, other: Any) -> Germ:
        if isinstance(other, Germ):
            if other.nvars != self.nvars:
                raise InputError("germs live in different numbers of variables")
            return other
        return Germ.constant(other, self.nvars, self.order)

    def __add__(self, other: Any) -> Germ:
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Germ(self.nvars, terms, min(self.order, other.order), self.dropped or other.dropped)

    __radd__ = __add__

    def __neg__(self) -> Germ:
        return Germ(self.nvars, {e: -c for e, c in self._terms.items()}, self.order, self.dropped)

    def __sub__(self, other: Any) -> Germ:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> Germ:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> Germ:
        if not isinstance(other, Germ):
            return self.scale(other)
        other = self._coerce(other)
        order = min(self.order, other.order)
        dropped = self.dropped or other.dropped
        terms: dict[Exponent, Any] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if d1 + sum(e2) > order:
                    dropped = True
                    continue
                e = _add_exp(e1, e2)
                v = c1 * c2
                terms[e] = terms[e] + v if e in terms else v
        return Germ(self.nvars, terms, order, dropped)

    def __rmul__(self, other: Any) -> Germ:
        return self.scale(other)

    def __pow__(self, k: int) -> Germ:
        if k < 0:
            raise InputError("negative power of a germ")
        result = Germ.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self, i: int) -> Germ:
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[ne] = c * e[i]
        return Germ(self.nvars, terms, self.order, self.dropped)

    def evaluate(self, point: Sequence[Any]) -> Any:
        if len(point) != self.nvars:
            raise InputError("point has the wrong dimension")
        total: Any = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = v * x**a
            total = total + v
        return total

    def compose(self, images: Sequence[Germ], order: int | None = None) -> Germ:
        """Substitute ``x_i -> images[i]``; truncated at ``order`` (default: own order)."""
        if len(images) != self.nvars:
            raise InputError("need one image per variable")
        nv = images[0].nvars
        if any(im.nvars != nv for im in images):
            raise InputError("images live in different numbers of variables")
        if order is None:
            order = min([self.order] + [im.order for im in images])
        dropped = self.dropped or any(im.dropped for im in images)
        images = [im.with_order(order) for im in images]
        one = Germ.constant(1, nv, order)
        powers: list[list[Germ]] = [[one] for _ in images]

        def power(i: int, k: int) -> Germ:
            cache = powers[i]
            while len(cache) <= k:
                cache.append(cache[-1] * images[i])
            return cache[k]

        # products over exponent prefixes are shared between terms
        prefixes: dict[Exponent, Germ] = {(): one}

        def monomial(e: Exponent) -> Germ:
            if e not in prefixes:
                head = monomial(e[:-1])
                a = e[-1]
                prefixes[e] = head * power(len(e) - 1, a) if a and not head.is_zero() else head
            return prefixes[e]

        acc: dict[Exponent, Any] = {}
        for e, c in self._terms.items():
            term = monomial(e)
            dropped = dropped or term.dropped
            for te, tc in term._terms.items():
                v = c * tc
                acc[te] = acc[te] + v if te in acc else v
        return Germ(nv, acc, order, dropped)

    # comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Germ):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Germ.constant(other, self.nvars, self.order)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self) -> str:
        flag = ", dropped" if self.dropped else ""
        return f"Germ({format_germ(self)!r}, nvars={self.nvars}, order={self.order}{flag})"

    def __str__(self) -> str:
        return format_germ(self)


@dataclass(frozen=True)
class WeightVector:
    """Positive rational weights, one per variable."""

    weights: tuple[Fraction, ...]

    def __init__(self, weights: Iterable[Any]) -> None:
        ws = tuple(as_rational(w) for w in weights)
        if not ws or any(w <= 0 for w in ws):
            raise InputError("weights must be positive")
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.weights)

    def weight(self, exp: Sequence[int]) -> Fraction:
        return sum((w * a for w, a in zip(self.weights, exp)), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def primitive(self) -> WeightVector:
        """Smallest positive integer vector on the same ray."""
        from math import gcd, lcm

        den = 1
        for w in self.weights:
            den = lcm(den, w.denominator)
        ints = [int(w * den) for w in self.weights]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return WeightVector(v // g for v in ints)

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.weights)


@dataclass(frozen=True)
class LinearChange:
    """Invertible linear substitution ``x_i -> sum_j M[i][j] y_j``."""

    matrix: tuple[tuple[Any, ...], ...]

    def __init__(self, matrix: Sequence[Sequence[Any]]) -> None:
        rows = tuple(tuple(as_coeff(x) for x in row) for row in matrix)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InputError("linear change needs a square matrix")
        if det([list(r) for r in rows]) == 0:
            raise InputError("linear change is not invertible")
        object.__setattr__(self, "matrix", rows)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> LinearChange:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> LinearChange:
        """``x_i -> y_{perm[i]}``."""
        n = len(perm)
        return cls([[int(perm[i] == j) for j in range(n)] for i in range(n)])

    def inverse(self) -> LinearChange:
        return LinearChange(inverse([list(r) for r in self.matrix]))

    def then(self, other: LinearChange) -> LinearChange:
        """Change equivalent to applying ``self`` and then ``other`` to the result."""
        a, b = self.matrix, other.matrix
        n = self.n
        return LinearChange([[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)])

    def images(self, order: int = DEFAULT_ORDER) -> list[Germ]:
        n = self.n
        return [Germ(n, {tuple(int(k == j) for k in range(n)): self.matrix[i][j] for j in range(n)}, order) for i in range(n)]


# --- operations ---------------------------------------------------------------


def taylor_component(g: Germ, k: int) -> Germ:
    """Degree-``k`` homogeneous part of ``g``."""
    if k < 0:
        raise InputError("degree must be non-negative")
    if k > g.order:
        raise TruncationError(f"degree {k} exceeds truncation order {g.order}")
    return g.homogeneous_part(k)


def substitute(g: Germ, change: LinearChange) -> Germ:
    """``g`` composed with the linear map of ``change``."""
    if change.n != g.nvars:
        raise InputError("dimension of change does not match the germ")
    return g.compose(change.images(g.order), g.order)


def restrict(g: Germ, var_index: int, replacement: Germ | int | Fraction | None = 0) -> Germ:
    """Replace ``x_var_index`` by ``replacement`` (a germ not involving that variable)."""
    if not 0 <= var_index < g.nvars:
        raise InputError("variable index out of range")
    if replacement is None or not isinstance(replacement, Germ):
        replacement = Germ.constant(replacement or 0, g.nvars, g.order)
    if replacement.nvars != g.nvars:
        raise InputError("replacement lives in a different number of variables")
    if var_index in replacement.variables_used():
        raise InputError("replacement involves the substituted variable")
    images = [Germ.variable(i, g.nvars, g.order) for i in range(g.nvars)]
    images[var_index] = replacement
    return g.compose(images, min(g.order, replacement.order))


def _check_weights(w: WeightVector, g: Germ) -> None:
    if len(w) != g.nvars:
        raise InputError("weight vector length does not match the germ")


def weighted_order(w: WeightVector, g: Germ) -> Fraction:
    """Minimum of ``w . exponent`` over the stored terms of ``g``."""
    _check_weights(w, g)
    if g.is_zero():
        raise UndefinedOrderError("weighted order of the zero germ")
    value = min(w.weight(e) for e in g.terms)
    if g.dropped and value >= (g.order + 1) * min(w.weights):
        raise UndefinedOrderError("dropped terms could have smaller weighted order")
    return value


def weighted_leading(w: WeightVector, g: Germ) -> Germ:
    """Weighted homogeneous leading term ``g_w``."""
    value = weighted_order(w, g)
    return Germ(g.nvars, {e: c for e, c in g.items() if w.weight(e) == value}, g.order)


def _linear_part(g: Germ) -> dict[int, Any]:
    out = {}
    for e, c in g.items():
        if sum(e) == 1:
            out[e.index(1)] = c
    return out


def implicit_eliminate(system: Sequence[Germ], solved_vars: Sequence[int], order: int) -> dict[int, Germ]:
    """Solve ``system = 0`` for ``solved_vars`` as germs in the other variables.

    Each equation must read ``c*x_j + (terms of degree >= 2)`` with ``c != 0``,
    where ``x_j`` is its solved variable.  Returns germs truncated at ``order``
    whose back-substitution leaves residuals of order greater than ``order``.
    """
    if len(system) != len(solved_vars) or len(set(solved_vars)) != len(solved_vars):
        raise InputError("need one distinct solved variable per equation")
    if not system:
        return {}
    n = system[0].nvars
    if any(s.nvars != n for s in system):
        raise InputError("equations live in different numbers of variables")
    if order < 1:
        raise InputError("elimination order must be positive")
    work_order = order
    heads: list[tuple[int, Any, Germ]] = []
    for eq, j in zip(system, solved_vars):
        if eq.coeff((0,) * n) != 0:
            raise InputError("equation does not vanish at the origin")
        lin = _linear_part(eq)
        if set(lin) != {j}:
            raise InputError(f"linear part of equation for x{j + 1} is not in solved normal form")
        c = lin[j]
        if eq.order < order:
            raise TruncationError("equation is known only below the requested order")
        rest = (eq - Germ.monomial(tuple(int(k == j) for k in range(n)), n, c, eq.order)).with_order(work_order)
        heads.append((j, c, rest))

    phi = {j: Germ.zero(n, work_order) for j in solved_vars}
    prev_res = 1
    for _ in range(order + 1):
        images = [phi.get(i, Germ.variable(i, n, work_order)) for i in range(n)]
        new = {j: -(rest.compose(images, work_order)).scale(1 / c) for j, c, rest in heads}
        if new == phi:
            break
        phi = new
        res = _residual_order(system, phi, work_order)
        if res <= prev_res and res <= order:
            raise _stalled()
        prev_res = res
    res = _residual_order(system, phi, work_order)
    if res <= order:
        raise _stalled()
    return {j: Germ(n, g.terms, order) for j, g in phi.items()}


def _stalled() -> TruncationError:
    return TruncationError("fixed-point iteration failed to raise the residual order")


def _residual_order(system: Sequence[Germ], phi: Mapping[int, Germ], order: int) -> int:
    """Order of the back-substituted residuals, ``order + 1`` if they vanish to ``order``."""
    n = system[0].nvars
    images = [phi.get(i, Germ.variable(i, n, order)) for i in range(n)]
    best = order + 1
    for eq in system:
        r = eq.with_order(order).compose(images, order)
        if not r.is_zero():
            best = min(best, r.mult())
    return best


def residual(system: Sequence[Germ], solution: Mapping[int, Germ], order: int) -> list[Germ]:
    """Back-substitute ``solution`` into ``system`` keeping terms up to ``order``."""
    n = system[0].nvars
    images = [solution.get(i, Germ.variable(i, n, order)).with_order(order) for i in range(n)]
    return [eq.with_order(order).compose(images, order) for eq in system]


def blowup_chart(g: Germ, center: Sequence[int], chart: int) -> tuple[Germ, int]:
    """Strict transform in one affine chart of the blow-up along ``{x_i = 0, i in center}``.

    The chart substitutes ``x_i -> x_i * x_chart`` for the other center
    variables and divides by the largest possible power of ``x_chart``.
    """
    center = list(dict.fromkeys(center))
    if len(center) < 2:
        raise InputError("blow-up center needs at least two variables")
    if chart not in center:
        raise InputError("chart variable must belong to the center")
    if any(not 0 <= i < g.nvars for i in center):
        raise InputError("center index out of range")
    if g.is_zero():
        raise InputError("cannot blow up the zero germ")
    mults = [sum(e[i] for i in center) for e in g.terms]
    m = min(mults)
    if m == 0:
        raise InputError("germ does not vanish along the center")
    if g.dropped and m > g.order:
        raise TruncationError("multiplicity along the center is not determined")
    terms: dict[Exponent, Any] = {}
    for e, c in g.items():
        ne = list(e)
        ne[chart] = sum(e[i] for i in center) - m
        terms[tuple(ne)] = c
    strict = Germ(g.nvars, terms, g.order, g.dropped)
    return strict, m


# --- text syntax ----------------------------------------------------------------

_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_NUM = re.compile(r"^\d+(?:/\d+)?$")


def parse_germ(text: str, nvars: int | None = None, order: int = DEFAULT_ORDER) -> Germ:
    """Parse sums of ``c*x1^a*x2^b`` with rational ``c`` written ``p/q``."""
    if not isinstance(text, str):
        raise ParseError("germ text must be a string")
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ParseError("empty germ text")
    pieces: list[tuple[int, str]] = []
    sign, start = 1, 0
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        start = i = 1
    while i <= len(s):
        if i == len(s) or (s[i] in "+-" and i > start):
            pieces.append((sign, s[start:i]))
            if i < len(s):
                sign = -1 if s[i] == "-" else 1
            start = i + 1
        i += 1
    raw: list[tuple[dict[int, int], Fraction]] = []
    top = 0
    for sgn, body in pieces:
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = Fraction(sgn)
        powers: dict[int, int] = {}
        for factor in body.split("*"):
            if _NUM.match(factor):
                num = Fraction(factor)
                if num.denominator == 0:
                    raise ParseError("zero denominator")
                coeff *= num
                continue
            mv = _VAR.match(factor)
            if not mv:
                raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
            idx = int(mv.group(1))
            if idx < 1:
                raise ParseError("variables are numbered from x1")
            powers[idx - 1] = powers.get(idx - 1, 0) + int(mv.group(2) or 1)
            top = max(top, idx)
        raw.append((powers, coeff))
    if nvars is None:
        nvars = max(top, 1)
    elif top > nvars:
        raise ParseError(f"germ uses x{top} but only {nvars} variables were declared")
    terms: dict[Exponent, Fraction] = {}
    for powers, coeff in raw:
        exp = tuple(powers.get(i, 0) for i in range(nvars))
        terms[exp] = terms.get(exp, Fraction(0)) + coeff
    return Germ(nvars, terms, order)


def _term_key(e: Exponent) -> tuple:
    return (sum(e), tuple(-a for a in e))


def format_germ(g: Germ) -> str:
    """Canonical text form; ``parse_germ(format_germ(g))`` reproduces ``g``."""
    if g.is_zero():
        return "0"
    parts: list[str] = []
    for e in sorted(g.terms, key=_term_key):
        c = g.coeff(e)
        if not isinstance(c, Fraction):
            raise InputError("only rational germs have a text form")
        mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
