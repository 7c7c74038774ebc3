from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from coregkit.blowcalc import (
    BlowupResult,
    HirzClass,
    NormalBundle,
    P2kClass,
    curve_blowup,
    dp1_discriminant,
    hirz_intersect,
    hirz_is_ample,
    hirz_is_effective,
    incidence_lower_bound,
    infeasible,
    p2k_intersect,
    zero_stratum_certificate,
)
from coregkit.errors import InputError
from coregkit.polyring import Germ, parse_germ
from coregkit.symbridge import to_poly


def nakai(c: HirzClass) -> bool:
    """Ample iff positive square and positive on the only irreducible curves with negative or zero square."""
    s, f = HirzClass.section(c.n), HirzClass.fiber(c.n)
    return hirz_intersect(c, c) > 0 and hirz_intersect(c, s) > 0 and hirz_intersect(c, f) > 0


def restriction_from_projection(normal: NormalBundle, ldot: int) -> HirzClass:
    """Solve ``D'|_E . f = 1`` and ``D'|_E . E|_E = deg N - L.D`` for ``D'|_E``.

    The second identity is ``(pi^* D - E) . E^2`` with ``pi^* D . E^2 = -L.D``
    and ``E^3 = -deg N``.
    """
    n = normal.b - normal.a
    e_self = curve_blowup(normal, ldot).E_self
    # D'|_E = s + beta f; pairing with E|_E is linear in beta
    at0 = hirz_intersect(HirzClass(n, 1, 0), e_self)
    slope = hirz_intersect(HirzClass(n, 0, 1), e_self)
    beta = Fraction(normal.degree - ldot - at0, slope)
    assert beta.denominator == 1
    return HirzClass(n, 1, int(beta))


# --- Hirzebruch surfaces -----------------------------------------------------------------------


def test_intersection_examples():
    assert hirz_intersect(HirzClass(2, -1, -1), HirzClass(2, -1, -1)) == 0
    assert hirz_intersect(HirzClass.section(3), HirzClass.section(3)) == -3
    assert hirz_intersect(HirzClass.section(3), HirzClass.fiber(3)) == 1
    assert hirz_is_ample(HirzClass(1, 1, 2))
    assert not hirz_is_ample(HirzClass(2, 1, 1))
    with pytest.raises(InputError):
        hirz_intersect(HirzClass(1, 1, 0), HirzClass(2, 1, 0))


def test_ampleness_matches_nakai():
    for n in range(5):
        for a in range(-10, 11):
            for b in range(-10, 11):
                c = HirzClass(n, a, b)
                assert hirz_is_ample(c) == nakai(c), c


@given(st.integers(0, 4), *[st.integers(-6, 6)] * 4)
def test_intersection_symmetric_bilinear(n, a1, b1, a2, b2):
    c1, c2 = HirzClass(n, a1, b1), HirzClass(n, a2, b2)
    assert hirz_intersect(c1, c2) == hirz_intersect(c2, c1)
    assert hirz_intersect(c1 + c2, c2) == hirz_intersect(c1, c2) + hirz_intersect(c2, c2)


def test_effective_cone():
    assert hirz_is_effective(HirzClass(2, 1, 0))
    assert not hirz_is_effective(HirzClass(2, -1, 3))


def test_class_formatting():
    assert str(HirzClass(0, 1, 4)) == "s+4f"
    assert str(HirzClass(2, -1, -1)) == "-s-f"
    assert str(HirzClass(1, 0, 0)) == "0"


# --- blow-ups along curves -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "normal,ldot,n,restrict",
    [((0, 0), 1, 0, "s+f"), ((0, 1), 2, 1, "s+2f"), ((-1, 1), 1, 2, "s+2f")],
)
def test_restriction_classes(normal, ldot, n, restrict):
    r = curve_blowup(NormalBundle(*normal), ldot)
    assert r.hirzebruch_index == n
    assert str(r.D_restrict) == restrict
    assert r.D_restrict == restriction_from_projection(NormalBundle(*normal), ldot)


def test_restriction_for_trivially_twisted_bundle():
    r = curve_blowup(NormalBundle(1, 1), 3)
    assert r.hirzebruch_index == 0 and r.note
    assert r.D_restrict == restriction_from_projection(NormalBundle(1, 1), 3)


def test_c_values():
    assert curve_blowup(NormalBundle(0, 1), 2).c == 0
    assert curve_blowup(NormalBundle(-1, 1), 1).c == 1


def test_blowup_identities_sweep():
    for a in range(-3, 4):
        for b in range(a, 4):
            for ldot in range(6):
                normal = NormalBundle(a, b)
                r = curve_blowup(normal, ldot)
                assert hirz_intersect(r.E_self, r.E_self) == -(a + b)
                assert hirz_intersect(r.D_restrict, HirzClass.fiber(r.hirzebruch_index)) == 1
                assert r.D_restrict == restriction_from_projection(normal, ldot)


def test_normal_bundle_order():
    with pytest.raises(InputError):
        NormalBundle(1, 0)


def test_zero_stratum():
    r = curve_blowup(NormalBundle(0, 1), 2)
    assert zero_stratum_certificate(r, HirzClass(1, 1, 2))
    nodal = curve_blowup(NormalBundle(-1, 1), 1)
    assert hirz_intersect(nodal.D_restrict, nodal.D_restrict) == 2
    assert zero_stratum_certificate(nodal, HirzClass(2, 1, 2))
    fibre = HirzClass.fiber(1)
    assert hirz_intersect(fibre, fibre) == 0
    assert not zero_stratum_certificate(BlowupResult(1, HirzClass(1, -1, 0), fibre, 0), fibre)


# --- blow-ups of the plane ------------------------------------------------------------------------


def test_lattice_steps():
    step1 = (P2kClass(2, [0] * 8), P2kClass(2, [1] * 5 + [0] * 3))
    assert p2k_intersect(*step1) == 4
    assert incidence_lower_bound([1] * 5, [1] * 5) == 5
    assert infeasible(*step1, incidence_lower_bound([1] * 5, [1] * 5))

    step2 = (P2kClass(1, [0] * 8), step1[1])
    assert p2k_intersect(*step2) == 2
    need = incidence_lower_bound(["1/2"] * 5, [1] * 5)
    assert need == Fraction(5, 2) and infeasible(*step2, need)

    # the plane cubic and sextic meet in 18 points; nine base points force 19
    assert p2k_intersect(P2kClass(3, [0] * 8), P2kClass(6, [0] * 8)) == 18
    need = incidence_lower_bound([1] * 9, [3, 3, 2, 2, 2, 2, 2, 2, 1])
    assert need == 19 and infeasible(P2kClass(3, [0] * 8), P2kClass(6, [0] * 8), need)


def test_canonical_square():
    for k in range(9):
        K = P2kClass.canonical(k)
        assert p2k_intersect(K, K) == 9 - k


@given(st.integers(0, 8).flatmap(lambda k: st.tuples(*[st.lists(st.integers(-5, 5), min_size=k + 1, max_size=k + 1)] * 2)))
def test_p2k_symmetric_integral(pair):
    a, b = P2kClass(pair[0][0], pair[0][1:]), P2kClass(pair[1][0], pair[1][1:])
    v = p2k_intersect(a, b)
    assert v == p2k_intersect(b, a) and v.denominator == 1


def test_p2k_mismatch():
    with pytest.raises(InputError):
        p2k_intersect(P2kClass(1, [1]), P2kClass(1, [1, 1]))
    with pytest.raises(InputError):
        incidence_lower_bound([1], [1, 1])


# --- discriminants -----------------------------------------------------------------------------------


def random_binary(rng: random.Random, degree: int) -> Germ:
    return Germ(2, {(degree - i, i): rng.randint(-9, 9) for i in range(degree + 1)}, degree)


def multiplicities_oracle(f4: Germ, f6: Germ) -> list[int]:
    """Root multiplicities of the discriminant on P^1, from a sympy factorization."""
    x, y = sympy.symbols("x1 x2")
    p4 = to_poly(f4.with_order(4), (x, y)).as_expr()
    p6 = to_poly(f6.with_order(6), (x, y)).as_expr()
    delta = sympy.Poly(sympy.expand(4 * p4**3 + 27 * p6**2), x, y)
    out = []
    for fac, mult in sympy.factor_list(delta.as_expr())[1]:
        # every irreducible binary form of degree d contributes d distinct roots
        out += [mult] * sympy.Poly(fac, x, y).total_degree()
    return sorted(out, reverse=True)


def test_discriminant_squarefree_instance():
    rep = dp1_discriminant(parse_germ("x1^4 + 2*x1*x2^3 - x2^4", 2), parse_germ("x1^6 - x1^2*x2^4 + 3*x2^6", 2))
    assert rep.nodal_count == 12 and rep.cusp_count == 0 and not rep.degenerate


def test_discriminant_zero_f4():
    rep = dp1_discriminant(Germ.zero(2), parse_germ("x1^6 - x1^2*x2^4 + 3*x2^6 + x1*x2^5", 2))
    assert (rep.nodal_count, rep.cusp_count, rep.degenerate) == (0, 6, False)


def test_discriminant_zero_f6():
    rep = dp1_discriminant(parse_germ("x1^4 + 2*x1*x2^3 - x2^4", 2), Germ.zero(2))
    assert rep.degenerate and rep.multiplicities == (3, 3, 3, 3)


def test_discriminant_root_at_infinity():
    rep = dp1_discriminant(parse_germ("x1^3*x2", 2), parse_germ("x1^5*x2", 2))
    assert sum(rep.multiplicities) == 12


def test_discriminant_identically_zero():
    assert dp1_discriminant(Germ.zero(2), Germ.zero(2)).degenerate


def test_discriminant_accounting_random():
    rng = random.Random(12)
    for _ in range(100):
        f4, f6 = random_binary(rng, 4), random_binary(rng, 6)
        rep = dp1_discriminant(f4, f6)
        assert rep.nodal_count + 2 * rep.cusp_count + rep.other == 12
        assert sum(rep.multiplicities) == 12
        assert rep.nodal_count == list(rep.multiplicities).count(1)
    for _ in range(5):
        f4, f6 = random_binary(rng, 4), random_binary(rng, 6)
        assert list(dp1_discriminant(f4, f6).multiplicities) == multiplicities_oracle(f4, f6)


def test_discriminant_rejects_wrong_degree():
    with pytest.raises(InputError):
        dp1_discriminant(parse_germ("x1^3", 2), Germ.zero(2))
    with pytest.raises(InputError):
        dp1_discriminant(parse_germ("x1^4", 3), Germ.zero(2))
