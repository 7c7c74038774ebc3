from __future__ import annotations

import random
import zlib
from fractions import Fraction

import pytest

from coregkit.errors import InputError, NonReducedError, NotSingularError
from coregkit.lct import weighted_bound
from coregkit.linalg import rank
from coregkit.polyring import Germ, parse_germ, substitute, taylor_component
from coregkit.singclass import (
    LC_CUBICS,
    Certificate,
    Cusp,
    CubicTag,
    Lc1Tag,
    Lc2Tag,
    SimpleEllipticQuartic,
    SimpleEllipticSextic,
    classify_cubic,
    hessian_split,
    normal_form,
    quadratic_matrix,
    strict_lc1_screen,
    strict_lc2_screen,
)

from conftest import random_change


def P(text: str, n: int = 3, order: int = 8) -> Germ:
    return parse_germ(text, n, order)


# representative of each orbit, independent of the classifier
ORBITS = {
    CubicTag.SMOOTH: "x1^3 + x2^3 + x3^3",
    CubicTag.NODAL: "x2^2*x3 - x1^3 - x1^2*x3",
    CubicTag.CUSPIDAL: "x2^2*x3 - x1^3",
    CubicTag.CONIC_TRANSVERSAL_LINE: "x3*x1^2 + x3*x2^2 - x3^3",
    CubicTag.CONIC_TANGENT_LINE: "x3*x1^2 - x3^2*x2",
    CubicTag.TRIANGLE: "x1*x2*x3",
    CubicTag.CONCURRENT_LINES: "x1^3 - x1*x2^2",
    CubicTag.DOUBLE_LINE_PLUS_LINE: "x1^2*x2",
    CubicTag.TRIPLE_LINE: "x1^3",
}


# --- hessian split ------------------------------------------------------------------------------


def test_split_rank_two():
    rep = hessian_split(P("x1^2 + x2^2 + x3^3"))
    assert rep.rank == 2
    assert rep.tail == P("x1^3", 1)


def test_split_t237():
    rep = hessian_split(normal_form(Cusp(2, 3, 7)))
    assert rep.rank == 1
    assert taylor_component(rep.tail, 3) == P("x1^3", 2, rep.tail.order)


def test_split_hyperbolic():
    rep = hessian_split(P("x1*x2 + x3^4"))
    assert rep.rank == 2
    assert rep.tail == P("x1^4", 1)


def test_split_full_rank_has_no_tail():
    rep = hessian_split(P("x1^2 + x2^2 + x3^2 + x1^3"))
    assert rep.rank == 3 and rep.tail is None


def test_split_rejects_smooth_germ():
    with pytest.raises(NotSingularError):
        hessian_split(P("x1 + x2^2"))


@pytest.mark.parametrize(
    "text", ["x1^2 + x2^2 + x3^3", "x1*x2 + x3^4", "x1^2 + x2^3 + x3^7 + x1*x2*x3", "x1^3 + x2^3 + x3^3", "x1^2 + x1*x3^2 + x2^4"]
)
def test_split_rank_invariant_under_changes(text):
    g = P(text)
    base = rank(quadratic_matrix(g))
    rng = random.Random(zlib.crc32(text.encode()))
    for _ in range(50):
        assert hessian_split(substitute(g, random_change(rng, 3))).rank == base


def test_split_tail_has_no_quadratic_part():
    rng = random.Random(3)
    for _ in range(30):
        terms = {(2, 0, 0): 1}
        for _ in range(6):
            e = [rng.randint(0, 3) for _ in range(3)]
            if sum(e) >= 3:
                terms[tuple(e)] = rng.randint(-3, 3)
        g = substitute(Germ(3, terms, 8), random_change(rng, 3))
        rep = hessian_split(g)
        if rep.tail is not None:
            assert taylor_component(rep.tail, 2).is_zero()
            assert taylor_component(rep.tail, 1).is_zero()


# --- cubics ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("tag,text", list(ORBITS.items()))
def test_classify_representatives(tag, text):
    c = classify_cubic(P(text))
    assert c.tag is tag
    assert c.is_lc == (tag in LC_CUBICS)


def test_classify_named_examples():
    assert classify_cubic(P("x1*x2*x3")).is_lc
    assert not classify_cubic(P("x1^2*x2")).is_lc
    assert classify_cubic(P("x2^2*x3 - x1^3")).tag is CubicTag.CUSPIDAL
    assert classify_cubic(Germ.zero(3)).tag is CubicTag.ZERO


@pytest.mark.parametrize("tag,text", list(ORBITS.items()))
def test_classify_invariant_under_changes(tag, text):
    rng = random.Random(len(text))
    g = P(text)
    for _ in range(20):
        assert classify_cubic(substitute(g, random_change(rng, 3))).tag is tag


def test_classify_rejects_non_cubic():
    with pytest.raises(InputError):
        classify_cubic(P("x1^2"))
    with pytest.raises(InputError):
        classify_cubic(P("x1^3", 2))


# --- screens -----------------------------------------------------------------------------------------


def test_lc1_rank_two_is_not_strict():
    assert strict_lc1_screen(P("x1^2 + x2^2 + x3^5")).tag is Lc1Tag.NOT_STRICTLY_LC


def test_lc1_triple_point():
    assert strict_lc1_screen(P("x1^3 + x2^3 + x3^3")).tag is Lc1Tag.MULT_AT_LEAST_3


def test_lc1_t237_cube_case():
    v = strict_lc1_screen(normal_form(Cusp(2, 3, 7)))
    assert v.tag is Lc1Tag.RANK_ONE_CUBIC_CUBE and v.rank == 1


def test_lc1_t2qr_cases():
    for q in range(3, 7):
        for r in range(q, 10):
            if Fraction(1, 2) + Fraction(1, q) + Fraction(1, r) >= 1:
                continue
            tag = strict_lc1_screen(normal_form(Cusp(2, q, r))).tag
            assert tag is (Lc1Tag.RANK_ONE_CUBIC_CUBE if q == 3 else Lc1Tag.RANK_ONE_CUBIC_ZERO)


def test_lc1_tpqr_triple_points():
    for p in range(3, 6):
        for q in range(p, 7):
            for r in range(q, 10):
                if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) < 1:
                    assert strict_lc1_screen(normal_form(Cusp(p, q, r))).tag is Lc1Tag.MULT_AT_LEAST_3


def test_screens_reject_degenerate_input():
    with pytest.raises(NonReducedError):
        strict_lc1_screen(Germ.zero(3))
    with pytest.raises(NonReducedError):
        strict_lc2_screen(P("x1^2*x2^2"))
    with pytest.raises(NotSingularError):
        strict_lc2_screen(P("x1 + x2^2"))


def test_lc2_double_point():
    v = strict_lc2_screen(P("x1^2 + x2^5 + x3^5"))
    assert v.tag is Lc2Tag.KLT and v.certificate is Certificate.DOUBLE_POINT


def test_lc2_triple_point_lc_cone():
    v = strict_lc2_screen(P("x1*x2*x3 + x1^4 + x2^4 + x3^4"))
    assert v.tag is Lc2Tag.KLT and v.certificate is Certificate.TRIPLE_POINT_WEIGHTED
    assert weighted_bound(v.weights, v.witness).value > Fraction(1, 2)


def test_lc2_x2y_corollary():
    v = strict_lc2_screen(P("x1^2*x2 + x2^4 + x3^5"))
    assert v.tag is Lc2Tag.KLT and v.certificate is Certificate.X2Y_COROLLARY
    assert weighted_bound(v.weights, v.witness).value == Fraction(5, 8)


def test_lc2_x3_corollary_both_weightings():
    v = strict_lc2_screen(P("x1^3 + x2^4 + x3^4"))
    assert v.certificate is Certificate.X3_COROLLARY
    assert weighted_bound(v.weights, v.witness).value == Fraction(7, 12)
    v = strict_lc2_screen(P("x1^3 + x1*x2^3 + x1*x3^3"))
    assert v.certificate is Certificate.X3_COROLLARY
    assert weighted_bound(v.weights, v.witness).value == Fraction(5, 9)


def test_lc2_recorded_bound_for_non_lc_cone():
    v = strict_lc2_screen(P("x2^2*x3 - x1^3 + x1^4 + x3^5"))
    assert v.certificate is Certificate.TRIPLE_POINT_RECORDED
    assert v.cubic.tag is CubicTag.CUSPIDAL


def test_lc2_undecided_cases():
    assert strict_lc2_screen(P("x1^2*x2 + x1*x3^3")).tag is Lc2Tag.DOUBLE_LINE_PLUS_LINE
    assert strict_lc2_screen(P("x1^3 + x1^2*x3^2 + x2^5")).tag is Lc2Tag.TRIPLE_LINE
    assert strict_lc2_screen(P("x1^4 + x2^4 + x3^4")).tag is Lc2Tag.CUBIC_ZERO


def test_lc2_weighted_certificates_exceed_half_after_changes():
    rng = random.Random(8)
    seeds = ["x1^2*x2 + x2^4 + x3^5", "x1^3 + x2^4 + x3^4", "x1^3 + x1*x2^3 + x3^5", "x1*x2*x3 + x1^4 + x2^4"]
    for text in seeds:
        for _ in range(5):
            g = substitute(P(text), random_change(rng, 3))
            v = strict_lc2_screen(g)
            assert v.tag is Lc2Tag.KLT
            if v.weights is not None:
                assert weighted_bound(v.weights, v.witness).value > Fraction(1, 2)


# --- normal forms -----------------------------------------------------------------------------------


def test_normal_form_t237():
    assert normal_form(Cusp(2, 3, 7)) == P("x1^2 + x2^3 + x3^7 + x1*x2*x3")


def test_normal_form_rejects_parabolic():
    with pytest.raises(InputError):
        normal_form(Cusp(3, 3, 3))
    with pytest.raises(InputError):
        normal_form(Cusp(3, 2, 7))


def test_normal_form_sextic():
    assert normal_form(SimpleEllipticSextic(Fraction(0), Fraction(1))) == P("x1^2 + x2^3 + x3^6")


def test_normal_form_quartic():
    g = normal_form(SimpleEllipticQuartic(tuple(Fraction(c) for c in (1, 0, 3, 0, 1))))
    assert g == P("x1^2 + x2^4 + 3*x2^2*x3^2 + x3^4")
    with pytest.raises(InputError):
        normal_form(SimpleEllipticQuartic((Fraction(1),)))
