from fractions import Fraction

import pytest

from conesing.divisors import (CurveCouple, finite_point, infinity_point,
                               label_point)
from conesing.errors import BoundTooSmall
from conesing.sections import (HilbertData, embedding_dimension, h0,
                               hilbert_series, is_smooth, multiplication_rank,
                               presentation, section_basis)

P0 = finite_point(0)
P1 = finite_point(1)
PINF = infinity_point()
F = Fraction


def test_h0_examples():
    C = CurveCouple.of({P0: 1})
    for n in range(10):
        assert h0(C, n) == n + 1
    C = CurveCouple.of({P0: F(1, 2), P1: F(1, 2)})
    for n in range(20):
        assert h0(C, n) == 2 * (n // 2) + 1
    C = CurveCouple.of({P0: F(1, 2), PINF: -1, P1: F(3, 4)})
    assert h0(C, 1) == 0


def test_hilbert_series_closed_forms():
    hd = hilbert_series(CurveCouple.of({P0: 1}))
    assert hd.numerator == (1,) and hd.period == 1
    hd = hilbert_series(CurveCouple.of({P0: F(1, 2), P1: F(1, 2)}))
    assert hd.numerator == (1, 0, 1) and hd.period == 2
    hd = hilbert_series(CurveCouple.of({P0: 2}))
    assert hd.numerator == (1, 1) and hd.period == 1


@pytest.mark.parametrize("terms", [
    {P0: 1}, {P0: 2}, {P0: F(1, 2), P1: F(1, 2)},
    {P0: F(2, 3)}, {P0: F(2, 3), P1: F(4, 5)},
    {P0: F(-1, 2), P1: F(1, 3), PINF: F(1, 4)},
    {P0: F(1, 6), PINF: F(1, 6)},
])
def test_hilbert_series_matches_h0(terms):
    C = CurveCouple.of(terms)
    hd = hilbert_series(C)
    for n in range(0, 60):
        assert hd.expand(n) == h0(C, n)


def test_section_basis_examples():
    # degree bound at infinity is carried by the numerator degree
    sb = section_basis(CurveCouple.of({PINF: 1}), 1)
    assert len(sb.elements) == 2 and sb.degree == 1

    sb = section_basis(CurveCouple.of({P0: F(1, 2)}), 2)
    assert len(sb.elements) == 2
    assert dict(sb.poles) == {P0: 1}

    sb = section_basis(CurveCouple.of({P0: F(1, 2), P1: F(1, 2)}), 2)
    assert len(sb.elements) == 3
    assert dict(sb.poles) == {P0: 1, P1: 1}


def test_section_basis_with_labels():
    sb = section_basis(CurveCouple.of({label_point("p"): F(1, 2),
                                       label_point("q"): F(1, 2)}), 2)
    assert len(sb.elements) == 3


def test_multiplication_rank_examples():
    assert multiplication_rank(CurveCouple.of({P0: 1}), 1, 1) == (3, 0)
    assert multiplication_rank(
        CurveCouple.of({P0: F(1, 2), P1: F(1, 2)}), 1, 1) == (1, 2)
    # h(1) = 3 for degree 2, so the image is all of the 5-dimensional target
    assert multiplication_rank(CurveCouple.of({P0: 2}), 1, 1) == (5, 0)


def test_multiplication_rank_consistency():
    for terms in ({P0: F(2, 3)}, {P0: F(1, 2), PINF: F(1, 3)}, {P0: 3}):
        C = CurveCouple.of(terms)
        for a in range(1, 6):
            for b in range(1, 6):
                r, cok = multiplication_rank(C, a, b)
                assert r + cok == h0(C, a + b)
                if h0(C, a) and h0(C, b):
                    assert r == h0(C, a) + h0(C, b) - 1


def test_presentation_polynomial_ring():
    pres = presentation(CurveCouple.of({P0: 1}))
    assert pres.generator_degrees == (1, 1)
    assert pres.relation_degrees == ()
    assert pres.equations == ()


def test_presentation_quadric_cone():
    pres = presentation(CurveCouple.of({P0: 2}))
    assert pres.generator_degrees == (1, 1, 1)
    assert pres.relation_degrees == (2,)
    assert len(pres.equations) == 1
    # the equation is the rank-3 quadric x z = y^2 in the monomial basis
    assert pres.equations[0] in ("x*z - y**2", "y**2 - x*z")


def _structural_a_series(pres, n):
    """The relation must be (deg-n gen)*(deg-n gen) = (deg-1 gen)^{2n}."""
    assert pres.generator_degrees == (1, n, n) if n > 1 else (1, 1, 1)
    assert pres.relation_degrees == (2 * n,)
    assert len(pres.equations) == 1


def brute_monoid_presentation(n, bound):
    """Independent oracle for the couple (1/n)[0] + (1/n)[inf]: the ring
    is the monoid algebra on {(a, k): |a| <= floor(k/n)}; generators are
    the indecomposables, the relation count in each degree follows from
    pair collisions."""
    elems = [(a, k) for k in range(1, bound + 1)
             for a in range(-(k // n), k // n + 1)]
    elem_set = set(elems)
    gens = []
    for (a, k) in elems:
        dec = False
        for (b, j) in elems:
            if j < k and (a - b, k - j) in elem_set:
                dec = True
                break
        if not dec:
            gens.append((a, k))
    return sorted(k for _, k in gens)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_presentation_a_series(n):
    C = CurveCouple.of({P0: F(1, n), PINF: F(1, n)})
    pres = presentation(C, gen_bound=2 * n + 2, rel_bound=2 * n + 2)
    assert brute_monoid_presentation(n, 3 * n + 2) == sorted(
        pres.generator_degrees)
    _structural_a_series(pres, n)
    # exponent structure of the single equation: one term mixes the two
    # degree-n generators, the other is the 2n-th power of the degree-1 one
    eq = pres.equations[0]
    assert eq.count("*") >= 1


def test_presentation_linear_equivalence_invariance():
    a = presentation(CurveCouple.of({P0: F(1, 2), P1: F(1, 2)}))
    b = presentation(CurveCouple.of({P0: F(1, 2), PINF: F(1, 2)}))
    assert a.generator_degrees == b.generator_degrees == (1, 2, 2)
    assert a.relation_degrees == b.relation_degrees == (4,)


def test_presentation_bound_too_small():
    C = CurveCouple.of({P0: F(1, 6), PINF: F(1, 6)})
    with pytest.raises(BoundTooSmall):
        presentation(C, gen_bound=3, rel_bound=3)


def test_embedding_dimension_and_smoothness():
    assert embedding_dimension(CurveCouple.of({P0: 1})) == 2
    assert is_smooth(CurveCouple.of({P0: 1}))
    assert embedding_dimension(CurveCouple.of({P0: 2})) == 3
    assert not is_smooth(CurveCouple.of({P0: 2}))
    assert embedding_dimension(
        CurveCouple.of({P0: F(1, 2), P1: F(1, 2)})) == 3
    assert is_smooth(CurveCouple.of({P0: F(1, 2)}))
    # the quadric cone again, reached through a fractional coefficient
    assert embedding_dimension(CurveCouple.of({P0: F(2, 3)})) == 3


def test_presentation_saturation_certificate():
    C = CurveCouple.of({P0: F(2, 3), P1: F(4, 5)})
    pres = presentation(C, gen_bound=20, rel_bound=20, want_relations=False)
    assert pres.verified_through == 40
    hd = hilbert_series(C)
    # spot check: the generated subalgebra reproduced h through the bound
    for n in range(41):
        assert hd.expand(n) == h0(C, n)
