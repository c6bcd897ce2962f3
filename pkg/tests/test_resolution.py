from fractions import Fraction

import pytest

from conesing.divisors import CurveCouple, finite_point, infinity_point
from conesing.errors import IntegralPoint, NotKlt, BadEpsilon
from conesing.linalg import det_int, is_negative_definite
from conesing.quotient import vertex_log_discrepancy
from conesing.resolution import (LatticeCone2, blow_down, build_graph,
                                 discrepancies, germ_mld, hj_chain,
                                 is_eps_lc_x, link_determinant, local_cone_at,
                                 mld_vertex, transverse_types)
from helpers import random_couples

P0 = finite_point(0)
P1 = finite_point(1)
PINF = infinity_point()
F = Fraction


def C(terms):
    return CurveCouple.of(terms)


# ---------------------------------------------------------------------------
# local cones and chains
# ---------------------------------------------------------------------------

def test_local_cone_examples():
    assert local_cone_at(C({P0: F(1, 2)}), P0) == LatticeCone2(2, 1)
    assert local_cone_at(C({P0: F(2, 3)}), P0) == LatticeCone2(3, 2)
    with pytest.raises(IntegralPoint):
        local_cone_at(C({P0: 1}), P0)
    # only the fractional part matters
    assert local_cone_at(C({P0: F(5, 3)}), P0) == LatticeCone2(3, 2)
    assert local_cone_at(C({P0: F(-1, 2), P1: 1}), P0) == LatticeCone2(2, 1)


def cf_expand(a, b):
    """Ceiling continued fraction of a/b, independent reference."""
    out = []
    while b:
        c = -(-a // b)
        out.append(c)
        a, b = b, c * b - a
    return out


def hull_chain(q, p):
    """Direct lattice-hull oracle: walk the boundary of the convex hull
    of the nonzero lattice points of the cone spanned by (0,1), (q,p)."""
    def in_cone(x, y):
        # (x, y) = s(0,1) + t(q,p): t = x/q, s = y - x p / q
        return x >= 0 and q * y - p * x >= 0

    pts = [(x, y) for x in range(0, 2 * q + 1)
           for y in range(0, 2 * q + 2) if (x, y) != (0, 0) and in_cone(x, y)]
    hull = [(0, 1)]
    current = (0, 1)
    while current != (q, p):
        best = None
        for cand in pts:
            if cand == current or cand[0] < current[0]:
                continue
            if best is None:
                best = cand
                continue
            cross = (cand[0] - current[0]) * (best[1] - current[1]) - \
                    (cand[1] - current[1]) * (best[0] - current[0])
            if cross > 0 or (cross == 0 and abs(cand[0] - current[0]) <
                             abs(best[0] - current[0])):
                best = cand
        hull.append(best)
        current = best
    cs = []
    for i in range(1, len(hull) - 1):
        a, m, b = hull[i - 1], hull[i], hull[i + 1]
        s = (a[0] + b[0], a[1] + b[1])
        assert s[0] == -(-s[0] // m[0] if m[0] else 0) * m[0] or True
        c = (a[0] + b[0]) // m[0] if m[0] else (a[1] + b[1]) // m[1]
        assert (c * m[0], c * m[1]) == s
        cs.append(-c)
    return cs


@pytest.mark.parametrize("q,p,expected", [
    (2, 1, (-2,)),
    (3, 2, (-3,)),
    (3, 1, (-2, -2)),
    (5, 3, (-3, -2)),
    (5, 2, (-2, -3)),
    (9, 2, (-2, -2, -2, -3)),
    (7, 5, (-4, -2)),
])
def test_hj_chain_frozen(q, p, expected):
    assert hj_chain(LatticeCone2(q, p)) == expected


@pytest.mark.parametrize("q", range(2, 13))
def test_hj_chain_against_hull_oracle(q):
    from math import gcd
    for p in range(1, q):
        if gcd(p, q) != 1:
            continue
        chain = hj_chain(LatticeCone2(q, p))
        assert list(chain) == hull_chain(q, p)
        # continued fraction of q/(q-p), and the continuant recovers q
        assert [-c for c in chain] == cf_expand(q, q - p)
        mat = [[chain[i] if i == j else (1 if abs(i - j) == 1 else 0)
                for j in range(len(chain))] for i in range(len(chain))]
        assert abs(det_int(mat)) == q


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

def test_build_graph_single_vertex():
    for m in range(1, 8):
        G = build_graph(C({P0: m}))
        assert G.central_self_int == -m
        assert G.chains == ()
        assert G.determinant == m


def test_build_graph_a3():
    G = build_graph(C({P0: F(1, 2), P1: F(1, 2)}))
    assert G.central_self_int == -2
    assert G.chains == ((-2,), (-2,))
    assert G.determinant == 4
    assert G.discrepancies == (F(0), F(0), F(0))


def test_build_graph_three_half_points():
    G = build_graph(C({P0: F(1, 2), P1: F(1, 2), PINF: F(1, 2)}))
    assert G.central_self_int == -3
    assert G.chains == ((-2,), (-2,), (-2,))
    assert G.discrepancies[0] == F(-2, 3)


def test_build_graph_rejects_non_klt():
    with pytest.raises(NotKlt):
        build_graph(C({P0: F(6, 7), P1: F(6, 7), PINF: F(6, 7)}))


def test_dense_solve_agrees_with_chain_elimination():
    for Cp in random_couples(seed=21, count=40):
        G = build_graph(Cp)
        assert discrepancies(G) == G.discrepancies


def test_matrix_negative_definite():
    for Cp in random_couples(seed=22, count=30, max_q=9):
        G = build_graph(Cp)
        assert is_negative_definite([list(r) for r in G.intersection_matrix])


def test_central_self_intersection_closed_form():
    # b0 = sum of floors + number of fractional points
    for Cp in random_couples(seed=23, count=40):
        G = build_graph(Cp)
        D = Cp.divisor
        b0 = sum(c.numerator // c.denominator for _, c in D.terms) + \
            sum(1 for _, c in D.terms if c.denominator > 1)
        assert G.central_self_int == -b0


def test_discrepancy_examples():
    for m in range(2, 9):
        G = build_graph(C({P0: m}))
        assert G.discrepancies == (F(2 - m, m),)
        assert G.log_discrepancies() == (F(2, m),)
    G = build_graph(C({P0: 2}))
    assert G.discrepancies == (F(0),)


def test_mld_examples():
    assert mld_vertex(C({P0: 1})) == 2
    assert mld_vertex(C({P0: 2})) == 1
    for m in range(2, 12):
        assert mld_vertex(C({P0: m})) == F(2, m)
    assert mld_vertex(C({P0: F(1, 2), P1: F(1, 2)})) == 1
    assert mld_vertex(C({P0: F(1, 2)})) == 2          # weighted plane, smooth
    assert mld_vertex(C({P0: F(2, 3)})) == 1          # quadric cone again
    assert mld_vertex(C({P0: F(1, 2), P1: F(1, 2), PINF: F(1, 2)})) == F(1, 3)


def test_vertex_log_discrepancy_matches_graph():
    for Cp in random_couples(seed=24, count=60):
        G = build_graph(Cp)
        assert 1 + G.discrepancies[0] == vertex_log_discrepancy(Cp)


def test_blow_down():
    bd = blow_down(build_graph(C({P0: F(1, 2)})))
    assert bd.empty
    bd = blow_down(build_graph(C({P0: F(1, 3)})))
    assert bd.empty
    bd = blow_down(build_graph(C({P0: 2})))
    assert bd.self_intersections == (-2,)
    bd = blow_down(build_graph(C({P0: F(2, 3)})))
    assert bd.self_intersections == (-2,)
    # the D4 configuration survives untouched
    bd = blow_down(build_graph(
        C({P0: F(-1, 2), P1: F(1, 2), PINF: F(1, 2)})))
    assert sorted(bd.self_intersections) == [-2, -2, -2, -2]


def test_transverse_types():
    tt = transverse_types(C({P0: F(1, 2), P1: 3}))
    assert len(tt) == 1
    assert tt[0][0] == P0 and tt[0][2] == 1
    tt = transverse_types(C({P0: F(2, 3)}))
    assert tt[0][2] == F(2, 3)
    assert transverse_types(C({P0: 4})) == ()


def test_germ_mld_matches_chain_germ():
    # Independent check: solve the chain adjunction system of the germ
    # alone and compare with the lattice enumeration.
    from math import gcd
    from conesing.linalg import solve
    for q in range(2, 11):
        for p in range(1, q):
            if gcd(p, q) != 1:
                continue
            chain = hj_chain(LatticeCone2(q, p))
            k = len(chain)
            mat = [[chain[i] if i == j else (1 if abs(i - j) == 1 else 0)
                    for j in range(k)] for i in range(k)]
            rhs = [F(-e - 2) for e in chain]
            status, d = solve(mat, rhs)
            assert status == "unique"
            assert germ_mld(LatticeCone2(q, p)) == 1 + min(d)


def test_is_eps_lc_x():
    assert is_eps_lc_x(C({P0: 2}), 1)
    for m in range(1, 10):
        for eps in (F(1), F(1, 2), F(1, 3)):
            expected = (m == 1) or (F(2, m) >= eps)
            assert is_eps_lc_x(C({P0: m}), eps) == expected
    assert is_eps_lc_x(C({P0: F(1, 2), P1: F(1, 2)}), 1)
    # not klt at all: simply not eps-lc
    assert not is_eps_lc_x(C({P0: F(6, 7), P1: F(6, 7), PINF: F(6, 7)}), F(1, 2))
    with pytest.raises(BadEpsilon):
        is_eps_lc_x(C({P0: 2}), F(3, 2))


def test_link_determinants():
    assert link_determinant(build_graph(C({P0: 5}))) == 5
    assert link_determinant(build_graph(C({P0: F(1, 2), P1: F(1, 2)}))) == 4
    # D4 star
    G = build_graph(C({P0: F(-1, 2), P1: F(1, 2), PINF: F(1, 2)}))
    assert G.central_self_int == -2
    assert link_determinant(G) == 4
    # smooth couples have unimodular graphs
    assert link_determinant(build_graph(C({P0: F(1, 2)}))) == 1


def test_canonical_entries_are_du_val():
    # eps = 1 with nonempty blow-down forces every self-intersection -2
    for Cp in random_couples(seed=25, count=80, max_q=6):
        try:
            if not is_eps_lc_x(Cp, 1):
                continue
        except NotKlt:
            continue
        bd = blow_down(build_graph(Cp))
        if not bd.empty:
            assert all(s == -2 for s in bd.self_intersections)
