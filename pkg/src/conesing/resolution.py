"""Star-shaped resolution of the cone surface: exact discrepancies,
vertex mld, the eps-lc test, and the link determinant.

The partial resolution of the cone over a couple carries the central
curve together with one cyclic-quotient chart per fractional point; the
chart at a point with reduced fractional coefficient p/q is the
two-dimensional lattice cone spanned by (0,1) and (q,p), with (0,1) the
ray of the central curve and (q,p) the ray of the invariant curve over
the point.  Resolving each chart inserts the lattice points on the
compact faces of the convex hull of the nonzero cone lattice points,
which is the classical continued-fraction string of q/(q-p); the result
is the star graph.

The central self-intersection is solved from the rational identity
(central curve)^2 = -deg D rather than taken from a closed formula, and
the forced integrality is asserted at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .divisors import CurveCouple, MarkedPoint
from .errors import (BadEpsilon, IntegralPoint, InternalNonIntegral, NotKlt,
                     SingularMatrix)
from .linalg import det_int, solve
from .quotient import is_log_fano, log_fano_quotient


# ---------------------------------------------------------------------------
# local lattice cones and their chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeCone2:
    """Cone spanned by (0,1) and (q,p) in the rank-2 lattice,
    0 < p <= q, gcd(p,q) = 1.  p = q = 1 is the smooth chart."""

    q: int
    p: int

    def __post_init__(self):
        from math import gcd
        if not (0 < self.p <= self.q) or gcd(self.p, self.q) != 1:
            raise ValueError(f"bad cone data (q,p)=({self.q},{self.p})")

    @property
    def generators(self):
        return ((0, 1), (self.q, self.p))

    def is_smooth(self) -> bool:
        return self.q == 1


def local_cone_at(C: CurveCouple, pt: MarkedPoint) -> LatticeCone2:
    """Chart cone of the partial resolution over a stored point.

    Only the fractional part of the coefficient matters: adding
    integral multiples of the point is a unimodular change of chart.
    """
    c = C.divisor.coeff(pt)
    q = c.denominator
    if q == 1:
        raise IntegralPoint(f"coefficient {c} at {pt} is integral, chart smooth")
    p = (c - (c.numerator // q)).numerator
    return LatticeCone2(q=q, p=p)


def hj_chain(cone: LatticeCone2) -> Tuple[int, ...]:
    """Self-intersections [-c_1, ..., -c_k] of the chain resolving the
    cone, listed from the (0,1) side outward.

    The c_j are the ceiling continued fraction of q/(q-p).  The ray
    recursion v_{j+1} = c_j v_j - v_{j-1} starting from (0,1), (1,1) is
    replayed as a certificate: it must land exactly on (q,p) through
    primitive interior rays.
    """
    if cone.is_smooth():
        raise IntegralPoint("smooth chart has no chain")
    q, p = cone.q, cone.p
    cs: List[int] = []
    a, b = q, q - p
    while b > 0:
        c = -(-a // b)          # ceil(a/b)
        cs.append(c)
        a, b = b, c * b - a
    if any(c < 2 for c in cs):
        raise AssertionError(f"chain {cs} has an entry below 2")
    # Certificate: replay the hull recursion.
    from math import gcd
    v_prev, v = (0, 1), (1, 1)
    for c in cs:
        v_prev, v = v, (c * v[0] - v_prev[0], c * v[1] - v_prev[1])
        if gcd(abs(v[0]), abs(v[1])) != 1:
            raise AssertionError("hull recursion left the primitive lattice")
    if v != (q, p):
        raise AssertionError(f"hull recursion ended at {v}, expected {(q, p)}")
    return tuple(-c for c in cs)


# ---------------------------------------------------------------------------
# the star graph
# ---------------------------------------------------------------------------

def _chain_alphas_betas(cs: List[int], ks: List[Fraction]):
    """Eliminate a chain from the outer end.

    Returns per-position (alpha, beta) with
    d_j = alpha_j d_{j-1} + beta_j for the tridiagonal system
    d_{j-1} - c_j d_j + d_{j+1} = k_j, outer boundary zero.
    """
    n = len(cs)
    alphas = [Fraction(0)] * n
    betas = [Fraction(0)] * n
    a_next, b_next = Fraction(0), Fraction(0)
    for j in range(n - 1, -1, -1):
        den = Fraction(cs[j]) - a_next
        if den <= 0:
            raise SingularMatrix("chain elimination lost definiteness")
        alphas[j] = Fraction(1) / den
        betas[j] = (b_next - ks[j]) / den
        a_next, b_next = alphas[j], betas[j]
    return alphas, betas


@dataclass(frozen=True)
class ResolutionGraph:
    """Star graph: central curve with one chain per fractional point.

    Vertex order everywhere: central curve first, then the chains in
    the canonical order of their base points, each from the central
    side outward.
    """

    central_self_int: int
    chains: Tuple[Tuple[int, ...], ...]
    chain_points: Tuple[MarkedPoint, ...]
    intersection_matrix: Tuple[Tuple[int, ...], ...]
    discrepancies: Tuple[Fraction, ...]
    determinant: int

    @property
    def size(self) -> int:
        return len(self.discrepancies)

    def log_discrepancies(self) -> Tuple[Fraction, ...]:
        return tuple(1 + d for d in self.discrepancies)

    def self_intersections(self) -> Tuple[int, ...]:
        out = [self.central_self_int]
        for chain in self.chains:
            out.extend(chain)
        return tuple(out)

    def to_json(self) -> dict:
        from .jsonio import fmt_q
        return {
            "center": self.central_self_int,
            "chains": [list(c) for c in self.chains],
            "discrepancies": [fmt_q(d) for d in self.discrepancies],
            "det": self.determinant,
        }


def build_graph(C: CurveCouple) -> ResolutionGraph:
    B = log_fano_quotient(C)
    if not is_log_fano(B):
        raise NotKlt(f"quotient boundary degree {B.total()} is >= 2")
    D = C.divisor
    frac = [(p, c) for p, c in D.terms if c.denominator > 1]
    frac.sort(key=lambda t: t[0].sort_key())

    chains = []
    alphas_all = []
    for pt, _ in frac:
        cone = local_cone_at(C, pt)
        chain = hj_chain(cone)
        cs = [-e for e in chain]
        alphas, _ = _chain_alphas_betas(cs, [Fraction(0)] * len(cs))
        chains.append(chain)
        alphas_all.append(alphas)

    # Central self-intersection from (central curve)^2 = -deg D.
    b0 = D.degree() + sum((al[0] for al in alphas_all), Fraction(0))
    if b0.denominator != 1:
        raise InternalNonIntegral(f"central self-intersection -{b0} not integral")
    b0 = int(b0)

    # Negative definiteness: the chains are standard and the Schur
    # complement at the center is -(b0 - sum alpha_1) = -deg D < 0.
    schur = b0 - sum((al[0] for al in alphas_all), Fraction(0))
    if schur != D.degree() or schur <= 0:
        raise SingularMatrix("central Schur complement is not -deg D")

    # Discrepancies by the same elimination with adjunction data.
    k_center = Fraction(b0 - 2)
    betas_all = []
    for chain in chains:
        cs = [-e for e in chain]
        ks = [Fraction(c - 2) for c in cs]
        _, betas = _chain_alphas_betas(cs, ks)
        betas_all.append(betas)
    num = k_center - sum((b[0] for b in betas_all), Fraction(0))
    den = sum((al[0] for al in alphas_all), Fraction(0)) - b0
    d_center = num / den
    disc = [d_center]
    for chain, alphas, betas in zip(chains, alphas_all, betas_all):
        prev = d_center
        for a, b in zip(alphas, betas):
            prev = a * prev + b
            disc.append(prev)

    for d in disc:
        if d <= -1:
            raise InternalNonIntegral(f"discrepancy {d} <= -1 on a klt cone")

    matrix = _star_matrix(b0, chains)
    det = det_int(matrix)
    n = len(matrix)
    if det == 0 or (det > 0) != (n % 2 == 0):
        raise SingularMatrix("intersection matrix is not negative definite")

    return ResolutionGraph(
        central_self_int=-b0,
        chains=tuple(chains),
        chain_points=tuple(pt for pt, _ in frac),
        intersection_matrix=tuple(tuple(row) for row in matrix),
        discrepancies=tuple(disc),
        determinant=abs(det),
    )


def _star_matrix(b0: int, chains) -> List[List[int]]:
    size = 1 + sum(len(c) for c in chains)
    m = [[0] * size for _ in range(size)]
    m[0][0] = -b0
    idx = 1
    for chain in chains:
        for j, e in enumerate(chain):
            m[idx][idx] = e
            prev = 0 if j == 0 else idx - 1
            m[idx][prev] = m[prev][idx] = 1
            idx += 1
    return m


def discrepancies(G: ResolutionGraph) -> Tuple[Fraction, ...]:
    """Unique solution of M d = k, k_j = -E_j^2 - 2, solved densely.

    Independent of the chain elimination used by build_graph; the two
    must agree.
    """
    selfints = G.self_intersections()
    rhs = [Fraction(-e - 2) for e in selfints]
    status, x = solve([list(row) for row in G.intersection_matrix], rhs)
    if status != "unique":
        raise SingularMatrix("intersection matrix must be invertible")
    return tuple(x)


# ---------------------------------------------------------------------------
# blow-down and mld
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlownDownGraph:
    """What remains after iteratively contracting all (-1)-vertices."""

    self_intersections: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    surviving: Tuple[int, ...]      # indices into the original graph

    @property
    def empty(self) -> bool:
        return not self.self_intersections

    def to_json(self) -> Optional[dict]:
        if self.empty:
            return None
        return {"vertices": list(self.self_intersections),
                "edges": [list(e) for e in self.edges]}


def blow_down(G: ResolutionGraph) -> BlownDownGraph:
    selfints = list(G.self_intersections())
    n = len(selfints)
    mult: Dict[Tuple[int, int], int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = G.intersection_matrix[i][j]
            if w:
                mult[(i, j)] = w
    alive = set(range(n))

    def neighbors(v):
        out = []
        for (i, j), w in mult.items():
            if i == v:
                out.append((j, w))
            elif j == v:
                out.append((i, w))
        return out

    while True:
        target = next((v for v in sorted(alive) if selfints[v] == -1), None)
        if target is None:
            break
        nbrs = neighbors(target)
        for v, w in nbrs:
            if w != 1:
                raise InternalNonIntegral("contraction of a tangent curve")
            selfints[v] += 1
        for (a, wa) in nbrs:
            for (b, wb) in nbrs:
                if a < b:
                    key = (a, b)
                    mult[key] = mult.get(key, 0) + wa * wb
                    if mult[key] > 1:
                        raise InternalNonIntegral("contraction created a tangency")
        for key in [k for k in mult if target in k]:
            del mult[key]
        alive.remove(target)

    surviving = tuple(sorted(alive))
    remap = {v: i for i, v in enumerate(surviving)}
    return BlownDownGraph(
        self_intersections=tuple(selfints[v] for v in surviving),
        edges=tuple(sorted((remap[i], remap[j]) for (i, j) in mult)),
        surviving=surviving,
    )


def mld_vertex(C: CurveCouple) -> Fraction:
    """Minimal log discrepancy over the vertex.

    For klt input the minimum over the star graph equals the minimum
    over any partial blow-down of it (contractions only remove divisors
    whose log discrepancy is a sum of surviving ones); if the graph
    contracts to nothing the point is smooth and the mld is 2.
    """
    G = build_graph(C)
    raw = min(G.log_discrepancies())
    bd = blow_down(G)
    if bd.empty:
        if raw != 2:
            raise InternalNonIntegral(f"smooth cone with graph minimum {raw}")
        return Fraction(2)
    surviving_min = min(G.log_discrepancies()[v] for v in bd.surviving)
    if surviving_min != raw:
        raise InternalNonIntegral("blow-down changed the graph minimum")
    return raw


# ---------------------------------------------------------------------------
# transverse chart germs
# ---------------------------------------------------------------------------

def germ_mld(cone: LatticeCone2) -> Fraction:
    """Mld of the two-dimensional toric germ of the cone: minimum of the
    linear form normalized to 1 on the primitive rays, over interior
    lattice points, enumerated inside the bounded region {form <= 2}."""
    r1, r2 = cone.generators
    status, form = solve([list(r1), list(r2)], [Fraction(1), Fraction(1)])
    if status != "unique":
        raise SingularMatrix("degenerate cone")
    corners = [(0, 0), (2 * r1[0], 2 * r1[1]), (2 * r2[0], 2 * r2[1])]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    det = r1[0] * r2[1] - r1[1] * r2[0]
    best: Optional[Fraction] = None
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) == (0, 0):
                continue
            # ray coordinates of (x, y)
            s = Fraction(x * r2[1] - y * r2[0], det)
            t = Fraction(y * r1[0] - x * r1[1], det)
            if s <= 0 or t <= 0:
                continue
            val = form[0] * x + form[1] * y
            if val <= 2 and (best is None or val < best):
                best = val
    if best is None:
        raise AssertionError("empty mld enumeration region")
    return best


def transverse_types(C: CurveCouple) -> Tuple[Tuple[MarkedPoint, LatticeCone2, Fraction], ...]:
    """Chart germ and its mld for each fractional point."""
    B = log_fano_quotient(C)
    if not is_log_fano(B):
        raise NotKlt(f"quotient boundary degree {B.total()} is >= 2")
    out = []
    for pt, c in C.divisor.terms:
        if c.denominator > 1:
            cone = local_cone_at(C, pt)
            out.append((pt, cone, germ_mld(cone)))
    return tuple(out)


def is_eps_lc_x(C: CurveCouple, eps) -> bool:
    """eps-lc test for the whole affine cone: vertex mld together with
    the chart germs along the invariant curves.  Non-klt input is
    simply not eps-lc."""
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise BadEpsilon(f"epsilon {eps} outside (0, 1]")
    try:
        m = mld_vertex(C)
    except NotKlt:
        return False
    values = [m, Fraction(1)]
    values.extend(t[2] for t in transverse_types(C))
    return min(values) >= eps


def link_determinant(G: ResolutionGraph) -> int:
    return G.determinant
