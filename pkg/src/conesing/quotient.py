"""The standard-coefficient quotient pair and its discrepancy calculus.

A couple (line, D) determines a pair (line, B) with boundary
B = sum (1 - 1/q_i) [y_i].  Log discrepancies of the cone surface are
controlled by this pair: horizontal valuations (over points of the
line) have log discrepancy exactly 1, and the central exceptional curve
has log discrepancy -u/m where m(K + B) = H + u D with H integral of
degree zero and m minimal positive.

Sign convention: m > 0, u < 0, and the returned vertex log discrepancy
is the positive number -u/m = deg(-(K+B)) / deg(D).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .divisors import (CurveCouple, IntegralDivisorP1, MarkedPoint,
                       QDivisorP1, canonical_divisor_p1, denominators_lcm,
                       max_isotropy)
from .errors import BadEpsilon, InternalNonIntegral, NotLogFano
from .jsonio import fmt_q


@dataclass(frozen=True)
class StandardPair:
    """Boundary with standard coefficients 1 - 1/q, q >= 2, on the line."""

    boundary: Tuple[Tuple[MarkedPoint, Fraction], ...]

    def __post_init__(self):
        for p, b in self.boundary:
            one_minus = 1 - b
            if not (0 <= b < 1) or one_minus.numerator != 1:
                raise ValueError(f"coefficient {b} at {p} is not of the form 1 - 1/q")
            if b == 0:
                raise ValueError("zero coefficients are not stored")

    def coeff(self, pt: MarkedPoint) -> Fraction:
        for p, b in self.boundary:
            if p == pt:
                return b
        return Fraction(0)

    def total(self) -> Fraction:
        return sum((b for _, b in self.boundary), Fraction(0))


def log_fano_quotient(C: CurveCouple) -> StandardPair:
    terms = []
    for p, c in C.divisor.terms:
        q = c.denominator
        if q >= 2:
            terms.append((p, Fraction(q - 1, q)))
    return StandardPair(tuple(terms))


def curve_log_discrepancy(P: StandardPair, pt: MarkedPoint) -> Fraction:
    return 1 - P.coeff(pt)


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise BadEpsilon(f"epsilon {eps} outside (0, 1]")
    return eps


def is_eps_lc_pair(P: StandardPair, eps) -> bool:
    eps = _check_eps(eps)
    return all(b <= 1 - eps for _, b in P.boundary)


def is_log_fano(P: StandardPair) -> bool:
    # Coefficients below 1 are automatic for standard coefficients;
    # ampleness of -(K+B) on the line is a degree condition.
    return P.total() < 2


@dataclass(frozen=True)
class VertexData:
    """Minimal decomposition m(K + B) = H + u D with H integral, deg 0."""

    m: int
    u: int
    H: IntegralDivisorP1


def _pair_degree(P: StandardPair) -> Fraction:
    return Fraction(-2) + P.total()


def vertex_decomposition(C: CurveCouple) -> VertexData:
    B = log_fano_quotient(C)
    if not is_log_fano(B):
        raise NotLogFano(f"boundary degree {B.total()} is >= 2")
    D = C.divisor
    ratio = _pair_degree(B) / D.degree()          # u/m, negative
    # A solution exists with m = den(ratio) * L * prod(q_i); scan up to it.
    L = denominators_lcm(D)
    cap = ratio.denominator * L
    for _, c in D.terms:
        cap *= c.denominator
    kcan = canonical_divisor_p1()
    for m in range(1, cap + 1):
        u = m * ratio
        if u.denominator != 1:
            continue
        u = int(u)
        ok = True
        for p, c in D.terms:
            val = m * B.coeff(p) - u * c
            if val.denominator != 1:
                ok = False
                break
        if not ok:
            continue
        terms = {}
        pts = set(D.points()) | set(kcan.points()) | {p for p, _ in B.boundary}
        for p in pts:
            val = m * (kcan.coeff(p) + B.coeff(p)) - u * D.coeff(p)
            if val.denominator != 1:
                raise InternalNonIntegral(f"coefficient {val} at {p}")
            if val != 0:
                terms[p] = int(val)
        H = IntegralDivisorP1.of(terms)
        if H.degree() != 0:
            raise InternalNonIntegral(f"H has degree {H.degree()}")
        return VertexData(m=m, u=u, H=H)
    raise InternalNonIntegral(f"no decomposition with m <= {cap}")


def vertex_log_discrepancy(C: CurveCouple) -> Fraction:
    B = log_fano_quotient(C)
    if not is_log_fano(B):
        raise NotLogFano(f"boundary degree {B.total()} is >= 2")
    return -_pair_degree(B) / C.degree()


def horizontal_log_discrepancy(C: CurveCouple, pt: MarkedPoint) -> Fraction:
    """Log discrepancy of the invariant curve over a point of the line.

    Equals (Weil index) * (pair log discrepancy) = q * (1/q) = 1 at
    stored points and 1 elsewhere; the product is asserted, not assumed.
    """
    B = log_fano_quotient(C)
    if not is_log_fano(B):
        raise NotLogFano(f"boundary degree {B.total()} is >= 2")
    w = C.divisor.coeff(pt).denominator
    a = w * curve_log_discrepancy(B, pt)
    if a != 1:
        raise InternalNonIntegral(f"horizontal log discrepancy {a} != 1 at {pt}")
    return a


def cartier_index_of_kx(C: CurveCouple) -> int:
    """Least m making m K Cartier on the cone surface: the m of the
    minimal decomposition."""
    return vertex_decomposition(C).m


@dataclass(frozen=True)
class EpsConditionsReport:
    a_e0: Fraction
    a_e0_ok: bool
    pair_eps: Fraction
    pair_ok: bool
    max_isotropy: int
    isotropy_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.a_e0_ok and self.pair_ok and self.isotropy_ok

    def to_json(self) -> dict:
        return {
            "a_e0": fmt_q(self.a_e0),
            "a_e0_ok": self.a_e0_ok,
            "pair_eps": fmt_q(self.pair_eps),
            "pair_ok": self.pair_ok,
            "max_isotropy": self.max_isotropy,
            "isotropy_ok": self.isotropy_ok,
            "all_ok": self.all_ok,
        }


def necessary_eps_conditions(C: CurveCouple, eps, N: int) -> EpsConditionsReport:
    """Conditions any member of the eps-lc, isotropy <= N class satisfies.

    Necessary only; the resolution oracle decides actual membership.
    """
    eps = _check_eps(eps)
    a0 = vertex_log_discrepancy(C)
    B = log_fano_quotient(C)
    pair_eps = eps / N
    iso = max_isotropy(C)
    return EpsConditionsReport(
        a_e0=a0,
        a_e0_ok=a0 >= eps,
        pair_eps=pair_eps,
        pair_ok=is_eps_lc_pair(B, pair_eps),
        max_isotropy=iso,
        isotropy_ok=iso <= N,
    )
