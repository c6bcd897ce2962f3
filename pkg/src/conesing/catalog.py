"""Exhaustive catalog of eps-lc cone surface singularities with bounded
isotropies.

The search space is finite: the quotient pair forces at most three
fractional points (which line automorphisms pin to 0, 1, infinity, so
normal-form keys classify couples up to isomorphism), denominators are
bounded by the isotropy bound, and the central log discrepancy bounds
the degree by 2/eps.  Every candidate is tested with the resolution
oracle; the necessary conditions from the quotient pair are used only
for auditing, never for membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import List, Optional, Tuple

from .divisors import (CANONICAL_POSITIONS, CurveCouple, P0, PINF,
                       denominators_lcm, max_isotropy, normal_form)
from .errors import BadEpsilon
from .jsonio import fmt_q, parse_q
from .quotient import (cartier_index_of_kx, log_fano_quotient,
                       vertex_log_discrepancy)
from .resolution import (blow_down, build_graph, is_eps_lc_x, mld_vertex,
                         transverse_types)
from .sections import hilbert_series, presentation


@dataclass(frozen=True)
class SearchParams:
    epsilon: Fraction
    isotropy_bound: int

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not (0 < eps <= 1):
            raise BadEpsilon(f"epsilon {eps} outside (0, 1]")
        if self.isotropy_bound < 1:
            raise BadEpsilon(f"isotropy bound {self.isotropy_bound} < 1")


@dataclass(frozen=True)
class SearchBounds:
    k_max: int
    q_min: int
    q_max: int
    degree_max: Fraction
    k_max_effective: int

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "q_min": self.q_min,
            "q_max": self.q_max,
            "degree_max": fmt_q(self.degree_max),
            "k_max_effective": self.k_max_effective,
        }


def search_bounds(params: SearchParams) -> SearchBounds:
    eps, N = params.epsilon, params.isotropy_bound
    q_max = min(N, int(Fraction(N) / eps))
    effective = 3 if q_max >= 2 else 0
    return SearchBounds(k_max=3, q_min=2, q_max=q_max,
                        degree_max=Fraction(2) / eps,
                        k_max_effective=effective)


@dataclass(frozen=True)
class GraphSummary:
    center: int
    chains: Tuple[Tuple[int, ...], ...]
    blown_down_vertices: Optional[Tuple[int, ...]]   # None means smooth

    def to_json(self) -> dict:
        return {
            "center": self.center,
            "chains": [list(c) for c in self.chains],
            "blown_down": (list(self.blown_down_vertices)
                           if self.blown_down_vertices is not None else None),
        }


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    degree: Fraction
    fractional: Tuple[Tuple[int, int], ...]     # (p, q) pairs, canonical order
    a_e0: Fraction
    mld: Fraction
    cartier_index_kx: int
    max_isotropy: int
    link_determinant: int
    hilbert_numerator: Tuple[int, ...]
    hilbert_period: int
    embedding_dimension: int
    graph: GraphSummary

    def couple(self) -> CurveCouple:
        return couple_from_entry_data(self.fractional, self.degree)

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "degree": fmt_q(self.degree),
            "fractional": [[p, q] for p, q in self.fractional],
            "a_e0": fmt_q(self.a_e0),
            "mld": fmt_q(self.mld),
            "cartier_index_kx": self.cartier_index_kx,
            "max_isotropy": self.max_isotropy,
            "link_determinant": self.link_determinant,
            "hilbert_numerator": list(self.hilbert_numerator),
            "hilbert_period": self.hilbert_period,
            "embedding_dimension": self.embedding_dimension,
            "graph": self.graph.to_json(),
        }


def entry_from_json(doc) -> CatalogEntry:
    return CatalogEntry(
        key=doc["key"],
        degree=parse_q(doc["degree"]),
        fractional=tuple((int(p), int(q)) for p, q in doc["fractional"]),
        a_e0=parse_q(doc["a_e0"]),
        mld=parse_q(doc["mld"]),
        cartier_index_kx=int(doc["cartier_index_kx"]),
        max_isotropy=int(doc["max_isotropy"]),
        link_determinant=int(doc["link_determinant"]),
        hilbert_numerator=tuple(int(x) for x in doc["hilbert_numerator"]),
        hilbert_period=int(doc["hilbert_period"]),
        embedding_dimension=int(doc["embedding_dimension"]),
        graph=GraphSummary(
            center=int(doc["graph"]["center"]),
            chains=tuple(tuple(int(x) for x in c) for c in doc["graph"]["chains"]),
            blown_down_vertices=(tuple(int(x) for x in doc["graph"]["blown_down"])
                                 if doc["graph"]["blown_down"] is not None else None),
        ),
    )


def couple_from_entry_data(fractional, degree: Fraction) -> CurveCouple:
    """Rebuild the canonical couple from its fractional type and degree."""
    coeffs = {}
    fracs = [Fraction(p, q) for p, q in fractional]
    for pos, f in zip(CANONICAL_POSITIONS, fracs):
        coeffs[pos] = coeffs.get(pos, Fraction(0)) + f
    leftover = Fraction(degree) - sum(fracs, Fraction(0))
    if leftover.denominator != 1:
        raise ValueError("degree incompatible with fractional type")
    if leftover:
        target = PINF if len(fracs) <= 2 else P0
        coeffs[target] = coeffs.get(target, Fraction(0)) + leftover
    return CurveCouple.of(coeffs)


def _fractional_coefficients(q_max: int) -> List[Fraction]:
    out = []
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                out.append(Fraction(p, q))
    # canonical order: descending value, ties by denominator then numerator
    out.sort(key=lambda f: (-f, f.denominator, f.numerator))
    return out


def _embedding_bound(C: CurveCouple) -> int:
    """Generation degree bound used for catalog entries.

    Multiplying by the full-period piece is surjective onto any degree
    whose predecessor one period down is nonempty, so generators stop
    by L + ceil(k / deg D); one extra period is kept as margin.
    """
    L = denominators_lcm(C.divisor)
    k = len(C.divisor.terms)
    return L + ceil(Fraction(k) / C.degree()) + L


def _build_entry(C: CurveCouple, key: str) -> CatalogEntry:
    G = build_graph(C)
    bd = blow_down(G)
    mld = mld_vertex(C)
    hd = hilbert_series(C)
    pres = presentation(C, gen_bound=_embedding_bound(C), want_relations=False)
    embdim = len(pres.generator_degrees)
    graph_smooth = bd.empty
    if graph_smooth != (embdim == 2):
        raise AssertionError("graph blow-down and embedding dimension disagree")
    return CatalogEntry(
        key=key,
        degree=C.degree(),
        fractional=tuple((c.numerator % c.denominator, c.denominator)
                         for _, c in C.divisor.terms if c.denominator > 1),
        a_e0=vertex_log_discrepancy(C),
        mld=mld,
        cartier_index_kx=cartier_index_of_kx(C),
        max_isotropy=max_isotropy(C),
        link_determinant=G.determinant,
        hilbert_numerator=hd.numerator,
        hilbert_period=hd.period,
        embedding_dimension=embdim,
        graph=GraphSummary(
            center=G.central_self_int,
            chains=G.chains,
            blown_down_vertices=None if bd.empty else bd.self_intersections,
        ),
    )


def _candidate_types(params: SearchParams):
    """Fractional multisets within bounds, plus the degree offsets."""
    bounds = search_bounds(params)
    coeffs = _fractional_coefficients(bounds.q_max)
    deg_cap = bounds.degree_max
    types = [()]
    for k in (1, 2, 3):
        types.extend(itertools.combinations_with_replacement(coeffs, k))
    for fracs in types:
        if sum((Fraction(f.denominator - 1, f.denominator) for f in fracs),
               Fraction(0)) >= 2:
            continue
        fsum = sum(fracs, Fraction(0))
        # degrees fsum + n0 in (0, 2/eps]
        n0_lo = -int(fsum) if fsum else 1
        while fsum + n0_lo <= 0:
            n0_lo += 1
        n0 = n0_lo
        while fsum + n0 <= deg_cap:
            yield fracs, fsum + n0
            n0 += 1


def _evaluate_candidate(args):
    fracs, degree, eps = args
    fractional = tuple((f.numerator, f.denominator) for f in fracs)
    C = couple_from_entry_data(fractional, degree)
    if not is_eps_lc_x(C, eps):
        return None
    nf = normal_form(C)
    if nf.couple.divisor != C.divisor:
        raise AssertionError("candidate was not constructed in normal form")
    return _build_entry(C, nf.key_string())


def enumerate_catalog(params: SearchParams, jobs: int = 1) -> List[CatalogEntry]:
    cands = [(fracs, degree, params.epsilon)
             for fracs, degree in _candidate_types(params)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_evaluate_candidate, cands, chunksize=8))
    else:
        results = [_evaluate_candidate(c) for c in cands]
    entries = [e for e in results if e is not None]
    seen = {}
    for e in entries:
        if e.key in seen:
            raise AssertionError(f"duplicate catalog key {e.key}")
        seen[e.key] = e
    out = sorted(seen.values(), key=lambda e: (e.degree, e.key))
    return out


def mld_spectrum(entries) -> Tuple[Fraction, ...]:
    return tuple(sorted({e.mld for e in entries}))


@dataclass(frozen=True)
class AuditReport:
    checked: int
    failures: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": self.checked, "failures": list(self.failures),
                "ok": self.ok}


def audit_catalog(entries, params: SearchParams) -> AuditReport:
    """Re-derive every entry from its defining data and re-check all
    necessary conditions; reports failures instead of raising."""
    from .quotient import is_eps_lc_pair
    eps, N = params.epsilon, params.isotropy_bound
    failures = []
    keys = set()
    for e in entries:
        tag = f"entry {e.key}"
        if e.key in keys:
            failures.append(f"{tag}: duplicate key")
        keys.add(e.key)
        try:
            C = e.couple()
        except Exception as exc:
            failures.append(f"{tag}: cannot rebuild couple ({exc})")
            continue
        if max_isotropy(C) != e.max_isotropy:
            failures.append(f"{tag}: stored isotropy {e.max_isotropy} is wrong")
        if e.max_isotropy > N:
            failures.append(f"{tag}: isotropy above the bound {N}")
        a0 = vertex_log_discrepancy(C)
        if a0 != e.a_e0:
            failures.append(f"{tag}: stored a_e0 {e.a_e0} != {a0}")
        G = build_graph(C)
        if 1 + G.discrepancies[0] != e.a_e0:
            failures.append(f"{tag}: a_e0 disagrees with the resolution oracle")
        if mld_vertex(C) != e.mld:
            failures.append(f"{tag}: stored mld {e.mld} is wrong")
        if e.mld < eps:
            failures.append(f"{tag}: mld below epsilon")
        if not is_eps_lc_x(C, eps):
            failures.append(f"{tag}: fails the resolution eps-lc test")
        B = log_fano_quotient(C)
        if not is_eps_lc_pair(B, eps / N):
            failures.append(f"{tag}: quotient pair fails eps/N")
        if not (eps <= e.a_e0 and e.a_e0 * e.degree <= 2):
            failures.append(f"{tag}: central log discrepancy out of range")
        if G.determinant != e.link_determinant:
            failures.append(f"{tag}: stored determinant is wrong")
    return AuditReport(checked=len(entries), failures=tuple(failures))


def catalog_to_json(entries, params: SearchParams) -> dict:
    return {
        "schema": "conesing/1",
        "params": {"epsilon": fmt_q(params.epsilon),
                   "isotropy_bound": params.isotropy_bound},
        "entries": [e.to_json() for e in entries],
        "summary": {
            "count": len(entries),
            "mld_spectrum": [fmt_q(m) for m in mld_spectrum(entries)],
        },
    }
