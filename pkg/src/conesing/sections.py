"""The graded section ring of a couple: Hilbert data, explicit bases,
multiplication, minimal generators and relations.

The degree-n piece is the space of rational functions with divisor
bounded below by -floor(n D).  With E = floor(n D) the canonical basis
is t^j / prod_{finite y} (t - y)^{e_y} for j = 0 .. deg E, so a section
in degree n is identified with the coefficient vector of its numerator
polynomial.  Multiplying degrees a and b into a + b multiplies
numerators and the correction polynomial prod (t - y)^{delta_y} with
delta = floor((a+b)D) - floor(aD) - floor(bD) >= 0; the identification
turns on the superadditivity of floors and keeps all linear algebra
over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Tuple

from .divisors import (CurveCouple, MarkedPoint, assign_coordinates,
                       denominators_lcm, floor_multiple)
from .errors import BoundTooSmall
from .linalg import RowSpan, nullspace


def h0(C: CurveCouple, n: int) -> int:
    """Dimension of the degree-n piece: max(0, deg floor(nD) + 1)."""
    return max(0, floor_multiple(C.divisor, n).degree() + 1)


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HilbertData:
    """h(0), h(1), ... together with the closed form
    numerator / ((1 - T)(1 - T^L)), L = lcm of the denominators."""

    values: Tuple[int, ...]
    period: int
    numerator: Tuple[int, ...]

    def expand(self, n: int) -> int:
        """Coefficient of T^n from the closed form."""
        L = self.period
        h = []
        for k in range(n + 1):
            num = self.numerator[k] if k < len(self.numerator) else 0
            val = num
            if k >= 1:
                val += h[k - 1]
            if k >= L:
                val += h[k - L]
            if k >= L + 1:
                val -= h[k - L - 1]
            h.append(val)
        return h[n]

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "L": self.period}


def hilbert_series(C: CurveCouple) -> HilbertData:
    D = C.divisor
    L = denominators_lcm(D)
    deg = D.degree()
    npts = len(D.terms)
    # After n0 every floor degree is nonnegative and h is quasi-linear.
    n0 = max(0, ceil(npts / deg)) if deg > 0 else 0
    stop = n0 + 2 * L + 2
    values = [h0(C, n) for n in range(stop + 1)]

    def hv(k: int) -> int:
        return values[k] if k >= 0 else 0

    coeffs = [hv(k) - hv(k - 1) - hv(k - L) + hv(k - L - 1)
              for k in range(stop + 1)]
    # The numerator must terminate; everything past n0 + L + 1 is zero.
    tail_start = n0 + L + 1
    for k in range(tail_start, stop + 1):
        if coeffs[k] != 0:
            raise AssertionError(f"Hilbert numerator fails to terminate at {k}")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    data = HilbertData(values=tuple(values), period=L, numerator=tuple(coeffs))
    for n in range(min(stop, 3 * L + n0) + 1):
        if data.expand(n) != values[n]:
            raise AssertionError(f"series expansion mismatch at degree {n}")
    return data


# ---------------------------------------------------------------------------
# explicit bases and multiplication
# ---------------------------------------------------------------------------

def _poly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _linear_factor_power(y: Fraction, e: int) -> List[Fraction]:
    out = [Fraction(1)]
    for _ in range(e):
        out = _poly_mul(out, [-y, Fraction(1)])
    return out


class SectionSpace:
    """Canonical coordinates for all graded pieces of one couple."""

    def __init__(self, C: CurveCouple):
        self.couple = assign_coordinates(C)
        self.D = self.couple.divisor
        self._floor_cache: Dict[int, dict] = {}
        self._shift_cache: Dict[Tuple[int, int], List[Fraction]] = {}

    def floor_data(self, n: int) -> dict:
        cached = self._floor_cache.get(n)
        if cached is None:
            E = floor_multiple(self.D, n)
            fin = {p.x: c for p, c in E.terms if p.kind == "fin"}
            cached = {"deg": E.degree(), "fin": fin, "E": E}
            self._floor_cache[n] = cached
        return cached

    def dim(self, n: int) -> int:
        return max(0, self.floor_data(n)["deg"] + 1)

    def shift_poly(self, a: int, b: int) -> List[Fraction]:
        """prod (t - y)^{delta_y} with delta = floor((a+b)D) - floor(aD) - floor(bD)."""
        key = (a, b) if a <= b else (b, a)
        cached = self._shift_cache.get(key)
        if cached is not None:
            return cached
        fa = self.floor_data(a)["fin"]
        fb = self.floor_data(b)["fin"]
        fab = self.floor_data(a + b)["fin"]
        poly = [Fraction(1)]
        for y in sorted(set(fa) | set(fb) | set(fab)):
            delta = fab.get(y, 0) - fa.get(y, 0) - fb.get(y, 0)
            if delta < 0:
                raise AssertionError("floor superadditivity violated")
            if delta > 0:
                poly = _poly_mul(poly, _linear_factor_power(y, delta))
        self._shift_cache[key] = poly
        return poly

    def multiply(self, a: int, va: List[Fraction], b: int,
                 vb: List[Fraction]) -> List[Fraction]:
        """Coordinates of the product of sections of degrees a and b
        inside degree a + b."""
        out = _poly_mul(_poly_mul(va, vb), self.shift_poly(a, b))
        target = self.dim(a + b)
        if len(out) > target:
            raise AssertionError("product escapes the target space")
        return out + [Fraction(0)] * (target - len(out))


@dataclass(frozen=True)
class SectionBasis:
    """Canonical basis of one graded piece: shared pole data plus the
    monomial numerators t^j."""

    degree: int
    poles: Tuple[Tuple[MarkedPoint, int], ...]
    elements: Tuple[Tuple[Fraction, ...], ...]


def section_basis(C: CurveCouple, n: int) -> SectionBasis:
    space = SectionSpace(C)
    data = space.floor_data(n)
    d = space.dim(n)
    elements = []
    for j in range(d):
        vec = [Fraction(0)] * d
        vec[j] = Fraction(1)
        elements.append(tuple(vec))
    return SectionBasis(degree=n, poles=tuple(data["E"].terms),
                        elements=tuple(elements))


def multiplication_rank(C: CurveCouple, a: int, b: int) -> Tuple[int, int]:
    """Rank and cokernel dimension of multiplication into degree a + b,
    by exact elimination on the product vectors."""
    space = SectionSpace(C)
    da, db, dab = space.dim(a), space.dim(b), space.dim(a + b)
    span = RowSpan(dab)
    for j in range(da):
        va = [Fraction(0)] * da
        va[j] = Fraction(1)
        for k in range(db):
            vb = [Fraction(0)] * db
            vb[k] = Fraction(1)
            span.add(space.multiply(a, va, b, vb))
    return span.dim, dab - span.dim


# ---------------------------------------------------------------------------
# minimal generators and relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generator_degrees: Tuple[int, ...]
    relation_degrees: Tuple[int, ...]
    equations: Optional[Tuple[str, ...]]
    search_bound: int
    verified_through: int

    def to_json(self) -> dict:
        return {
            "generators": list(self.generator_degrees),
            "relations": list(self.relation_degrees),
            "equations": list(self.equations) if self.equations is not None else None,
            "search_bound": self.search_bound,
            "verified_through": self.verified_through,
        }


def default_presentation_bound(C: CurveCouple) -> int:
    L = denominators_lcm(C.divisor)
    return 4 * L * max(1, ceil(1 / C.degree()))


VARIABLE_NAMES = ("x", "y", "z", "w")


class _SparseSpan:
    """Echelon row space over sparse dict vectors (index -> coefficient)."""

    def __init__(self):
        self.rows: Dict[int, Dict[int, Fraction]] = {}   # pivot -> row

    def add(self, vec: Dict[int, Fraction]) -> bool:
        v = {i: Fraction(c) for i, c in vec.items() if c != 0}
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                inv = v[p]
                self.rows[p] = {i: c / inv for i, c in v.items()}
                return True
            f = v[p]
            for i, c in row.items():
                nc = v.get(i, Fraction(0)) - f * c
                if nc:
                    v[i] = nc
                else:
                    v.pop(i, None)
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


def _monomials(gen_degrees: List[int], total: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of weighted degree `total`, lexicographic order."""
    out = []

    def rec(idx: int, remaining: int, expt: List[int]):
        if idx == len(gen_degrees):
            if remaining == 0:
                out.append(tuple(expt))
            return
        d = gen_degrees[idx]
        for e in range(remaining // d, -1, -1):
            expt.append(e)
            rec(idx + 1, remaining - e * d, expt)
            expt.pop()

    rec(0, total, [])
    return sorted(out, reverse=True)


def _equation_string(vec, monomials) -> str:
    """Primitive-integer, leading-positive polynomial in x, y, z, w."""
    from math import gcd
    den = 1
    for c in vec:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in vec]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g:
        ints = [c // g for c in ints]
    lead = next((c for c in ints if c != 0), 1)
    if lead < 0:
        ints = [-c for c in ints]
    parts = []
    for c, expt in zip(ints, monomials):
        if c == 0:
            continue
        factors = []
        for var, e in zip(VARIABLE_NAMES, expt):
            if e == 1:
                factors.append(var)
            elif e > 1:
                factors.append(f"{var}**{e}")
        mono = "*".join(factors) if factors else "1"
        coeff = abs(c)
        term = mono if coeff == 1 and factors else f"{coeff}*{mono}" if factors else str(coeff)
        parts.append(("- " if c < 0 else "+ ") + term)
    body = " ".join(parts)
    return body[2:] if body.startswith("+ ") else "-" + body[2:]


class _GeneratorScan:
    """Incremental span of the subalgebra generated so far, degree by degree.

    Degrees are processed explicitly until fullness becomes
    self-propagating: when one period L back the piece is already full
    and the floor deficit of (L, n - L) vanishes, multiplication by the
    degree-L piece is onto (numerator spaces multiply without
    constraint), so degree n is full without building vectors.  The
    precondition of that step is checked each time it is taken.
    """

    def __init__(self, space: SectionSpace):
        from .divisors import denominators_lcm
        self.space = space
        self.period = denominators_lcm(space.D)
        self.gens: List[Tuple[int, List[Fraction]]] = []   # (degree, vector)
        self.basis: Dict[int, List[List[Fraction]]] = {}
        self.full: Dict[int, bool] = {}
        self.achieved: Dict[int, int] = {}

    def _canonical_basis(self, n: int) -> List[List[Fraction]]:
        dim_n = self.space.dim(n)
        out = []
        for j in range(dim_n):
            v = [Fraction(0)] * dim_n
            v[j] = Fraction(1)
            out.append(v)
        return out

    def _period_step_applies(self, n: int) -> bool:
        L = self.period
        prev = n - L
        if prev < 1 or not self.full.get(prev) or not self.full.get(L):
            return False
        if self.space.dim(prev) < 1 or self.space.dim(L) < 1:
            return False
        # zero floor deficit at every point, infinity included
        if len(self.space.shift_poly(L, prev)) != 1:
            return False
        return self.space.dim(n) == self.space.dim(L) + self.space.dim(prev) - 1

    def _ensure_degree(self, n: int, allow_new_generators: bool) -> int:
        """Builds the subalgebra span in degree n; returns the number of
        new generators added (0 unless allowed)."""
        space = self.space
        dim_n = space.dim(n)
        if self._period_step_applies(n):
            self.full[n] = True
            self.achieved[n] = dim_n
            self.basis[n] = self._canonical_basis(n)
            return 0
        span = RowSpan(dim_n)
        vectors: List[List[Fraction]] = []
        for d, gvec in self.gens:
            if d >= n or span.dim == dim_n:
                continue
            for bvec in self.basis.get(n - d, []):
                prod = space.multiply(d, gvec, n - d, bvec)
                if span.add(prod):
                    vectors.append(prod)
                if span.dim == dim_n:
                    break
        new = 0
        if allow_new_generators:
            for j in range(dim_n):
                e = [Fraction(0)] * dim_n
                e[j] = Fraction(1)
                if span.add(e):
                    self.gens.append((n, e))
                    vectors.append(e)
                    new += 1
        self.full[n] = span.dim == dim_n
        self.achieved[n] = span.dim
        self.basis[n] = vectors
        return new

    def run(self, gen_bound: int, verify_through: int):
        degrees = []
        for n in range(1, gen_bound + 1):
            added = self._ensure_degree(n, allow_new_generators=True)
            degrees.extend([n] * added)
            if not self.full[n]:
                raise AssertionError("generator scan failed to saturate its degree")
        for n in range(gen_bound + 1, verify_through + 1):
            self._ensure_degree(n, allow_new_generators=False)
            if not self.full[n]:
                raise BoundTooSmall(
                    f"generators through degree {gen_bound} do not span degree {n}")
        return degrees


def presentation(C: CurveCouple, gen_bound: Optional[int] = None,
                 rel_bound: Optional[int] = None,
                 want_relations: bool = True) -> Presentation:
    """Minimal generator degrees, minimal relation degrees, and explicit
    equations when at most four generators.

    Correctness is certified by saturation: the subalgebra generated by
    the reported generators must reproduce the Hilbert function through
    verified_through = 2 max(gen_bound, rel_bound), else BoundTooSmall.
    """
    if gen_bound is None:
        gen_bound = default_presentation_bound(C)
    if rel_bound is None:
        rel_bound = gen_bound
    verified_through = 2 * max(gen_bound, rel_bound)

    space = SectionSpace(C)
    scan = _GeneratorScan(space)
    gen_degrees = scan.run(gen_bound, verified_through)

    relation_degrees: List[int] = []
    equations: List[str] = []
    if want_relations and gen_degrees:
        gd = sorted(gen_degrees)
        gens_sorted = sorted(scan.gens, key=lambda g: g[0])
        # Cache of monomial evaluations, keyed by exponent tuple.
        eval_cache: Dict[Tuple[int, ...], List[Fraction]] = {}

        def evaluate(expt: Tuple[int, ...], n: int) -> List[Fraction]:
            if n == 0:
                return [Fraction(1)]
            cached = eval_cache.get(expt)
            if cached is not None:
                return cached
            idx = next(i for i, e in enumerate(expt) if e > 0)
            d = gens_sorted[idx][0]
            sub = list(expt)
            sub[idx] -= 1
            lower = evaluate(tuple(sub), n - d)
            val = space.multiply(d, gens_sorted[idx][1], n - d, lower)
            eval_cache[expt] = val
            return val

        relations: List[Tuple[int, Dict[Tuple[int, ...], Fraction]]] = []
        for n in range(2, rel_bound + 1):
            monos = _monomials(gd, n)
            if len(monos) < 2:
                continue
            rows = [evaluate(m, n) for m in monos]
            ev = RowSpan(space.dim(n))
            for r in rows:
                ev.add(r)
            kernel_dim = len(monos) - ev.dim
            if kernel_dim == 0:
                continue
            index = {m: i for i, m in enumerate(monos)}
            old = _SparseSpan()
            for d_rel, rel in relations:
                for shift in _monomials(gd, n - d_rel):
                    shifted: Dict[int, Fraction] = {}
                    for expt, c in rel.items():
                        combined = tuple(a + b for a, b in zip(expt, shift))
                        i = index[combined]
                        shifted[i] = shifted.get(i, Fraction(0)) + c
                    old.add(shifted)
            new_count = kernel_dim - old.dim
            if new_count < 0:
                raise AssertionError("shifted relations escaped the kernel")
            if new_count == 0:
                continue
            # relations are left-kernel vectors: combinations of monomials
            # evaluating to zero
            transposed = [list(col) for col in zip(*rows)]
            found = 0
            for kv in nullspace(transposed):
                sparse = {i: c for i, c in enumerate(kv) if c != 0}
                if old.add(sparse):
                    found += 1
                    relation_degrees.append(n)
                    relations.append(
                        (n, {m: c for m, c in zip(monos, kv) if c != 0}))
                    if len(gd) <= len(VARIABLE_NAMES):
                        equations.append(_equation_string(kv, monos))
            if found != new_count:
                raise AssertionError("kernel extraction missed new relations")

    emit_eqs = want_relations and len(gen_degrees) <= len(VARIABLE_NAMES)
    eqs = tuple(equations) if emit_eqs else None
    return Presentation(
        generator_degrees=tuple(sorted(gen_degrees)),
        relation_degrees=tuple(sorted(relation_degrees)),
        equations=eqs,
        search_bound=max(gen_bound, rel_bound),
        verified_through=verified_through,
    )


def embedding_dimension(C: CurveCouple, gen_bound: Optional[int] = None) -> int:
    return len(presentation(C, gen_bound=gen_bound, want_relations=False).generator_degrees)


def is_smooth(C: CurveCouple, gen_bound: Optional[int] = None) -> bool:
    # A two-dimensional cone is smooth exactly when two generators suffice.
    return embedding_dimension(C, gen_bound=gen_bound) == 2
