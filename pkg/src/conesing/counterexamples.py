"""Families witnessing that each hypothesis of the boundedness of the
catalog is necessary: unbounded dimension, unbounded singularities, and
unbounded isotropies.

* the diagonal torus on affine (d+1)-space: smooth, trivial isotropies,
  central log discrepancy d+1, unbounded in the dimension;
* cones over rational normal curves of degree m: trivial isotropies,
  central log discrepancy 2/m, Gorenstein index and link determinant
  unbounded in m;
* the A-type hypersurface x y = z^n: every torus action giving it a
  cone structure has isotropy at least n along one of the two
  coordinate curves, because max(|a+bn|, |-a+bn|) = |a| + |b| n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .divisors import CurveCouple, finite_point, max_isotropy
from .jsonio import fmt_q
from .quotient import cartier_index_of_kx, vertex_log_discrepancy
from .resolution import build_graph, mld_vertex
from .toric import (ToricDivisor, cartier_index_global, cone_of_x,
                    fan_projective_space, log_discrepancy_x)


@dataclass(frozen=True)
class AnActionParams:
    n: int
    a: int
    b: int


def an_action_weights(p: AnActionParams) -> Tuple[int, int, int]:
    """Weights on x, y, z of the one-torus inside the big torus of the
    A-type hypersurface, for the subtorus t -> (t^a, t^b)."""
    return (p.a + p.b * p.n, -p.a + p.b * p.n, 2 * p.b)


def an_is_cone_action(p: AnActionParams) -> bool:
    # b = 0 leaves a closed orbit missing the origin in its closure.
    return p.b != 0


def an_min_over_actions(n: int, box: int) -> Tuple[int, Tuple[int, int]]:
    """Exhaustive minimum over |a|, |b| <= box, b != 0 of the larger of
    the two curve isotropies, with a witness; always at least n.

    The scan is vectorized over int64, which is exact for the sizes
    involved (values are bounded by box * (n + 1)).
    """
    if box < 1:
        raise ValueError("box must be positive")
    if box * (n + 1) >= 2 ** 62:
        raise ValueError("scan box too large for exact int64 arithmetic")
    aa = np.arange(-box, box + 1, dtype=np.int64)
    bb = np.concatenate([np.arange(-box, 0, dtype=np.int64),
                         np.arange(1, box + 1, dtype=np.int64)])
    A, B = np.meshgrid(aa, bb, indexing="ij")
    val = np.maximum(np.abs(A + B * n), np.abs(-A + B * n))
    flat = int(np.argmin(val))
    best = int(val.flat[flat])
    witness = (int(A.flat[flat]), int(B.flat[flat]))
    if best < n:
        raise AssertionError(f"scan minimum {best} below n={n}")
    # identity max(|a+bn|, |-a+bn|) = |a| + |b| n pins the bound
    a, b = witness
    if best != abs(a) + abs(b) * n:
        raise AssertionError("isotropy identity violated at the witness")
    return best, witness


@dataclass(frozen=True)
class RncRow:
    m: int
    a_e0: Fraction
    cartier_index_kx: int
    max_isotropy: int
    mld: Fraction
    link_determinant: int

    def to_json(self) -> dict:
        return {"m": self.m, "a_e0": fmt_q(self.a_e0),
                "cartier_index_kx": self.cartier_index_kx,
                "max_isotropy": self.max_isotropy,
                "mld": fmt_q(self.mld),
                "link_determinant": self.link_determinant}


def rnc_family_report(m_max: int) -> Tuple[RncRow, ...]:
    """Cones over rational normal curves of degree 1..m_max.

    The family keeps trivial isotropies while the mld 2/m tends to zero
    and the index data grows without bound.
    """
    rows = []
    for m in range(1, m_max + 1):
        C = CurveCouple.of({finite_point(0): m})
        G = build_graph(C)
        rows.append(RncRow(
            m=m,
            a_e0=vertex_log_discrepancy(C),
            cartier_index_kx=cartier_index_of_kx(C),
            max_isotropy=max_isotropy(C),
            mld=mld_vertex(C),
            link_determinant=G.determinant,
        ))
    return tuple(rows)


@dataclass(frozen=True)
class DiagonalConeRow:
    d: int
    a_e0: Fraction
    max_isotropy: int
    smooth: bool

    def to_json(self) -> dict:
        return {"d": self.d, "a_e0": fmt_q(self.a_e0),
                "max_isotropy": self.max_isotropy, "smooth": self.smooth}


def diagonal_cone_report(d: int) -> DiagonalConeRow:
    """The diagonal action on affine (d+1)-space via the hyperplane
    class on d-dimensional projective space (d <= 3 for the lattice
    computations)."""
    if not (1 <= d <= 3):
        raise ValueError("d must be between 1 and 3")
    F = fan_projective_space(d)
    coeffs = [Fraction(0)] * d + [Fraction(1)]
    D = ToricDivisor.of(coeffs)
    K = cone_of_x(F, D)
    e_last = tuple([0] * d + [1])
    a0 = log_discrepancy_x(K, e_last)
    iso = cartier_index_global(F, D)
    # smooth <=> the lifted rays form a unimodular simplex
    from .linalg import det_int
    smooth = abs(det_int([list(r) for r in K.rays[: d + 1]])) == 1 \
        and len(K.rays) == d + 1
    return DiagonalConeRow(d=d, a_e0=a0, max_isotropy=iso, smooth=smooth)
