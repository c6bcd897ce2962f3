"""Exact-arithmetic toolkit for cone surface singularities built from
ample Q-divisors on the projective line, with toric cross-checks and a
finite catalog enumerator."""

__version__ = "0.1.0"

from .divisors import (CurveCouple, IntegralDivisorP1, MarkedPoint,
                       QDivisorP1, cartier_index_at, degree, finite_point,
                       floor_multiple, infinity_point, isotropy_order,
                       label_point, max_isotropy, normal_form, weil_index_at)
from .quotient import (StandardPair, VertexData, cartier_index_of_kx,
                       curve_log_discrepancy, horizontal_log_discrepancy,
                       is_eps_lc_pair, is_log_fano, log_fano_quotient,
                       necessary_eps_conditions, vertex_decomposition,
                       vertex_log_discrepancy)
from .resolution import (LatticeCone2, ResolutionGraph, build_graph,
                         discrepancies, hj_chain, is_eps_lc_x,
                         link_determinant, local_cone_at, mld_vertex,
                         transverse_types)
from .sections import (HilbertData, Presentation, SectionBasis,
                       embedding_dimension, h0, hilbert_series, is_smooth,
                       multiplication_rank, presentation, section_basis)
from .catalog import (CatalogEntry, SearchParams, audit_catalog,
                      enumerate_catalog, mld_spectrum, search_bounds)

__all__ = [name for name in dir() if not name.startswith("_")]
