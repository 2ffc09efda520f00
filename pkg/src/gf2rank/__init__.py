"""Rank of sparse random GF(2) matrices.

Library for the rank behavior of random n x m binary matrices with k unit
entries per column: bit-packed rank computation, 2-core peeling of the
associated k-uniform hypergraphs, threshold constants and rank-law
predictions, and seeded Monte Carlo experiments including the minimum
weight basis.
"""

from .gf2 import (ColumnSet, Gf2Matrix, RankEngine, matrix_from_text,
                  matrix_to_text, rank, span_size_oracle, zero_rows)
from .hypergraph import (Hypergraph, PeelResult, degrees,
                         peel_rank_identity_check, peel_two_core,
                         two_core_oracle)
from .elimination import rank_defect, structured_rank
from .sampler import (ColumnStream, SeedSpec, WeightedColumn, column_stream,
                      sample_binomial, sample_m_subset, weighted_enumeration)
from .theory import (MwbLimit, TheoryPoint, Thresholds, c_star, c_star_bounds,
                     core_fractions, core_v_alternate, expected_zero_row_sets,
                     full_rank_probability, hat_c, largest_fixed_point,
                     mwb_large_k_bounds, mwb_limit, rank_fraction,
                     theory_point, thresholds)

__version__ = "0.1.0"

__all__ = [
    "ColumnSet", "Gf2Matrix", "RankEngine", "rank", "span_size_oracle",
    "zero_rows", "matrix_to_text", "matrix_from_text",
    "Hypergraph", "PeelResult", "peel_two_core", "two_core_oracle",
    "degrees", "peel_rank_identity_check",
    "structured_rank", "rank_defect",
    "SeedSpec", "WeightedColumn", "ColumnStream", "column_stream",
    "sample_m_subset", "sample_binomial", "weighted_enumeration",
    "TheoryPoint", "Thresholds", "MwbLimit", "largest_fixed_point", "hat_c",
    "c_star", "c_star_bounds", "core_fractions", "core_v_alternate",
    "rank_fraction", "full_rank_probability", "expected_zero_row_sets",
    "mwb_limit", "mwb_large_k_bounds", "theory_point", "thresholds",
    "__version__",
]
