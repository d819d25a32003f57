"""Integer parallelotopes with small surface-to-volume ratio.

Exact-arithmetic construction of convex bodies that tile R^n under integer
lattice translations, with every claim (tiling, independence, norm bounds,
measure identities) certified at build time rather than assumed.
"""

__version__ = "0.1.0"

from .construction import (ConstructionError, ConstructionReport,
                           DimCapExceeded, LevelTrace, Parallelotope,
                           RecursionConfig, RegimeError, choose_m, construct,
                           construct_bound_only, isoperimetric_ratio_lower,
                           predicted_bound_interval, scan_induction)
from .intervals import Interval, PrecisionExhausted
from .lattices import EnumerationCap, Lattice, enumerate_short_vectors, \
    shortest_vector_sq
from .linalg import IntMatrix, QMatrix, complete_to_full_rank, \
    integer_kernel_basis, operator_norm_upper
from .polytopes import (BodyMeasures, DegenerateBody, EmptyBody, HPolytope,
                        Unbounded, linear_image, orthogonal_product, scaled,
                        voronoi_cell)
from .radicals import SqrtSum
from .sampler import (LdpcParams, SamplerFailure, admissible_s, choose_d,
                      default_c, expected_collisions, return_prob_bound,
                      return_prob_exact, sample_ldpc, verify_s_independence)
from .verify import TilingReport, brute_force_volume, verify_tiling

__all__ = [
    "__version__",
    "BodyMeasures", "ConstructionError", "ConstructionReport",
    "DegenerateBody", "DimCapExceeded", "EmptyBody", "EnumerationCap",
    "HPolytope", "IntMatrix", "Interval", "Lattice", "LdpcParams",
    "LevelTrace", "Parallelotope", "PrecisionExhausted", "QMatrix",
    "RecursionConfig", "RegimeError", "SamplerFailure", "SqrtSum",
    "TilingReport", "Unbounded",
    "admissible_s", "brute_force_volume", "choose_d", "choose_m",
    "complete_to_full_rank", "construct", "construct_bound_only",
    "default_c", "enumerate_short_vectors", "expected_collisions",
    "integer_kernel_basis", "isoperimetric_ratio_lower", "linear_image",
    "operator_norm_upper", "orthogonal_product", "predicted_bound_interval",
    "return_prob_bound", "return_prob_exact", "sample_ldpc",
    "scan_induction", "scaled", "shortest_vector_sq", "verify_s_independence",
    "verify_tiling", "voronoi_cell",
]
