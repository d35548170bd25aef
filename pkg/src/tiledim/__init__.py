"""Boundary dimension of self-affine tiles.

Given an expanding integer matrix M and a digit set R forming a complete
residue system, this package computes the contact set of the attractor, its
transition matrix and folded quotient, the special eigenvalues that govern
the boundary's Hausdorff dimension (bounds in general, the exact value when
all eigenvalues of M share one modulus), a Hausdorff-measure classification
from Jordan-block data, and exact boundary point clouds with empirical
growth-rate and box-counting estimators to cross-check the spectral answer.
"""

from .contact import ContactSystem, compute_S, contact_system, symmetric_quotient, transition_matrix
from .dimension import (
    DimensionReport,
    dimension_bounds,
    dimension_report,
    exact_dimension_if_equal_modulus,
    local_dimension_set,
    measure_classification,
)
from .errors import (
    BudgetExceededError,
    InternalInvariantError,
    PairValidationError,
    SpecFileError,
    TiledimError,
)
from .geometry import (
    Ball,
    BoundaryPointSet,
    BoxCountFit,
    GrowthFit,
    ScaledPointSet,
    box_counting_estimate,
    contact_matrix_empirical,
    delta_k,
    export_points,
    gamma_k,
    growth_rate_estimate,
)
from .pair import (
    DifferenceMultiset,
    StandardPair,
    ValidationReport,
    difference_multiset,
    invariant_sublattice,
    make_pair,
    primitivize,
    validate,
)
from .render import RasterImage, rasterize, write_pnm
from .spectrum import (
    Eigen,
    SpectralReport,
    eigenvalues,
    jordan_block_size,
    m_minus,
    m_simple,
    minimal_polynomial,
    special_eigenvalues,
    spectral_report,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BoundaryPointSet",
    "BoxCountFit",
    "BudgetExceededError",
    "ContactSystem",
    "DifferenceMultiset",
    "DimensionReport",
    "Eigen",
    "GrowthFit",
    "InternalInvariantError",
    "PairValidationError",
    "RasterImage",
    "ScaledPointSet",
    "SpecFileError",
    "SpectralReport",
    "StandardPair",
    "TiledimError",
    "ValidationReport",
    "box_counting_estimate",
    "compute_S",
    "contact_matrix_empirical",
    "contact_system",
    "delta_k",
    "difference_multiset",
    "dimension_bounds",
    "dimension_report",
    "eigenvalues",
    "exact_dimension_if_equal_modulus",
    "export_points",
    "gamma_k",
    "growth_rate_estimate",
    "invariant_sublattice",
    "jordan_block_size",
    "local_dimension_set",
    "m_minus",
    "m_simple",
    "make_pair",
    "measure_classification",
    "minimal_polynomial",
    "primitivize",
    "rasterize",
    "spectral_report",
    "special_eigenvalues",
    "symmetric_quotient",
    "transition_matrix",
    "validate",
    "write_pnm",
]
