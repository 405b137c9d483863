"""Partial spreads of finite vector spaces: bounds, constructions, checks.

The package computes the best known lower and upper bounds on the maximum
size of a partial t-spread of V(n, q), builds the packing-bound construction
from rank-distance matrix families, extends spreads to vector space
partitions and profiles their hyperplane section counts, emits and replays
descent certificates for the refined upper bound, and runs exhaustive
branch-and-bound search on desk-scale parameters as an independent oracle.
"""

from .bounds import (
    BHP_EXACT,
    DRAKE_FREEMAN,
    EJSSS_EXACT,
    KURZ_EXACT,
    MAIN_THEOREM,
    NS_EXACT,
    SOURCES,
    SPREAD_EXACT,
    TRIVIAL_OVERLAP,
    BoundReport,
    SpreadParams,
    UpperBound,
    best_known,
    c1_c2,
    compare_bounds,
    delta,
    descent_x,
    drake_freeman,
    h_of,
    in_main_regime,
    lemma_main_bound,
    lower_bound,
    main_bound,
    omega_floor,
    theta,
)
from .construct import (
    PartialSpread,
    VerificationResult,
    build_lower_bound_spread,
    mult_map_matrix,
    spread_from_dict,
    verify_partial_spread,
)
from .errors import (
    AmbientMismatchError,
    BudgetExceededError,
    ConstructionSizeMismatchError,
    FieldMismatchError,
    HypothesisViolatedError,
    IdentityViolationError,
    InvalidParamsError,
    NotPrimeError,
    OutOfRegimeError,
    OverflowLimitError,
    SpreadLabError,
    UnverifiedSpreadError,
)
from .gf import ExtField, Field, ext_field, field_for_order, field_new, prime_power
from .linalg import (
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    hyperplanes,
    intersect_dim,
    is_disjoint,
)
from .partition import (
    CertificateCheck,
    DescentCertificate,
    HedenCase,
    HyperplaneProfile,
    SubspacePartition,
    certificate_from_dict,
    check_certificate,
    descent_certificate,
    heden_case,
    hyperplane_profile,
    partition_from_dict,
    partition_from_spread,
    verify_partition,
)
from .search import SearchResult, greedy_result, greedy_spread, max_partial_spread

__version__ = "0.1.0"

__all__ = [
    "AmbientMismatchError",
    "BHP_EXACT",
    "BoundReport",
    "BudgetExceededError",
    "CertificateCheck",
    "ConstructionSizeMismatchError",
    "DRAKE_FREEMAN",
    "DescentCertificate",
    "EJSSS_EXACT",
    "ExtField",
    "Field",
    "FieldMismatchError",
    "HedenCase",
    "HyperplaneProfile",
    "HypothesisViolatedError",
    "IdentityViolationError",
    "InvalidParamsError",
    "KURZ_EXACT",
    "MAIN_THEOREM",
    "NS_EXACT",
    "NotPrimeError",
    "OutOfRegimeError",
    "OverflowLimitError",
    "PartialSpread",
    "SOURCES",
    "SPREAD_EXACT",
    "SearchResult",
    "SpreadLabError",
    "SpreadParams",
    "SubspacePartition",
    "Subspace",
    "TRIVIAL_OVERLAP",
    "UnverifiedSpreadError",
    "UpperBound",
    "VerificationResult",
    "best_known",
    "build_lower_bound_spread",
    "c1_c2",
    "certificate_from_dict",
    "check_certificate",
    "compare_bounds",
    "delta",
    "descent_certificate",
    "descent_x",
    "drake_freeman",
    "enumerate_subspaces",
    "ext_field",
    "field_for_order",
    "field_new",
    "gaussian_binomial",
    "greedy_result",
    "greedy_spread",
    "h_of",
    "heden_case",
    "hyperplane_profile",
    "hyperplanes",
    "in_main_regime",
    "intersect_dim",
    "is_disjoint",
    "lemma_main_bound",
    "lower_bound",
    "main_bound",
    "max_partial_spread",
    "mult_map_matrix",
    "omega_floor",
    "partition_from_dict",
    "partition_from_spread",
    "prime_power",
    "spread_from_dict",
    "theta",
    "verify_partial_spread",
    "verify_partition",
]
