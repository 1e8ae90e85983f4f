"""Exact verification toolkit for quadratic-point loci of Fano hypersurfaces.

The package computes with exact arithmetic throughout: sparse rational /
prime-field polynomials, a budgeted Groebner dimension oracle, singularity
classification of hypersurface germs, blow-up stability verification,
closed-form codimension tables with finite-field census oracles, and an
exactly-solved quadratic optimizer for resolution graphs.
"""

from .polynomial import (
    FieldMismatchError,
    Polynomial,
    PolynomialError,
    formal_inverse_compose,
)
from .groebner import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    GroebnerBudget,
    groebner_basis,
    ideal_dimension,
)
from .singularities import (
    CensusScanReport,
    HypersurfaceGerm,
    SamplingError,
    SingularityClass,
    classify_point,
    hessian_rank,
    local_expansion,
    scan_census,
)
from .regularity import (
    DEFAULT_PRIMES,
    RegularityReport,
    check_condition1,
    check_condition2,
    regularity_report,
)
from .blowup import (
    BlowupError,
    ChartTransform,
    GermNormalForm,
    StabilityReport,
    blowup_chart,
    claim_membership,
    exceptional_candidates,
    normalize_germ,
    verify_theorem4,
)
from .codim import (
    CensusFit,
    CensusResult,
    CodimError,
    CodimTable,
    census_exponent_fit,
    census_sym_rank,
    codim_table,
    fb_minimum,
    qr_codim_bounds,
    regularity_codim_bound,
    sym_rank_counts_bordered,
    sym_rank_locus_dim,
    theorem_bounds,
)
from .nfopt import (
    Aggregates,
    BlowupGraph,
    FourNSquaredReport,
    GraphError,
    NFBoundReport,
    aggregates,
    brute_force_bound,
    chain_graph,
    closed_form_bound,
    path_counts,
    validate_graph,
    verify_4n2,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregates",
    "BlowupError",
    "BlowupGraph",
    "BudgetExceeded",
    "CensusFit",
    "CensusResult",
    "CensusScanReport",
    "ChartTransform",
    "CodimError",
    "CodimTable",
    "DEFAULT_BUDGET",
    "DEFAULT_PRIMES",
    "FieldMismatchError",
    "FourNSquaredReport",
    "GermNormalForm",
    "GraphError",
    "GroebnerBudget",
    "HypersurfaceGerm",
    "NFBoundReport",
    "Polynomial",
    "PolynomialError",
    "RegularityReport",
    "SamplingError",
    "SingularityClass",
    "StabilityReport",
    "aggregates",
    "blowup_chart",
    "brute_force_bound",
    "census_exponent_fit",
    "census_sym_rank",
    "chain_graph",
    "check_condition1",
    "check_condition2",
    "claim_membership",
    "classify_point",
    "closed_form_bound",
    "codim_table",
    "exceptional_candidates",
    "fb_minimum",
    "formal_inverse_compose",
    "groebner_basis",
    "hessian_rank",
    "ideal_dimension",
    "local_expansion",
    "normalize_germ",
    "path_counts",
    "qr_codim_bounds",
    "regularity_codim_bound",
    "regularity_report",
    "scan_census",
    "sym_rank_counts_bordered",
    "sym_rank_locus_dim",
    "theorem_bounds",
    "validate_graph",
    "verify_4n2",
    "verify_theorem4",
]
