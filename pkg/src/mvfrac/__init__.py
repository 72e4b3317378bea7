"""Matrix-argument special functions and fractional integral operators.

Exact pieces: multivariate gamma and beta functions, generalized Pochhammer
coefficients, zonal polynomials, hypergeometric series of matrix argument,
and closed forms for left-sided fractional integrals of determinant powers
and zonal polynomials.  Stochastic pieces: seeded matrix samplers and
Monte Carlo cross-checks for every closed form.
"""

from .errors import (
    DegenerateInputError,
    DimensionError,
    MissingTableEntryError,
    MvfracError,
    NonConvergenceError,
    ParameterDomainError,
    ResourceLimitError,
)
from .fracops import (
    DetPowerOperand,
    FracOrder,
    FracValue,
    SaigoParams,
    frac_integral_numeric,
    frac_integral_power_closed,
    frac_integral_zonal_closed,
    saigo_power_closed,
)
from .gammacalc import (
    Partition,
    gen_pochhammer,
    log_gamma,
    log_matrix_beta,
    log_matrix_gamma,
    log_matrix_gamma_partition,
    partitions_of,
    pathway_factor,
    signed_log_gen_pochhammer,
)
from .hyperseries import (
    HyperParams,
    SeriesResult,
    Truncation,
    gauss_2f1_rect,
    hyper_pfq,
    hyper_pfq_at_identity,
    pathway_det_limit,
)
from .matsample import (
    MatrixGammaSpec,
    McEstimate,
    cone_acceptance_report,
    mc_integrate_unit_cone,
    sample_matrix_gamma,
    sample_rect_exponential,
    sample_type1_beta,
    sample_uniform_spd_unit,
    verify_sum_density,
)
from .rng import derive_key, gamma_variates, normals, uniforms
from .spdcore import (
    RectConfig,
    RectMatrix,
    SpdMatrix,
    matrix_from_json,
    matrix_to_json,
    ordering_lt,
    rect_transform,
    spd_sqrt,
    stiefel_constant,
)
from .verify import SUITES, run_suite
from .zonal import (
    ZonalTable,
    build_zonal_table,
    fetch_table,
    table_from_records,
    table_to_records,
    zonal_at_identity,
    zonal_eval,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError",
    "DetPowerOperand",
    "DimensionError",
    "FracOrder",
    "FracValue",
    "HyperParams",
    "MatrixGammaSpec",
    "McEstimate",
    "MissingTableEntryError",
    "MvfracError",
    "NonConvergenceError",
    "ParameterDomainError",
    "Partition",
    "RectConfig",
    "RectMatrix",
    "ResourceLimitError",
    "SUITES",
    "SaigoParams",
    "SeriesResult",
    "SpdMatrix",
    "Truncation",
    "ZonalTable",
    "build_zonal_table",
    "cone_acceptance_report",
    "derive_key",
    "fetch_table",
    "frac_integral_numeric",
    "frac_integral_power_closed",
    "frac_integral_zonal_closed",
    "gamma_variates",
    "gauss_2f1_rect",
    "gen_pochhammer",
    "hyper_pfq",
    "hyper_pfq_at_identity",
    "log_gamma",
    "log_matrix_beta",
    "log_matrix_gamma",
    "log_matrix_gamma_partition",
    "matrix_from_json",
    "matrix_to_json",
    "mc_integrate_unit_cone",
    "normals",
    "ordering_lt",
    "partitions_of",
    "pathway_det_limit",
    "pathway_factor",
    "rect_transform",
    "run_suite",
    "saigo_power_closed",
    "sample_matrix_gamma",
    "sample_rect_exponential",
    "sample_type1_beta",
    "sample_uniform_spd_unit",
    "spd_sqrt",
    "stiefel_constant",
    "table_from_records",
    "table_to_records",
    "uniforms",
    "verify_sum_density",
    "zonal_at_identity",
    "zonal_eval",
]
