"""Nuttall Q, Marcum Q and incomplete Toronto function toolkit.

Series evaluators with closed-form truncation error bounds, finite closed
forms at half-odd-integer orders, 1F1 upper bounds, and an independent
quadrature oracle for validating all of it.  The evaluators use only the
stdlib; the oracle is the only consumer of numpy/scipy.
"""

from .errors import (
    DomainError,
    NonConvergenceError,
    TermOverflowError,
    ToleranceNotMetError,
)
from .nuttall import (
    NuttallParams,
    marcum_q,
    nuttall_half_integer_closed,
    nuttall_integer_series,
    nuttall_q,
    nuttall_q_normalized,
    nuttall_recursion_residual,
    nuttall_series_adaptive,
    nuttall_series_truncated,
    nuttall_truncation_bound,
    nuttall_upper_bound_1f1,
)
from .oracle import (
    GOLDEN_CASES,
    GOLDEN_TOL,
    GoldenEntry,
    OracleValue,
    golden_path,
    oracle_marcum,
    oracle_nuttall,
    oracle_toronto,
    read_golden,
    write_golden,
)
from .special import (
    BoundReport,
    SeriesResult,
    bessel_i,
    bessel_i_scaled,
    ceil_half,
    classify_order,
    floor_half,
    kummer_1f1,
    lower_inc_gamma,
    lower_inc_gamma_log,
    sgn,
    upper_inc_gamma,
    upper_inc_gamma_log,
)
from .toronto import (
    TorontoParams,
    toronto_closed_form_half,
    toronto_marcum_residual,
    toronto_series_adaptive,
    toronto_series_truncated,
    toronto_t,
    toronto_truncation_bound,
    toronto_upper_bound_1f1,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "TermOverflowError",
    "ToleranceNotMetError",
    "SeriesResult",
    "BoundReport",
    "OracleValue",
    "GoldenEntry",
    "GOLDEN_CASES",
    "GOLDEN_TOL",
    "NuttallParams",
    "TorontoParams",
    "ceil_half",
    "floor_half",
    "sgn",
    "classify_order",
    "lower_inc_gamma",
    "upper_inc_gamma",
    "lower_inc_gamma_log",
    "upper_inc_gamma_log",
    "bessel_i",
    "bessel_i_scaled",
    "kummer_1f1",
    "oracle_nuttall",
    "oracle_toronto",
    "oracle_marcum",
    "golden_path",
    "read_golden",
    "write_golden",
    "nuttall_series_truncated",
    "nuttall_series_adaptive",
    "nuttall_integer_series",
    "nuttall_half_integer_closed",
    "nuttall_truncation_bound",
    "nuttall_upper_bound_1f1",
    "nuttall_recursion_residual",
    "marcum_q",
    "nuttall_q",
    "nuttall_q_normalized",
    "toronto_series_truncated",
    "toronto_series_adaptive",
    "toronto_closed_form_half",
    "toronto_truncation_bound",
    "toronto_upper_bound_1f1",
    "toronto_marcum_residual",
    "toronto_t",
    "__version__",
]
