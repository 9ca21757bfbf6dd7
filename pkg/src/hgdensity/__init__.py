"""p-adic boundedness of hypergeometric series with rational or quadratic parameters.

The main entry points are :func:`bounded_class_set` (rational ``nFn-1``),
:func:`bk_set` (``2F1(a + b sqrt(D), a - b sqrt(D); c; z)``), the valuation
routines in :mod:`hgdensity.valuation` and the parameter sweep
:func:`sweep`.
"""

from .digits import (
    QuadraticDigitStream,
    RationalExpansion,
    digit_window_statistics,
    hensel_sqrt,
    quadratic_digit_stream,
    rational_expansion,
)
from .errors import (
    BadPrimeError,
    HGError,
    InvalidClassError,
    NotPIntegralError,
    NotSplitError,
    NoWitnessError,
    ParameterError,
)
from .numtheory import CongruenceClass, Rational, format_rational, parse_rational
from .params import HypergeomParams, QuadraticHGParams
from .quadratic_density import (
    QuadraticDensityReport,
    bk_set,
    split_upper_bound_check,
    unbounded_witness_quadratic,
    zero_density_quadratic,
)
from .rational_density import (
    RationalDensityReport,
    bounded_class_set,
    max_condition_bounded_set,
    is_numerator_majorized,
    unbounded_witness,
    zero_density_test,
)
from .schwarz_search import SearchConfig, SearchRecord, bound_audit, d_ac, load_records, persist, sweep
from .valuation import (
    carry_count,
    coefficient,
    coefficient_valuation,
    exact_valuation_oracle,
    valuation_profile,
)

__version__ = "0.1.0"

__all__ = [
    "BadPrimeError",
    "bk_set",
    "bound_audit",
    "bounded_class_set",
    "carry_count",
    "coefficient",
    "coefficient_valuation",
    "CongruenceClass",
    "d_ac",
    "digit_window_statistics",
    "exact_valuation_oracle",
    "format_rational",
    "hensel_sqrt",
    "HGError",
    "HypergeomParams",
    "InvalidClassError",
    "is_numerator_majorized",
    "load_records",
    "max_condition_bounded_set",
    "NotPIntegralError",
    "NotSplitError",
    "NoWitnessError",
    "ParameterError",
    "parse_rational",
    "persist",
    "quadratic_digit_stream",
    "QuadraticDensityReport",
    "QuadraticDigitStream",
    "QuadraticHGParams",
    "Rational",
    "rational_expansion",
    "RationalDensityReport",
    "RationalExpansion",
    "SearchConfig",
    "SearchRecord",
    "split_upper_bound_check",
    "sweep",
    "unbounded_witness",
    "unbounded_witness_quadratic",
    "valuation_profile",
    "zero_density_quadratic",
    "zero_density_test",
]
