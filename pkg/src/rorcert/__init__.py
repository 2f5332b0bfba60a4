"""Exact verification of stabilization and robust regulation for rational MIMO systems."""

__version__ = "0.1.0"

from .exactalg import Poly, RatFunc, rf_reduce, rf_vinf, poly_gcd_ext  # noqa: E402
from .ratmat import RatMat, mat_det, mat_inv, mat_is_stable, scalar_mul  # noqa: E402
from .stablering import (  # noqa: E402
    bezout_in_S,
    count_common_unstable_zero,
    divides_in_S,
    gcd_in_S,
    in_S,
    is_hurwitz,
    is_unit_in_S,
)
from .parse import parse_ratfunc  # noqa: E402

__all__ = [
    "Poly",
    "RatFunc",
    "RatMat",
    "bezout_in_S",
    "count_common_unstable_zero",
    "divides_in_S",
    "gcd_in_S",
    "in_S",
    "is_hurwitz",
    "is_unit_in_S",
    "mat_det",
    "mat_inv",
    "mat_is_stable",
    "parse_ratfunc",
    "poly_gcd_ext",
    "rf_reduce",
    "rf_vinf",
    "scalar_mul",
]
