"""Generating functions for line bundle cohomology and their verification."""

from .laurent import LaurentPoly, binom_poly, lp_add, lp_mul, lp_pow
from .rational import FactoredRational, combine_sum, parse_rational, print_rational, substitute

__all__ = [
    "LaurentPoly",
    "binom_poly",
    "lp_add",
    "lp_mul",
    "lp_pow",
    "FactoredRational",
    "combine_sum",
    "parse_rational",
    "print_rational",
    "substitute",
]
