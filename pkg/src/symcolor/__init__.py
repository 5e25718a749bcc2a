"""Exact cylinder measure and sampler for a color-symmetric 1-dependent q-coloring of Z."""

from .chebyshev import CoeffTable, coeff_c, coeff_d, coeff_oracle
from .exactnum import QAdjoined, Rational, as_rational, format_rational
from .measure import CylinderMeasure, Word, delete_at, is_proper, proper_words

__version__ = "0.1.0"

__all__ = [
    "CoeffTable",
    "CylinderMeasure",
    "QAdjoined",
    "Rational",
    "Word",
    "as_rational",
    "coeff_c",
    "coeff_d",
    "coeff_oracle",
    "delete_at",
    "format_rational",
    "is_proper",
    "proper_words",
]
