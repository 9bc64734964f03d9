"""
The two-sided bar complex: enumeration, differentials, shuffle product and the passage from
tensor products over k to tensor products over R.
"""

from .bar_config import UNIT, BarChain, BarConfig, BarWord
from .bar_complex import BarComplex
from .over_r import MarkedWord, OverRQuotient, QuotientSlice
from .shuffle import shuffle_mul, shuffle_words

__all__ = [
    "UNIT",
    "BarChain",
    "BarComplex",
    "BarConfig",
    "BarWord",
    "MarkedWord",
    "OverRQuotient",
    "QuotientSlice",
    "shuffle_mul",
    "shuffle_words",
]
