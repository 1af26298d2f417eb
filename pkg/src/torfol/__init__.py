"""Exact computations for toric foliations on simplicial toric varieties."""

from .errors import TorfolError
from .fan import FanData, validate
from .foliation import FoliationDatum, TorusDivisor, canonical_divisor, singular_locus
from .mori import MmpOptions, run_mmp
from .singclass import classify
from .textformat import parse, serialize

__version__ = "0.1.0"

__all__ = [
    "FanData",
    "FoliationDatum",
    "MmpOptions",
    "TorfolError",
    "TorusDivisor",
    "canonical_divisor",
    "classify",
    "parse",
    "run_mmp",
    "serialize",
    "singular_locus",
    "validate",
]
