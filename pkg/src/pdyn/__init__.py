"""Exact dynamics of split rational maps on (P^1)^n over Q."""
from .algebra import MultiPoly, RatMatrix, UniPoly, rank, rational_roots, resultant
from .errors import PdynError
from .kernels import BACKEND
from .p1 import (
    INFINITY, Mobius, ProjPoint, RatMap1, compose, conjugate, evaluate, iterate, point_preimages,
)
from .varieties import Hypersurface, PointSet, SplitMap

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "INFINITY", "Hypersurface", "Mobius", "MultiPoly", "PdynError", "PointSet",
    "ProjPoint", "RatMap1", "RatMatrix", "SplitMap", "UniPoly", "compose", "conjugate", "evaluate",
    "iterate", "point_preimages", "rank", "rational_roots", "resultant", "__version__",
]
