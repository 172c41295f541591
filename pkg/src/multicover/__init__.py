"""Multi-cover metric codes for multilayer crisscross errors and erasures."""

from multicover.ffield import FieldCtx, extension_make, field_make, gf
from multicover.lincode import LinearCode, code_make, dual, min_distance
from multicover.mctuple import MatrixTuple, MultiCover, ShapeProfile, mc_weight

__all__ = [
    "FieldCtx", "LinearCode", "MatrixTuple", "MultiCover", "ShapeProfile",
    "code_make", "dual", "extension_make", "field_make", "gf", "mc_weight", "min_distance",
]
__version__ = "0.1.0"
