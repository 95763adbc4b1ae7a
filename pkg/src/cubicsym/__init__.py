"""Exact computations on smooth cubic surfaces: the 27 lines, tritangent
planes, Eckardt points, Eckardt families and projective stabilizers."""

from .field import RATIONALS, MultiPoly, NumberField, ParamField, nf_create

__all__ = ["RATIONALS", "MultiPoly", "NumberField", "ParamField", "nf_create"]
__version__ = "0.1.0"
