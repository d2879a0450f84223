"""Exact-arithmetic toolkit for exactly solvable operators, their eigenpolynomials
and the finite recurrences those polynomials satisfy."""
from .exactnum import MPoly, RatFn
from .diffop import DiffOp, XPoly, build_operator, eigen_sequence
from .recurrence import recurrence_table, reconstruct_table
from .shiftop import ShiftOp, ad_condition_check
from .catalog import FamilySpec, family_operator

__all__ = ["MPoly", "RatFn", "DiffOp", "XPoly", "build_operator", "eigen_sequence",
           "recurrence_table", "reconstruct_table", "ShiftOp", "ad_condition_check",
           "FamilySpec", "family_operator"]
__version__ = "0.1.0"
