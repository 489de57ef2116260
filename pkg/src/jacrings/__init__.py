"""Exact symbolic Chow ring calculus for a relative Jacobian J, for the
limit C^[oo] of symmetric powers, and for the graded tower C^[.].

Every computation is over Q (gmpy2 rationals) in free divided-power
polynomial models, truncated only by the dimension/weight window of CH(J).
"""
__version__ = "0.1.0"

from .pdpoly import (CapOverflowError, CoordinateMismatch, Element, NotNilpotentError,
                     PDError, PDRing, PreconditionError, Window, divided_power, from_json,
                     to_json, to_text)
from .jac_model import ClassSpec, JacobianRing, ModelConfig
from .cinf_model import CInfModel, log_psi
from .cbul_model import CBulModel, LiftError
from .gk import DivisorSpec, GKModel

__all__ = [
    "CapOverflowError", "CoordinateMismatch", "Element", "NotNilpotentError", "PDError",
    "PDRing", "PreconditionError", "Window", "divided_power", "from_json", "to_json",
    "to_text", "ClassSpec", "JacobianRing", "ModelConfig", "CInfModel", "log_psi",
    "CBulModel", "LiftError", "DivisorSpec", "GKModel",
]
