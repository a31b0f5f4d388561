"""Exact verification of Clifford-algebra trace identities and L-factor derivatives."""

from .scalar import QuadraticNumber, format_scalar, parse_scalar
from .superlin import BilinearForm, SuperMap, SuperSpace
from .clifford import CliffordContext, CliffordElement
from .kolyvagin import EquivariantModule, KolyvaginPolarization, KolyvaginSequence, verify_kolylfun
from .flagcoh import compute_kappa

__all__ = [
    "BilinearForm",
    "CliffordContext",
    "CliffordElement",
    "EquivariantModule",
    "KolyvaginPolarization",
    "KolyvaginSequence",
    "QuadraticNumber",
    "SuperMap",
    "SuperSpace",
    "compute_kappa",
    "format_scalar",
    "parse_scalar",
    "verify_kolylfun",
]

__version__ = "0.1.0"
