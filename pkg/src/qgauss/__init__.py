"""Quantum groups from R-matrices (FRT construction), quantum determinants
and the Gauss decomposition of quantum matrices, with exact arithmetic."""

from .gauss import GaussFactors, gauss_decompose
from .ncalg import Alphabet, LocalizedElement, Localizer, NCPolynomial, RewriteSystem
from .qgroup import QuantumGroup, frt_relations, preset
from .rmat import RMatrixSpec, build_bcd, build_gl, build_super_gl
from .scalar import LAMBDA, Q, LaurentPoly, QScalar, qint, qpow

__all__ = [
    "Alphabet", "GaussFactors", "LAMBDA", "LaurentPoly", "LocalizedElement", "Localizer",
    "NCPolynomial", "Q", "QScalar", "QuantumGroup", "RMatrixSpec", "RewriteSystem", "build_bcd",
    "build_gl", "build_super_gl", "frt_relations", "gauss_decompose", "preset", "qint", "qpow",
]
