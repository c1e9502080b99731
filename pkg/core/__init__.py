# core package - rational maps, quadrature domains, singularities, dynamics
#
# Only the dependency-free layers are re-exported here; import
# core.quadrature / core.singularity / core.dynamics directly.

from core.errors import QDError, InvalidInput, NumericFailure
from core.rational import INF, is_inf, Polynomial, RationalMap, RootSet, roots

__all__ = [
    "QDError",
    "InvalidInput",
    "NumericFailure",
    "INF",
    "is_inf",
    "Polynomial",
    "RationalMap",
    "RootSet",
    "roots",
]
