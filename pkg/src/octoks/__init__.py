"""Octonionic boundary integral operators and Hardy space projections.

Building blocks: exact octonion arithmetic, monogenic reference functions and
reproducing kernels, Monte Carlo boundary meshes, discretized Cauchy-type
transforms with their Kerzman-Stein skew part, and Szego projections for the
unit ball and the half-space.
"""

from .algebra import (
    Octonion,
    associator,
    basis,
    conjugate,
    inverse,
    left_mul_matrix,
    multiply,
    scalar_product,
)
from .errors import (
    DomainError,
    MeshParseError,
    MeshValidationError,
    OctoksError,
    SingularityError,
    UsageError,
)

__version__ = "0.1.0"

__all__ = [
    "Octonion",
    "multiply",
    "conjugate",
    "inverse",
    "scalar_product",
    "associator",
    "left_mul_matrix",
    "basis",
    "OctoksError",
    "DomainError",
    "SingularityError",
    "MeshParseError",
    "MeshValidationError",
    "UsageError",
    "__version__",
]
