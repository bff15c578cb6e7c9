"""Period matrices, theta constants with characteristics and theta-only
reconstruction of the inverse period matrix of hyperelliptic curves."""

from .characteristics import (
    Characteristic,
    branch_characteristic,
    is_azygetic,
    is_special_fundamental_system,
    parity,
    partition_characteristic,
    riemann_constant,
)
from .curve import CurveError, HyperellipticCurve, Partition, even_partitions
from .periods import PeriodData, compute_periods, validate_siegel
from .riemann_theta import SiegelMatrix, ThetaTable, jacobi_matrix, theta, theta_gradient
from .thomae import RootOfUnityFit, VerificationReport, fit_root_of_unity

__all__ = [
    "Characteristic",
    "CurveError",
    "HyperellipticCurve",
    "Partition",
    "PeriodData",
    "RootOfUnityFit",
    "SiegelMatrix",
    "ThetaTable",
    "VerificationReport",
    "branch_characteristic",
    "compute_periods",
    "even_partitions",
    "fit_root_of_unity",
    "is_azygetic",
    "is_special_fundamental_system",
    "jacobi_matrix",
    "parity",
    "partition_characteristic",
    "riemann_constant",
    "theta",
    "theta_gradient",
    "validate_siegel",
]

__version__ = "0.1.0"
