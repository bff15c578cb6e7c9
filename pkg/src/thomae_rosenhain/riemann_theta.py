"""Riemann theta functions with characteristics.

``theta[e](z; tau) = sum_m exp(i pi x^T tau x + 2 i pi (z + e/2)^T x)`` with
``x = m + e'/2``. The lattice sum is cut to an ellipsoid of the quadratic
form ``Im tau`` that contains the Euclidean ball of radius ``R`` around the
saddle point of the summand. The omitted tail is bounded by counting lattice
points in unit-width shells of that ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characteristics import Characteristic, partition_characteristic
from .curve import Partition

__all__ = [
    "SiegelError",
    "ThetaConvergenceError",
    "SiegelMatrix",
    "tail_bound",
    "truncation_radius",
    "truncation_threshold",
    "theta",
    "theta_gradient",
    "jacobi_matrix",
    "ThetaTable",
    "DEFAULT_SERIES_TOL",
    "MAX_RADIUS",
]

DEFAULT_SERIES_TOL = 1e-12
MAX_RADIUS = 64
SYMMETRY_TOL = 1e-10


class SiegelError(ValueError):
    """Raised when a matrix is not in the Siegel upper half-space."""


class ThetaConvergenceError(ArithmeticError):
    """Raised when the requested tolerance needs a radius above ``MAX_RADIUS``."""


@dataclass(frozen=True, eq=False)
class SiegelMatrix:
    """Validated Riemann matrix: symmetric with positive definite imaginary part.

    Parameters
    ----------
    tau : array_like
        Complex ``g x g`` matrix.
    symmetry_tol : float
        Largest accepted ``max |tau - tau^T|``.
    """

    tau: np.ndarray
    lambda_min: float
    symmetry_defect: float

    def __init__(self, tau, symmetry_tol: float = SYMMETRY_TOL):
        t = np.array(tau, dtype=complex)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise SiegelError(f"tau must be a square matrix, got shape {t.shape}")
        if not np.all(np.isfinite(t)):
            raise SiegelError("tau has non-finite entries")
        defect = float(np.max(np.abs(t - t.T)))
        if defect > symmetry_tol:
            raise SiegelError(f"tau is not symmetric (defect {defect:.3e})")
        t = 0.5 * (t + t.T)
        lam = float(np.linalg.eigvalsh(t.imag).min())
        if lam <= 0:
            raise SiegelError(f"Im tau is not positive definite (lambda_min {lam:.3e})")
        t.setflags(write=False)
        object.__setattr__(self, "tau", t)
        object.__setattr__(self, "lambda_min", lam)
        object.__setattr__(self, "symmetry_defect", defect)

    @property
    def genus(self) -> int:
        return self.tau.shape[0]

    @classmethod
    def coerce(cls, tau) -> "SiegelMatrix":
        return tau if isinstance(tau, cls) else cls(tau)


def _ball_volume(g: int) -> float:
    return math.pi ** (g / 2) / math.gamma(g / 2 + 1)


def tail_bound(radius: float, lambda_min: float, g: int, moment: int = 0) -> float:
    """Upper bound for the summands omitted outside the ball of ``radius``.

    Every omitted point lies in some shell ``R + k <= |x| < R + k + 1`` and
    contributes at most ``(2 pi |x|)**moment * exp(-pi lambda_min |x|**2)``.
    The number of shifted lattice points in a ball of radius ``r`` is at most
    the volume of the ball of radius ``r + sqrt(g)/2``.
    """
    if lambda_min <= 0:
        raise SiegelError("lambda_min must be positive")
    k = np.arange(0, 400, dtype=float)
    r = radius + k
    count = _ball_volume(g) * (r + 1 + math.sqrt(g) / 2) ** g
    weight = (2 * math.pi * (r + 1)) ** moment
    log_terms = np.log(count * weight) - math.pi * lambda_min * r**2
    return float(np.exp(log_terms).sum())


def truncation_radius(tau, tol: float, moment: int = 0, log_shift: float = 0.0,
                      max_radius: int = MAX_RADIUS) -> int:
    """Smallest integer ``R >= 1`` whose tail bound is below ``tol``.

    Parameters
    ----------
    tau : SiegelMatrix or array_like
    tol : float
        Absolute bound on the omitted part of the series.
    moment : int
        Polynomial degree of extra factors in the summand (1 for gradients).
    log_shift : float
        ``pi c^T Im(tau) c`` for the saddle offset ``c`` of a complex argument.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if isinstance(tau, SiegelMatrix):
        lam, g = tau.lambda_min, tau.genus
    else:
        t = np.asarray(tau, dtype=complex)
        lam, g = float(np.linalg.eigvalsh(0.5 * (t.imag + t.imag.T)).min()), t.shape[0]
    if lam <= 0:
        raise SiegelError(f"Im tau is not positive definite (lambda_min {lam:.3e})")
    target = math.log(tol) - log_shift
    for R in range(1, max_radius + 1):
        if math.log(max(tail_bound(R, lam, g, moment), 1e-320)) < target:
            return R
    raise ThetaConvergenceError(
        f"tolerance {tol:g} needs a truncation radius above {max_radius}"
    )


def truncation_threshold(tau, tol: float, moment: int = 0, log_shift: float = 0.0) -> float:
    """Real radius at which the tail bound crosses ``tol``.

    ``truncation_radius`` is the integer ceiling of this value (at least 1).
    """
    R = truncation_radius(tau, tol, moment=moment, log_shift=log_shift)
    lam = tau.lambda_min if isinstance(tau, SiegelMatrix) else SiegelMatrix(tau).lambda_min
    g = tau.genus if isinstance(tau, SiegelMatrix) else np.asarray(tau).shape[0]
    target = math.log(tol) - log_shift

    def excess(r):
        return math.log(max(tail_bound(r, lam, g, moment), 1e-320)) - target

    lo, hi = R - 1.0, float(R)
    if excess(lo) < 0:
        return lo
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if excess(mid) >= 0 else (lo, mid)
    return hi


@lru_cache(maxsize=512)
def _points(top: tuple[int, ...], center: tuple[float, ...], y_bytes: bytes, g: int,
            bound: float) -> np.ndarray:
    y = np.frombuffer(y_bytes, dtype=float).reshape(g, g)
    yinv = np.linalg.inv(y)
    half = np.asarray(top, dtype=float) / 2
    c = np.asarray(center)
    width = np.sqrt(bound * np.diag(yinv))
    axes = [np.arange(math.ceil(c[i] - half[i] - width[i]),
                      math.floor(c[i] - half[i] + width[i]) + 1) for i in range(g)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, g)
    x = grid + half
    d = x - c
    keep = np.einsum("ni,ij,nj->n", d, y, d) <= bound
    pts = x[keep]
    pts.setflags(write=False)
    return pts


def _lattice(c: Characteristic, tau: SiegelMatrix, z: np.ndarray, tol: float, moment: int):
    y = tau.tau.imag
    shift = np.linalg.solve(y, z.imag)
    log_shift = math.pi * float(shift @ y @ shift)
    R = truncation_radius(tau, tol, moment=moment, log_shift=log_shift)
    center = tuple(float(v) for v in np.round(-shift, 12))
    bound = tau.lambda_min * R * R
    return _points(c.top, center, np.ascontiguousarray(y).tobytes(), tau.genus, bound)


def _check(c: Characteristic, tau: SiegelMatrix, z):
    if c.genus != tau.genus:
        raise ValueError(f"characteristic genus {c.genus} does not match tau genus {tau.genus}")
    z = np.zeros(tau.genus, complex) if z is None else np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (tau.genus,):
        raise ValueError("z has the wrong length")
    return z


def _summands(c, tau, z, x):
    _, bottom = c.arrays()
    phase = np.einsum("ni,ij,nj->n", x, tau.tau, x) + 2 * x @ (z + bottom / 2)
    return np.exp(1j * np.pi * phase)


def theta(c: Characteristic, z=None, tau=None, tol: float = DEFAULT_SERIES_TOL) -> complex:
    """Evaluate ``theta[c](z; tau)`` with an omitted tail below ``tol``.

    Parameters
    ----------
    c : Characteristic
    z : array_like or None
        Argument; ``None`` gives the theta constant.
    tau : SiegelMatrix or array_like
    tol : float
    """
    tau = SiegelMatrix.coerce(tau)
    z = _check(c, tau, z)
    x = _lattice(c, tau, z, tol, 0)
    return complex(np.sum(_summands(c, tau, z, x)))


def theta_gradient(c: Characteristic, tau, tol: float = DEFAULT_SERIES_TOL, z=None,
                   allow_even: bool = False) -> np.ndarray:
    """Gradient ``(d theta[c] / d z_k)_k`` by the differentiated series.

    At ``z = 0`` the gradient of an even characteristic vanishes identically,
    so such requests are rejected unless ``allow_even`` is set.
    """
    tau = SiegelMatrix.coerce(tau)
    z = _check(c, tau, z)
    if c.is_even and not allow_even and not np.any(z):
        raise ValueError(f"{c} is even; its gradient at z = 0 vanishes identically")
    x = _lattice(c, tau, z, tol, 1)
    w = _summands(c, tau, z, x)
    return 2j * np.pi * (x * w[:, None]).sum(axis=0)


class ThetaTable:
    """Memoized theta constants and gradients at ``z = 0`` for one ``tau``.

    Lookups accept either a :class:`Characteristic` or an index set, which
    is mapped through :func:`partition_characteristic`.
    """

    def __init__(self, tau, tol: float = DEFAULT_SERIES_TOL):
        self.tau = SiegelMatrix.coerce(tau)
        self.tol = tol
        self._const: dict[Characteristic, complex] = {}
        self._grad: dict[Characteristic, np.ndarray] = {}

    @property
    def genus(self) -> int:
        return self.tau.genus

    def _char(self, key) -> Characteristic:
        if isinstance(key, Characteristic):
            return key
        return partition_characteristic(self.genus, key)

    def const(self, key) -> complex:
        c = self._char(key)
        if c not in self._const:
            self._const[c] = theta(c, None, self.tau, self.tol)
        return self._const[c]

    def grad(self, key) -> np.ndarray:
        c = self._char(key)
        if c not in self._grad:
            self._grad[c] = theta_gradient(c, self.tau, self.tol)
        return self._grad[c]

    def product(self, keys) -> complex:
        out = 1.0 + 0j
        for k in keys:
            out *= self.const(k)
        return out


def jacobi_matrix(p: Partition, tau, tol: float = DEFAULT_SERIES_TOL,
                  table: ThetaTable | None = None) -> np.ndarray:
    """Matrix whose column ``n`` is the gradient of ``theta[eps(I_1^(n))]``.

    Columns follow the sorted order of ``I_0``; entry ``(j, n)`` is
    ``d theta[eps(I_1^(n))] / d z_j`` at ``z = 0``.
    """
    table = table or ThetaTable(tau, tol)
    if p.genus != table.genus:
        raise ValueError("partition and tau have different genus")
    return np.column_stack([table.grad(p.i1(n)) for n in p.i_set])
