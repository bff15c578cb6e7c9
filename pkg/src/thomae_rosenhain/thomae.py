"""Thomae-type relations between theta constants and branch points.

Every relation here holds up to a root of unity that depends on the
ordering of the branch points. Each check computes the ratio of the two
sides with principal branches and fits it to the nearest admissible root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .curve import CurveError, HyperellipticCurve, Partition, chi, nabla, symmetric_functions_alt
from .periods import PeriodData
from .riemann_theta import ThetaTable

__all__ = [
    "RootOfUnityFit",
    "VerificationReport",
    "fit_root_of_unity",
    "principal_root",
    "symmetric_vector",
    "symmetric_matrix",
    "first_thomae_check",
    "corollary1_check",
    "corollary2_check",
    "second_thomae_check",
    "second_thomae_matrix_check",
    "chi_fourth_root_theta",
    "DEFAULT_IDENTITY_TOL",
]

DEFAULT_IDENTITY_TOL = 1e-8


@dataclass(frozen=True)
class RootOfUnityFit:
    """Nearest ``order``-th root of unity to a computed ratio.

    Attributes
    ----------
    ratio : complex
    nearest : complex
        ``exp(2 pi i k / order)``.
    residual : float
        ``|ratio - nearest|``.
    order : int
    exponent : int
        ``k`` in ``0 .. order-1``.
    """

    ratio: complex
    nearest: complex
    residual: float
    order: int
    exponent: int

    def passed(self, tol: float) -> bool:
        return bool(self.residual < tol)


def fit_root_of_unity(ratio: complex, order: int = 8) -> RootOfUnityFit:
    """Fit ``ratio`` to the nearest of the ``order`` roots of unity."""
    roots = np.exp(2j * np.pi * np.arange(order) / order)
    dist = np.abs(complex(ratio) - roots)
    k = int(np.argmin(dist))
    return RootOfUnityFit(complex(ratio), complex(roots[k]), float(dist[k]), order, k)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one numerical identity check.

    ``residual`` combines the root-of-unity distance with any consistency
    defect recorded in ``details`` (for vector identities).
    """

    identity: str
    indices: Any
    fit: RootOfUnityFit
    residual: float
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def ratio(self) -> complex:
        return self.fit.ratio

    @property
    def nearest(self) -> complex:
        return self.fit.nearest

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "indices": _jsonable(self.indices),
            "ratio": [self.fit.ratio.real, self.fit.ratio.imag],
            "nearest_root": [self.fit.nearest.real, self.fit.nearest.imag],
            "residual": self.residual,
            "pass": self.passed,
        }
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def make_report(identity: str, indices, ratio: complex, tol: float, order: int = 8,
                defect: float = 0.0, **details) -> VerificationReport:
    """Fit ``ratio`` and fold an extra consistency ``defect`` into the residual."""
    fit = fit_root_of_unity(ratio, order)
    residual = max(fit.residual, float(defect))
    if defect:
        details["consistency_defect"] = float(defect)
    return VerificationReport(identity, indices, fit, residual, bool(residual < tol), details)


def principal_root(value, n: float) -> complex:
    """Principal ``n``-th root of a real or complex number."""
    return complex(value) ** (1.0 / n)


def _table(periods: PeriodData, table: ThetaTable | None) -> ThetaTable:
    return table if table is not None else ThetaTable(periods.tau)


def _prefactor(periods: PeriodData, extra: int) -> complex:
    g = periods.genus
    return principal_root(periods.det_a / (2 ** (g + extra) * np.pi**g), 2)


def first_thomae_check(curve: HyperellipticCurve, p: Partition, periods: PeriodData,
                       tol: float = DEFAULT_IDENTITY_TOL,
                       table: ThetaTable | None = None) -> VerificationReport:
    """``theta[eps(I_0)] = eps (det A / (2 pi)^g)^(1/2) nabla(I_0)^(1/4)`` with ``eps^8 = 1``."""
    table = _table(periods, table)
    rhs = _prefactor(periods, 0) * principal_root(nabla(curve, p), 4)
    if abs(rhs) == 0:
        raise ArithmeticError("vanishing right-hand side")
    lhs = table.const(p.i_set)
    return make_report("first_thomae", list(p.i_set), lhs / rhs, tol, 8)


def corollary1_check(curve: HyperellipticCurve, S: Iterable[int], T: Iterable[int], k: int,
                     l: int, periods: PeriodData, tol: float = DEFAULT_IDENTITY_TOL,
                     table: ThetaTable | None = None) -> VerificationReport:
    """``(e_l - e_m)/(e_k - e_m)`` against a ratio of squared theta constants, up to ``eps^4 = 1``.

    ``S`` and ``T`` are disjoint ``(g-1)``-sets, ``k != l`` lie outside both
    and ``m`` is the one remaining finite index.
    """
    g = curve.genus
    S, T = set(S), set(T)
    if len(S) != g - 1 or len(T) != g - 1 or S & T:
        raise CurveError(f"S and T must be disjoint sets of size {g - 1}")
    if k == l or {k, l} & (S | T):
        raise CurveError("k and l must be distinct and outside S and T")
    rest = set(curve.indices) - S - T - {k, l}
    if len(rest) != 1:
        raise CurveError("indices out of range")
    (m,) = rest
    table = _table(periods, table)
    lhs = (curve.e(l) - curve.e(m)) / (curve.e(k) - curve.e(m))
    th = lambda s: table.const(sorted(s))
    rhs = (th(S | {k}) * th(T | {k})) ** 2 / (th(S | {l}) * th(T | {l})) ** 2
    return make_report("corollary1", {"S": sorted(S), "T": sorted(T), "k": k, "l": l, "m": m},
                       lhs / rhs, tol, 4)


def corollary2_check(curve: HyperellipticCurve, p: Partition, k: int, n: int, i: int, j: int,
                     periods: PeriodData, tol: float = DEFAULT_IDENTITY_TOL,
                     table: ThetaTable | None = None) -> VerificationReport:
    """Branch-point fraction against a ratio of fourth powers of theta constants, up to sign.

    ``k != n`` are taken from ``I_0`` and ``i != j`` from ``J_0``.
    """
    if k == n or k not in p.i_set or n not in p.i_set:
        raise CurveError("k and n must be distinct members of I_0")
    if i == j or i not in p.j_set or j not in p.j_set:
        raise CurveError("i and j must be distinct members of J_0")
    table = _table(periods, table)
    e = curve.e
    ek = e(k)
    lhs = np.prod([ek - e(x) for x in p.j_set]) / (
        np.prod([ek - e(x) for x in p.i_set if x != k]) * (ek - e(n)) ** 2)
    sk = set(p.i_set) - {k}
    skn = sk - {n}
    tij = set(p.j_set) - {i, j}
    th = lambda s: table.const(sorted(s))
    rhs = (th(sk | {i}) * th(sk | {j}) * th(tij | {n})) ** 4 / (
        th(skn | {i, j}) * th(tij | {i}) * th(tij | {j})) ** 4
    return make_report("corollary2", {"I0": list(p.i_set), "k": k, "n": n, "i": i, "j": j},
                       lhs / rhs, tol, 2)


def symmetric_vector(curve: HyperellipticCurve, index_set: Iterable[int]) -> np.ndarray:
    """``(s_{g-1}, s_{g-2}, ..., s_0)`` of the branch points in a ``(g-1)``-set.

    Entry ``i`` (1-based) is ``s_{g-i}``, the coefficient paired with the
    differential ``x^(i-1) dx / y``.
    """
    g = curve.genus
    s = symmetric_functions_alt([curve.e(x) for x in sorted(index_set)])
    if len(s) != g:
        raise CurveError(f"expected a set of size {g - 1}")
    return s[::-1].copy()


def symmetric_matrix(curve: HyperellipticCurve, p: Partition) -> np.ndarray:
    """Matrix with column ``n`` equal to :func:`symmetric_vector` of ``I_1^(n)``."""
    return np.column_stack([symmetric_vector(curve, p.i1(n)) for n in p.i_set])


def second_thomae_check(curve: HyperellipticCurve, p: Partition, n: int, periods: PeriodData,
                        tol: float = DEFAULT_IDENTITY_TOL,
                        table: ThetaTable | None = None) -> VerificationReport:
    """Gradient of ``theta[eps(I_1^(n))]`` against ``(det A / 2^(g+2) pi^g)^(1/2) nabla^(1/4) A^T s``.

    Component ``j`` of the right side is ``sum_i A[i, j] s_{g-i}`` with ``A[i, j]``
    the ``a_j``-period of ``x^(i-1) dx / y``.
    """
    table = _table(periods, table)
    i1 = p.i1(n)
    lhs = table.grad(i1)
    rhs = (_prefactor(periods, 2) * principal_root(nabla(curve, p.special(n)), 4)
           * (periods.a_matrix.T @ symmetric_vector(curve, i1)))
    big = int(np.argmax(np.abs(rhs)))
    if abs(rhs[big]) < 1e-300:
        raise ArithmeticError("right-hand side vanishes")
    ratio = lhs[big] / rhs[big]
    defect = float(np.max(np.abs(lhs - ratio * rhs)) / np.max(np.abs(rhs)))
    return make_report("second_thomae", {"I0": list(p.i_set), "n": n}, ratio, tol, 8, defect)


def second_thomae_matrix_check(curve: HyperellipticCurve, p: Partition, periods: PeriodData,
                               tol: float = DEFAULT_IDENTITY_TOL,
                               table: ThetaTable | None = None) -> VerificationReport:
    """Matrix form ``J = eps (det A / 2^(g+2) pi^g)^(1/2) A^T S D``.

    ``J`` has the gradients of ``theta[eps(I_1^(n))]`` as columns, ``S`` the
    symmetric vectors and ``D = diag(nabla(I_1^(n))^(1/4))``. A single
    global root of unity is fitted for the whole matrix.
    """
    from .riemann_theta import jacobi_matrix

    table = _table(periods, table)
    jm = jacobi_matrix(p, periods.tau, table=table)
    S = symmetric_matrix(curve, p)
    if abs(np.linalg.det(S)) == 0:
        raise ArithmeticError("symmetric-function matrix is singular")
    D = np.diag([principal_root(nabla(curve, p.special(n)), 4) for n in p.i_set])
    rhs = _prefactor(periods, 2) * periods.a_matrix.T @ S @ D
    idx = np.unravel_index(np.argmax(np.abs(rhs)), rhs.shape)
    ratio = jm[idx] / rhs[idx]
    defect = float(np.max(np.abs(jm - ratio * rhs)) / np.max(np.abs(rhs)))
    return make_report("second_thomae_matrix", {"I0": list(p.i_set)}, ratio, tol, 8, defect)


def chi_fourth_root_theta(curve: HyperellipticCurve, p: Partition, n: int, periods: PeriodData,
                          tol: float = DEFAULT_IDENTITY_TOL,
                          table: ThetaTable | None = None) -> VerificationReport:
    """Theta-constant expression of ``chi_n^(1/4)`` fitted against the direct value.

    The theta side is ``(Theta_{I_1} / Theta_{I_0})^(1/(g-1)) * prod_{i in I_1}(e_n - e_i)^(1/(2g-2))``.
    """
    g = curve.genus
    if g < 2:
        raise CurveError("needs genus at least 2")
    table = _table(periods, table)
    i1 = p.i1(n)
    theta0 = table.product([[x for x in p.j_set if x != j] for j in p.j_set])
    theta1 = table.product([sorted(i1 + (j,)) for j in p.j_set])
    if theta0 == 0 or theta1 == 0:
        raise ArithmeticError("vanishing theta product")
    prod = np.prod([curve.e(n) - curve.e(i) for i in i1])
    value = principal_root(theta1 / theta0, g - 1) * principal_root(prod, 2 * g - 2)
    direct = principal_root(chi(curve, p, n), 4)
    modulus = abs(abs(value) ** 4 / abs(chi(curve, p, n)) - 1)
    return make_report("chi_fourth_root", {"I0": list(p.i_set), "n": n}, value / direct, tol, 8,
                       theta_value=value, modulus_defect=float(modulus))
