"""Period matrices of ``x^(i-1) dx / y`` over the standard real homology basis.

Cuts join ``e_{2k-1}`` to ``e_{2k}`` (``k = 1..g``) and ``e_{2g+1}`` to
infinity. The a-cycle ``a_k`` encircles the k-th cut; ``b_k`` leaves the
k-th cut on the upper sheet and returns on the lower sheet through the last
cut, so it crosses the gaps ``(e_{2l}, e_{2l+1})`` for ``l = k..g``.

On the real axis the upper-sheet branch of ``y`` is
``sqrt|f(x)| * i**N(x)`` with ``N(x)`` the number of branch points to the
right of ``x``. Each period is therefore twice a real integral of
``x^(i-1) / sqrt|f(x)|`` between neighbouring branch points, divided by a
constant phase. The global orientation makes ``Im tau`` positive definite
without any further sign change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curve import HyperellipticCurve
from .riemann_theta import SiegelError, SiegelMatrix

__all__ = [
    "QuadratureError",
    "PeriodData",
    "SiegelReport",
    "interval_integrals",
    "compute_periods",
    "validate_siegel",
    "DEFAULT_QUAD_TOL",
]

DEFAULT_QUAD_TOL = 1e-12
PERIOD_SYMMETRY_TOL = 1e-8
_GL_ORDER = 24
_MAX_PANELS = 4000


class QuadratureError(ArithmeticError):
    """Raised when adaptive quadrature does not reach the requested tolerance."""


@lru_cache(maxsize=8)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _panel(func, lo: float, hi: float, n: int) -> np.ndarray:
    nodes, weights = _gauss_legendre(n)
    half = 0.5 * (hi - lo)
    t = lo + half * (nodes + 1)
    return half * (func(t) @ weights)


def interval_integrals(a: float, b: float, others, powers: int, tol: float) -> np.ndarray:
    """``int_a^b x^i / sqrt(|x - a| |x - b| prod |x - e|) dx`` for ``i < powers``.

    The substitution ``x = m + h sin(t)`` removes both endpoint singularities;
    the smooth remainder is integrated by Gauss-Legendre on adaptively
    bisected panels in ``t``.

    Parameters
    ----------
    a, b : float
        Neighbouring branch points, ``a < b``.
    others : sequence of float
        Remaining finite branch points.
    powers : int
        Number of monomials ``x^0 .. x^(powers-1)``.
    tol : float
        Relative tolerance on the largest component.
    """
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    others = np.asarray(others, dtype=float)
    left, right = others[others < a], others[others > b]
    exps = np.arange(powers)[:, None]

    def integrand(t):
        # distances as sums of same-sign terms, exact near either endpoint
        up = 2 * half * np.sin(0.5 * t + math.pi / 4) ** 2      # x - a
        down = 2 * half * np.cos(0.5 * t + math.pi / 4) ** 2    # b - x
        dist = np.concatenate([(a - left)[:, None] + up[None, :],
                               (right - b)[:, None] + down[None, :]])
        x = mid + half * np.sin(t)
        return x[None, :] ** exps / np.sqrt(np.prod(dist, axis=0))

    stack = [(-math.pi / 2, math.pi / 2)]
    coarse_total = _panel(integrand, -math.pi / 2, math.pi / 2, _GL_ORDER)
    scale = max(float(np.max(np.abs(coarse_total))), np.finfo(float).tiny)
    total = np.zeros(powers)
    panels = 0
    while stack:
        lo, hi = stack.pop()
        coarse = _panel(integrand, lo, hi, _GL_ORDER)
        fine = _panel(integrand, lo, hi, 2 * _GL_ORDER)
        share = (hi - lo) / math.pi
        # second term: rounding floor relative to the panel's own size
        if np.max(np.abs(fine - coarse)) <= max(tol * scale * share,
                                                 1e-14 * np.max(np.abs(fine))):
            total += fine
            continue
        panels += 1
        if panels > _MAX_PANELS:
            raise QuadratureError(f"no convergence on ({a}, {b}) at tolerance {tol:g}")
        c = 0.5 * (lo + hi)
        stack.extend([(c, hi), (lo, c)])
    return total


@dataclass(frozen=True, eq=False)
class SiegelReport:
    symmetry_defect: float
    lambda_min: float

    @property
    def is_siegel(self) -> bool:
        return self.lambda_min > 0 and self.symmetry_defect < PERIOD_SYMMETRY_TOL


def validate_siegel(tau) -> SiegelReport:
    """Report ``max |tau - tau^T|`` and the smallest eigenvalue of ``Im tau``."""
    t = np.asarray(tau, dtype=complex)
    defect = float(np.max(np.abs(t - t.T)))
    y = 0.5 * (t.imag + t.imag.T)
    return SiegelReport(defect, float(np.linalg.eigvalsh(y).min()))


@dataclass(frozen=True, eq=False)
class PeriodData:
    """Periods ``A``, ``B`` and the Riemann matrix ``tau = A^{-1} B``."""

    curve: HyperellipticCurve
    a_matrix: np.ndarray
    b_matrix: np.ndarray
    tau: SiegelMatrix
    condition_number: float

    @property
    def genus(self) -> int:
        return self.curve.genus

    @property
    def a_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.a_matrix)

    @property
    def det_a(self) -> complex:
        return complex(np.linalg.det(self.a_matrix))

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "branch_points": list(self.curve.branch_points),
            "a_matrix": complex_matrix_json(self.a_matrix),
            "b_matrix": complex_matrix_json(self.b_matrix),
            "tau": complex_matrix_json(self.tau.tau),
            "condition_number": self.condition_number,
        }


def complex_matrix_json(m) -> list:
    """Row-major nested lists of ``[re, im]`` pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def compute_periods(curve: HyperellipticCurve, quad_tol: float = DEFAULT_QUAD_TOL) -> PeriodData:
    """Compute ``A``, ``B`` and ``tau`` for a curve.

    Raises
    ------
    QuadratureError
        If an interval integral does not converge.
    SiegelError
        If ``tau`` fails validation; this indicates a convention bug.
    """
    g, es = curve.genus, curve.branch_points
    n = len(es)
    seg = []
    # seg[k]: integrals over (e_{k+1}, e_{k+2}) divided by the phase of y there
    for k in range(2 * g):
        others = es[:k] + es[k + 2:]
        vals = interval_integrals(es[k], es[k + 1], others, g, quad_tol)
        seg.append(2 * vals / (1j ** (n - k - 1)))
    a = np.column_stack([seg[2 * k] for k in range(g)])
    gaps = np.column_stack([seg[2 * l + 1] for l in range(g)])
    # b_k collects the gaps to the right of the k-th cut
    b = np.cumsum(gaps[:, ::-1], axis=1)[:, ::-1]
    tau = np.linalg.solve(a, b)
    report = validate_siegel(tau)
    if not report.is_siegel:
        raise SiegelError(
            f"tau failed validation (defect {report.symmetry_defect:.3e}, "
            f"lambda_min {report.lambda_min:.3e})"
        )
    return PeriodData(curve, a, b, SiegelMatrix(tau, PERIOD_SYMMETRY_TOL),
                      float(np.linalg.cond(a)))
