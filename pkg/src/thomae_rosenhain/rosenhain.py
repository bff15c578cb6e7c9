"""Inverse period matrix from theta constants and related derivative identities.

The general reconstruction reads
``A^{-1} = Adj(J^T) diag(chi_n^(1/4)) S^T / (2 pi^g Theta_{I_0})`` where ``J``
holds the gradients of the odd constants ``theta[eps(I_1^(n))]`` as columns,
``S`` the symmetric vectors of the ``I_1^(n)`` and
``Theta_{I_0} = prod_{j in J_0} theta[eps(J_0 minus {j})]``. In genus 2
every branch-point factor can be traded for theta constants, which gives a
formula in ``tau`` alone for a curve normalized to ``e_i = 0, e_j = 1``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .characteristics import Characteristic, partition_characteristic
from .curve import CurveError, HyperellipticCurve, Partition, chi
from .periods import PeriodData, compute_periods
from .riemann_theta import DEFAULT_SERIES_TOL, SiegelMatrix, ThetaTable, jacobi_matrix
from .thomae import (
    DEFAULT_IDENTITY_TOL,
    VerificationReport,
    make_report,
    principal_root,
    symmetric_matrix,
)

__all__ = [
    "adjugate",
    "theta_product_i0",
    "riemann_jacobi_check",
    "a_inverse_general",
    "a_direct_general",
    "rosenhain_D",
    "APPENDIX_A",
    "appendix_a_suite",
    "appendix_a_margin_ok",
    "genus2_theta_product",
    "triple_relation_check",
    "a_inverse_genus2",
    "a_genus2",
    "genus2_round_trip",
    "classical_rosenhain_check",
    "a_inverse_genus3",
    "genus3_round_trip",
    "bolza_ratios",
    "bolza_recover",
    "recover_genus2_branch_points",
    "recover_genus3_pair",
    "compare_up_to_root",
]


def adjugate(m: np.ndarray) -> np.ndarray:
    """Transposed cofactor matrix, so that ``m @ adjugate(m) = det(m) I``."""
    m = np.asarray(m)
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=m.dtype)
    cof = np.empty_like(m)
    for r in range(n):
        for c in range(n):
            minor = np.delete(np.delete(m, r, axis=0), c, axis=1)
            cof[r, c] = (-1) ** (r + c) * np.linalg.det(minor)
    return cof.T


def compare_up_to_root(candidate: np.ndarray, reference: np.ndarray, identity: str, indices,
                       tol: float, order: int = 8, **details) -> VerificationReport:
    """Fit one global root of unity between two matrices and measure the entrywise misfit.

    The ratio is read off the largest reference entry; the defect is
    ``max |candidate - ratio * reference| / max |reference|``.
    """
    candidate = np.asarray(candidate)
    reference = np.asarray(reference)
    idx = np.unravel_index(np.argmax(np.abs(reference)), reference.shape)
    ratio = candidate[idx] / reference[idx]
    defect = float(np.max(np.abs(candidate - ratio * reference)) / np.max(np.abs(reference)))
    return make_report(identity, indices, ratio, tol, order, defect, **details)


def _table(tau, tol, table):
    return table if table is not None else ThetaTable(tau, tol)


def theta_product_i0(p: Partition, table: ThetaTable) -> complex:
    """``Theta_{I_0} = prod_{j in J_0} theta[eps(J_0 minus {j})]``."""
    return table.product([[x for x in p.j_set if x != j] for j in p.j_set])


def riemann_jacobi_check(curve: HyperellipticCurve, p: Partition, periods: PeriodData,
                         tol: float = DEFAULT_IDENTITY_TOL,
                         table: ThetaTable | None = None) -> VerificationReport:
    """``det J = +-pi^g prod_{n=0}^{g+1} theta[eps(T_n)]`` fitted to ``+-1``."""
    table = _table(periods.tau, DEFAULT_SERIES_TOL, table)
    jm = jacobi_matrix(p, periods.tau, table=table)
    det = np.linalg.det(jm)
    if det == 0:
        raise ArithmeticError("singular Jacobi matrix")
    rhs = np.pi**curve.genus * table.product(p.t_sets())
    rep = make_report("riemann_jacobi", list(p.i_set), det / rhs, tol, 2,
                      modulus_defect=float(abs(abs(det) / abs(rhs) - 1)))
    return rep


def _general_pieces(curve, p, table, root_branch):
    if root_branch not in ("modulus", "principal"):
        raise ValueError("root_branch must be 'modulus' or 'principal'")
    jm = jacobi_matrix(p, table.tau, table=table)
    S = symmetric_matrix(curve, p)
    chis = [chi(curve, p, n) for n in p.i_set]
    if root_branch == "modulus":
        d1 = np.array([abs(c) ** 0.25 for c in chis], dtype=complex)
    else:
        d1 = np.array([principal_root(c, 4) for c in chis])
    return jm, S, d1


def a_inverse_general(curve: HyperellipticCurve, p: Partition, tau,
                      tol: float = DEFAULT_IDENTITY_TOL, periods: PeriodData | None = None,
                      table: ThetaTable | None = None, root_branch: str = "modulus"):
    """Assemble ``A^{-1}`` from gradients of odd theta constants and branch points.

    Parameters
    ----------
    root_branch : {"modulus", "principal"}
        Fourth root of ``chi_n``. With ``"modulus"`` the positive root of
        ``|chi_n|`` is used, which leaves one global root of unity; principal
        roots of negative ``chi_n`` introduce column-dependent phases.

    Returns
    -------
    matrix : ndarray
    report : VerificationReport or None
        Comparison with ``periods.a_inverse`` when ``periods`` is given.
    """
    if tau is None and periods is not None:
        tau = periods.tau
    table = _table(tau, DEFAULT_SERIES_TOL, table)
    jm, S, d1 = _general_pieces(curve, p, table, root_branch)
    theta0 = theta_product_i0(p, table)
    if theta0 == 0:
        raise ArithmeticError("Theta_{I_0} vanishes")
    g = curve.genus
    matrix = adjugate(jm.T) @ np.diag(d1) @ S.T / (2 * np.pi**g * theta0)
    report = None
    if periods is not None:
        report = compare_up_to_root(matrix, periods.a_inverse, "a_inverse_general",
                                    list(p.i_set), tol)
    return matrix, report


def a_direct_general(curve: HyperellipticCurve, p: Partition, tau,
                     tol: float = DEFAULT_IDENTITY_TOL, periods: PeriodData | None = None,
                     table: ThetaTable | None = None, root_branch: str = "modulus"):
    """``A = 2 / theta[eps(J_0)] (S^T)^{-1} diag(chi_n^(1/4))^{-1} J^T``."""
    if tau is None and periods is not None:
        tau = periods.tau
    table = _table(tau, DEFAULT_SERIES_TOL, table)
    jm, S, d1 = _general_pieces(curve, p, table, root_branch)
    theta_j0 = table.const(p.j_set)
    if theta_j0 == 0:
        raise ArithmeticError("theta[eps(J_0)] vanishes")
    matrix = 2 / theta_j0 * np.linalg.solve(S.T, np.diag(1 / d1) @ jm.T)
    report = None
    if periods is not None:
        report = compare_up_to_root(matrix, periods.a_matrix, "a_direct_general",
                                    list(p.i_set), tol)
    return matrix, report


def _require_genus(table: ThetaTable, g: int):
    if table.genus != g:
        raise ValueError(f"needs genus {g}, got {table.genus}")


def rosenhain_D(d1: Characteristic, d2: Characteristic, tau, tol: float = DEFAULT_SERIES_TOL,
                table: ThetaTable | None = None) -> complex:
    """``theta_1[d1] theta_2[d2] - theta_2[d1] theta_1[d2]`` for odd genus-2 characteristics."""
    table = _table(tau, tol, table)
    _require_genus(table, 2)
    a, b = table.grad(d1), table.grad(d2)
    return complex(a[0] * b[1] - a[1] * b[0])


def _c(text: str) -> Characteristic:
    return Characteristic.parse(text)


# (delta_1, delta_2, four even characteristics on the right, margin characteristic)
APPENDIX_A: tuple = tuple(
    (_c(r[0]), _c(r[1]), tuple(_c(x) for x in r[2:6]), _c(r[6]))
    for r in (
        ("01;01", "11;01", "00;10", "00;11", "11;11", "01;10", "10;00"),
        ("11;10", "10;10", "11;11", "00;01", "00;11", "10;01", "01;00"),
        ("10;11", "01;11", "01;10", "10;01", "00;10", "00;01", "11;00"),
        ("01;11", "01;01", "10;00", "10;01", "11;00", "11;11", "00;10"),
        ("01;11", "11;01", "00;00", "00;01", "11;11", "01;00", "10;10"),
        ("10;11", "11;01", "11;00", "00;11", "00;01", "10;00", "01;10"),
        ("10;11", "01;01", "01;00", "10;01", "00;00", "00;11", "11;10"),
        ("10;10", "10;11", "01;00", "01;10", "11;11", "11;00", "00;01"),
        ("11;10", "01;11", "00;11", "00;10", "11;00", "01;00", "10;01"),
        ("11;10", "10;11", "11;11", "00;00", "00;10", "10;00", "01;01"),
        ("10;10", "01;11", "01;10", "10;00", "00;11", "00;00", "11;01"),
        ("11;10", "11;01", "10;01", "10;00", "01;10", "01;00", "00;11"),
        ("11;10", "01;01", "00;01", "00;00", "11;00", "01;10", "10;11"),
        ("10;10", "11;01", "11;00", "00;10", "00;00", "10;01", "01;11"),
        ("10;10", "01;01", "01;00", "10;00", "00;01", "00;10", "11;11"),
    )
)


def appendix_a_margin_ok(row) -> bool:
    """Whether the margin characteristic is the mod-2 sum of the right side."""
    _, _, right, margin = row
    total = Characteristic.zero(2)
    for c in right:
        total = total + c
    return total == margin


def appendix_a_suite(tau, tol: float = DEFAULT_IDENTITY_TOL,
                     table: ThetaTable | None = None) -> list[VerificationReport]:
    """The 15 pinned-sign identities ``D[d1; d2] = pi^2 prod theta[right side]``.

    No root-of-unity freedom is allowed: the fitted root is always 1.
    """
    table = _table(tau, DEFAULT_SERIES_TOL, table)
    _require_genus(table, 2)
    out = []
    for row_no, (d1, d2, right, margin) in enumerate(APPENDIX_A, 1):
        lhs = rosenhain_D(d1, d2, None, table=table)
        rhs = np.pi**2 * table.product(right)
        out.append(make_report("appendix_a", {"row": row_no, "delta1": str(d1),
                                              "delta2": str(d2)},
                               lhs / rhs, tol, 1, margin_ok=appendix_a_margin_ok(
                                   (d1, d2, right, margin))))
    return out


def genus2_theta_product(a: int, b: int, c: int, table: ThetaTable) -> complex:
    """``prod theta[eps({c, x, y})]`` over pairs ``{x, y}`` from ``{1..6}`` minus ``{a, b, c}``.

    With ``c = 6`` this is the product over the three even characteristics
    ``eps_{xy}`` built from the complement of ``{a, b}``.
    """
    _require_genus(table, 2)
    rest = [x for x in range(1, 7) if x not in (a, b, c)]
    return table.product([sorted({c, x, y}) for x, y in combinations(rest, 2)])


def triple_relation_check(i: int, j: int, k: int, tau, tol: float = DEFAULT_IDENTITY_TOL,
                          table: ThetaTable | None = None) -> VerificationReport:
    """Three-term relation ``g_i Theta_jk +- g_j Theta_ik = g_k Theta_ij`` for ``n = 1, 2``.

    ``g_x`` is the gradient of ``theta[eps_x]`` (``eps_6 = K_inf``) and
    ``Theta_xy`` the product of the three even constants whose third index
    is the remaining member of the triple. Both signs and both orderings of
    the first two indices are tried; the best form is reported in
    ``details`` as ``sign`` and ``swapped``.
    """
    table = _table(tau, DEFAULT_SERIES_TOL, table)
    _require_genus(table, 2)
    if len({i, j, k}) != 3 or not {i, j, k} <= set(range(1, 7)):
        raise ValueError("need three distinct indices from 1..6")
    grads = {x: table.grad([x]) for x in (i, j, k)}
    big = {(i, j): genus2_theta_product(i, j, k, table),
           (i, k): genus2_theta_product(i, k, j, table),
           (j, k): genus2_theta_product(j, k, i, table)}
    rhs = grads[k] * big[(i, j)]
    scale = float(np.max(np.abs(rhs)))
    best = None
    for swapped in (False, True):
        first, second = (j, i) if swapped else (i, j)
        for sign in (1, -1):
            lhs = grads[first] * big[tuple(sorted((second, k)))] + \
                sign * grads[second] * big[tuple(sorted((first, k)))]
            defect = float(np.max(np.abs(lhs - rhs)) / scale)
            if best is None or defect < best[0]:
                best = (defect, sign, swapped, lhs)
    defect, sign, swapped, lhs = best
    n = int(np.argmax(np.abs(rhs)))
    return make_report("triple_relation", [i, j, k], lhs[n] / rhs[n], tol, 1, defect,
                       sign=sign, swapped=swapped)


def _check_pair(i: int, j: int):
    if not (1 <= i < j <= 5):
        raise CurveError("need 1 <= i < j <= 5")


def a_inverse_genus2(i: int, j: int, tau, tol: float = DEFAULT_SERIES_TOL,
                     table: ThetaTable | None = None) -> np.ndarray:
    """Theta-only ``A^{-1}`` for a genus-2 curve normalized to ``e_i = 0, e_j = 1``."""
    _check_pair(i, j)
    table = _table(tau, tol, table)
    _require_genus(table, 2)
    t_ij = genus2_theta_product(i, j, 6, table)
    t_j6 = genus2_theta_product(j, 6, i, table)
    gi, gk = table.grad([i]), table.grad([])
    m = np.array([[-t_j6 * gi[1], t_ij * gk[1]],
                  [t_j6 * gi[0], -t_ij * gk[0]]])
    return m / (2 * np.pi**2 * t_ij**2)


def a_genus2(i: int, j: int, tau, tol: float = DEFAULT_SERIES_TOL,
             table: ThetaTable | None = None) -> np.ndarray:
    """Theta-only ``A`` for a genus-2 curve normalized to ``e_i = 0, e_j = 1``."""
    _check_pair(i, j)
    table = _table(tau, tol, table)
    _require_genus(table, 2)
    t_ij = genus2_theta_product(i, j, 6, table)
    t_j6 = genus2_theta_product(j, 6, i, table)
    t_i6 = genus2_theta_product(i, 6, j, table)
    gi, gk = table.grad([i]), table.grad([])
    pref = 2 * t_ij / (t_i6 * t_j6 * table.const([i, j]))
    return pref * np.array([[t_ij * gk[0], t_ij * gk[1]],
                            [t_j6 * gi[0], t_j6 * gi[1]]])


def genus2_round_trip(curve: HyperellipticCurve, i: int, j: int,
                      tol: float = DEFAULT_IDENTITY_TOL, quad_tol: float = 1e-12,
                      series_tol: float = DEFAULT_SERIES_TOL):
    """Normalize, integrate, and compare theta-only ``A^{-1}`` and ``A`` with quadrature.

    Returns
    -------
    normalized : HyperellipticCurve
    periods : PeriodData
    reports : tuple of VerificationReport
        For ``A^{-1}`` and ``A``.
    """
    norm = curve.normalized(i, j)
    periods = compute_periods(norm, quad_tol)
    table = ThetaTable(periods.tau, series_tol)
    r1 = compare_up_to_root(a_inverse_genus2(i, j, None, table=table), periods.a_inverse,
                            "a_inverse_genus2", [i, j], tol)
    r2 = compare_up_to_root(a_genus2(i, j, None, table=table), periods.a_matrix,
                            "a_genus2", [i, j], tol)
    return norm, periods, (r1, r2)


def classical_rosenhain_check(curve: HyperellipticCurve, tau, tol: float = DEFAULT_IDENTITY_TOL,
                              table: ThetaTable | None = None) -> dict:
    """Branch-point identities attached to the partition ``{1,2} | {3,4,5}``.

    The curve must be normalized to ``e_1 = 0, e_2 = 1``; ``a_1, a_2, a_3``
    are its remaining finite branch points. With ``P = Theta_{2,6}``,
    ``Q = Theta_{1,2}`` and ``R = Theta_{1,6}``:

    * ``product``: ``a_1 a_2 a_3 = P^4 / Q^4``
    * ``printed_extra``: ``(1 - a_1)(1 - a_2)(1 - a_3) = R^4 / Q^4``
    * ``extra``: ``(a_1 - 1)(a_2 - 1)(a_3 - 1) = R^4 / Q^4``

    Each entry holds ``(lhs, rhs, relative_error, passed)``.
    """
    if curve.genus != 2 or curve.e(1) != 0 or curve.e(2) != 1:
        raise CurveError("needs a genus-2 curve with e_1 = 0 and e_2 = 1")
    table = _table(tau, DEFAULT_SERIES_TOL, table)
    a = np.array(curve.branch_points[2:])
    P = genus2_theta_product(2, 6, 1, table)
    Q = genus2_theta_product(1, 2, 6, table)
    R = genus2_theta_product(1, 6, 2, table)
    out = {}
    for name, lhs, rhs in (("product", np.prod(a), (P / Q) ** 4),
                           ("printed_extra", np.prod(1 - a), (R / Q) ** 4),
                           ("extra", np.prod(a - 1), (R / Q) ** 4)):
        err = float(abs(lhs - rhs) / abs(lhs))
        out[name] = (float(lhs), complex(rhs), err, err < tol)
    return out


def a_inverse_genus3(tau, e3: float, tol: float = DEFAULT_SERIES_TOL,
                     table: ThetaTable | None = None, printed_u2: bool = False) -> np.ndarray:
    """Columns ``U_1, U_2, U_3`` of ``A^{-1}`` for genus 3 with ``e_1 = 0, e_2 = 1``.

    Only ``e_3`` enters besides theta constants. The first entry of the
    ``U_2`` vector carries ``s_1(e_2, e_3) = -(e_3 + 1)``; ``printed_u2``
    substitutes ``-(e_3 - 1)`` instead, which does not reproduce ``A^{-1}``
    and is kept only to document that discrepancy.
    """
    table = _table(tau, tol, table)
    _require_genus(table, 3)
    if not e3 > 1:
        raise CurveError("e_3 must exceed e_2 = 1")
    p = Partition.from_i_set(3, (1, 2, 3))
    jm = jacobi_matrix(p, None, table=table)
    adj = adjugate(jm.T)
    theta0 = theta_product_i0(p, table)
    th1 = {n: principal_root(table.product([sorted(p.i1(n) + (j,)) for j in p.j_set]), 2)
           for n in p.i_set}
    q3, q31 = principal_root(e3, 4), principal_root(e3 - 1, 4)
    first = (e3 - 1) if printed_u2 else (e3 + 1)
    v1 = np.array([th1[1] * principal_root(e3, 4 / 5), 0, 0])
    v2 = -np.array([th1[1] * q3 * first, th1[2] * e3 * q31, th1[3] * q3 * q31])
    v3 = np.array([th1[1] * q3, th1[2] * q31, th1[3] * q3 * q31])
    pref = 1 / (2 * np.pi**3 * principal_root(theta0, 2 / 3))
    return pref * np.column_stack([adj @ v1, adj @ v2, adj @ v3])


def genus3_round_trip(curve: HyperellipticCurve, tol: float = 1e-7, quad_tol: float = 1e-12,
                      series_tol: float = DEFAULT_SERIES_TOL, printed_u2: bool = False,
                      e3: float | None = None):
    """Normalize ``e_1, e_2`` to ``0, 1`` and compare ``a_inverse_genus3`` columnwise.

    ``e3`` overrides the normalized third branch point fed to the theta
    formula (the quadrature side always uses the curve itself).
    Returns the normalized curve, its periods and one report per column.
    """
    norm = curve.normalized(1, 2)
    periods = compute_periods(norm, quad_tol)
    table = ThetaTable(periods.tau, series_tol)
    e3 = norm.e(3) if e3 is None else e3
    m = a_inverse_genus3(None, e3, table=table, printed_u2=printed_u2)
    ref = periods.a_inverse
    reports = [compare_up_to_root(m[:, c], ref[:, c], "a_inverse_genus3", {"column": c + 1}, tol)
               for c in range(3)]
    return norm, periods, reports


def bolza_ratios(index_set: Sequence[int], tau, a_inv: np.ndarray,
                 tol: float = DEFAULT_SERIES_TOL, table: ThetaTable | None = None) -> np.ndarray:
    """Matrix of directional-derivative ratios ``d_{U_m} theta / d_{U_n} theta``.

    ``theta = theta[eps(I_1)]`` for the ``(g-1)``-set ``index_set`` and
    ``U_m`` is column ``m`` of ``a_inv``. Entry ``(m, n)`` equals
    ``s_{g-m}(I_1) / s_{g-n}(I_1)``; it is ``nan`` where the denominator
    derivative vanishes.
    """
    table = _table(tau, tol, table)
    d = table.grad(sorted(index_set)) @ np.asarray(a_inv)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = d[:, None] / d[None, :]
    r[:, np.abs(d) < 1e-14 * np.max(np.abs(d))] = np.nan
    return r


def bolza_recover(genus: int, p: Partition, j: int, tau, a_inv: np.ndarray,
                  tol: float = DEFAULT_SERIES_TOL, table: ThetaTable | None = None) -> np.ndarray:
    """:func:`bolza_ratios` for ``I_1^(j)`` of a speciality-zero partition."""
    if p.genus != genus:
        raise CurveError("partition genus mismatch")
    return bolza_ratios(p.i1(j), tau, a_inv, tol, table)


def recover_genus2_branch_points(tau, a_inv: np.ndarray | None = None,
                                 tol: float = DEFAULT_SERIES_TOL,
                                 table: ThetaTable | None = None) -> np.ndarray:
    """``e_i = -d_{U_1} theta[eps_i] / d_{U_2} theta[eps_i]`` for ``i = 1..5``.

    Without ``a_inv`` the theta-only ``A^{-1}`` of the curve normalized to
    ``e_1 = 0, e_2 = 1`` is used, making the recovery depend on ``tau`` alone.
    """
    table = _table(tau, tol, table)
    _require_genus(table, 2)
    if a_inv is None:
        a_inv = a_inverse_genus2(1, 2, None, table=table)
    out = []
    for i in range(1, 6):
        r = bolza_ratios([i], None, a_inv, table=table)
        out.append(-r[0, 1])
    return np.array(out)


def recover_genus3_pair(k: int, l: int, tau, a_inv: np.ndarray,
                        tol: float = DEFAULT_SERIES_TOL,
                        table: ThetaTable | None = None) -> tuple[complex, complex]:
    """``(e_k e_l, -e_k - e_l)`` from the ratios for ``I_1 = {k, l}``."""
    table = _table(tau, tol, table)
    _require_genus(table, 3)
    r = bolza_ratios([k, l], None, a_inv, table=table)
    return complex(r[0, 2]), complex(r[1, 2])
