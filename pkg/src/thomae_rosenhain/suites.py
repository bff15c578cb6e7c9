"""Batch verification suites over all applicable index choices of a curve."""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from . import rosenhain as rh
from . import thomae as th
from ._parallel import parallel_map
from .curve import HyperellipticCurve, even_partitions
from .periods import PeriodData, compute_periods
from .riemann_theta import DEFAULT_SERIES_TOL, ThetaTable
from .thomae import DEFAULT_IDENTITY_TOL, VerificationReport, make_report

__all__ = ["SUITES", "SuiteError", "Context", "run_suite", "summary_line"]

SUITES = ("thomae1", "thomae2", "corollaries", "riemann-jacobi", "rosenhain2", "rosenhain3",
          "appendix-a", "bolza")


class SuiteError(ValueError):
    """A suite cannot run with the given inputs (usage error)."""


class Context:
    """Curve, periods and theta cache shared by the suites."""

    def __init__(self, curve: HyperellipticCurve | None = None, tau=None,
                 tol: float = DEFAULT_IDENTITY_TOL, series_tol: float = DEFAULT_SERIES_TOL,
                 quad_tol: float = 1e-12, e3: float | None = None):
        self.curve = curve
        self.tol = tol
        self.series_tol = series_tol
        self.quad_tol = quad_tol
        self.e3 = e3
        self.periods: PeriodData | None = None
        if tau is None:
            if curve is None:
                raise SuiteError("need a curve or a Riemann matrix")
            self.periods = compute_periods(curve, quad_tol)
            tau = self.periods.tau
        self.table = ThetaTable(tau, series_tol)

    @property
    def genus(self) -> int:
        return self.table.genus

    def need_curve(self, suite: str):
        if self.curve is None or self.periods is None:
            raise SuiteError(f"suite {suite!r} needs a curve file")


def _thomae1(ctx: Context):
    ctx.need_curve("thomae1")
    c, pd, t = ctx.curve, ctx.periods, ctx.table
    return parallel_map(lambda p: th.first_thomae_check(c, p, pd, ctx.tol, t),
                        even_partitions(c.genus))


def _thomae2(ctx: Context):
    ctx.need_curve("thomae2")
    c, pd, t = ctx.curve, ctx.periods, ctx.table
    parts = even_partitions(c.genus)
    out = parallel_map(lambda pn: th.second_thomae_check(c, pn[0], pn[1], pd, ctx.tol, t),
                       [(p, n) for p in parts for n in p.i_set])
    out += parallel_map(lambda p: th.second_thomae_matrix_check(c, p, pd, ctx.tol, t), parts)
    return out


def _corollaries(ctx: Context):
    ctx.need_curve("corollaries")
    c, pd, t = ctx.curve, ctx.periods, ctx.table
    g, idx = c.genus, c.indices
    jobs = []
    for S in combinations(idx, g - 1):
        for T in combinations([x for x in idx if x not in S], g - 1):
            rest = [x for x in idx if x not in S and x not in T]
            for k, l in permutations(rest, 2):
                jobs.append(lambda S=S, T=T, k=k, l=l:
                            th.corollary1_check(c, S, T, k, l, pd, ctx.tol, t))
    for p in even_partitions(g):
        for k, n in permutations(p.i_set, 2):
            for i, j in combinations(p.j_set, 2):
                jobs.append(lambda p=p, k=k, n=n, i=i, j=j:
                            th.corollary2_check(c, p, k, n, i, j, pd, ctx.tol, t))
        if g >= 2:
            for n in p.i_set:
                jobs.append(lambda p=p, n=n: th.chi_fourth_root_theta(c, p, n, pd, ctx.tol, t))
    return parallel_map(lambda f: f(), jobs)


def _riemann_jacobi(ctx: Context):
    ctx.need_curve("riemann-jacobi")
    c, pd, t = ctx.curve, ctx.periods, ctx.table
    return parallel_map(lambda p: rh.riemann_jacobi_check(c, p, pd, ctx.tol, t),
                        even_partitions(c.genus))


def _general(ctx: Context):
    c, pd, t = ctx.curve, ctx.periods, ctx.table

    def both(p):
        return [rh.a_inverse_general(c, p, pd.tau, ctx.tol, pd, t)[1],
                rh.a_direct_general(c, p, pd.tau, ctx.tol, pd, t)[1]]

    return [r for pair in parallel_map(both, even_partitions(c.genus)) for r in pair]


def _rosenhain2(ctx: Context):
    ctx.need_curve("rosenhain2")
    if ctx.genus != 2:
        raise SuiteError("suite 'rosenhain2' needs a genus-2 curve")
    out = _general(ctx)

    def trip(ij):
        _, _, reps = rh.genus2_round_trip(ctx.curve, *ij, tol=ctx.tol, quad_tol=ctx.quad_tol,
                                          series_tol=ctx.series_tol)
        return list(reps)

    for reps in parallel_map(trip, list(combinations(range(1, 6), 2))):
        out += reps
    norm = ctx.curve.normalized(1, 2)
    npd = compute_periods(norm, ctx.quad_tol)
    classical = rh.classical_rosenhain_check(norm, npd.tau, ctx.tol,
                                             ThetaTable(npd.tau, ctx.series_tol))
    for name in ("product", "extra"):
        lhs, rhs, err, _ = classical[name]
        out.append(make_report(f"classical_{name}", [1, 2], rhs / lhs, ctx.tol, 1))
    out += parallel_map(lambda ijk: rh.triple_relation_check(*ijk, None, ctx.tol, ctx.table),
                        list(combinations(range(1, 7), 3)))
    return out


def _rosenhain3(ctx: Context):
    ctx.need_curve("rosenhain3")
    if ctx.genus != 3:
        raise SuiteError("suite 'rosenhain3' needs a genus-3 curve")
    if ctx.e3 is None:
        raise SuiteError("suite 'rosenhain3' needs --e3 (normalized third branch point)")
    out = _general(ctx)
    _, _, reps = rh.genus3_round_trip(ctx.curve, tol=ctx.tol, quad_tol=ctx.quad_tol,
                                      series_tol=ctx.series_tol, e3=ctx.e3)
    return out + reps


def _appendix_a(ctx: Context):
    if ctx.genus != 2:
        raise SuiteError("suite 'appendix-a' needs genus 2")
    return rh.appendix_a_suite(None, ctx.tol, ctx.table)


def _closeness(identity, indices, recovered, expected, tol):
    err = abs(recovered - expected) / (1 + abs(expected))
    return make_report(identity, indices, 1 + err, tol, 1, recovered=recovered,
                       expected=expected)


def _bolza(ctx: Context):
    ctx.need_curve("bolza")
    c, pd, t = ctx.curve, ctx.periods, ctx.table
    out = []
    if c.genus == 2:
        rec = rh.recover_genus2_branch_points(None, pd.a_inverse, table=t)
        out += [_closeness("bolza_genus2", [i], complex(rec[i - 1]), c.e(i), ctx.tol)
                for i in range(1, 6)]
        norm = c.normalized(1, 2)
        npd = compute_periods(norm, ctx.quad_tol)
        rec = rh.recover_genus2_branch_points(npd.tau, None, ctx.series_tol)
        out += [_closeness("bolza_genus2_theta_only", [i], complex(rec[i - 1]), norm.e(i),
                           ctx.tol) for i in range(1, 6)]
    elif c.genus == 3:
        for k, l in combinations(c.indices, 2):
            prod, neg_sum = rh.recover_genus3_pair(k, l, None, pd.a_inverse, table=t)
            out.append(_closeness("bolza_genus3_product", [k, l], prod, c.e(k) * c.e(l), ctx.tol))
            out.append(_closeness("bolza_genus3_sum", [k, l], neg_sum, -c.e(k) - c.e(l), ctx.tol))
    else:
        raise SuiteError("suite 'bolza' supports genus 2 and 3")
    return out


_RUNNERS = {
    "thomae1": _thomae1,
    "thomae2": _thomae2,
    "corollaries": _corollaries,
    "riemann-jacobi": _riemann_jacobi,
    "rosenhain2": _rosenhain2,
    "rosenhain3": _rosenhain3,
    "appendix-a": _appendix_a,
    "bolza": _bolza,
}


def applicable(ctx: Context) -> list[str]:
    """Suites that ``all`` runs for this context."""
    if ctx.curve is None:
        return ["appendix-a"] if ctx.genus == 2 else []
    names = ["thomae1", "thomae2", "corollaries", "riemann-jacobi"]
    if ctx.genus == 2:
        names += ["rosenhain2", "appendix-a", "bolza"]
    elif ctx.genus == 3:
        if ctx.e3 is not None:
            names.append("rosenhain3")
        names.append("bolza")
    return names


def run_suite(name: str, ctx: Context) -> dict[str, list[VerificationReport]]:
    """Run one suite (or ``all``) and return reports keyed by suite name."""
    if name == "all":
        return {n: _RUNNERS[n](ctx) for n in applicable(ctx)}
    if name not in _RUNNERS:
        raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return {name: _RUNNERS[name](ctx)}


def summary_line(name: str, reports: list[VerificationReport]) -> str:
    passed = sum(r.passed for r in reports)
    worst = max((r.residual for r in reports), default=0.0)
    return f"{name}: {passed}/{len(reports)} residual_max={worst:.3e}"
