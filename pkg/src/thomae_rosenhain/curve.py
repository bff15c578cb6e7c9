"""Odd-model hyperelliptic curves and their branch-point combinatorics.

A curve ``y**2 = (x - e_1) ... (x - e_{2g+1})`` is stored through its real,
strictly increasing finite branch points. The point at infinity carries the
implicit index ``2g + 2``. All index sets use 1-based labels and are kept
sorted so that every product below is evaluated in a fixed order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CurveError",
    "HyperellipticCurve",
    "Partition",
    "split_phi_psi",
    "vandermonde",
    "nabla",
    "chi",
    "chi_from_polynomials",
    "symmetric_functions_alt",
    "even_partitions",
    "load_curve",
]

# relative separation below which two branch points count as coincident
DEGENERACY_RTOL = 1e-10


class CurveError(ValueError):
    """Raised for invalid curves, partitions or index sets."""


@dataclass(frozen=True)
class HyperellipticCurve:
    """Curve ``y^2 = prod_k (x - e_k)`` with real ordered branch points.

    Parameters
    ----------
    genus : int
        Genus ``g >= 1``.
    branch_points : sequence of float
        The ``2g + 1`` finite branch points, strictly increasing.
    """

    genus: int
    branch_points: tuple[float, ...]

    def __init__(self, genus: int, branch_points: Iterable[float]):
        pts = tuple(float(e) for e in branch_points)
        if int(genus) != genus or genus < 1:
            raise CurveError(f"genus must be a positive integer, got {genus!r}")
        genus = int(genus)
        if len(pts) != 2 * genus + 1:
            raise CurveError(
                f"genus {genus} needs {2 * genus + 1} finite branch points, got {len(pts)}"
            )
        if not all(np.isfinite(pts)):
            raise CurveError("branch points must be finite reals")
        gaps = np.diff(pts)
        if np.any(gaps <= 0):
            raise CurveError("branch points must be strictly increasing")
        span = pts[-1] - pts[0]
        if np.min(gaps) < DEGENERACY_RTOL * max(span, 1.0):
            raise CurveError("branch points nearly coincide; the curve is degenerate")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "branch_points", pts)

    @property
    def n_finite(self) -> int:
        return 2 * self.genus + 1

    @property
    def indices(self) -> tuple[int, ...]:
        """Labels ``1 .. 2g+1`` of the finite branch points."""
        return tuple(range(1, self.n_finite + 1))

    def e(self, k: int) -> float:
        """Branch point with 1-based label ``k`` (finite points only)."""
        if not 1 <= k <= self.n_finite:
            raise CurveError(f"branch index {k} outside 1..{self.n_finite}")
        return self.branch_points[k - 1]

    def f(self, x):
        """Evaluate ``f(x) = prod (x - e_k)``."""
        return np.prod([np.asarray(x) - e for e in self.branch_points], axis=0)

    def f_prime(self, k: int) -> float:
        """``f'(e_k)`` as the product of differences to the other points."""
        ek = self.e(k)
        return float(np.prod([ek - e for j, e in enumerate(self.branch_points, 1) if j != k]))

    def partition(self, i_set: Iterable[int]) -> "Partition":
        """Speciality-zero partition with ``I_0 = i_set``."""
        return Partition.from_i_set(self.genus, i_set)

    def normalized(self, i: int, j: int) -> "HyperellipticCurve":
        """Image under ``x -> (x - e_i) / (e_j - e_i)``, sending ``e_i, e_j`` to 0, 1.

        The map is increasing for ``i < j`` so branch labels are preserved.
        """
        if not i < j:
            raise CurveError("normalization needs i < j to keep the branch order")
        ei, ej = self.e(i), self.e(j)
        pts = [(e - ei) / (ej - ei) for e in self.branch_points]
        pts[i - 1], pts[j - 1] = 0.0, 1.0
        return HyperellipticCurve(self.genus, pts)

    @classmethod
    def from_even_model(cls, coefficients: Sequence[float], root: float,
                        rtol: float = 1e-9) -> "HyperellipticCurve":
        """Build the odd model of ``y^2 = P(x)`` with ``deg P = 2g + 2``.

        The known root ``root`` of ``P`` is sent to infinity by
        ``x -> 1 / (x - root)``; the remaining roots become the finite branch
        points. Only the branch locus is kept.

        Parameters
        ----------
        coefficients : sequence of float
            Coefficients of ``P``, highest degree first.
        root : float
            A real root of ``P``.
        """
        coeffs = np.trim_zeros(np.asarray(coefficients, dtype=float), "f")
        deg = len(coeffs) - 1
        if deg < 4 or deg % 2:
            raise CurveError("even model needs a polynomial of even degree >= 4")
        scale = np.max(np.abs(coeffs))
        if abs(np.polyval(coeffs, root)) > rtol * scale * max(1.0, abs(root)) ** deg:
            raise CurveError(f"{root!r} is not a root of the polynomial")
        quotient, _ = np.polydiv(coeffs, [1.0, -root])
        roots = np.roots(quotient)
        if np.max(np.abs(roots.imag), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(roots))):
            raise CurveError("complex branch points are not supported")
        others = roots.real
        if np.min(np.abs(others - root)) < DEGENERACY_RTOL * max(1.0, abs(root)):
            raise CurveError("the chosen root is repeated")
        return cls(deg // 2 - 1, np.sort(1.0 / (others - root)))

    @classmethod
    def from_json(cls, data: dict | str) -> "HyperellipticCurve":
        """Parse ``{"genus": g, "branch_points": [...]}``."""
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "genus" not in data or "branch_points" not in data:
            raise CurveError('curve JSON needs keys "genus" and "branch_points"')
        return cls(data["genus"], data["branch_points"])

    def to_json(self) -> dict:
        return {"genus": self.genus, "branch_points": list(self.branch_points)}


def load_curve(path: str | Path) -> HyperellipticCurve:
    """Read a curve JSON file."""
    return HyperellipticCurve.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Partition:
    """Partition ``I_m | J_m`` of the finite branch labels ``1 .. 2g+1``.

    Attributes
    ----------
    genus : int
    speciality : int
        ``m`` in ``{0, 1}``; ``|I_m| = g - m`` and ``|J_m| = g + 1 + m`` over the
        finite labels (infinity is never listed).
    i_set, j_set : tuple of int
        Sorted disjoint index sets covering ``1 .. 2g+1``.
    """

    genus: int
    speciality: int
    i_set: tuple[int, ...]
    j_set: tuple[int, ...]

    def __post_init__(self):
        g, m = self.genus, self.speciality
        if m not in (0, 1):
            raise CurveError(f"speciality must be 0 or 1, got {m}")
        full = set(range(1, 2 * g + 2))
        i_set, j_set = set(self.i_set), set(self.j_set)
        if i_set & j_set or (i_set | j_set) != full:
            raise CurveError("index sets must split 1..2g+1 disjointly")
        if len(self.i_set) != g - m or len(i_set) != len(self.i_set):
            raise CurveError(f"|I_{m}| must equal {g - m}")
        object.__setattr__(self, "i_set", tuple(sorted(i_set)))
        object.__setattr__(self, "j_set", tuple(sorted(j_set)))

    @classmethod
    def from_i_set(cls, genus: int, i_set: Iterable[int], speciality: int = 0) -> "Partition":
        i_set = tuple(sorted(i_set))
        bad = [k for k in i_set if not 1 <= k <= 2 * genus + 1]
        if bad:
            raise CurveError(f"indices {bad} outside 1..{2 * genus + 1}")
        j_set = tuple(k for k in range(1, 2 * genus + 2) if k not in i_set)
        return cls(genus, speciality, i_set, j_set)

    def _require_zero(self):
        if self.speciality != 0:
            raise CurveError("operation needs a speciality-zero partition")

    def i1(self, n: int) -> tuple[int, ...]:
        """``I_1^(n) = I_0 minus {n}``."""
        self._require_zero()
        if n not in self.i_set:
            raise CurveError(f"{n} is not in I_0 = {self.i_set}")
        return tuple(i for i in self.i_set if i != n)

    def j1(self, n: int) -> tuple[int, ...]:
        """``J_1^(n) = J_0 plus {n}``."""
        self._require_zero()
        if n not in self.i_set:
            raise CurveError(f"{n} is not in I_0 = {self.i_set}")
        return tuple(sorted(self.j_set + (n,)))

    def special(self, n: int) -> "Partition":
        """The speciality-one partition ``I_1^(n) | J_1^(n)``."""
        return Partition(self.genus, 1, self.i1(n), self.j1(n))

    def t_sets(self) -> list[tuple[int, ...]]:
        """``[T_0, T_1, ..., T_{g+1}]`` with ``T_0 = J_0`` and ``T_n = J_0 minus {j_n}``."""
        self._require_zero()
        return [self.j_set] + [tuple(j for j in self.j_set if j != jn) for jn in self.j_set]


def even_partitions(genus: int) -> list[Partition]:
    """All speciality-zero partitions in lexicographic order of ``I_0``."""
    return [Partition.from_i_set(genus, c) for c in combinations(range(1, 2 * genus + 2), genus)]


def split_phi_psi(curve: HyperellipticCurve, p: Partition) -> tuple[np.poly1d, np.poly1d]:
    """Factor ``f = phi * psi`` along a speciality-zero partition.

    Returns
    -------
    phi, psi : numpy.poly1d
        Monic polynomials with roots ``e_i, i in I_0`` and ``e_j, j in J_0``.
    """
    if p.speciality != 0:
        raise CurveError("phi/psi splitting needs a speciality-zero partition")
    _check_genus(curve, p)
    phi = np.poly1d([curve.e(i) for i in p.i_set], r=True)
    psi = np.poly1d([curve.e(j) for j in p.j_set], r=True)
    return phi, psi


def _check_genus(curve: HyperellipticCurve, p: Partition):
    if curve.genus != p.genus:
        raise CurveError("partition and curve have different genus")


def vandermonde(curve: HyperellipticCurve, index_set: Iterable[int]) -> float:
    """``Delta(S) = prod_{k < l in S} (e_l - e_k)``; empty and singleton sets give 1."""
    idx = sorted(index_set)
    vals = [curve.e(k) for k in idx]
    return float(np.prod([b - a for a, b in combinations(vals, 2)]))


def nabla(curve: HyperellipticCurve, p: Partition) -> float:
    """``Delta(I) * Delta(J)`` for a partition of either speciality."""
    _check_genus(curve, p)
    return vandermonde(curve, p.i_set) * vandermonde(curve, p.j_set)


def chi(curve: HyperellipticCurve, p: Partition, n: int) -> float:
    """``chi_n = prod_{j in J_1, j != n}(e_n - e_j) / prod_{i in I_1}(e_n - e_i)``.

    ``I_1, J_1`` are the speciality-one sets obtained by moving ``n`` from
    ``I_0`` to ``J_0``; the numerator therefore runs over ``J_0``. With the
    ascending orientation of :func:`vandermonde`,
    ``nabla(I_0) * chi_n = (-1)**(n + 1) * nabla(I_1^(n))``.
    """
    _check_genus(curve, p)
    i1 = p.i1(n)
    en = curve.e(n)
    num = np.prod([en - curve.e(j) for j in p.j_set])
    den = np.prod([en - curve.e(i) for i in i1])
    return float(num / den)


def _exact_coeffs(roots) -> list[Fraction]:
    coeffs = [Fraction(1)]
    for r in roots:
        r = Fraction(r)
        coeffs = [a - r * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    return coeffs


def _exact_eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def chi_from_polynomials(curve: HyperellipticCurve, p: Partition, n: int) -> float:
    """Second evaluation path ``chi_n = psi(e_n) / phi'(e_n)``.

    The expanded polynomials are badly conditioned at their roots, so they
    are built and evaluated in exact rational arithmetic from the stored
    branch points.
    """
    _check_genus(curve, p)
    if p.speciality != 0:
        raise CurveError("needs a speciality-zero partition")
    p.i1(n)
    x = Fraction(curve.e(n))
    phi = _exact_coeffs(curve.e(i) for i in p.i_set)
    psi = _exact_coeffs(curve.e(j) for j in p.j_set)
    deg = len(phi) - 1
    dphi = [c * (deg - k) for k, c in enumerate(phi[:-1])]
    return float(_exact_eval(psi, x) / _exact_eval(dphi, x))


def symmetric_functions_alt(values: Sequence[float]) -> np.ndarray:
    """Sign-alternated elementary symmetric functions ``s_0 .. s_len``.

    These are the coefficients of ``prod_k (x - x_k)`` from the highest
    degree down: ``s_0 = 1``, ``s_1 = -sum x_k``, ``s_2 = sum_{p<q} x_p x_q``.

    Examples
    --------
    >>> symmetric_functions_alt([0.0, 1.0]).tolist()
    [1.0, -1.0, 0.0]
    """
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return np.ones(1)
    return np.poly(vals)
