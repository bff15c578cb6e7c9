"""Half-period characteristics and their mod-2 calculus.

A characteristic ``[e'; e]`` is a pair of binary vectors of length ``g``.
The branch-point characteristics follow the homology basis in which the
cuts run from ``e_{2k-1}`` to ``e_{2k}`` and the b-cycles close on the lower
sheet; the general-genus rule below reproduces the genus 2 and genus 3
tables for that basis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Characteristic",
    "branch_characteristic",
    "riemann_constant",
    "partition_characteristic",
    "parity",
    "is_azygetic",
    "is_special_fundamental_system",
    "all_characteristics",
]


@dataclass(frozen=True, order=True)
class Characteristic:
    """Binary characteristic ``[top; bottom]`` with entries reduced mod 2."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __init__(self, top: Iterable[int], bottom: Iterable[int]):
        top = tuple(int(t) % 2 for t in top)
        bottom = tuple(int(b) % 2 for b in bottom)
        if len(top) != len(bottom) or not top:
            raise ValueError("top and bottom rows must have the same positive length")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)

    @property
    def genus(self) -> int:
        return len(self.top)

    @classmethod
    def zero(cls, genus: int) -> "Characteristic":
        return cls((0,) * genus, (0,) * genus)

    @classmethod
    def parse(cls, text: str) -> "Characteristic":
        """Inverse of ``str``: ``"[10;01]"`` or ``"10;01"``."""
        m = re.fullmatch(r"\s*\[?\s*([01]+)\s*;\s*([01]+)\s*\]?\s*", text)
        if not m:
            raise ValueError(f"cannot parse characteristic {text!r}")
        return cls(map(int, m.group(1)), map(int, m.group(2)))

    def __add__(self, other: "Characteristic") -> "Characteristic":
        if not isinstance(other, Characteristic):
            return NotImplemented
        if other.genus != self.genus:
            raise ValueError("genus mismatch")
        return Characteristic(
            (a + b for a, b in zip(self.top, other.top)),
            (a + b for a, b in zip(self.bottom, other.bottom)),
        )

    __sub__ = __add__

    def dot(self) -> int:
        """Integer (unreduced) value of ``e' . e``."""
        return sum(a * b for a, b in zip(self.top, self.bottom))

    @property
    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return self.dot() % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.top, dtype=float), np.array(self.bottom, dtype=float)

    def __str__(self) -> str:
        return "[" + "".join(map(str, self.top)) + ";" + "".join(map(str, self.bottom)) + "]"

    def __repr__(self) -> str:
        return f"Characteristic{self}"


def branch_characteristic(g: int, j: int) -> Characteristic:
    """Characteristic of the Abel image of branch point ``j`` (1-based, ``j = 2g+2`` is infinity)."""
    if g < 1:
        raise ValueError("genus must be positive")
    if not 1 <= j <= 2 * g + 2:
        raise ValueError(f"branch index {j} outside 1..{2 * g + 2}")
    top = [0] * g
    bottom = [0] * g
    if j <= 2 * g:
        k = (j + 1) // 2
        top[k - 1] = 1
        ones = k - 1 if j % 2 else k
        bottom[:ones] = [1] * ones
    elif j == 2 * g + 1:
        bottom = [1] * g
    return Characteristic(top, bottom)


def riemann_constant(g: int) -> Characteristic:
    """Characteristic of the vector of Riemann constants with base point at infinity.

    Equal to the sum of the ``g`` odd branch characteristics.
    """
    total = Characteristic.zero(g)
    for j in range(1, 2 * g + 3):
        c = branch_characteristic(g, j)
        if c.is_odd:
            total = total + c
    return total


def partition_characteristic(g: int, index_set: Iterable[int]) -> Characteristic:
    """``[eps(S)] = sum_{k in S} [A_k] + [K_inf]`` mod 2.

    Indices may include ``2g + 2`` (infinity), whose characteristic is zero.
    The empty set gives ``[K_inf]``.
    """
    total = riemann_constant(g)
    for k in index_set:
        total = total + branch_characteristic(g, k)
    return total


def parity(c: Characteristic) -> str:
    """``"even"`` or ``"odd"``."""
    return "odd" if c.is_odd else "even"


def is_azygetic(c1: Characteristic, c2: Characteristic, c3: Characteristic) -> bool:
    """Whether the sign form of three characteristics equals -1."""
    if not c1.genus == c2.genus == c3.genus:
        raise ValueError("genus mismatch")
    s = c1.dot() + c2.dot() + c3.dot()
    tops = [a + b + c for a, b, c in zip(c1.top, c2.top, c3.top)]
    bots = [a + b + c for a, b, c in zip(c1.bottom, c2.bottom, c3.bottom)]
    s += sum(a * b for a, b in zip(tops, bots))
    return s % 2 == 1


def is_special_fundamental_system(chars: Sequence[Characteristic]) -> bool:
    """``g`` odd characteristics followed by ``g + 2`` even ones, all triples azygetic."""
    if not chars:
        raise ValueError("empty sequence")
    g = chars[0].genus
    if len(chars) != 2 * g + 2:
        raise ValueError(f"a special fundamental system has {2 * g + 2} members")
    if not all(c.is_odd for c in chars[:g]) or not all(c.is_even for c in chars[g:]):
        return False
    return all(is_azygetic(*t) for t in combinations(chars, 3))


def all_characteristics(g: int) -> list[Characteristic]:
    """All ``4**g`` characteristics in lexicographic order."""
    return [Characteristic(bits[:g], bits[g:]) for bits in product((0, 1), repeat=2 * g)]
