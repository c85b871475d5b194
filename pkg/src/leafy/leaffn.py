"""Closed-form leaf functions, their difference functions and bounding lines.

``ell(kind, n)`` is the maximum number of leaves of a tree-like polyform of
size ``n``.  All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from leafy.lattice import LatticeKind

CUBIC_SPECIAL = frozenset({6, 7, 13, 19, 25})
CUBIC_PERIOD = 41


def f_cub(n: int) -> int:
    if 0 <= n <= 11:
        return (2 * n + 2) // 3
    if 12 <= n <= 27:
        return (2 * n + 3) // 3
    if 28 <= n <= 40:
        return (2 * n + 4) // 3
    raise ValueError(f"f_cub is defined on 0..40, got {n}")


def _ell_cubic_small(n: int) -> int:
    if n in CUBIC_SPECIAL:
        return f_cub(n) + 1
    if n <= 40:
        return f_cub(n)
    return f_cub(n - 41) + 28


_CUBIC_TABLE = tuple(_ell_cubic_small(n) if n >= 2 else 0 for n in range(82))


def ell(kind, n: int) -> int:
    kind = LatticeKind.parse(kind)
    if n < 2:
        raise ValueError(f"leaf function is defined for n >= 2, got {n}")
    if kind is LatticeKind.SQUARE:
        if n == 2:
            return 2
        if n <= 5:
            return n - 1
        q, base = divmod(n - 2, 4)
        base += 2
        if base == 2:            # ell(2) = 2 breaks the n - 1 pattern
            return 2 + 2 * q
        return base - 1 + 2 * q
    if kind in (LatticeKind.HEX, LatticeKind.TRI):
        return n // 2 + 1
    if n <= 81:
        return _CUBIC_TABLE[n]
    q, r = divmod(n - 41, 41)
    return _CUBIC_TABLE[41 + r] + 28 * q


_PERIOD = {LatticeKind.SQUARE: 4, LatticeKind.HEX: 2, LatticeKind.TRI: 2, LatticeKind.CUBIC: 41}
_TRANSIENT = {LatticeKind.SQUARE: 6, LatticeKind.HEX: 4, LatticeKind.TRI: 4, LatticeKind.CUBIC: 82}


def delta_ell(kind, i: int) -> int:
    """Liminf of ``ell(n+i) - ell(n)``, read off one period past the transient.

    Defined the same way on every lattice, hex and tri included.
    """
    kind = LatticeKind.parse(kind)
    if i < 1:
        raise ValueError(f"delta_ell needs i >= 1, got {i}")
    n0 = _TRANSIENT[kind]
    return min(ell(kind, n + i) - ell(kind, n) for n in range(n0, n0 + _PERIOD[kind]))


@dataclass(frozen=True)
class LeafBounds:
    """Parallel lines ``lower(n) <= L(n) <= upper(n)``: value = (slope*n + intercept)."""

    slope: Fraction
    upper_intercept: Fraction
    lower_intercept: Fraction

    def upper(self, n) -> Fraction:
        return self.slope * n + self.upper_intercept

    def lower(self, n) -> Fraction:
        return self.slope * n + self.lower_intercept


BOUNDS = {
    LatticeKind.SQUARE: LeafBounds(Fraction(1, 2), Fraction(3, 2), Fraction(1, 2)),
    LatticeKind.HEX: LeafBounds(Fraction(1, 2), Fraction(1), Fraction(1, 2)),
    LatticeKind.TRI: LeafBounds(Fraction(1, 2), Fraction(1), Fraction(1, 2)),
    LatticeKind.CUBIC: LeafBounds(Fraction(28, 41), Fraction(36, 41), Fraction(-6, 41)),
}


def bounds(kind) -> LeafBounds:
    return BOUNDS[LatticeKind.parse(kind)]


def upper(kind, n) -> Fraction:
    return bounds(kind).upper(n)


def lower(kind, n) -> Fraction:
    return bounds(kind).lower(n)


def saturated_size(kind, n: int) -> bool:
    """True iff fully leafed trees of size ``n`` reach the upper line."""
    return n >= 2 and ell(kind, n) >= upper(kind, n)


def is_saturated(P) -> bool:
    """Fully leafed and on the upper bounding line."""
    from leafy.polyform import NotATreeError, is_tree
    if not is_tree(P):
        raise NotATreeError("saturation is defined on tree-like polyforms")
    n = len(P)
    if n < 2:
        return False
    n1 = P.n1
    return n1 == ell(P.lattice, n) and n1 >= upper(P.lattice, n)


def table(kind, lo: int, hi: int):
    """Rows ``(n, ell(n), upper(n), lower(n))`` for ``lo <= n <= hi``."""
    b = bounds(kind)
    return [(n, ell(kind, n), b.upper(n), b.lower(n)) for n in range(max(lo, 2), hi + 1)]
