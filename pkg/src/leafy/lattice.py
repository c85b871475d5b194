"""Regular lattices, their cells, adjacency relations and point groups.

Cells are plain integer tuples:

* square: ``(x, y)``
* cubic: ``(x, y, z)``
* hex: axial ``(q, r)``
* tri: ``(x, y, o)`` where ``o = 0`` is an upward triangle and ``o = 1`` a
  downward one.  The up triangle ``(x, y, 0)`` has vertices ``(x, y)``,
  ``(x+1, y)``, ``(x, y+1)`` of the axial vertex lattice and the down
  triangle ``(x, y, 1)`` has vertices ``(x+1, y)``, ``(x, y+1)``,
  ``(x+1, y+1)``.

Point-group elements of the hex and tri lattices are 2x2 integer matrices on
axial coordinates.  For triangles they act on the sum of the three vertices,
which is ``(3x+1+o, 3y+1+o)``, and the orientation is read back from the
residue mod 3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

Cell = tuple


class InvalidCellError(ValueError):
    pass


class LatticeKind(str, Enum):
    SQUARE = "square"
    HEX = "hex"
    TRI = "tri"
    CUBIC = "cubic"

    @property
    def coordination(self) -> int:
        return _COORDINATION[self]

    @property
    def cell_dim(self) -> int:
        """Length of the coordinate tuple of a cell."""
        return 2 if self in (LatticeKind.SQUARE, LatticeKind.HEX) else 3

    @classmethod
    def parse(cls, name) -> "LatticeKind":
        if isinstance(name, LatticeKind):
            return name
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown lattice {name!r}; expected one of "
                             f"{[k.value for k in cls]}") from None


_COORDINATION = {
    LatticeKind.SQUARE: 4,
    LatticeKind.HEX: 6,
    LatticeKind.TRI: 3,
    LatticeKind.CUBIC: 6,
}

SQUARE_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1))
HEX_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
CUBIC_OFFSETS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
TRI_UP_OFFSETS = ((0, 0), (-1, 0), (0, -1))    # neighbours of (x, y, 0) have o = 1
TRI_DOWN_OFFSETS = ((0, 0), (1, 0), (0, 1))    # neighbours of (x, y, 1) have o = 0


def check_cell(kind: LatticeKind, c) -> None:
    if len(c) != kind.cell_dim:
        raise InvalidCellError(f"{kind.value} cell must have {kind.cell_dim} coordinates, got {c!r}")
    if kind is LatticeKind.TRI and c[2] not in (0, 1):
        raise InvalidCellError(f"triangle orientation must be 0 or 1, got {c!r}")


def neighbors(kind: LatticeKind, c: Cell) -> list:
    """Return the lattice neighbours of ``c`` (coordination-number many)."""
    kind = LatticeKind.parse(kind)
    if kind is LatticeKind.SQUARE:
        x, y = c
        return [(x + dx, y + dy) for dx, dy in SQUARE_OFFSETS]
    if kind is LatticeKind.CUBIC:
        x, y, z = c
        return [(x + dx, y + dy, z + dz) for dx, dy, dz in CUBIC_OFFSETS]
    if kind is LatticeKind.HEX:
        q, r = c
        return [(q + dq, r + dr) for dq, dr in HEX_OFFSETS]
    if kind is LatticeKind.TRI:
        x, y, o = c
        if o == 0:
            return [(x + dx, y + dy, 1) for dx, dy in TRI_UP_OFFSETS]
        if o == 1:
            return [(x + dx, y + dy, 0) for dx, dy in TRI_DOWN_OFFSETS]
        raise InvalidCellError(f"triangle orientation must be 0 or 1, got {c!r}")
    raise ValueError(f"unknown lattice {kind!r}")


def neighbor_function(kind: LatticeKind):
    """Return a fast ``cell -> tuple of neighbours`` callable for inner loops."""
    kind = LatticeKind.parse(kind)
    if kind is LatticeKind.TRI:
        def tri(c):
            x, y, o = c
            if o == 0:
                return ((x, y, 1), (x - 1, y, 1), (x, y - 1, 1))
            return ((x, y, 0), (x + 1, y, 0), (x, y + 1, 0))
        return tri
    offsets = {LatticeKind.SQUARE: SQUARE_OFFSETS, LatticeKind.HEX: HEX_OFFSETS,
               LatticeKind.CUBIC: CUBIC_OFFSETS}[kind]
    if len(offsets[0]) == 2:
        return lambda c: tuple((c[0] + a, c[1] + b) for a, b in offsets)
    return lambda c: tuple((c[0] + a, c[1] + b, c[2] + d) for a, b, d in offsets)


def origin(kind: LatticeKind) -> Cell:
    return (0,) * kind.cell_dim


@dataclass(frozen=True)
class Isometry:
    """A lattice isometry: integer linear part followed by a translation.

    ``matrix`` acts on cell coordinates for square/cubic, on axial
    coordinates for hex, and on vertex sums for tri (see module docstring).
    ``translation`` is added to the cell's lattice coordinates (the
    orientation bit of a triangle is never translated).
    """

    kind: LatticeKind
    matrix: tuple
    translation: tuple = None

    def __post_init__(self):
        if self.translation is None:
            d = 2 if self.kind is not LatticeKind.CUBIC else 3
            object.__setattr__(self, "translation", (0,) * d)

    def __call__(self, c):
        return apply(self, c)

    def compose(self, other: "Isometry") -> "Isometry":
        """Return ``self o other`` (apply ``other`` first)."""
        if other.kind is not self.kind:
            raise ValueError("cannot compose isometries of different lattices")
        if any(self.translation) or any(other.translation):
            raise ValueError("compose is defined on point-group elements only")
        m = _matmul(self.matrix, other.matrix)
        return Isometry(self.kind, m)

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return self.matrix == _identity(n) and not any(self.translation)


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _matvec(m, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def apply(iso: Isometry, c: Cell, kind: LatticeKind = None) -> Cell:
    """Apply ``iso`` to cell ``c``; ``kind`` (if given) must match the isometry."""
    if kind is not None and LatticeKind.parse(kind) is not iso.kind:
        raise ValueError(f"isometry of {iso.kind.value} lattice applied to {kind} cell")
    check_cell(iso.kind, c)
    t = iso.translation
    if iso.kind is LatticeKind.TRI:
        x, y, o = c
        u, v = _matvec(iso.matrix, (3 * x + 1 + o, 3 * y + 1 + o))
        o2 = u % 3 - 1
        return ((u - 1 - o2) // 3 + t[0], (v - 1 - o2) // 3 + t[1], o2)
    return tuple(a + b for a, b in zip(_matvec(iso.matrix, c), t))


def _closure(gens):
    n = len(gens[0])
    seen = {_identity(n): None}
    frontier = [_identity(n)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = _matmul(g, m)
                if p not in seen:
                    seen[p] = None
                    nxt.append(p)
        frontier = nxt
    return list(seen)


@lru_cache(maxsize=None)
def _point_group_matrices(kind: LatticeKind) -> tuple:
    if kind is LatticeKind.SQUARE:
        mats = _closure([((0, -1), (1, 0)), ((1, 0), (0, -1))])
    elif kind in (LatticeKind.HEX, LatticeKind.TRI):
        mats = _closure([((0, -1), (1, 1)), ((0, 1), (1, 0))])
    else:
        mats = []
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1, -1), repeat=3):
                mats.append(tuple(tuple(signs[i] if j == perm[i] else 0 for j in range(3))
                                  for i in range(3)))
    ident = _identity(len(mats[0]))
    mats.sort(key=lambda m: (m != ident, m))
    return tuple(mats)


def isometry_group(kind: LatticeKind) -> list:
    """Point group of the lattice (linear parts only), identity first."""
    kind = LatticeKind.parse(kind)
    return [Isometry(kind, m) for m in _point_group_matrices(kind)]


def identity(kind: LatticeKind) -> Isometry:
    return isometry_group(kind)[0]


def translation(kind: LatticeKind, vector) -> Isometry:
    kind = LatticeKind.parse(kind)
    return Isometry(kind, _identity(3 if kind is LatticeKind.CUBIC else 2), tuple(vector))


# ---------------------------------------------------------------------------
# vectorised helpers used by the enumerators

@lru_cache(maxsize=None)
def group_array(kind: LatticeKind) -> np.ndarray:
    """Point group as an int64 array of shape (G, d, d)."""
    return np.array(_point_group_matrices(kind), dtype=np.int64)


def images_array(kind: LatticeKind, coords: np.ndarray, mats: np.ndarray = None) -> np.ndarray:
    """Images of cell arrays under a set of linear isometries.

    ``coords`` has shape ``(..., n, D)``; the result has shape
    ``(..., G, n, D)``.
    """
    if mats is None:
        mats = group_array(kind)
    if kind is LatticeKind.TRI:
        o = coords[..., 2]
        s = np.stack([3 * coords[..., 0] + 1 + o, 3 * coords[..., 1] + 1 + o], axis=-1)
        img = np.einsum("gij,...nj->...gni", mats, s)
        o2 = img[..., 0] % 3 - 1
        x = (img[..., 0] - 1 - o2) // 3
        y = (img[..., 1] - 1 - o2) // 3
        return np.stack([x, y, o2], axis=-1)
    return np.einsum("gij,...nj->...gni", mats, coords)
