"""Finite cell sets viewed as induced subgraphs of a lattice."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from leafy.canon import canonical_cells
from leafy.lattice import LatticeKind, check_cell, neighbor_function


class NotATreeError(ValueError):
    pass


@dataclass(frozen=True)
class Polyform:
    """A lattice tag plus a finite set of cells.

    Edges are implicit: two cells are joined iff they are lattice-adjacent.
    Only :func:`extension`, :func:`interior` and :func:`hull` produce or
    accept empty cell sets.
    """

    lattice: LatticeKind
    cells: frozenset

    def __init__(self, lattice, cells):
        kind = LatticeKind.parse(lattice)
        cs = frozenset(tuple(int(v) for v in c) for c in cells)
        for c in cs:
            check_cell(kind, c)
        object.__setattr__(self, "lattice", kind)
        object.__setattr__(self, "cells", cs)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(sorted(self.cells))

    def __contains__(self, c):
        return tuple(c) in self.cells

    @property
    def size(self) -> int:
        return len(self.cells)

    def sorted_cells(self) -> list:
        return sorted(self.cells)

    def degree(self, c) -> int:
        nb = neighbor_function(self.lattice)
        return sum(1 for v in nb(c) if v in self.cells)

    def degrees(self) -> dict:
        nb = neighbor_function(self.lattice)
        cells = self.cells
        return {c: sum(1 for v in nb(c) if v in cells) for c in cells}

    def leaves(self) -> list:
        return sorted(c for c, d in self.degrees().items() if d == 1)

    @property
    def n1(self) -> int:
        return sum(1 for d in self.degrees().values() if d == 1)

    def edge_count(self) -> int:
        return sum(self.degrees().values()) // 2

    def translate(self, vector) -> "Polyform":
        t = tuple(vector)
        if self.lattice is LatticeKind.TRI:
            t = (t[0], t[1], 0)
        return Polyform(self.lattice, (tuple(a + b for a, b in zip(c, t)) for c in self.cells))

    def map(self, iso) -> "Polyform":
        from leafy.lattice import apply
        return Polyform(self.lattice, (apply(iso, c) for c in self.cells))

    def to_dict(self) -> dict:
        return {"lattice": self.lattice.value, "cells": [list(c) for c in self.sorted_cells()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Polyform":
        if not isinstance(data, dict):
            raise ValueError("polyform JSON must be an object")
        unknown = set(data) - {"lattice", "cells"}
        if unknown:
            raise ValueError(f"unknown field(s) {sorted(unknown)} in polyform JSON")
        if "lattice" not in data:
            raise ValueError("field 'lattice' is missing")
        if "cells" not in data or not isinstance(data["cells"], list):
            raise ValueError("field 'cells' must be a list of coordinate lists")
        try:
            kind = LatticeKind.parse(data["lattice"])
        except ValueError as e:
            raise ValueError(f"field 'lattice': {e}") from None
        return cls(kind, (tuple(c) for c in data["cells"]))

    @classmethod
    def from_json(cls, text: str) -> "Polyform":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"Polyform({self.lattice.value!r}, {self.sorted_cells()!r})"


def _require_nonempty(P: Polyform):
    if not P.cells:
        raise ValueError("operation requires a non-empty polyform")


def is_connected(P: Polyform) -> bool:
    _require_nonempty(P)
    nb = neighbor_function(P.lattice)
    start = next(iter(P.cells))
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for v in nb(c):
            if v in P.cells and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(P.cells)


def is_tree(P: Polyform) -> bool:
    return is_connected(P) and P.edge_count() == len(P.cells) - 1


class DegreeHistogram(dict):
    """Mapping degree -> number of cells; absent degrees count as zero."""

    def __missing__(self, key):
        return 0

    @property
    def n1(self) -> int:
        return self[1]

    @property
    def total(self) -> int:
        return sum(self.values())


def degree_histogram(P: Polyform) -> DegreeHistogram:
    h = DegreeHistogram()
    for d in P.degrees().values():
        h[d] += 1
    return h


def depths(P: Polyform) -> dict:
    """Depth of every cell via repeated leaf stripping."""
    if not is_tree(P):
        raise NotATreeError("depth is defined on tree-like polyforms only")
    deg = P.degrees()
    nb = neighbor_function(P.lattice)
    out = {}
    layer = [c for c, d in deg.items() if d <= 1]
    rnd = 0
    while layer:
        nxt = []
        for c in layer:
            out[c] = rnd
        for c in layer:
            for v in nb(c):
                if v in deg and v not in out:
                    deg[v] -= 1
                    if deg[v] <= 1 and v not in nxt:
                        nxt.append(v)
        layer = nxt
        rnd += 1
    return out


def depth(P: Polyform, c) -> int:
    c = tuple(c)
    if c not in P.cells:
        raise ValueError(f"cell {c} is not in the polyform")
    return depths(P)[c]


def extension(P: Polyform) -> Polyform:
    nb = neighbor_function(P.lattice)
    out = set(P.cells)
    for c in P.cells:
        out.update(nb(c))
    return Polyform(P.lattice, out)


def interior(P: Polyform) -> Polyform:
    nb = neighbor_function(P.lattice)
    return Polyform(P.lattice, (c for c in P.cells if all(v in P.cells for v in nb(c))))


def hull(P: Polyform) -> Polyform:
    return interior(extension(P))


def canonical_form(P: Polyform, sym: str = "free") -> Polyform:
    """Canonical representative under translation (``fixed``) or isometry (``free``)."""
    _require_nonempty(P)
    if sym not in ("fixed", "free"):
        raise ValueError(f"symmetry must be 'fixed' or 'free', got {sym!r}")
    return Polyform(P.lattice, canonical_cells(P.lattice, P.cells, sym == "free"))


def canonical_key(P: Polyform, sym: str = "free") -> tuple:
    _require_nonempty(P)
    return canonical_cells(P.lattice, P.cells, sym == "free")


def bfs_component(cells, start, nb, blocked=None) -> set:
    """Cells reachable from ``start`` inside ``cells`` without entering ``blocked``."""
    seen = {start}
    dq = deque([start])
    while dq:
        c = dq.popleft()
        for v in nb(c):
            if v in cells and v not in seen and v != blocked:
                seen.add(v)
                dq.append(v)
    return seen


# ---------------------------------------------------------------------------
# ASCII rendering

def _glyph(P, c, deg, degrees):
    if degrees:
        return str(deg[c])
    if P.lattice is LatticeKind.TRI:
        return "^" if c[2] == 0 else "v"
    return "#"


def render(P: Polyform, degrees: bool = False) -> str:
    """ASCII picture: grid for 2D lattices, z-slices for the cubic lattice."""
    _require_nonempty(P)
    deg = P.degrees()
    k = P.lattice
    if k is LatticeKind.CUBIC:
        zs = sorted({c[2] for c in P.cells})
        xs = [c[0] for c in P.cells]
        ys = [c[1] for c in P.cells]
        blocks = []
        for z in zs:
            layer = {(c[0], c[1]): c for c in P.cells if c[2] == z}
            rows = []
            for y in range(max(ys), min(ys) - 1, -1):
                rows.append("".join(_glyph(P, layer[(x, y)], deg, degrees) if (x, y) in layer else "."
                                    for x in range(min(xs), max(xs) + 1)))
            blocks.append(f"z={z}\n" + "\n".join(rows))
        return "\n\n".join(blocks)
    if k is LatticeKind.SQUARE:
        pos = {c: (c[1], c[0]) for c in P.cells}
    elif k is LatticeKind.HEX:
        pos = {c: (c[1], 2 * c[0] + c[1]) for c in P.cells}
    else:
        pos = {c: (c[1], 2 * c[0] + c[1] + c[2]) for c in P.cells}
    rows = sorted({r for r, _ in pos.values()}, reverse=True)
    cols = [col for _, col in pos.values()]
    lo, hi = min(cols), max(cols)
    at = {v: c for c, v in pos.items()}
    lines = []
    blank = " " if k is LatticeKind.HEX else "."
    for r in range(rows[0], rows[-1] - 1, -1):
        line = []
        for col in range(lo, hi + 1):
            c = at.get((r, col))
            line.append(_glyph(P, c, deg, degrees) if c is not None else blank)
        lines.append("".join(line).rstrip() if k is LatticeKind.HEX else "".join(line))
    return "\n".join(lines)
