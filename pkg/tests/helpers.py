"""Random generators shared by the tests."""

from __future__ import annotations

import random

from leafy.polyform import Polyform

import oracles


def random_polyform(rng: random.Random, kind: str, n: int, tree: bool = False) -> Polyform:
    """Random connected polyform of ``n`` cells grown from the origin.

    With ``tree`` only cells adjacent to exactly one current cell are added,
    which keeps the induced graph a tree.
    """
    start = (0,) * (3 if kind in ("tri", "cubic") else 2)
    cells = {start}
    order = [start]
    while len(cells) < n:
        c = rng.choice(order)
        v = rng.choice(oracles.nbrs(kind, c))
        if v in cells:
            continue
        if tree and sum(1 for w in oracles.nbrs(kind, v) if w in cells) != 1:
            continue
        cells.add(v)
        order.append(v)
    return Polyform(kind, cells)


def random_tree(rng: random.Random, kind: str, n: int, tries: int = 200) -> Polyform:
    """Random tree-like polyform; falls back to a path if growth gets stuck."""
    for _ in range(tries):
        try:
            return _grow_tree(rng, kind, n)
        except RuntimeError:
            continue
    raise RuntimeError("could not grow a random tree")


def _grow_tree(rng, kind, n):
    start = (0,) * (3 if kind in ("tri", "cubic") else 2)
    cells = {start}
    for _ in range(n - 1):
        frontier = {}
        for c in cells:
            for v in oracles.nbrs(kind, c):
                if v not in cells:
                    frontier[v] = frontier.get(v, 0) + 1
        options = sorted(v for v, k in frontier.items() if k == 1)
        if not options:
            raise RuntimeError("stuck")
        cells.add(rng.choice(options))
    return Polyform(kind, cells)
