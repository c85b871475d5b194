"""Regenerate the JSON fixtures in src/leafy/data."""

import json
from pathlib import Path

from leafy.enumerate import saturated_trees
from leafy.leaffn import ell, is_saturated
from leafy.polyform import Polyform, canonical_key, degree_histogram, is_tree
from leafy.saturated import LEAF_BLOCK, _inner_block

OUT = Path(__file__).resolve().parents[1] / "src" / "leafy" / "data"

R12 = [(0, 0, 0), (-1, 0, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1), (1, 0, 0), (1, 1, 0),
       (2, 0, 0), (3, 0, 0), (2, -1, 0), (2, 0, 1), (2, 0, -1)]
PIECES = {
    "R3": ([(-1, 0, 0), (0, 0, 0), (1, 0, 0)], (0, 0, 0), (-1, 0, 0)),
    "R4": ([(-1, 0, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0)], (0, 0, 0), (-1, 0, 0)),
    "R5": ([(-1, 0, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0)], (0, 0, 0), (-1, 0, 0)),
    "R12": (R12, (1, 0, 0), (0, 1, 0)),
}
# fully leafed 18-cell patch, placed against the head of the r = 35 chain
V18 = [(-1, 3, -3), (0, 2, -3), (0, 3, -4), (0, 3, -3), (0, 3, -1), (0, 4, -3), (1, 2, -2),
       (1, 3, -3), (1, 3, -2), (1, 3, -1), (1, 3, 0), (1, 4, -2), (2, 2, -3), (2, 3, -4),
       (2, 3, -3), (2, 3, -1), (2, 4, -3), (3, 3, -3)]


def checks(cells):
    P = Polyform("cubic", cells)
    n = len(P)
    return {"size": n, "leaves": P.n1, "is_tree": is_tree(P),
            "fully_leafed": n >= 2 and P.n1 == ell("cubic", n),
            "degrees": {str(k): v for k, v in sorted(degree_histogram(P).items())}}


def write(name, cells, note, **extra):
    cells = sorted(tuple(c) for c in cells)
    data = {"lattice": "cubic", "cells": [list(c) for c in cells]}
    data.update({k: list(v) for k, v in extra.items()})
    data["checks"] = checks(cells)
    data["note"] = note
    (OUT / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    for name, (cells, root, d) in PIECES.items():
        write(name, cells, "rooted chain piece", root=root, dir=d)
    write("V18", V18, "fully leafed patch glued at the leaf edge (1,3,0)-(1,3,-1)")
    for n in (6, 7, 13, 19, 25):
        ws = saturated_trees("cubic", n, "free")
        best = min(ws, key=canonical_key)
        assert is_saturated(best)
        write(f"U{n}", best.cells, f"least canonical of {len(ws)} free saturated trees")
    write("U15", LEAF_BLOCK, "leaf block: root (-1,0,0), shared cell (-2,0,0)",
          root=(-1, 0, 0), dir=(-1, 0, 0))
    write("U17", _inner_block((0, 0, 0), (0, 0, 1)), "cross block in the xy plane")


if __name__ == "__main__":
    main()
