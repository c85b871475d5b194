"""Exhaustive enumeration of tree-like polyforms and fully leafed witnesses.

Trees of size ``n + 1`` are grown from the trees of size ``n`` by adding one
frontier cell adjacent to exactly one existing cell (any other choice closes
a cycle).  Every tree of size ``n + 1`` arises this way since removing one
of its leaves leaves a tree.  Duplicates are removed by canonical keys.

A second, independent route enumerates trees by their inner-cell skeleton:
a tree with ``n1`` leaves is a skeleton tree of ``n - n1`` cells plus an
independent set of frontier cells, each adjacent to exactly one skeleton
cell, covering every skeleton cell of skeleton-degree < 2.  It reaches sizes
far beyond the exhaustive enumerator when the leaf count is prescribed.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from leafy.canon import canonical_keys, decode_keys
from leafy.lattice import LatticeKind, neighbor_function, origin
from leafy.leaffn import ell, upper
from leafy.polyform import Polyform

CHUNK = 40000
DEFAULT_WITNESS_CAP = 64


class LimitExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured resource limit."""


def _max_forms() -> int:
    mb = os.environ.get("LEAFY_MAX_MEM_MB")
    if not mb:
        return 10 ** 7
    # rough footprint of one stored small polyform tuple
    return max(1, int(float(mb) * 1024 * 1024 / 400))


def _sym(sym: str) -> bool:
    if sym not in ("fixed", "free"):
        raise ValueError(f"symmetry must be 'fixed' or 'free', got {sym!r}")
    return sym == "free"


def _children(kind: LatticeKind, parents) -> list:
    nb = neighbor_function(kind)
    out = []
    for p in parents:
        cells = set(p)
        cnt = {}
        for c in p:
            for v in nb(c):
                if v not in cells:
                    cnt[v] = cnt.get(v, 0) + 1
        for v, k in cnt.items():
            if k == 1:
                out.append(p + (v,))
    return out


def _canonical_batch(kind: LatticeKind, forms: list, free: bool, span: int) -> dict:
    """Map key bytes -> canonical cell tuple for a batch of same-size forms."""
    out = {}
    d = kind.cell_dim
    for i in range(0, len(forms), CHUNK):
        arr = np.array(forms[i:i + CHUNK], dtype=np.int64)
        keys, off, base = canonical_keys(kind, arr, free, span=span)
        u, idx = np.unique(keys, axis=0, return_index=True)
        dec = decode_keys(u, d, off, base, kind)
        for row, cells in zip(u, dec):
            out.setdefault(row.tobytes(), tuple(map(tuple, cells.tolist())))
    return out


def _grow_chunk(args):
    kind, parents, free, span = args
    return _canonical_batch(kind, _children(kind, parents), free, span)


_LEVELS: dict = {}


def clear_cache() -> None:
    _LEVELS.clear()


def tree_levels(kind, n: int, sym: str = "free", workers: int = 1) -> list:
    """Canonical trees of sizes 1..n; ``levels[m]`` holds size ``m`` (index 0 empty)."""
    kind = LatticeKind.parse(kind)
    free = _sym(sym)
    levels = _LEVELS.setdefault((kind, free), [[], [(origin(kind),)]])
    limit = _max_forms()
    while len(levels) <= n:
        m = len(levels)
        parents = levels[-1]
        if workers > 1 and len(parents) > 1000:
            step = -(-len(parents) // (4 * workers))
            jobs = [(kind, parents[i:i + step], free, m) for i in range(0, len(parents), step)]
            merged = {}
            with ProcessPoolExecutor(workers) as ex:
                for part in ex.map(_grow_chunk, jobs):
                    for k, v in part.items():
                        merged.setdefault(k, v)
        else:
            merged = {}
            for i in range(0, len(parents), CHUNK // 8):
                part = _grow_chunk((kind, parents[i:i + CHUNK // 8], free, m))
                for k, v in part.items():
                    merged.setdefault(k, v)
        if len(merged) > limit:
            raise LimitExceededError(f"{len(merged)} {kind.value} trees of size {m} exceed the limit {limit}")
        levels.append(sorted(merged.values()))
    return levels[: n + 1]


def enumerate_trees(kind, n: int, sym: str = "free", workers: int = 1):
    """Yield every tree-like polyform of size ``n`` exactly once, in canonical form."""
    if n < 1:
        raise ValueError("size must be at least 1")
    kind = LatticeKind.parse(kind)
    for cells in tree_levels(kind, n, sym, workers)[n]:
        yield Polyform(kind, cells)


def count_trees(kind, n: int, sym: str = "free", workers: int = 1) -> int:
    return len(tree_levels(kind, n, sym, workers)[n])


def leaf_count(kind: LatticeKind, cells) -> int:
    nb = neighbor_function(kind)
    s = set(cells)
    return sum(1 for c in cells if sum(1 for v in nb(c) if v in s) == 1)


@dataclass
class EnumerationReport:
    lattice: LatticeKind
    n: int
    symmetry: str
    total: int
    max_leaves: int
    witness_count: int
    witnesses: list = field(default_factory=list)

    def to_dict(self, with_witnesses: bool = True) -> dict:
        d = {"lattice": self.lattice.value, "n": self.n, "symmetry": self.symmetry,
             "total": self.total, "max_leaves": self.max_leaves,
             "witness_count": self.witness_count}
        if with_witnesses:
            d["witnesses"] = [w.to_dict()["cells"] for w in self.witnesses]
        return d


def max_leaves(kind, n: int, sym: str = "free", witness_cap=DEFAULT_WITNESS_CAP,
               workers: int = 1) -> EnumerationReport:
    """Brute-force leaf function: maximum leaf count over all trees of size ``n``.

    ``witness_cap=None`` keeps every witness.
    """
    if n < 2:
        raise ValueError("max_leaves needs n >= 2")
    kind = LatticeKind.parse(kind)
    forms = tree_levels(kind, n, sym, workers)[n]
    best, wit = -1, []
    for cells in forms:
        k = leaf_count(kind, cells)
        if k > best:
            best, wit = k, [cells]
        elif k == best:
            wit.append(cells)
    kept = wit if witness_cap is None else wit[:witness_cap]
    return EnumerationReport(kind, n, sym, len(forms), best, len(wit),
                             [Polyform(kind, w) for w in kept])


# ---------------------------------------------------------------------------
# skeleton route

def _leaf_sets(kind: LatticeKind, skeleton, t: int):
    """All leaf sets of size ``t`` turning ``skeleton`` into the inner cells of a tree."""
    nb = neighbor_function(kind)
    S = set(skeleton)
    cnt, owner = {}, {}
    for c in skeleton:
        for v in nb(c):
            if v not in S:
                cnt[v] = cnt.get(v, 0) + 1
                owner[v] = c
    cand = sorted(v for v, k in cnt.items() if k == 1)
    if len(cand) < t:
        return
    index = {v: i for i, v in enumerate(cand)}
    conflict = [0] * len(cand)
    for i, v in enumerate(cand):
        for w in nb(v):
            j = index.get(w)
            if j is not None:
                conflict[i] |= 1 << j
    needs = []
    for c in skeleton:
        need = 2 - sum(1 for v in nb(c) if v in S)
        if need > 0:
            m = 0
            for i, v in enumerate(cand):
                if owner[v] == c:
                    m |= 1 << i
            needs.append((m, need))

    def feasible(chosen, avail):
        for m, need in needs:
            if bin((chosen | avail) & m).count("1") < need:
                return False
        return True

    stack = [(0, (1 << len(cand)) - 1, 0)]
    while stack:
        chosen, avail, k = stack.pop()
        if k == t:
            if all(bin(chosen & m).count("1") >= need for m, need in needs):
                yield [cand[i] for i in range(len(cand)) if chosen >> i & 1]
            continue
        if k + bin(avail).count("1") < t or not feasible(chosen, avail):
            continue
        low = avail & -avail
        i = low.bit_length() - 1
        stack.append((chosen, avail & ~low, k))
        stack.append((chosen | low, avail & ~low & ~conflict[i], k + 1))


def trees_with_leaves(kind, n: int, leaves: int, sym: str = "free") -> list:
    """Canonical trees of size ``n`` with exactly ``leaves`` leaves (skeleton route)."""
    kind = LatticeKind.parse(kind)
    free = _sym(sym)
    if n < 2 or leaves < 2 or leaves > n:
        return []
    if n == 2:
        return [Polyform(kind, c) for c in tree_levels(kind, 2, sym)[2]] if leaves == 2 else []
    s = n - leaves
    if s < 1:
        return []
    found = {}
    batch = []
    for skel in tree_levels(kind, s, "free")[s]:
        for L in _leaf_sets(kind, skel, leaves):
            batch.append(tuple(sorted(skel + tuple(L))))
        if len(batch) >= CHUNK:
            found.update(_canonical_batch(kind, batch, True, n))
            batch = []
    if batch:
        found.update(_canonical_batch(kind, batch, True, n))
    forms = sorted(found.values())
    if free:
        return [Polyform(kind, c) for c in forms]
    fixed = set()
    for c in forms:
        fixed.update(fixed_images(kind, c))
    return [Polyform(kind, c) for c in sorted(fixed)]


def fixed_images(kind: LatticeKind, cells) -> set:
    """Distinct fixed canonical forms in the isometry orbit of ``cells``."""
    from leafy.lattice import images_array
    arr = np.array(sorted(cells), dtype=np.int64)
    imgs = images_array(kind, arr)                     # (G, n, D)
    keys, off, base = canonical_keys(kind, imgs, False)
    dec = decode_keys(np.unique(keys, axis=0), arr.shape[1], off, base, kind)
    return {tuple(map(tuple, x.tolist())) for x in dec}


def orbit_size(P: Polyform) -> int:
    """Number of fixed polyforms in the free class of ``P``."""
    return len(fixed_images(P.lattice, P.cells))


def fully_leafed(kind, n: int, sym: str = "free") -> list:
    """Witnesses of ``ell(kind, n)`` leaves found by the skeleton route."""
    return trees_with_leaves(kind, n, ell(kind, n), sym)


def saturated_trees(kind, n: int, sym: str = "free") -> list:
    """Saturated trees of size ``n`` (empty unless ``n`` is a saturated size)."""
    if n < 2 or ell(kind, n) < upper(kind, n):
        return []
    return fully_leafed(kind, n, sym)


# ---------------------------------------------------------------------------
# constructive families

_POLYOMINO_BASE = {
    2: [(0, 0), (1, 0)],
    3: [(0, 0), (1, 0), (2, 0)],
    4: [(0, 0), (1, 0), (2, 0), (1, 1)],
    5: [(0, 0), (1, 0), (2, 0), (1, 1), (1, -1)],
}


def family_polyomino(n: int) -> Polyform:
    """Fully leafed polyomino of size ``n``: a base shape followed by T-shaped blocks."""
    if n < 2:
        raise ValueError("family_polyomino needs n >= 2")
    q, r = divmod(n - 2, 4)
    cells = list(_POLYOMINO_BASE[r + 2])
    m = max(x for x, _ in cells)
    for _ in range(q):
        # centre right of the current rightmost leaf, three new leaves
        cells += [(m + 1, 0), (m + 1, 1), (m + 1, -1), (m + 2, 0)]
        m += 2
    return Polyform(LatticeKind.SQUARE, cells)


def _linear_even(kind: LatticeKind, inner: int) -> list:
    """Saturated linear polyhex/polyiamond with ``inner`` degree-3 cells.

    The inner cells form a straight strip of alternating triangles (a zigzag
    of hexagons); each gets one side leaf and the strip is capped by two end
    leaves, giving ``2 * inner + 2`` cells and ``inner + 2`` leaves.
    """
    cells = []
    for i in range(-1, inner + 1):
        x, o = divmod(i, 2)
        if kind is LatticeKind.TRI:
            cells.append((x, 0, o))
            if 0 <= i < inner:
                cells.append((x, 1, 0) if o else (x, -1, 1))
        else:
            cells.append((x + o, x))
            if 0 <= i < inner:
                cells.append((x + 2, x - 1) if o else (x - 1, x + 1))
    return sorted(cells)


def family_linear(kind, n: int) -> Polyform:
    """Fully leafed linear polyhex or polyiamond of size ``n``."""
    kind = LatticeKind.parse(kind)
    if kind not in (LatticeKind.HEX, LatticeKind.TRI):
        raise ValueError("family_linear is defined for the hex and tri lattices")
    if n < 2:
        raise ValueError("family_linear needs n >= 2")
    if n == 2:
        return Polyform(kind, [(0, 0), (1, 0)] if kind is LatticeKind.HEX else [(0, 0, 0), (0, 0, 1)])
    if n % 2 == 0:
        return Polyform(kind, _linear_even(kind, (n - 2) // 2))
    cells = _linear_even(kind, (n - 1) // 2)
    P = Polyform(kind, cells)
    leaf = P.leaves()[-1]
    return Polyform(kind, [c for c in cells if c != leaf])
