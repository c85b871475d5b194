"""Rooted tree-like polycubes, graft unions, branches and abundance.

A rooted polycube is a triple ``(T, r, u)``: a cubic tree ``T``, a root cell
``r`` adjacent to a leaf, and a unit direction ``u``.  It is non-final when
``r + u`` is a leaf.  ``v`` is a free direction when ``r - v`` is a leaf.

Internally, rooted shapes are normalised to a *frame* with the root at the
origin and the direction pointing to ``+z``; the rooted canonical form is the
least sorted cell tuple among the 8 frame images that fix the ``z`` axis.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from leafy.lattice import LatticeKind, _point_group_matrices
from leafy.leaffn import delta_ell, ell
from leafy.polyform import Polyform, bfs_component, is_tree

CUBIC = LatticeKind.CUBIC
UNITS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
UP = (0, 0, 1)
ORIGIN = (0, 0, 0)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _neg(a):
    return (-a[0], -a[1], -a[2])


def _nb(c):
    x, y, z = c
    return ((x + 1, y, z), (x - 1, y, z), (x, y + 1, z), (x, y - 1, z), (x, y, z + 1), (x, y, z - 1))


def _mul(m, c):
    return (m[0][0] * c[0] + m[0][1] * c[1] + m[0][2] * c[2],
            m[1][0] * c[0] + m[1][1] * c[1] + m[1][2] * c[2],
            m[2][0] * c[0] + m[2][1] * c[1] + m[2][2] * c[2])


MATRICES = _point_group_matrices(CUBIC)
IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@lru_cache(maxsize=None)
def mapping(src: tuple, dst: tuple) -> tuple:
    """The 8 point-group matrices sending unit vector ``src`` to ``dst`` (rotations first)."""
    ms = [m for m in MATRICES if _mul(m, src) == dst]
    ms.sort(key=lambda m: (_det(m) != 1, m))
    return tuple(ms)


def _det(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def rotation_about(axis: tuple, quarter_turns: int = 1) -> tuple:
    """Matrix of a right-handed 90 degree rotation (repeated) about a unit axis."""
    a = axis
    # R = a a^T + K where K v = a x v
    k = ((0, -a[2], a[1]), (a[2], 0, -a[0]), (-a[1], a[0], 0))
    aa = tuple(tuple(a[i] * a[j] for j in range(3)) for i in range(3))
    r = tuple(tuple(aa[i][j] + k[i][j] for j in range(3)) for i in range(3))
    out = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(quarter_turns % 4):
        out = tuple(tuple(sum(r[i][t] * out[t][j] for t in range(3)) for j in range(3)) for i in range(3))
    return out


def _is_unit(v) -> bool:
    return tuple(v) in UNITS


def _leaves(cells) -> set:
    return {c for c in cells if sum(1 for v in _nb(c) if v in cells) == 1}


def _degree(cells, c) -> int:
    return sum(1 for v in _nb(c) if v in cells)


def _edges(cells) -> int:
    return sum(1 for c in cells for v in _nb(c) if v in cells) // 2


def _is_tree_cells(cells) -> bool:
    if not cells or _edges(cells) != len(cells) - 1:
        return False
    start = next(iter(cells))
    return len(bfs_component(cells, start, _nb)) == len(cells)


class InvalidRootedError(ValueError):
    pass


@dataclass(frozen=True)
class RootedPolycube:
    """A cubic tree with a root cell (adjacent to a leaf) and a unit direction."""

    tree: Polyform
    root: tuple
    dir: tuple

    def __init__(self, tree, root, dir):
        if not isinstance(tree, Polyform):
            tree = Polyform(CUBIC, tree)
        if tree.lattice is not CUBIC:
            raise InvalidRootedError("rooted polycubes live on the cubic lattice")
        root, dir = tuple(int(v) for v in root), tuple(int(v) for v in dir)
        if len(tree) < 2:
            raise InvalidRootedError("a rooted polycube has at least 2 cells")
        if root not in tree.cells:
            raise InvalidRootedError(f"root {root} is not a cell of the tree")
        if not _is_unit(dir):
            raise InvalidRootedError(f"direction {dir} is not a unit vector")
        if not is_tree(tree):
            raise InvalidRootedError("the underlying polycube is not a tree")
        lv = _leaves(tree.cells)
        if not any(v in lv for v in _nb(root)):
            raise InvalidRootedError("the root is not adjacent to a leaf")
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "dir", dir)

    @property
    def cells(self) -> frozenset:
        return self.tree.cells

    @property
    def n(self) -> int:
        return len(self.tree)

    @property
    def n1(self) -> int:
        return self.tree.n1

    @property
    def is_final(self) -> bool:
        """True when ``root + dir`` is not a leaf."""
        t = _add(self.root, self.dir)
        return not (t in self.cells and _degree(self.cells, t) == 1)

    def free_directions(self) -> list:
        lv = _leaves(self.cells)
        return [v for v in UNITS if _sub(self.root, v) in lv]

    @property
    def height(self) -> int:
        return height(self.cells, self.root)

    def unrooted(self) -> Polyform:
        return self.tree

    def frame(self) -> tuple:
        """Cells in the frame root = origin, dir = +z (first mapping)."""
        return to_frame(self.cells, self.root, self.dir)[0]

    def canonical_key(self) -> tuple:
        return rooted_key(self.cells, self.root, self.dir)

    def canonical(self) -> "RootedPolycube":
        return RootedPolycube(Polyform(CUBIC, self.canonical_key()), ORIGIN, UP)

    def transformed(self, matrix, translation=(0, 0, 0)) -> "RootedPolycube":
        cells = [_add(_mul(matrix, c), translation) for c in self.cells]
        return RootedPolycube(Polyform(CUBIC, cells), _add(_mul(matrix, self.root), translation),
                              _mul(matrix, self.dir))

    def to_dict(self) -> dict:
        return {"cells": [list(c) for c in sorted(self.cells)], "root": list(self.root), "dir": list(self.dir)}

    @classmethod
    def from_dict(cls, d: dict) -> "RootedPolycube":
        return cls(Polyform(CUBIC, (tuple(c) for c in d["cells"])), tuple(d["root"]), tuple(d["dir"]))

    def __repr__(self):
        return f"RootedPolycube(n={self.n}, root={self.root}, dir={self.dir})"


def height(cells, root) -> int:
    """Longest path length from ``root`` to a leaf."""
    seen = {root: 0}
    stack = [root]
    best = 0
    while stack:
        c = stack.pop()
        for v in _nb(c):
            if v in cells and v not in seen:
                seen[v] = seen[c] + 1
                best = max(best, seen[v])
                stack.append(v)
    return best


def to_frame(cells, root, dir) -> list:
    """All 8 images of ``cells`` in the root-origin, dir-``+z`` frame (sorted tuples)."""
    rel = [_sub(c, root) for c in cells]
    return [tuple(sorted(_mul(m, c) for c in rel)) for m in mapping(tuple(dir), UP)]


def rooted_key(cells, root, dir) -> tuple:
    return min(to_frame(cells, root, dir))


def rooted_domino() -> RootedPolycube:
    return RootedPolycube(Polyform(CUBIC, [ORIGIN, UP]), ORIGIN, UP)


# ---------------------------------------------------------------------------
# graft union

@dataclass(frozen=True)
class GraftResult:
    """Outcome of a graft union: ``NonFinal``, ``Final`` or ``Invalid``."""

    tag: str
    payload: object = None
    reason: str = None
    rooted: tuple = None     # (root, dir) of a Final result

    @property
    def well_defined(self) -> bool:
        return self.tag != "Invalid"

    def unrooted(self) -> Polyform:
        if self.tag == "NonFinal":
            return self.payload.tree
        if self.tag == "Final":
            return self.payload
        raise ValueError(f"invalid graft has no polycube ({self.reason})")


def _invalid(reason):
    return GraftResult("Invalid", None, reason)


def graft_union(R: RootedPolycube, R2: RootedPolycube) -> GraftResult:
    """``R ◁ R2``: overlay the root edge of ``R2`` onto a free-direction edge of ``R``."""
    v = R2.dir
    host_leaf = _sub(R.root, v)
    if host_leaf not in R.cells or _degree(R.cells, host_leaf) != 1:
        return _invalid("direction-not-free")
    tau = _sub(_sub(R.root, R2.root), v)
    moved = {_add(c, tau) for c in R2.cells}
    if (R.cells & moved) != {R.root, host_leaf}:
        return _invalid("overlap")
    cells = R.cells | moved
    if _edges(cells) != len(cells) - 1:
        return _invalid("cycle")
    P = Polyform(CUBIC, cells)
    tip = _add(R.root, R.dir)
    if tip in cells and _degree(cells, tip) == 1:
        return GraftResult("NonFinal", RootedPolycube(P, R.root, R.dir))
    if v == _neg(R.dir):
        return GraftResult("Final", P, rooted=(R.root, R.dir))
    return _invalid("root+dir-not-leaf")


def branches(T: Polyform, proper: bool = False) -> list:
    """``(B, Bc)`` for every oriented edge ``(r, r')`` of the tree ``T``."""
    if T.lattice is not CUBIC:
        raise ValueError("branches are defined for polycubes")
    if len(T) < 2 or not is_tree(T):
        raise ValueError("branches need a tree with at least 2 cells")
    cells = T.cells
    deg = T.degrees()
    out = []
    for r in sorted(cells):
        for r2 in _nb(r):
            if r2 not in cells:
                continue
            if proper and (deg[r] == 1 or deg[r2] == 1):
                continue
            side = bfs_component(cells, r, _nb, blocked=r2)
            B = RootedPolycube(Polyform(CUBIC, side | {r2}), r, _sub(r2, r))
            Bc = RootedPolycube(Polyform(CUBIC, (cells - side) | {r}), r2, _sub(r, r2))
            out.append((B, Bc))
    return out


# ---------------------------------------------------------------------------
# hull substitution and abundance

def _ext(cells) -> set:
    out = set(cells)
    for c in cells:
        out.update(_nb(c))
    return out


def _hull_contains(ext, cell) -> bool:
    return cell in ext and all(v in ext for v in _nb(cell))


def hull_substitutable(R: RootedPolycube, R2: RootedPolycube, any_orientation: bool = True) -> bool:
    """Sufficient test that ``R`` is substitutable by ``R2``.

    ``R2`` is moved so that its root and direction coincide with those of
    ``R``; with ``any_orientation`` every such placement is tried (8 of them),
    otherwise only the one fixing the coordinate frame (``R2`` must already
    have the same direction).  Returns True iff ``R2 minus its root`` lies in
    ``Hull(R minus its root)`` for some tried placement.
    """
    ext = _ext(R.cells - {R.root})
    rel = [_sub(c, R2.root) for c in R2.cells if c != R2.root]
    if any_orientation:
        mats = mapping(R2.dir, R.dir)
    else:
        if R2.dir != R.dir:
            return False
        mats = (((1, 0, 0), (0, 1, 0), (0, 0, 1)),)
    for m in mats:
        if all(_hull_contains(ext, _add(_mul(m, c), R.root)) for c in rel):
            return True
    return False


class IncompleteCatalogError(RuntimeError):
    pass


@dataclass
class Member:
    """A catalog entry in the root-origin, dir-``+z`` frame."""

    cells: tuple
    n: int
    n1: int
    height: int
    final: bool

    @property
    def rooted(self) -> RootedPolycube:
        return RootedPolycube(Polyform(CUBIC, self.cells), ORIGIN, UP)

    def to_dict(self) -> dict:
        return {"cells": [list(c) for c in self.cells], "n": self.n, "n1": self.n1,
                "height": self.height, "final": self.final}

    @classmethod
    def from_dict(cls, d) -> "Member":
        return cls(tuple(tuple(c) for c in d["cells"]), d["n"], d["n1"], d["height"], d["final"])


def _member(cells_frame: tuple, n1: int = None) -> Member:
    cs = set(cells_frame)
    if n1 is None:
        n1 = len(_leaves(cs))
    tip = UP
    final = not (tip in cs and _degree(cs, tip) == 1)
    return Member(cells_frame, len(cells_frame), n1, height(cs, ORIGIN), final)


@lru_cache(maxsize=None)
def _stabilizer() -> tuple:
    return mapping(UP, UP)


@lru_cache(maxsize=None)
def _delta(i: int) -> int:
    return delta_ell(CUBIC, i)


@dataclass
class Catalog:
    """Abundant rooted polycubes: ``A`` non-final and ``F`` final, by height.

    ``complete_size``: every abundant non-final rooted polycube with at most
    this many cells is present (used by :func:`is_abundant` with ``strict``).
    """

    A: dict = field(default_factory=dict)
    F: dict = field(default_factory=dict)
    complete_height: int = 0
    complete_size: int = 2
    incomplete: bool = False
    note: str = ""

    def __post_init__(self):
        self._subs = None

    def substitutes(self) -> list:
        """Non-final members (plus the domino) with all their frame orientations."""
        if self._subs is None:
            seen = {}
            dom = (ORIGIN, UP)
            seen[dom] = Member(dom, 2, 2, 1, False)
            for h in sorted(self.A):
                for key, m in self.A[h].items():
                    seen.setdefault(key, m)
            subs = []
            for key, m in seen.items():
                rel = [c for c in m.cells if c != ORIGIN]
                imgs = {tuple(sorted(_mul(g, c) for c in rel)) for g in _stabilizer()}
                subs.append((m.n, m.n1, key, list(imgs)))
            subs.sort()
            self._subs = subs
        return self._subs

    def invalidate(self):
        self._subs = None

    def add(self, m: Member, h: int):
        book = self.F if m.final else self.A
        book.setdefault(h, {})[m.cells] = m
        if not m.final:
            self._subs = None

    def members(self, final: bool = None):
        for book, fin in ((self.A, False), (self.F, True)):
            if final is not None and fin != final:
                continue
            for h in sorted(book):
                yield from book[h].values()

    def counts(self, h: int = None):
        h = h if h is not None else max([0] + list(self.A) + list(self.F))
        return ([len(self.A.get(i, {})) for i in range(1, h + 1)],
                [len(self.F.get(i, {})) for i in range(1, h + 1)])

    def contains(self, R: RootedPolycube) -> bool:
        key = R.canonical_key()
        return any(key in book.get(h, {}) for book in (self.A, self.F) for h in book)


def _substitute_sizes_needed(n: int, n1: int) -> int:
    """Largest size ``n' < n`` of a possible substitute, or 0 if none exists."""
    for m in range(n - 1, 1, -1):
        if ell(CUBIC, m) >= n1 - _delta(n - m):
            return m
    return 0


def _sparse_in_frame(cells: tuple, n: int, n1: int, subs) -> bool:
    ext = _ext(set(cells) - {ORIGIN})
    for m_n, m_n1, _, imgs in subs:
        if m_n >= n:
            break
        if n1 - m_n1 > _delta(n - m_n):
            continue
        for img in imgs:
            if all(_hull_contains(ext, c) for c in img):
                return True
    return False


def is_abundant(R: RootedPolycube, catalog: Catalog, strict: bool = True) -> bool:
    """Abundance of ``R`` relative to the catalog's non-final members.

    Substitutability is certified by the hull test only.  With ``strict`` an
    :class:`IncompleteCatalogError` is raised when a potential substitute size
    is not covered by the catalog.
    """
    if R.n == 2:
        return True
    if strict:
        need = _substitute_sizes_needed(R.n, R.n1)
        if need > catalog.complete_size:
            raise IncompleteCatalogError(
                f"abundance of a {R.n}-cell branch needs substitutes up to size {need}, "
                f"catalog is complete only up to size {catalog.complete_size}")
    cells = R.frame()
    return not _sparse_in_frame(cells, R.n, R.n1, catalog.substitutes())


# ---------------------------------------------------------------------------
# atomic rooted polycubes

ATOMIC_SLOTS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, -1))


def _atomic_frames(kind: str) -> list:
    """Frame cell tuples of atomic rooted polycubes (root + leaves, dir leaf +z)."""
    out = {}
    for mask in range(32):
        cells = [ORIGIN, UP] + [s for i, s in enumerate(ATOMIC_SLOTS) if mask >> i & 1]
        key = tuple(sorted(cells)) if kind == "fixed" else rooted_key(cells, ORIGIN, UP)
        out.setdefault(key, None)
    return sorted(out, key=lambda k: (len(k), k))


def atomic_rooted(kind: str = "free", include_domino: bool = True, relaxed: bool = False) -> list:
    """Height-1 rooted polycubes up to the chosen rooted equivalence.

    ``free``: isometries fixing root and direction (12 classes with the
    domino); ``fixed``: no symmetry besides translation, all directions
    (``6 * 32`` objects).  ``relaxed`` also identifies ``(T, r, u)`` with
    ``(T, r, -u)`` when ``r - u`` is a leaf (direction reversal).
    ``include_domino=False`` drops the rooted domino, the identity of the
    graft union.
    """
    if kind not in ("free", "fixed"):
        raise ValueError("kind must be 'free' or 'fixed'")
    if kind == "fixed":
        res = []
        for u in UNITS:
            for fr in _atomic_frames("fixed"):
                g = mapping(UP, u)[0]
                res.append(RootedPolycube(Polyform(CUBIC, [_mul(g, c) for c in fr]), ORIGIN, u))
        res = list({(r.dir, tuple(sorted(r.cells))): r for r in res}.values())
    else:
        frames = _atomic_frames("free")
        if relaxed:
            merged = {}
            for fr in frames:
                keys = [fr]
                if (0, 0, -1) in fr:
                    keys.append(rooted_key(fr, ORIGIN, (0, 0, -1)))
                merged.setdefault(min(keys), fr)
            frames = sorted(merged.values(), key=lambda k: (len(k), k))
        res = [RootedPolycube(Polyform(CUBIC, fr), ORIGIN, UP) for fr in frames]
    if not include_domino:
        res = [r for r in res if r.n > 2]
    return res


# ---------------------------------------------------------------------------
# catalog construction (height-stratified slot filling)

class BudgetExceeded(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _slot_maps(slot: tuple) -> tuple:
    """Matrices placing a frame member at ``slot`` with its dir pointing to the origin."""
    return mapping(UP, _neg(slot))


def _placements(m: Member, slot: tuple) -> list:
    """Distinct placements of ``m`` at ``slot``: (new cells, blocked neighbourhood)."""
    out = {}
    for g in _slot_maps(slot):
        cells = frozenset(_add(_mul(g, c), slot) for c in m.cells)
        if cells in out:
            continue
        new = cells - {ORIGIN, slot}
        block = set(new)
        for c in new:
            block.update(_nb(c))
        block.discard(ORIGIN)
        block.discard(slot)
        out[cells] = (new, frozenset(block))
    return list(out.values())


def _base_frames(seed: str) -> list:
    frames = [f for f in _atomic_frames("free") if len(f) > 2]
    if seed == "5-6":
        frames = [f for f in frames if len(f) - 1 in (5, 6)]
    elif seed != "all":
        raise ValueError("seed must be 'all' or '5-6'")
    return frames


def abundant_branches(h: int, seed: str = "all", max_size: int = None, max_members: int = None,
                      time_budget: float = None, out_dir=None, resume: bool = False,
                      progress=None) -> Catalog:
    """Height-stratified construction of abundant rooted polycubes.

    Height ``i`` members are built from an atomic base by filling each of its
    non-direction leaf slots either with nothing or with a non-final catalog
    member of height ``< i`` (at least one of height ``i - 1``); filling the
    direction slot too yields final members.  Candidates are classified in
    increasing size so that every smaller substitute is already known.
    """
    if h < 1:
        raise ValueError("height must be at least 1")
    start = time.monotonic()
    cat = Catalog()
    first = 1
    if resume and out_dir is not None and (Path(out_dir) / "manifest.json").exists():
        cat, done = load_catalog(out_dir)
        first = done + 1
        if cat.incomplete:
            raise BudgetExceeded("cannot resume from an incomplete catalog")
    bases = _base_frames(seed)
    placements = {}

    def options(slot, max_height):
        res = []
        for hh in range(1, max_height + 1):
            for m in cat.A.get(hh, {}).values():
                key = (m.cells, slot)
                if key not in placements:
                    placements[key] = _placements(m, slot)
                res.extend((m, hh, p) for p in placements[key])
        return res

    for i in range(first, h + 1):
        cand = {}
        for base in bases:
            slots = [c for c in base if c not in (ORIGIN, UP)]
            if i == 1:
                cells = set(base)
                cand[rooted_key(cells, ORIGIN, UP)] = (len(cells), len(cells) - 1)
                continue
            opts = {s: options(s, i - 1) for s in slots + [UP]}
            _fill(base, slots, opts, i, cand, max_size, start, time_budget)
        order = sorted(cand.items(), key=lambda kv: (kv[1][0], kv[0]))
        for key, (n, n1) in order:
            if time_budget is not None and time.monotonic() - start > time_budget:
                cat.incomplete = True
                cat.note = f"time budget exhausted while classifying height {i}"
                return _finish(cat, i - 1, out_dir)
            m = _member(key, n1)
            if m.height != i:
                continue
            if n == 2 or not _sparse_in_frame(key, n, n1, cat.substitutes()):
                cat.add(m, i)
                if max_members is not None and sum(len(b) for bk in (cat.A, cat.F) for b in bk.values()) > max_members:
                    cat.incomplete = True
                    cat.note = f"member limit {max_members} exceeded at height {i}"
                    return _finish(cat, i - 1, out_dir)
        cat.A.setdefault(i, {})
        cat.F.setdefault(i, {})
        cat.complete_height = i
        cat.complete_size = i + 1
        if progress:
            progress(i, len(cat.A[i]), len(cat.F[i]), time.monotonic() - start)
        if out_dir is not None:
            save_catalog(cat, out_dir, i, seed)
    return cat


def _finish(cat, done, out_dir):
    cat.complete_height = max(done, 0)
    cat.complete_size = cat.complete_height + 1
    if out_dir is not None:
        save_catalog(cat, out_dir, done, None)
    return cat


def _fill(base, slots, opts, i, cand, max_size, start, budget):
    base_n = len(base)
    base_n1 = base_n - 1
    slot_list = slots + [UP]
    steps = 0

    def rec(k, occupied, n, n1, tall):
        nonlocal steps
        steps += 1
        if budget is not None and steps % 4096 == 0 and time.monotonic() - start > budget:
            raise BudgetExceeded("time budget exhausted")
        if k == len(slot_list):
            if tall:
                key = rooted_key(occupied, ORIGIN, UP)
                cand.setdefault(key, (n, n1))
            return
        slot = slot_list[k]
        rec(k + 1, occupied, n, n1, tall)     # keep the leaf
        others = occupied - {ORIGIN, slot}
        for m, hh, (new, block) in opts[slot]:
            nn = n + m.n - 2
            if max_size is not None and nn > max_size:
                continue
            if block.isdisjoint(others):
                rec(k + 1, occupied | new, nn, n1 + m.n1 - 2, tall or hh == i - 1)

    try:
        rec(0, frozenset(base), base_n, base_n1, False)
    except BudgetExceeded:
        raise


def save_catalog(cat: Catalog, out_dir, done: int, seed):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(1, done + 1):
        for tag, book in (("A", cat.A), ("F", cat.F)):
            path = out / f"{tag}_{i:02d}.jsonl"
            with open(path, "w") as fh:
                for m in sorted(book.get(i, {}).values(), key=lambda m: (m.n, m.cells)):
                    fh.write(json.dumps(m.to_dict(), separators=(",", ":")) + "\n")
    a, f = cat.counts(done)
    manifest = {"height": done, "A_counts": a, "F_counts": f, "seed": seed,
                "incomplete": cat.incomplete, "note": cat.note}
    tmp = out / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=1))
    os.replace(tmp, out / "manifest.json")


def load_catalog(out_dir):
    out = Path(out_dir)
    man = json.loads((out / "manifest.json").read_text())
    cat = Catalog(incomplete=man.get("incomplete", False), note=man.get("note", ""))
    done = man["height"]
    for i in range(1, done + 1):
        for tag, book in (("A", cat.A), ("F", cat.F)):
            book[i] = {}
            path = out / f"{tag}_{i:02d}.jsonl"
            if path.exists():
                for line in path.read_text().splitlines():
                    m = Member.from_dict(json.loads(line))
                    book[i][m.cells] = m
    cat.complete_height = done
    cat.complete_size = done + 1
    return cat, done


# ---------------------------------------------------------------------------
# size-stratified catalog (independent route for small sizes)

def size_catalog(max_size: int) -> Catalog:
    """All abundant non-final rooted polycubes with at most ``max_size`` cells.

    Built by size from the skeleton enumeration of trees with many leaves:
    a rooted polycube of size ``n >= 3`` with ``n1 - 2 <= Δℓ(n - 2)`` leaves
    is substitutable by the domino, so only leaf counts above that bound are
    enumerated.
    """
    from leafy.enumerate import trees_with_leaves
    cat = Catalog()
    for n in range(2, max_size + 1):
        lo = 2 if n == 2 else _delta(n - 2) + 3
        keys = {}
        for t in range(lo, ell(CUBIC, n) + 1):
            for T in trees_with_leaves(CUBIC, n, t):
                cells = T.cells
                lv = _leaves(cells)
                for r in cells:
                    for u in UNITS:
                        if _add(r, u) in lv:
                            keys.setdefault(rooted_key(cells, r, u), t)
        for key in sorted(keys):
            n1 = keys[key]
            if n == 2 or not _sparse_in_frame(key, n, n1, cat.substitutes()):
                m = _member(key, n1)
                cat.add(m, m.height)
        cat.complete_size = n
    return cat


# ---------------------------------------------------------------------------
# the fully leafed polycube family

SPECIAL_SIZES = (6, 7, 13, 19, 25)
PIECE_NAMES = ("R3", "R4", "R5", "R12")


def family_parameters(k: int) -> dict:
    """Decomposition ``k - 2 = 41 q + r`` and the piece exponents ``a..e``.

    ``b`` and ``c`` flag the residue of ``r - 10 (a + e)`` modulo 3; this
    agrees with the published index sets except at ``r = 10`` and ``r = 26``,
    where membership in the ``b`` set would overshoot the size by one.
    """
    if k < 2:
        raise ValueError("family_polycube needs k >= 2")
    q, r = divmod(k - 2, 41)
    a = int(r >= 10)
    e = int(r >= 26)
    s = r - 10 * (a + e)
    return {"q": q, "r": r, "a": a, "b": int(s % 3 == 1), "c": int(s % 3 == 2), "d": s // 3, "e": e}


def family_counts(p: dict) -> tuple:
    """``(n, n1)`` predicted by the graft arithmetic for the exponents ``p``."""
    n = 41 * p["q"] + 10 * (p["a"] + p["e"]) + p["b"] + 2 * p["c"] + 3 * p["d"] + 2
    n1 = 28 * p["q"] + 7 * (p["a"] + p["e"]) + p["c"] + 2 * p["d"] + 2
    return n, n1


def _piece(name: str) -> RootedPolycube:
    from leafy.fixtures import load_rooted
    return load_rooted(name)


def _thin(m: int) -> list:
    """Names of R3/R4/R5 pieces adding ``m`` cells."""
    return ["R3"] * int(m % 3 == 1) + ["R4"] * int(m % 3 == 2) + ["R5"] * (m // 3)


def chain_pieces(k: int) -> list:
    """Piece names of the small-piece product for ``k`` (the ``q`` factor omitted)."""
    p = family_parameters(k)
    return (["R12"] * p["a"] + ["R3"] * p["b"] + ["R4"] * p["c"] + ["R5"] * p["d"]
            + ["R12"] * p["e"])


def saturated_block(q: int, cut_far: bool = True) -> RootedPolycube:
    """Saturated chain of ``q`` crosses with its end leaf blocks cut back to stubs.

    Built from the 4-tree map on the straight 4-tree; with both ends cut it
    has ``41q + 2`` cells and ``28q + 2`` leaves, with one end cut ``41q + 15``
    and ``28q + 11``.  Rooted at the near stub, direction along the axis.
    """
    from leafy.saturated import linear_four_tree, phi_blocks
    if q < 1:
        raise ValueError("a saturated block needs q >= 1")
    cut = {(-1, 0, 0), (q, 0, 0)} if cut_far else {(-1, 0, 0)}
    cells = set()
    for c, block in phi_blocks(linear_four_tree(q)).items():
        if c not in cut:
            cells.update(block)
    return RootedPolycube(Polyform(CUBIC, cells), (-1, 0, 0), (-1, 0, 0))


def graft_chain(pieces: list) -> RootedPolycube:
    """Right fold ``P1 ◁ (P2 ◁ (... ◁ Pm))``.

    Consecutive copies of the same piece continue straight through the root
    and are joined with one more quarter turn about the graft axis, so that
    turns accumulate.  Other junctions take the first free direction and
    quarter turn giving a well-defined graft.  Only the outermost graft may be
    final; its result is returned as a :class:`Polyform`.
    """
    if not pieces:
        return rooted_domino()
    acc = pieces[-1]
    for idx in range(len(pieces) - 2, -1, -1):
        P = pieces[idx]
        same = pieces[idx + 1] is P
        free = P.free_directions()
        dirs = ([P.dir] if same and P.dir in free else []) + free
        for v in dirs:
            g0 = IDENTITY if acc.dir == v else mapping(acc.dir, v)[0]
            res = None
            for t in ([1] if same else [0, 1, 2, 3]):
                r = graft_union(P, acc.transformed(_matmul(rotation_about(v, t), g0)))
                if r.tag == "NonFinal" or (r.tag == "Final" and idx == 0):
                    res = r
                    break
            if res is not None:
                break
        else:
            raise ValueError(f"no well-defined graft at chain position {idx}")
        acc = res.payload
    return acc


def _matmul(a, b):
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3)) for i in range(3))


def _tree(x) -> Polyform:
    return x.tree if isinstance(x, RootedPolycube) else x


def family_polycube(k: int) -> Polyform:
    """Fully leafed tree-like polycube ``U_k`` of size ``k``."""
    if k < 2:
        raise ValueError("family_polycube needs k >= 2")
    if k in SPECIAL_SIZES:
        from leafy.fixtures import load_polyform
        return load_polyform(f"U{k}")
    p = family_parameters(k)
    q, r = p["q"], p["r"]
    pieces = {name: _piece(name) for name in PIECE_NAMES}
    if q == 0:
        return _tree(graft_chain([pieces[x] for x in chain_pieces(k)]))
    if r == 10:
        # the size-12 remainder does not fit on a stub: glue a fully leafed
        # 18-cell patch onto the r = 35 member of the previous period
        from leafy.fixtures import load_polyform
        base = family_polycube(k - 16)
        out = Polyform(CUBIC, base.cells | load_polyform("V18").cells)
    elif r >= 26:
        # one leaf block stays, the head piece sits on a spacer chain
        pieces["B"] = saturated_block(q, cut_far=False)
        out = _tree(graft_chain([pieces[x] for x in ["R12"] + _thin(r - 23) + ["B"]]))
    else:
        pieces["B"] = saturated_block(q)
        names = chain_pieces(k)
        # after a leading R12 the block trails the chain, otherwise it leads
        at = len(names) if p["a"] else 0
        out = _tree(graft_chain([pieces[x] for x in names[:at] + ["B"] + names[at:]]))
    if len(out) != k or not is_tree(out) or out.n1 != ell(CUBIC, k):
        raise AssertionError(f"family construction failed at k={k}")
    return out
