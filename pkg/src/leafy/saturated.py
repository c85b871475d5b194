"""Saturated trees: the cross map, 4-trees, the map ``phi`` and tri/hex counts.

A saturated polyomino of size ``4k+1`` is the union of ``k`` crosses hung on
the inflated copy of a tree of size ``k``; saturated polycubes of size
``41k+28`` are built by replacing every cell of a 4-tree by a block of 15 or
17 cells placed on a lattice of spacing 3.
"""

from __future__ import annotations

from collections import deque

from leafy.canon import canonical_cells
from leafy.lattice import LatticeKind, neighbor_function
from leafy.leaffn import is_saturated
from leafy.polyform import Polyform, degree_histogram, is_tree

CUBIC = LatticeKind.CUBIC
AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
UNITS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


class NotSaturatedError(ValueError):
    pass


class MalformedInputError(ValueError):
    pass


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(k, a):
    return tuple(k * x for x in a)


def _neg(a):
    return tuple(-x for x in a)


def _perp(d):
    """The two positive unit axes orthogonal to the unit vector ``d``."""
    return [a for a in AXES if not any(x * y for x, y in zip(a, d))]


# ---------------------------------------------------------------------------
# square lattice: the cross map

def cross_map(T: Polyform) -> Polyform:
    """Inflate a tree polyomino by 2 and complete every inflated cell to a cross."""
    if T.lattice is not LatticeKind.SQUARE:
        raise ValueError("cross_map expects a polyomino")
    if not T.cells or not is_tree(T):
        raise ValueError("cross_map expects a tree polyomino")
    cells = set()
    for x, y in T.cells:
        c = (2 * x, 2 * y)
        cells.add(c)
        cells.update(((c[0] + 1, c[1]), (c[0] - 1, c[1]), (c[0], c[1] + 1), (c[0], c[1] - 1)))
    return Polyform(LatticeKind.SQUARE, cells)


def cross_unmap(S: Polyform) -> Polyform:
    """Inverse of :func:`cross_map`: keep degree-4 cells and halve coordinates."""
    if S.lattice is not LatticeKind.SQUARE:
        raise ValueError("cross_unmap expects a polyomino")
    if not is_tree(S) or not is_saturated(S) or len(S) % 4 != 1:
        raise NotSaturatedError("cross_unmap expects a saturated tree polyomino of size 4k+1")
    deg = S.degrees()
    centres = [c for c, d in deg.items() if d > 2]
    if len(S) == 1 or not centres:
        raise NotSaturatedError("no cross centres found")
    x0, y0 = min(centres)
    out = []
    for x, y in centres:
        dx, dy = x - x0, y - y0
        if dx % 2 or dy % 2:
            raise NotSaturatedError("cross centres are not on a common sublattice of index 4")
        out.append((dx // 2, dy // 2))
    return Polyform(LatticeKind.SQUARE, out)


# ---------------------------------------------------------------------------
# hex and tri lattices

def count_saturated_2d(kind, half_size: int, sym: str = "free") -> int:
    """Number of saturated polyhexes (equivalently polyiamonds) of size ``2 * half_size``."""
    kind = LatticeKind.parse(kind)
    if kind not in (LatticeKind.HEX, LatticeKind.TRI):
        raise ValueError("count_saturated_2d covers the hex and tri lattices")
    if half_size < 1:
        raise ValueError(f"half size must be >= 1, got {half_size}")
    if sym == "free":
        return 2 if half_size == 5 else 1
    if sym != "fixed":
        raise ValueError(f"symmetry must be 'fixed' or 'free', got {sym!r}")
    return {1: 3, 2: 2, 3: 3, 5: 8}.get(half_size, 6)


def tri_cell_to_hex(c) -> tuple:
    """Truncate a triangle to the hexagon sitting at its centre.

    Triangle centres are a coset pair of an index-3 sublattice of the hex
    lattice; two images are adjacent exactly when the triangles share an edge.
    """
    x, y, o = c
    return (x + 2 * y + o, x - y)


def tri_to_hex(S: Polyform) -> Polyform:
    """Map a saturated polyiamond to a saturated polyhex with the same graph."""
    if S.lattice is not LatticeKind.TRI:
        raise ValueError("tri_to_hex expects a polyiamond")
    if not is_tree(S) or not is_saturated(S):
        raise NotSaturatedError("tri_to_hex expects a saturated polyiamond")
    return Polyform(LatticeKind.HEX, (tri_cell_to_hex(c) for c in S.cells))


def caterpillar_spine(S: Polyform) -> list:
    """Inner cells of a tree, or raise when they do not form a path."""
    deg = S.degrees()
    inner = {c for c, d in deg.items() if d > 1}
    nb = neighbor_function(S.lattice)
    ends = [c for c in inner if sum(v in inner for v in nb(c)) <= 1]
    if inner and len(ends) != 2 and len(inner) > 1:
        raise ValueError("inner cells do not form a path")
    return sorted(inner)


# ---------------------------------------------------------------------------
# 4-trees

class InvalidFourTreeError(ValueError):
    pass


def _cells_nb(cells, c):
    return [_add(c, u) for u in UNITS if _add(c, u) in cells]


def check_four_tree(P: Polyform) -> None:
    """Raise :class:`InvalidFourTreeError` unless ``P`` is a 4-tree."""
    if P.lattice is not CUBIC:
        raise InvalidFourTreeError("4-trees live on the cubic lattice")
    if len(P) < 2 or not is_tree(P):
        raise InvalidFourTreeError("a 4-tree is a tree with at least 2 cells")
    if len(P) % 3 != 2:
        raise InvalidFourTreeError(f"size {len(P)} is not 2 mod 3")
    for c in P.cells:
        nbs = _cells_nb(P.cells, c)
        if len(nbs) not in (1, 4):
            raise InvalidFourTreeError(f"cell {c} has degree {len(nbs)}")
        if len(nbs) == 4 and _normal(c, nbs) is None:
            raise InvalidFourTreeError(f"the neighbours of {c} are not coplanar")


def _normal(c, nbs):
    dirs = {_sub(v, c) for v in nbs}
    for a in AXES:
        if all(not any(x * y for x, y in zip(a, d)) for d in dirs):
            return a
    return None


class FourTree:
    """A validated 4-tree: a cubic tree whose inner cells are centres of coplanar crosses."""

    def __init__(self, P):
        if not isinstance(P, Polyform):
            P = Polyform(CUBIC, P)
        check_four_tree(P)
        self.polyform = P

    @property
    def cells(self):
        return self.polyform.cells

    @property
    def k(self) -> int:
        return (len(self.polyform) - 2) // 3

    def inner(self) -> list:
        return sorted(c for c in self.cells if len(_cells_nb(self.cells, c)) == 4)

    def normal(self, c):
        return _normal(c, _cells_nb(self.cells, c))

    def __len__(self):
        return len(self.polyform)

    def __eq__(self, other):
        return isinstance(other, FourTree) and self.polyform == other.polyform

    def __hash__(self):
        return hash(self.polyform)

    def __repr__(self):
        return f"FourTree(k={self.k}, cells={sorted(self.cells)!r})"


def four_tree_domino() -> FourTree:
    return FourTree(Polyform(CUBIC, [(0, 0, 0), (1, 0, 0)]))


def _grow_four_tree(cells: frozenset):
    """Turn one leaf into a cross centre in every possible way."""
    for leaf in cells:
        nbs = _cells_nb(cells, leaf)
        if len(nbs) != 1:
            continue
        d = _sub(leaf, nbs[0])
        for w in _perp(d):
            new = [_add(leaf, d), _add(leaf, w), _sub(leaf, w)]
            ok = True
            for c in new:
                if c in cells or any(v != leaf and v in cells for v in (_add(c, u) for u in UNITS)):
                    ok = False
                    break
            if ok:
                yield cells | frozenset(new)


def enumerate_4trees(k: int) -> list:
    """All free 4-trees made of ``k`` crosses (size ``3k+2``), canonical and sorted."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    level = {canonical_cells(CUBIC, [(0, 0, 0), (1, 0, 0)], True)}
    for _ in range(k):
        nxt = set()
        for t in level:
            for g in _grow_four_tree(frozenset(t)):
                nxt.add(canonical_cells(CUBIC, g, True))
        level = nxt
    return [FourTree(Polyform(CUBIC, t)) for t in sorted(level)]


def linear_four_tree(k: int) -> FourTree:
    """Crosses centred on consecutive cells of a line, in alternating planes."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return four_tree_domino()
    cells = [(-1, 0, 0), (k, 0, 0)]
    for i in range(k):
        cells.append((i, 0, 0))
        cells += [(i, 1, 0), (i, -1, 0)] if i % 2 == 0 else [(i, 0, 1), (i, 0, -1)]
    return FourTree(Polyform(CUBIC, cells))


# ---------------------------------------------------------------------------
# the map phi

# 15-cell leaf block: centre at the origin, attached through (-1,0,0) whose
# neighbour (-2,0,0) is the shared cell; ``a`` is the z-axis, ``b`` the y-axis
LEAF_BLOCK = ((-2, 0, 0), (-1, 0, 1), (-1, 0, -1), (-1, 0, 0), (0, 2, 0), (0, -2, 0),
              (0, 1, 1), (0, 1, -1), (0, -1, 1), (0, -1, -1), (0, 1, 0), (0, -1, 0),
              (0, 0, 0), (1, 1, 0), (1, -1, 0))


def _leaf_block(y, d, a, b) -> list:
    """Leaf block of a 4-tree leaf ``y`` entered along ``d`` with axes ``a``, ``b``."""
    c = _scale(3, y)
    out = []
    for u, v, w in LEAF_BLOCK:
        out.append(tuple(c[i] + u * d[i] + v * b[i] + w * a[i] for i in range(3)))
    return out


def _inner_block(x, n) -> list:
    """17-cell block of a cross centre ``x`` whose plane has normal ``n``."""
    c = _scale(3, x)
    out = [c]
    for e in UNITS:
        if any(p * q for p, q in zip(e, n)):
            continue
        arm = _add(c, e)
        out += [arm, _add(arm, e), _add(arm, n), _sub(arm, n)]
    return out


def phi_blocks(T: FourTree) -> dict:
    """Block of every cell of ``T`` (keyed by cell)."""
    cells = T.cells
    blocks = {}
    if len(cells) == 2:
        x, y = sorted(cells)
        e = _sub(y, x)
        u, w = _perp(e)
        blocks[x] = _leaf_block(x, _neg(e), u, w)
        blocks[y] = _leaf_block(y, e, w, u)
        return blocks
    for c in cells:
        nbs = _cells_nb(cells, c)
        if len(nbs) == 4:
            blocks[c] = _inner_block(c, T.normal(c))
        else:
            p = nbs[0]
            d = _sub(c, p)
            n = T.normal(p)
            f = next(a for a in _perp(d) if a != tuple(abs(v) for v in n))
            blocks[c] = _leaf_block(c, d, f, n)
    return blocks


def phi(T) -> Polyform:
    """Saturated polycube of size ``41k+28`` built from a 4-tree of ``k`` crosses."""
    if not isinstance(T, FourTree):
        T = FourTree(T)
    out = set()
    for b in phi_blocks(T).values():
        out.update(b)
    return Polyform(CUBIC, out)


def _cross_branch_key():
    """Rooted key of the branch cut from phi(cross) along one arm edge."""
    from leafy.graft import rooted_key
    S = phi(linear_four_tree(1))
    # cross centre (0,0,0); arm towards the end leaf (-1,0,0)
    root, shared = (-1, 0, 0), (-2, 0, 0)
    comp = _component(S.cells, root, shared)
    return rooted_key(comp | {shared}, root, _sub(shared, root)), len(comp)


_BRANCH = None


def _branch_key():
    global _BRANCH
    if _BRANCH is None:
        _BRANCH = _cross_branch_key()
    return _BRANCH


def _component(cells, start, blocked) -> set:
    seen = {start}
    dq = deque([start])
    while dq:
        c = dq.popleft()
        for u in UNITS:
            v = _add(c, u)
            if v in cells and v != blocked and v not in seen:
                seen.add(v)
                dq.append(v)
    return seen


def _subtree_sizes(cells):
    """Parent map and subtree sizes of ``cells`` rooted at its least cell."""
    root = min(cells)
    parent = {root: None}
    order = [root]
    for c in order:
        for u in UNITS:
            v = _add(c, u)
            if v in cells and v not in parent:
                parent[v] = c
                order.append(v)
    size = {c: 1 for c in cells}
    for c in reversed(order[1:]):
        size[parent[c]] += size[c]
    return parent, size


def _find_cross_branch(cells):
    """An oriented edge ``(root, shared)`` cutting off a 56-cell cross branch."""
    from leafy.graft import rooted_key
    key, m = _branch_key()
    parent, size = _subtree_sizes(cells)
    n = len(cells)
    for c in sorted(cells):
        p = parent[c]
        if p is None:
            continue
        for root, shared, s in ((c, p, size[c]), (p, c, n - size[c])):
            if s != m:
                continue
            comp = _component(cells, root, shared)
            if rooted_key(comp | {shared}, root, _sub(shared, root)) == key:
                return root, shared, comp
    return None


def _align(A, B):
    """An isometry ``(matrix, translation)`` mapping cell set ``A`` onto ``B``, or None."""
    from leafy.graft import MATRICES, _mul
    B = set(B)
    bmin = min(B)
    for m in MATRICES:
        img = [_mul(m, c) for c in A]
        t = _sub(bmin, min(img))
        if all(_add(c, t) in B for c in img):
            return m, t
    return None


def _inverse_matrix(m):
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))


def phi_inverse(S: Polyform) -> FourTree:
    """The 4-tree ``T`` with ``phi(T)`` isometric to ``S``."""
    if S.lattice is not CUBIC:
        raise MalformedInputError("phi_inverse expects a polycube")
    if len(S) < 28 or (len(S) - 28) % 41:
        raise MalformedInputError(f"size {len(S)} is not of the form 41k+28")
    if not is_tree(S) or not is_saturated(S):
        raise MalformedInputError("phi_inverse expects a saturated tree-like polycube")
    T, _ = _phi_inverse(frozenset(S.cells))
    return T


def _phi_inverse(cells):
    """Return ``(T, (m, t))`` with ``m * phi(T) + t == cells``."""
    if len(cells) == 28:
        T = four_tree_domino()
        g = _align(phi(T).cells, cells)
        if g is None:
            raise MalformedInputError("the 28-cell base is not the image of the domino")
        return T, g
    found = _find_cross_branch(cells)
    if found is None:
        raise MalformedInputError("no cross branch found")
    root, shared, comp = found
    d = _sub(root, shared)
    rest = cells - comp
    # the leaf block's root-side leaves avoid the axis already used at ``shared``
    a = next(w for w in _perp(d) if _add(shared, w) not in rest and _sub(shared, w) not in rest)
    b = next(w for w in _perp(d) if w != a)
    centre = _add(root, d)
    leaf = [tuple(centre[i] + u * d[i] + v * b[i] + w * a[i] for i in range(3))
            for u, v, w in LEAF_BLOCK]
    smaller = rest | frozenset(leaf)
    T0, (m, t) = _phi_inverse(smaller)
    mi = _inverse_matrix(m)
    from leafy.graft import _mul
    x3 = _mul(mi, _sub(centre, t))
    if any(v % 3 for v in x3):
        raise MalformedInputError("branch centre is off the block lattice")
    x = tuple(v // 3 for v in x3)
    cells0 = T0.cells
    nbs = _cells_nb(cells0, x)
    if x not in cells0 or len(nbs) != 1:
        raise MalformedInputError("substituted branch does not sit on a leaf")
    dx = _sub(x, nbs[0])
    for w in _perp(dx):
        new = [_add(x, dx), _add(x, w), _sub(x, w)]
        try:
            T = FourTree(Polyform(CUBIC, cells0 | frozenset(new)))
        except InvalidFourTreeError:
            continue
        g = _align(phi(T).cells, cells)
        if g is not None:
            return T, g
    raise MalformedInputError("no cross reproduces the input")


def phi_piece_boxes(T: FourTree) -> bool:
    """Every block lies in the 3x3x3 cube around its centre plus the six face cells at distance 2."""
    for c, block in phi_blocks(T).items():
        centre = _scale(3, c)
        for cell in block:
            off = sorted(abs(v) for v in _sub(cell, centre))
            if not (off[2] <= 1 or (off[2] == 2 and off[1] == 0)):
                return False
    return True


# ---------------------------------------------------------------------------
# saturated witnesses

def saturated_witnesses(kind, n: int, sym: str = "free") -> list:
    """Saturated trees of size ``n`` by exhaustive search (small sizes only)."""
    from leafy.enumerate import saturated_trees
    return saturated_trees(kind, n, sym)


def saturated_count(kind, n: int, sym: str = "free") -> int:
    return len(saturated_witnesses(kind, n, sym))


def describe(P: Polyform) -> dict:
    h = degree_histogram(P)
    return {"size": len(P), "leaves": h.n1, "degrees": {str(k): v for k, v in sorted(h.items())}}
