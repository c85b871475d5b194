"""Vectorised canonical forms for batches of equal-size cell sets.

A canonical form is computed per image under the point group (or only the
identity for fixed polyforms): translate so that the lexicographically
smallest cell is the origin, sort the cells, and keep the lexicographically
smallest sorted list among all images.  Cells are packed into integers whose
numeric order equals the lexicographic order on coordinate tuples, so sorting
and comparing lists reduces to integer array operations.
"""

from __future__ import annotations

import numpy as np

from leafy.lattice import LatticeKind, images_array

_MAX_KEY = 2 ** 62


def _pack(coords: np.ndarray, base: int) -> np.ndarray:
    d = coords.shape[-1]
    key = coords[..., 0].astype(np.int64)
    for i in range(1, d):
        key = key * base + coords[..., i]
    return key


def _translatable(kind: LatticeKind, d: int) -> int:
    # tri orientation bits are never translated
    return 2 if kind is LatticeKind.TRI else d


def canonical_keys(kind: LatticeKind, coords: np.ndarray, free: bool, span: int = None):
    """Canonical keys of a batch of cell sets.

    ``coords`` has shape ``(C, n, D)``.  Returns ``(keys, offset, base)``
    where ``keys`` is a ``(C, n)`` int64 array of packed, sorted cells of the
    canonical representative; decode with :func:`decode_keys`.  A fixed
    ``span`` (upper bound on the coordinate extent, e.g. ``n`` for connected
    sets) makes keys comparable across batches.
    """
    coords = np.asarray(coords, dtype=np.int64)
    c, n, d = coords.shape
    t = _translatable(kind, d)
    if free:
        imgs = images_array(kind, coords)                     # (C, G, n, D)
    else:
        imgs = coords[:, None, :, :]
    imgs = imgs.copy()
    lo = imgs[..., :t].min(axis=2, keepdims=True)
    imgs[..., :t] -= lo
    actual = int(imgs.max()) if imgs.size else 0
    if span is None:
        span = actual
    elif actual > span:
        raise ValueError(f"span {span} smaller than coordinate extent {actual}")
    base0 = span + 1
    base = 2 * span + 1
    if base ** d >= _MAX_KEY:
        raise OverflowError("cell coordinates too spread out for packed keys")
    k0 = _pack(imgs, base0)                                   # (C, G, n)
    first = k0.argmin(axis=2)                                 # lexicographically smallest cell
    anchor = np.take_along_axis(imgs, first[..., None, None], axis=2)
    imgs[..., :t] -= anchor[..., :t]
    imgs[..., :t] += span
    if kind is LatticeKind.TRI:
        imgs[..., 2] += span
    keys = np.sort(_pack(imgs, base), axis=2)                 # (C, G, n)
    g = keys.shape[1]
    if g == 1:
        return keys[:, 0, :], span, base
    mask = np.ones((c, g), dtype=bool)
    big = np.iinfo(np.int64).max
    for j in range(n):
        col = np.where(mask, keys[:, :, j], big)
        mask &= col == col.min(axis=1, keepdims=True)
    best = mask.argmax(axis=1)
    return keys[np.arange(c), best, :], span, base


def decode_keys(keys: np.ndarray, d: int, offset: int, base: int, kind: LatticeKind) -> np.ndarray:
    """Inverse of the packing used by :func:`canonical_keys`; returns (..., n, d)."""
    keys = np.asarray(keys, dtype=np.int64)
    out = np.empty(keys.shape + (d,), dtype=np.int64)
    rest = keys.copy()
    for i in range(d - 1, -1, -1):
        out[..., i] = rest % base
        rest //= base
    out -= offset
    return out


def canonical_cells(kind: LatticeKind, cells, free: bool) -> tuple:
    """Canonical sorted cell tuple of a single (non-empty) cell collection."""
    arr = np.array(sorted(cells), dtype=np.int64)[None]
    keys, off, base = canonical_keys(kind, arr, free)
    dec = decode_keys(keys[0], arr.shape[2], off, base, kind)
    return tuple(tuple(int(v) for v in row) for row in dec)
