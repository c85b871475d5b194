import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafy import saturated as S
from leafy.enumerate import enumerate_trees, orbit_size, saturated_trees, trees_with_leaves
from leafy.leaffn import ell, is_saturated
from leafy.polyform import Polyform, canonical_form, degree_histogram, is_tree

import oracles
from helpers import random_tree


# ---------------------------------------------------------------------------
# cross map


def test_cross_map_of_a_cell_is_the_cross():
    X = S.cross_map(Polyform("square", [(0, 0)]))
    assert X.cells == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10 ** 9))
def test_cross_map_round_trip(n, seed):
    T = random_tree(random.Random(seed), "square", n)
    X = S.cross_map(T)
    assert len(X) == 4 * n + 1 and is_tree(X) and is_saturated(X)
    back = S.cross_unmap(X)
    assert canonical_form(back, "fixed") == canonical_form(T, "fixed")


@pytest.mark.parametrize("k", range(1, 5))
def test_cross_bijection_counts(k):
    for sym in ("free", "fixed"):
        sat = saturated_trees("square", 4 * k + 1, sym)
        assert len(sat) == len(oracles.trees("square", k, sym == "free"))
        images = {canonical_form(S.cross_map(T), sym) for T in enumerate_trees("square", k, sym)}
        assert images == {canonical_form(X, sym) for X in sat}


def test_cross_unmap_rejects_non_saturated():
    with pytest.raises(S.NotSaturatedError):
        S.cross_unmap(Polyform("square", [(i, 0) for i in range(5)]))
    with pytest.raises(ValueError):
        S.cross_map(Polyform("hex", [(0, 0)]))


# ---------------------------------------------------------------------------
# hex and tri


def brute_saturated(kind, n):
    """Free saturated trees of size ``n`` from the oracle's plain growth."""
    return [t for t in oracles.trees(kind, n) if oracles.leaves(kind, t) == n // 2 + 1]


@pytest.mark.parametrize("kind", ["hex", "tri"])
@pytest.mark.parametrize("k", range(1, 5))
def test_count_saturated_2d_matches_brute_force(kind, k):
    sat = brute_saturated(kind, 2 * k)
    assert S.count_saturated_2d(kind, k, "free") == len(sat)
    fixed = sum(orbit_size(Polyform(kind, t)) for t in sat)
    assert S.count_saturated_2d(kind, k, "fixed") == fixed


def test_count_saturated_2d_errors():
    with pytest.raises(ValueError):
        S.count_saturated_2d("square", 2)
    with pytest.raises(ValueError):
        S.count_saturated_2d("hex", 0)


@pytest.mark.parametrize("k", range(1, 7))
def test_tri_to_hex_preserves_the_tree(k):
    hexes = {canonical_form(P) for P in saturated_trees("hex", 2 * k)}
    images = set()
    for P in saturated_trees("tri", 2 * k):
        H = S.tri_to_hex(P)
        assert H.lattice.value == "hex" and is_tree(H) and is_saturated(H)
        assert degree_histogram(H) == degree_histogram(P)
        # the cell map is a graph isomorphism onto its image
        for a in P.cells:
            for b in P.cells:
                adj_t = b in oracles.nbrs("tri", a)
                adj_h = S.tri_cell_to_hex(b) in oracles.nbrs("hex", S.tri_cell_to_hex(a))
                assert adj_t == adj_h
        images.add(canonical_form(H))
    assert images == hexes


def test_tri_to_hex_rejects_unsaturated():
    with pytest.raises(S.NotSaturatedError):
        S.tri_to_hex(Polyform("tri", [(0, 0, 0), (0, 0, 1), (1, 0, 0)]))


def test_caterpillar_spine():
    P = saturated_trees("hex", 8)[0]
    spine = S.caterpillar_spine(P)
    assert len(spine) == 3


# ---------------------------------------------------------------------------
# 4-trees and the saturated polycube map


def four_trees_by_filtering(k):
    """4-trees of ``k`` crosses, read off the fully enumerated trees."""
    n = 3 * k + 2
    out = set()
    for P in trees_with_leaves("cubic", n, 2 * k + 2):
        try:
            S.check_four_tree(P)
        except S.InvalidFourTreeError:
            continue
        out.add(canonical_form(P))
    return out


@pytest.mark.parametrize("k", range(0, 4))
def test_enumerate_4trees_against_filtering(k):
    got = {canonical_form(T.polyform) for T in S.enumerate_4trees(k)}
    assert got == four_trees_by_filtering(k)


def test_enumerate_4trees_against_brute_force_k2():
    want = set()
    for P in enumerate_trees("cubic", 8):
        try:
            S.check_four_tree(P)
        except S.InvalidFourTreeError:
            continue
        want.add(canonical_form(P))
    assert {canonical_form(T.polyform) for T in S.enumerate_4trees(2)} == want


def test_four_tree_validation():
    with pytest.raises(S.InvalidFourTreeError):
        S.FourTree(Polyform("cubic", [(0, 0, 0), (1, 0, 0), (2, 0, 0)]))
    with pytest.raises(S.InvalidFourTreeError):
        # degree-4 centre with non-coplanar arms
        S.FourTree(Polyform("cubic", [(0, 0, 0), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    T = S.linear_four_tree(3)
    assert T.k == 3 and len(T.inner()) == 3


@pytest.mark.parametrize("k", range(0, 4))
def test_phi_structure(k):
    seen = set()
    for T in S.enumerate_4trees(k):
        U = S.phi(T)
        assert len(U) == 41 * k + 28 and U.n1 == 28 * k + 20
        assert is_tree(U) and is_saturated(U)
        assert S.phi_piece_boxes(T)
        seen.add(canonical_form(U))
        back = S.phi_inverse(U)
        assert canonical_form(back.polyform) == canonical_form(T.polyform)
    assert len(seen) == len(S.enumerate_4trees(k))


def test_phi_inverse_on_moved_input():
    T = S.linear_four_tree(2)
    from leafy.lattice import isometry_group
    g = isometry_group("cubic")[17]
    U = S.phi(T).map(g).translate((4, -7, 2))
    assert canonical_form(S.phi_inverse(U).polyform) == canonical_form(T.polyform)


def test_phi_inverse_rejects_bad_input():
    with pytest.raises(S.MalformedInputError):
        S.phi_inverse(Polyform("cubic", [(i, 0, 0) for i in range(28)]))
    with pytest.raises(S.MalformedInputError):
        S.phi_inverse(Polyform("cubic", [(0, 0, 0), (1, 0, 0)]))


def test_phi_domino_degrees():
    U = S.phi(S.four_tree_domino())
    assert S.describe(U) == {"size": 28, "leaves": 20, "degrees": {"1": 20, "3": 2, "4": 2, "5": 4}}


def test_saturated_witnesses_cubic_13():
    ws = S.saturated_witnesses("cubic", 13)
    assert ws and all(w.n1 == ell("cubic", 13) for w in ws)
    assert S.saturated_count("cubic", 12) == 0
