import pytest

from leafy import enumerate as E
from leafy.leaffn import ell
from leafy.polyform import Polyform, degree_histogram, is_tree

import oracles

SMALL = {"square": 7, "hex": 6, "tri": 8, "cubic": 5}


@pytest.mark.parametrize("kind", list(SMALL))
@pytest.mark.parametrize("sym", ["free", "fixed"])
def test_tree_counts_match_plain_growth(kind, sym):
    for n in range(1, SMALL[kind] + 1):
        got = {P.sorted_cells() and tuple(P.sorted_cells()) for P in E.enumerate_trees(kind, n, sym)}
        assert got == set(oracles.trees(kind, n, sym == "free")), (kind, n, sym)


@pytest.mark.parametrize("kind", list(SMALL))
def test_max_leaves_matches_reference(kind):
    for n in range(2, SMALL[kind] + 1):
        ref = max(oracles.leaves(kind, t) for t in oracles.trees(kind, n))
        rep = E.max_leaves(kind, n, witness_cap=None)
        assert rep.max_leaves == ref
        assert rep.witness_count == sum(1 for t in oracles.trees(kind, n) if oracles.leaves(kind, t) == ref)
        assert all(w.n1 == ref and is_tree(w) for w in rep.witnesses)


@pytest.mark.parametrize("kind", list(SMALL))
def test_skeleton_route_matches_brute_force(kind):
    for n in range(2, SMALL[kind] + 2):
        all_trees = list(E.enumerate_trees(kind, n))
        for t in range(2, n + 1):
            want = sorted(tuple(P.sorted_cells()) for P in all_trees if P.n1 == t)
            got = sorted(tuple(P.sorted_cells()) for P in E.trees_with_leaves(kind, n, t))
            assert got == want, (kind, n, t)


def test_fixed_witnesses_are_orbits():
    free = E.trees_with_leaves("square", 9, 6, "free")
    fixed = E.trees_with_leaves("square", 9, 6, "fixed")
    assert len(fixed) == sum(E.orbit_size(P) for P in free)


def test_degree_sum_identity_on_enumerated_trees():
    for kind, n in (("square", 8), ("hex", 7), ("tri", 9), ("cubic", 6)):
        for P in E.enumerate_trees(kind, n):
            h = degree_histogram(P)
            assert sum(d * c for d, c in h.items()) == 2 * (n - 1)


def test_workers_do_not_change_results():
    E.clear_cache()
    one = E.count_trees("square", 9, "free", workers=1)
    E.clear_cache()
    two = E.count_trees("square", 9, "free", workers=2)
    assert one == two


def test_memory_limit(monkeypatch):
    E.clear_cache()
    monkeypatch.setenv("LEAFY_MAX_MEM_MB", "0.001")
    with pytest.raises(E.LimitExceededError):
        E.count_trees("square", 8)
    monkeypatch.delenv("LEAFY_MAX_MEM_MB")
    E.clear_cache()
    assert E.count_trees("square", 4) == 4


def test_bad_arguments():
    with pytest.raises(ValueError):
        E.max_leaves("square", 1)
    with pytest.raises(ValueError):
        list(E.enumerate_trees("square", 3, "mirror"))


@pytest.mark.parametrize("n", range(2, 201))
def test_family_polyomino(n):
    P = E.family_polyomino(n)
    assert len(P) == n and is_tree(P) and P.n1 == ell("square", n)


@pytest.mark.parametrize("kind", ["hex", "tri"])
def test_family_linear(kind):
    for n in range(2, 201):
        P = E.family_linear(kind, n)
        assert len(P) == n and is_tree(P) and P.n1 == ell(kind, n), n


def test_family_linear_rejects_square():
    with pytest.raises(ValueError):
        E.family_linear("square", 5)


def test_fully_leafed_witness_counts_are_positive():
    for kind, hi in SMALL.items():
        for n in range(2, hi + 1):
            ws = E.fully_leafed(kind, n)
            assert ws and all(isinstance(w, Polyform) and w.n1 == ell(kind, n) for w in ws)
