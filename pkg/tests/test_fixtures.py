import pytest

from leafy.fixtures import load_polyform, load_rooted, metadata
from leafy.leaffn import ell, is_saturated
from leafy.polyform import Polyform, canonical_form, degree_histogram, is_tree
from leafy.saturated import LEAF_BLOCK, four_tree_domino, phi, phi_blocks

ROOTED = {"R3": (3, 2), "R4": (4, 3), "R5": (5, 4), "R12": (12, 9), "U15": (15, 11)}
PLAIN = ("U6", "U7", "U13", "U17", "U19", "U25", "V18")


@pytest.mark.parametrize("name", list(ROOTED) + list(PLAIN))
def test_fixture_matches_its_recorded_checks(name):
    P = load_polyform(name)
    meta = metadata(name)["checks"]
    assert len(P) == meta["size"]
    assert P.n1 == meta["leaves"]
    assert is_tree(P) == meta["is_tree"] is True
    assert {str(k): v for k, v in degree_histogram(P).items()} == meta["degrees"]
    assert (P.n1 == ell("cubic", len(P))) == meta["fully_leafed"]


@pytest.mark.parametrize("name", list(ROOTED))
def test_rooted_pieces(name):
    R = load_rooted(name)
    assert (R.n, R.n1) == ROOTED[name]
    assert not R.is_final


@pytest.mark.parametrize("name", ["U6", "U7", "U13", "U19", "U25"])
def test_special_sizes_are_saturated(name):
    assert is_saturated(load_polyform(name))


def test_r12_free_direction():
    R = load_rooted("R12")
    assert R.free_directions() == [tuple(-x for x in R.dir)]


def test_leaf_block_and_cross_block_come_from_phi():
    U15 = load_polyform("U15")
    assert U15.cells == frozenset(LEAF_BLOCK)
    blocks = list(phi_blocks(four_tree_domino()).values())
    for b in blocks:
        assert canonical_form(Polyform("cubic", b)) == canonical_form(U15)
    assert len(set(blocks[0]) & set(blocks[1])) == 2
    assert len(phi(four_tree_domino())) == 28
    U17 = load_polyform("U17")
    assert len(U17) == 17 and degree_histogram(U17) == {1: 12, 4: 5}
