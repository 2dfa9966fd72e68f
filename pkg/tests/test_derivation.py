import numpy as np
import pytest
from hypothesis import given, settings

from conftest import dyck_words, random_repairing
from dyckpair.derivation import (LEFT, RIGHT, TimedTree, balance_check, check_derivation,
                                 derivation_from_repairing, derivations_of, derived_word,
                                 factor_fragment, factor_widths, fragment_edges, fragment_width,
                                 from_json, from_text, l_oracle, l_profile, repairing_from_derivation,
                                 to_json, to_text, traversal_division, window_factors)
from dyckpair.errors import CapExceeded, InvalidRepairing, NotBinaryTree
from dyckpair.repairing import width
from dyckpair.words import as_word, is_symmetric, max_height, random_dyck, z_word

PLAY_Z2 = [(2, 3), (4, 6), (1, 5)]
PLAY_Z3 = [(3, 4), (2, 6), (9, 10), (5, 7), (11, 12), (8, 13), (1, 14)]


def four_edge_tree():
    t = TimedTree()
    t.add(0)  # e1
    e2 = t.add(0)
    t.add(e2)  # e3
    t.add(e2)  # e4
    return t


def test_traversal_example():
    t = four_edge_tree()
    assert [e for e, _ in t.traversal()] == [1, 1, 2, 3, 3, 4, 4, 2]
    assert TimedTree().traversal() == []
    path = TimedTree()
    path.add(path.add(0))
    assert [e for e, _ in path.traversal()] == [1, 2, 2, 1]


def test_derivation_table_example():
    t = four_edge_tree()
    trav = t.traversal()
    for pos, s in [(1, 1), (3, -1), (4, 1), (7, -1)]:
        t.signs[trav[pos - 1]] = s
    check_derivation(t)
    assert derived_word(t) == "+-+-"
    assert derived_word(TimedTree()) == ""


def test_bad_derivation():
    t = TimedTree()
    e = t.add(0, left=-1, right=1)
    with pytest.raises(InvalidRepairing):
        check_derivation(t)
    t = TimedTree()
    t.add(0)
    t.add(0)
    with pytest.raises(NotBinaryTree):
        t.add(0)


def test_play_z2_tree():
    tree = derivation_from_repairing(z_word(2), PLAY_Z2)
    assert tree.width() == 2
    assert derived_word(tree) == "++-+--"
    assert repairing_from_derivation(tree) == PLAY_Z2
    single = TimedTree()
    single.add(0, left=1, right=-1)
    assert repairing_from_derivation(single) == [(1, 2)]


def test_play_z2_fragment():
    w = as_word("++-+--+-")
    tree = derivation_from_repairing(w, PLAY_Z2 + [(7, 8)])
    assert fragment_width(tree, factor_fragment(tree, 4, 7)) == 2
    whole = fragment_edges(tree, 0, len(tree.traversal()) - 1)
    assert fragment_width(tree, whole) == tree.width()
    assert fragment_width(tree, fragment_edges(tree, 0, 0)) == 1


def test_serialization_round_trip():
    tree = derivation_from_repairing(z_word(3), PLAY_Z3)
    assert to_json(from_json(to_json(tree))) == to_json(tree)
    assert to_text(from_text(to_text(tree))) == to_text(tree)
    assert repairing_from_derivation(from_text(to_text(tree))) == repairing_from_derivation(tree)


@settings(max_examples=150, deadline=None)
@given(dyck_words(max_pairs=32, min_pairs=1))
def test_round_trip_and_gap(w):
    p = random_repairing(w, np.random.default_rng(len(w) * 7 + 1))
    for binarize in ("left", "right"):
        tree = derivation_from_repairing(w, p, binarize)
        check_derivation(tree)
        assert derived_word(tree) == str(w)
        assert repairing_from_derivation(tree) == [tuple(x) for x in p]
        wp = width(w, p)
        assert wp <= tree.width() <= wp + 1


@settings(max_examples=60, deadline=None)
@given(dyck_words(max_pairs=10, min_pairs=1))
def test_traversal_division(w):
    p = random_repairing(w, np.random.default_rng(1))
    tree = derivation_from_repairing(w, p)
    trav = tree.traversal()
    assert sorted(e for e, _ in trav) == sorted(list(tree.edges) * 2)
    for t in range(1, max(tree.depth) + 1):
        assert traversal_division(tree, t)


@settings(max_examples=60, deadline=None)
@given(dyck_words(max_pairs=7, min_pairs=1))
def test_balance_inequality(w):
    rng = np.random.default_rng(len(w))
    p = random_repairing(w, rng)
    tree = derivation_from_repairing(w, p)
    top = max(tree.depth)
    for t1 in range(1, top + 1):
        for t2 in range(t1, top + 1):
            m = len(window_factors(tree, t1, t2))
            for a in range(m + 1):
                for b in range(a, m + 1):
                    for c in range(b, m + 1):
                        assert balance_check(tree, t1, t2, (a, b, c))["holds"]


def test_balance_trivial_cases():
    t = TimedTree()
    t.add(0, left=1, right=-1)
    rec = balance_check(t, 1, 1, (0, 0, 0))
    assert rec["lhs"] == 0 and rec["rhs"] == 0 and rec["holds"]
    rec = balance_check(t, 1, 1, (0, 1, 1))
    assert rec["lhs"] == 0 and rec["holds"]


def test_l_oracle_small():
    assert l_oracle("+-", 1) == 2
    prof = l_profile(z_word(2))
    ks = sorted(prof)
    assert all(prof[a] <= prof[b] for a, b in zip(ks, ks[1:]))
    assert prof[ks[-1]] == 6
    with pytest.raises(CapExceeded):
        l_profile(z_word(3))


def test_derivations_of_covers_both_binarizations():
    rng = np.random.default_rng(2)
    seen_two = False
    for _ in range(200):
        w = random_dyck(6, rng)
        p = random_repairing(w, rng)
        trees = list(derivations_of(w, p))
        for tr in trees:
            assert repairing_from_derivation(tr) == [tuple(x) for x in p]
        seen_two |= len(trees) == 2
    assert seen_two


def test_factor_widths_agree_with_fragments():
    tree = derivation_from_repairing(z_word(3), PLAY_Z3)
    fw = factor_widths(tree)
    for (a, b), v in fw.items():
        assert v == fragment_width(tree, factor_fragment(tree, a, b))
