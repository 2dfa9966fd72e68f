import numpy as np
import pytest
from hypothesis import given, settings

from conftest import dyck_words, random_repairing
from dyckpair.errors import CapExceeded, InvalidRepairing
from dyckpair.repairing import (exact_width, exact_width_naive, extendable, interval_count,
                                is_simple, is_valid, iter_repairings, separated_pairs,
                                simple_exact_width, validate, width, width_of)
from dyckpair.strategies import bisect
from dyckpair.words import all_dyck, heights, z_word

PLAY_Z2 = [(2, 3), (4, 6), (1, 5)]


def test_validate_examples():
    validate("+-", [(1, 2)])
    validate(z_word(2), PLAY_Z2)
    with pytest.raises(InvalidRepairing) as exc:
        validate("++--", [(3, 4), (1, 2)])
    assert exc.value.step == 0
    with pytest.raises(InvalidRepairing):
        validate("++--", [(1, 3)])  # position 2 and 4 never used
    with pytest.raises(InvalidRepairing):
        validate("+-+-", [(1, 2), (1, 4)])
    with pytest.raises(InvalidRepairing):
        validate("+-+-", [(3, 2), (1, 4)])
    assert is_valid("++--", [(1, 3)], partial=True)


def test_interval_count():
    assert interval_count([]) == 0
    assert interval_count({1, 2, 4, 6}) == 3
    assert interval_count(range(1, 11)) == 1


def test_width_examples():
    assert width(z_word(2), PLAY_Z2) == 2
    assert width(z_word(2), [(2, 3), (4, 5), (1, 6)]) == 1
    assert width(z_word(2), [(1, 6), (2, 3), (4, 5)]) == 2
    assert width(z_word(2), [(2, 5), (1, 3), (4, 6)]) == 2
    assert width("+-", [(1, 2)]) == 1
    rep = width_of(z_word(2), PLAY_Z2)
    assert list(rep.rows()) == [(1, 1, 2), (2, 2, 2), (3, 1, 0)]


def test_is_simple():
    assert is_simple(z_word(2), [(2, 3), (4, 5), (1, 6)])
    assert not is_simple(z_word(2), PLAY_Z2)
    assert is_simple("+-", [(1, 2)])


def test_exact_width_examples():
    assert exact_width("+-").width == 1
    assert exact_width("++--").width == 1
    assert exact_width_naive("++--") == 1
    assert exact_width("").width == 0
    res = exact_width(z_word(2))
    assert res.width == 1
    assert width(z_word(2), res.witness) == 1


def test_exact_width_z2_by_enumeration():
    w = z_word(2)
    ones = [p for p in iter_repairings(w) if width(w, p) == 1]
    assert ones == [[(2, 3), (4, 5), (1, 6)], [(4, 5), (2, 3), (1, 6)]]


def test_exact_width_z3():
    w = z_word(3)
    assert exact_width(w).width == exact_width_naive(w) == 2


def test_budget_and_cap():
    res = exact_width(z_word(3), budget=1)
    assert not res.feasible and res.width is None
    assert exact_width(z_word(3), budget=2).width == 2
    with pytest.raises(CapExceeded):
        exact_width(z_word(4))
    with pytest.raises(CapExceeded):
        exact_width_naive("+-" * 8)


def test_exact_matches_literal_enumeration():
    for pairs in range(1, 5):
        for w in all_dyck(pairs):
            brute = min(width(w, p) for p in iter_repairings(w))
            assert exact_width(w).width == brute == exact_width_naive(w)


def test_iter_repairings_small():
    # (1,4) first would leave "-+", and (3,2) breaks l < r
    assert list(iter_repairings("+-+-")) == [[(1, 2), (3, 4)], [(3, 4), (1, 2)]]


@settings(max_examples=40, deadline=None)
@given(dyck_words(max_pairs=6))
def test_exact_equals_naive(w):
    res = exact_width(w)
    assert res.width == exact_width_naive(w)
    if len(w):
        validate(w, res.witness)
        assert width(w, res.witness) == res.width
        assert res.width <= width(w, bisect(w))
        assert res.width <= simple_exact_width(w).width


@settings(max_examples=80, deadline=None)
@given(dyck_words(max_pairs=16, min_pairs=1))
def test_separated_pairs_equal_height(w):
    rng = np.random.default_rng(len(w))
    p = random_repairing(w, rng)
    h = heights(w)
    for i in range(0, len(w) + 1):
        assert separated_pairs(w, p, i) == h[i]


@settings(max_examples=80, deadline=None)
@given(dyck_words(max_pairs=16, min_pairs=1))
def test_prefix_leaves_dyck_word_and_widths_close(w):
    p = random_repairing(w, np.random.default_rng(3))
    for t in range(len(p) + 1):
        assert extendable(w, p[:t])
    rep = width_of(w, p)
    assert np.all(np.abs(rep.erased - rep.surviving) <= 1)
    assert rep.width == rep.erased.max()


def test_width_matches_direct_interval_count():
    rng = np.random.default_rng(11)
    from dyckpair.words import random_dyck
    for _ in range(50):
        w = random_dyck(12, rng)
        p = random_repairing(w, rng)
        rep = width_of(w, p)
        erased = set()
        for t, (l, r) in enumerate(p):
            erased |= {l, r}
            assert rep.erased[t] == interval_count(erased)
            alive = set(range(1, len(w) + 1)) - erased
            assert rep.surviving[t] == interval_count(alive)


def test_simple_exact_width_witness():
    w = z_word(3)
    res = simple_exact_width(w)
    assert is_simple(w, res.witness)
    assert width(w, res.witness) == res.width
