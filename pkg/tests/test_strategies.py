import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import dyck_words
from dyckpair.errors import InvalidWord
from dyckpair.repairing import exact_width, is_simple, validate, width
from dyckpair.strategies import bisect, bisect_bound, concat, cut, frame_strategy, greedy
from dyckpair.words import as_word, frame, random_dyck, z_word


def test_greedy_valid():
    for n in range(1, 8):
        w = z_word(n)
        validate(w, greedy(w))


def test_bisect_examples():
    assert width("+-", bisect("+-")) == 1
    w = z_word(10)
    p = bisect(w)
    validate(w, p)
    assert is_simple(w, p)
    assert width(w, p) <= 33 == bisect_bound(len(w))


def test_bisect_bound_values():
    assert bisect_bound(2) == 3
    assert bisect_bound(4096) == 36
    assert bisect_bound(2046) == 33


@settings(max_examples=100, deadline=None)
@given(dyck_words(max_pairs=60, min_pairs=1))
def test_bisect_simple_and_bounded(w):
    p = bisect(w)
    validate(w, p)
    assert is_simple(w, p)
    assert width(w, p) <= 3 * math.ceil(math.log2(len(w)))


def test_frame_examples():
    assert width(frame("+-", 1), frame_strategy("+-", 1)) <= 2
    w = z_word(2)
    p = frame_strategy(w, 3)
    validate(frame(w, 3), p)
    assert width(frame(w, 3), p) <= 2
    assert width(frame("", 4), frame_strategy("", 4)) == 1
    with pytest.raises(InvalidWord):
        frame_strategy(z_word(3), 6)


@settings(max_examples=100, deadline=None)
@given(dyck_words(max_pairs=30))
def test_frame_width_two(w):
    k = (len(w) + 1) // 2 + len(w) % 3
    p = frame_strategy(w, k)
    validate(frame(w, k), p)
    assert width(frame(w, k), p) <= 2


def test_concat_examples():
    p = concat([(2, [(1, 2)]), (2, [(1, 2)])])
    assert p == [(1, 2), (3, 4)]
    assert width("+-+-", p) <= 2
    assert concat([(6, bisect(z_word(2)))]) == bisect(z_word(2))


def test_cut_example():
    # L = "+", pi = "+-", R = "-"
    p = cut(1, 2, [(1, 2)], [(1, 2)])
    assert p == [(2, 3), (1, 4)]
    validate("++--", p)
    assert width("++--", p) <= 2


@settings(max_examples=50, deadline=None)
@given(dyck_words(max_pairs=6, min_pairs=1), dyck_words(max_pairs=6, min_pairs=1),
       dyck_words(max_pairs=6, min_pairs=1))
def test_concat_bound(a, b, c):
    parts = []
    widths = []
    for w in (a, b, c):
        r = exact_width(w)
        parts.append((len(w), r.witness))
        widths.append(r.width)
    word = as_word(a.signs + b.signs + c.signs)
    p = concat(parts)
    validate(word, p)
    assert width(word, p) <= 1 + max(widths)


@settings(max_examples=50, deadline=None)
@given(dyck_words(max_pairs=5, min_pairs=1), dyck_words(max_pairs=5, min_pairs=1))
def test_cut_bound(outer, pi):
    # split the outer word at a random point and insert pi there
    i = len(outer) // 2
    word = as_word(outer.signs[:i] + pi.signs + outer.signs[i:])
    rp, ro = exact_width(pi), exact_width(outer)
    p = cut(i, len(pi), rp.witness, ro.witness)
    validate(word, p)
    assert width(word, p) <= max(rp.width, 1 + ro.width)


def test_random_4096_spot():
    rng = np.random.default_rng(5)
    for _ in range(3):
        w = random_dyck(2048, rng)
        assert width(w, bisect(w)) <= 36
