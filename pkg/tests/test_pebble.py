import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyckpair.errors import CapExceeded, InvalidRepairing, InvariantViolation, NotBinaryTree
from dyckpair.pebble import (binary_primes, black_to_repairing, bw_black, bw_exact,
                             double_siblings, normalize_black, parse_tree, peak, run_strategy,
                             simple_to_pebble, strahler, tree_of)
from dyckpair.repairing import is_simple, simple_exact_width, width
from dyckpair.strategies import bisect
from dyckpair.words import z_word

BINARY = [w for w in binary_primes(12)]


def test_tree_of():
    tree, span = tree_of(z_word(2))
    assert tree.parent == [-1, 0, 0]
    assert span == [(1, 6), (2, 3), (4, 5)]
    assert tree.to_word() == "++-+--"
    with pytest.raises(NotBinaryTree):
        tree_of("+-+-")


def test_strategy_examples():
    single = parse_tree("()")
    assert run_strategy(single, [("B+", 0)]) == 1
    three = parse_tree("(()())")
    moves = [("B+", 1), ("B+", 2), ("B+", 0), ("B-", 1), ("B-", 2)]
    assert run_strategy(three, moves) == 3 == peak(moves)
    with pytest.raises(InvariantViolation):
        run_strategy(three, [("B+", 0)])
    with pytest.raises(InvariantViolation):
        run_strategy(three, [("B+", 1), ("W+", 0)])  # white left on the root
    with pytest.raises(InvariantViolation):
        run_strategy(three, [("W+", 0), ("B+", 1), ("B+", 2), ("W-", 0)], "M4'")


def test_bw_values():
    assert bw_exact(parse_tree("()"))[0] == 1
    assert bw_exact(parse_tree("(()())"))[0] == 3
    assert bw_exact(tree_of(z_word(3))[0])[0] == 4
    assert bw_exact(parse_tree("((((()))))"))[0] == 2
    with pytest.raises(CapExceeded):
        bw_exact(tree_of(z_word(5))[0])


def test_strahler():
    assert strahler(parse_tree("()")) == 1
    for n in range(1, 5):
        assert strahler(tree_of(z_word(n))[0]) == n
    assert strahler(parse_tree("(((())))")) == 1
    with pytest.raises(NotBinaryTree):
        strahler(parse_tree("(()()())"))


@pytest.mark.parametrize("w", BINARY, ids=str)
def test_variants_agree_and_black_doubles(w):
    tree, _ = tree_of(w)
    b4, m4 = bw_exact(tree, "M4")
    b4p, m4p = bw_exact(tree, "M4'")
    assert b4 == b4p
    assert run_strategy(tree, m4, "M4") == b4
    assert run_strategy(tree, m4p, "M4'") == b4p
    bb, mb = bw_black(tree)
    assert b4p <= bb <= 2 * b4p


def test_simple_to_pebble_examples():
    br = simple_to_pebble("+-", [(1, 2)])
    assert br.peak <= 7
    w = z_word(2)
    p = [(2, 3), (1, 6), (4, 5)]
    assert width(w, p) == 2
    br = simple_to_pebble(w, p)
    assert br.peak <= 4 * br.doubled_width + 3
    with pytest.raises(InvalidRepairing):
        simple_to_pebble(w, [(2, 3), (4, 6), (1, 5)])


def test_double_siblings():
    assert double_siblings(z_word(2), [(2, 3), (1, 6), (4, 5)]) == [(2, 3), (4, 5), (1, 6)]


@pytest.mark.parametrize("w", BINARY, ids=str)
def test_bridge_inequalities(w):
    for p in (simple_exact_width(w).witness, bisect(w)):
        wp = width(w, p)
        br = simple_to_pebble(w, p)
        assert br.doubled_width <= 3 * wp
        assert br.peak <= 4 * br.doubled_width + 3


def test_black_to_repairing_examples():
    pairs, _ = black_to_repairing("+-", [("B+", 0)])
    assert pairs == [(1, 2)] and width("+-", pairs) == 1
    w = z_word(2)
    tree, _ = tree_of(w)
    b, moves = bw_black(tree)
    pairs, norm = black_to_repairing(w, moves)
    assert is_simple(w, pairs)
    assert width(w, pairs) <= 2 * run_strategy(tree, norm)
    with pytest.raises(InvariantViolation):
        normalize_black(tree, [("W+", 0)])


def random_black_strategy(tree, rng, max_moves=200):
    black = set()
    moves = []
    kids = tree.children
    while len(moves) < max_moves:
        legal = [("B-", v) for v in black]
        legal += [("B+", v) for v in range(tree.size)
                  if v not in black and all(c in black for c in kids[v])]
        kind, v = legal[int(rng.integers(len(legal)))]
        moves.append((kind, v))
        if kind == "B+":
            black.add(v)
            if v == 0:
                return moves
        else:
            black.discard(v)
    return None


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(BINARY), st.integers(0, 2**32 - 1))
def test_normalization_of_random_black_strategies(w, seed):
    tree, _ = tree_of(w)
    moves = random_black_strategy(tree, np.random.default_rng(seed))
    if moves is None:
        return
    pairs, norm = black_to_repairing(w, moves)
    pk = run_strategy(tree, norm)
    assert pk <= peak(moves)
    black = set()
    for kind, v in norm:
        if kind == "B-":
            assert any(a in black for a in tree.ancestors(v))
            black.discard(v)
        else:
            black.add(v)
    assert is_simple(w, pairs)
    assert width(w, pairs) <= 2 * pk
