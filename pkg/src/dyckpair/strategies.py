"""Constructive re-pairings with provable width bounds.

``bisect`` gives a simple re-pairing of width at most 3*ceil(log2 N) by
repeatedly cutting out the heavy prime of a word (the one longer than
half of it) and handling the two halves separately.  ``frame_strategy``
erases +^k sigma -^k with width 2 when k >= |sigma|/2.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from typing import Sequence

import numpy as np

from .errors import InvalidWord
from .words import as_word, matching


def greedy(sigma) -> list[tuple[int, int]]:
    """Leftmost surviving minus paired with leftmost surviving plus."""
    w = as_word(sigma)
    plus = [i + 1 for i, s in enumerate(w) if s > 0]
    minus = [i + 1 for i, s in enumerate(w) if s < 0]
    return list(zip(plus, minus))


def bisect(sigma) -> list[tuple[int, int]]:
    """Simple re-pairing of width at most 3*ceil(log2 |sigma|)."""
    w = as_word(sigma)
    match = matching(w)
    out: list[tuple[int, int]] = []
    _forest(list(range(len(w))), match, out)
    return [(a + 1, b + 1) for a, b in out]


def _children(pos: Sequence[int], lo: int, hi: int, match):
    """Index ranges of the primes of pos[lo:hi] (pos closed under match)."""
    i = lo
    while i < hi:
        j = bisect_left(pos, match[pos[i]], i, hi)
        yield i, j + 1
        i = j + 1


def _forest(pos, match, out):
    # erasing the primes one after another costs at most one extra interval
    for i, j in _children(pos, 0, len(pos), match):
        _prime(pos[i:j], match, out)


def _prime(pos, match, out):
    n = len(pos)
    lo, hi = 0, n
    while True:
        heavy = None
        for i, j in _children(pos, lo + 1, hi - 1, match):
            if 2 * (j - i) > n:
                heavy = (i, j)
                break
        if heavy is None:
            break
        lo, hi = heavy
    # erase the heavy node first (inside, then its own pair), then the rest
    _forest(pos[lo + 1:hi - 1], match, out)
    out.append((pos[lo], pos[hi - 1]))
    rest = pos[:lo] + pos[hi:]
    if rest:
        _forest(rest, match, out)


def bisect_bound(n: int) -> int:
    return 3 * math.ceil(math.log2(n)) if n > 1 else 1


def frame_strategy(sigma, k: int) -> list[tuple[int, int]]:
    """Width-2 re-pairing of +^k sigma -^k, requires k >= |sigma|/2.

    sigma is erased left to right: each of its minuses takes the nearest
    unused frame plus and each of its pluses the nearest unused frame
    minus, so both erased regions stay contiguous.  The leftover frame is
    then erased from the inside out.
    """
    w = as_word(sigma)
    n = len(w)
    if 2 * k < n:
        raise InvalidWord(f"frame size {k} smaller than |sigma|/2 = {n // 2}")
    pl, sm = k, k + n + 1
    out = []
    for j, s in enumerate(w, start=k + 1):
        if s > 0:
            out.append((j, sm))
            sm += 1
        else:
            out.append((pl, j))
            pl -= 1
    while pl >= 1:
        out.append((pl, sm))
        pl -= 1
        sm += 1
    return out


def concat(parts: Sequence[tuple[int, Sequence[tuple[int, int]]]]) -> list[tuple[int, int]]:
    """Erase sigma_1 ... sigma_k one after another.

    ``parts`` holds (length, pairs) for each factor; the result is a
    re-pairing of the concatenation with width at most 1 + max width.
    """
    out, shift = [], 0
    for length, pairs in parts:
        out.extend((l + shift, r + shift) for l, r in pairs)
        shift += length
    return out


def cut(len_left: int, len_mid: int, mid_pairs, outer_pairs) -> list[tuple[int, int]]:
    """Re-pairing of L pi R: erase pi first, then the word L R.

    ``mid_pairs`` re-pairs pi, ``outer_pairs`` re-pairs L R as one word.
    Width is at most max(width(pi), 1 + width(L R)).
    """
    out = [(l + len_left, r + len_left) for l, r in mid_pairs]

    def lift(p):
        return p if p <= len_left else p + len_mid

    out.extend((lift(l), lift(r)) for l, r in outer_pairs)
    return out
