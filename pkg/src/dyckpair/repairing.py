"""Re-pairings of Dyck words and their width.

A re-pairing of a word of length N is a sequence of N/2 pairs (l, r) of
1-based positions with sigma(l) = +1, sigma(r) = -1 and l < r, using
every position exactly once.  After t pairs the erased set B_t is a union
of maximal intervals; the width is the largest number of such intervals
over all t.  Pairs need not be matched brackets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, InvalidRepairing
from .words import DyckWord, as_word, matching

EXACT_CAP = 20
NAIVE_CAP = 14


def as_pairs(p) -> np.ndarray:
    """Normalize a pair sequence into an (M, 2) int64 array of 1-based positions."""
    if isinstance(p, np.ndarray):
        arr = p.astype(np.int64, copy=False)
    else:
        arr = np.array(list(p), dtype=np.int64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidRepairing("pairs must be an (M, 2) array")
    return arr


def validate(sigma, p, partial: bool = False) -> None:
    """Raise InvalidRepairing unless p is a (possibly partial) re-pairing of sigma.

    With ``partial`` the sequence may stop early, but the surviving symbols
    must still form a Dyck word so that it can be completed.
    """
    signs = as_word(sigma).array()
    n = len(signs)
    pairs = as_pairs(p)
    if n % 2:
        raise InvalidRepairing("word has odd length")
    if not partial and len(pairs) != n // 2:
        raise InvalidRepairing(f"expected {n // 2} pairs, got {len(pairs)}")
    if len(pairs) == 0:
        return
    left, right = pairs[:, 0], pairs[:, 1]
    bad = np.flatnonzero((left < 1) | (right > n) | (right < 1) | (left > n))
    if bad.size:
        raise InvalidRepairing("position out of range", int(bad[0]))
    bad = np.flatnonzero(left >= right)
    if bad.size:
        raise InvalidRepairing("left position is not before right position", int(bad[0]))
    bad = np.flatnonzero(signs[left - 1] != 1)
    if bad.size:
        raise InvalidRepairing("left position does not hold +", int(bad[0]))
    bad = np.flatnonzero(signs[right - 1] != -1)
    if bad.size:
        raise InvalidRepairing("right position does not hold -", int(bad[0]))
    flat = pairs.ravel()
    order = np.argsort(flat, kind="stable")
    srt = flat[order]
    dup = np.flatnonzero(srt[1:] == srt[:-1])
    if dup.size:
        raise InvalidRepairing("position used twice", int(order[dup + 1].min() // 2))
    if partial:
        keep = np.ones(n, dtype=bool)
        keep[flat - 1] = False
        rest = np.cumsum(signs[keep])
        if rest.size and (rest.min() < 0 or rest[-1] != 0):
            raise InvalidRepairing("surviving symbols do not form a Dyck word")


def is_valid(sigma, p, partial: bool = False) -> bool:
    try:
        validate(sigma, p, partial)
    except InvalidRepairing:
        return False
    return True


def is_simple(sigma, p) -> bool:
    """Every pair is a matched bracket pair of sigma."""
    match = matching(sigma)
    return all(match[l - 1] == r - 1 for l, r in as_pairs(p).tolist())


@dataclass
class WidthReport:
    erased: np.ndarray  # erased-interval count after each step
    surviving: np.ndarray  # surviving-interval count after each step
    width: int = field(init=False)
    surviving_width: int = field(init=False)

    def __post_init__(self):
        self.width = int(self.erased.max()) if self.erased.size else 0
        self.surviving_width = int(self.surviving.max()) if self.surviving.size else 0

    def rows(self) -> Iterator[tuple[int, int, int]]:
        for t, (e, s) in enumerate(zip(self.erased.tolist(), self.surviving.tolist()), 1):
            yield t, e, s


def _step_deltas(n: int, pairs: np.ndarray):
    """Per-step change of the erased and surviving interval counts.

    Each position gets the key 2t (left) or 2t+1 (right) of the step that
    erases it; a neighbour with a smaller key was erased before it.
    """
    m = len(pairs)
    inf = np.int64(4 * m + 10)
    key = np.full(n + 2, inf, dtype=np.int64)
    steps = np.arange(m, dtype=np.int64)
    key[pairs[:, 0]] = 2 * steps
    key[pairs[:, 1]] = 2 * steps + 1
    before = key.copy()
    before[0] = before[-1] = -1  # outside the word never survives

    def at(pos):
        k = key[pos]
        er = 1 - (key[pos - 1] < k).astype(np.int64) - (key[pos + 1] < k)
        sv = (before[pos - 1] > k).astype(np.int64) + (before[pos + 1] > k) - 1
        return er, sv

    el, sl = at(pairs[:, 0])
    er, sr = at(pairs[:, 1])
    return el + er, sl + sr


def width_of(sigma, p, check: bool = True) -> WidthReport:
    """Erased and surviving interval counts after every step of p."""
    n = len(as_word(sigma)) if not isinstance(sigma, int) else sigma
    pairs = as_pairs(p)
    if check and not isinstance(sigma, int):
        validate(sigma, pairs, partial=True)
    if len(pairs) == 0:
        z = np.zeros(0, dtype=np.int64)
        return WidthReport(z, z)
    de, ds = _step_deltas(n, pairs)
    return WidthReport(np.cumsum(de), 1 + np.cumsum(ds))


def width(sigma, p) -> int:
    return width_of(sigma, p).width


def interval_count(positions: Iterable[int]) -> int:
    """Number of maximal runs of consecutive integers in a set."""
    s = sorted(set(positions))
    return sum(1 for i, v in enumerate(s) if i == 0 or s[i - 1] != v - 1)


def separated_pairs(sigma, p, i: int) -> int:
    """Number of pairs (l, r) with l <= i < r."""
    pairs = as_pairs(p)
    return int(np.count_nonzero((pairs[:, 0] <= i) & (i < pairs[:, 1])))


def extendable(sigma, prefix) -> bool:
    """Whether a partial pair sequence can be completed to a re-pairing."""
    return is_valid(sigma, prefix, partial=True)


# ---------------------------------------------------------------- exact search


@dataclass
class SearchResult:
    width: int | None  # None when the budget was too small
    witness: list[tuple[int, int]] | None
    states: int = 0

    @property
    def feasible(self) -> bool:
        return self.width is not None


class _Search:
    """Depth-first search under a fixed width budget.

    States are surviving words with erased gaps collapsed to a marker, so
    different histories that leave the same shape share one memo entry.
    """

    def __init__(self, budget: int):
        self.budget = budget
        self.failed: set[str] = set()

    def run(self, toks: list) -> list | None:
        # toks: list of (sign, position) or None for an erased gap
        if all(t is None for t in toks):
            return []
        key = "".join("|" if t is None else ("+" if t[0] > 0 else "-") for t in toks)
        if key in self.failed:
            return None
        hts, h = [], 0
        for t in toks:
            if t is not None:
                h += t[0]
            hts.append(h)
        for b, tb in enumerate(toks):
            if tb is None or tb[0] > 0:
                continue
            low = 1 << 30
            for a in range(b - 1, -1, -1):
                low = min(low, hts[a])
                if low < 1:
                    break
                ta = toks[a]
                if ta is None or ta[0] < 0:
                    continue
                nxt = _erase(toks, a, b)
                if sum(1 for t in nxt if t is None) > self.budget:
                    continue
                rest = self.run(nxt)
                if rest is not None:
                    return [(ta[1], tb[1])] + rest
        self.failed.add(key)
        return None


def _erase(toks, a, b):
    out = []
    for i, t in enumerate(toks):
        if i == a or i == b:
            t = None
        if t is None and out and out[-1] is None:
            continue
        out.append(t)
    return out


def exact_width(sigma, budget: int | None = None, cap: int = EXACT_CAP) -> SearchResult:
    """Minimum width over all re-pairings, by iterative deepening.

    With ``budget`` only that one bound is tried and an infeasible result
    (width None) means every re-pairing has width above it.
    """
    w = as_word(sigma)
    if len(w) > cap:
        raise CapExceeded(f"exact search limited to length {cap}, got {len(w)}")
    if len(w) == 0:
        return SearchResult(0, [])
    toks = [(s, i + 1) for i, s in enumerate(w)]
    bounds = [budget] if budget is not None else range(1, len(w) // 2 + 1)
    states = 0
    for bound in bounds:
        search = _Search(bound)
        found = search.run(toks)
        states += len(search.failed)
        if found is not None:
            return SearchResult(bound, found, states)
    return SearchResult(None, None, states)


def exact_width_naive(sigma, cap: int = NAIVE_CAP) -> int:
    """Minimum width by dynamic programming over exact erased sets.

    Every valid pair sequence is a path through the lattice of erased
    sets, and the width of a sequence only depends on the sets it visits,
    so the minimax over all paths equals the minimum over all sequences.
    """
    signs = as_word(sigma).signs
    n = len(signs)
    if n > cap:
        raise CapExceeded(f"naive search limited to length {cap}, got {n}")
    if n == 0:
        return 0
    full = (1 << n) - 1
    plus = [i for i in range(n) if signs[i] > 0]
    minus = [i for i in range(n) if signs[i] < 0]
    best = {0: 0}
    for size in range(0, n, 2):
        layer = [m for m in best if bin(m).count("1") == size]
        for mask in layer:
            cur = best[mask]
            for a in plus:
                if mask >> a & 1:
                    continue
                for b in minus:
                    if b < a or mask >> b & 1:
                        continue
                    nm = mask | 1 << a | 1 << b
                    if not _surviving_ok(signs, nm):
                        continue
                    runs = bin(nm & ~(nm << 1)).count("1")
                    val = max(cur, runs)
                    if val < best.get(nm, 1 << 30):
                        best[nm] = val
    return best[full]


def _surviving_ok(signs, mask) -> bool:
    h = 0
    for i, s in enumerate(signs):
        if not mask >> i & 1:
            h += s
            if h < 0:
                return False
    return True


def iter_repairings(sigma) -> Iterator[list[tuple[int, int]]]:
    """Every re-pairing of sigma, without pruning.  Only for tiny words."""
    signs = as_word(sigma).signs
    n = len(signs)
    used = [False] * n

    def rec(acc):
        if len(acc) * 2 == n:
            yield list(acc)
            return
        for a in range(n):
            if used[a] or signs[a] < 0:
                continue
            for b in range(a + 1, n):
                if used[b] or signs[b] > 0:
                    continue
                used[a] = used[b] = True
                h, ok = 0, True
                for i in range(n):
                    if not used[i]:
                        h += signs[i]
                        if h < 0:
                            ok = False
                            break
                if ok:
                    acc.append((a + 1, b + 1))
                    yield from rec(acc)
                    acc.pop()
                used[a] = used[b] = False

    yield from rec([])


def simple_exact_width(sigma) -> SearchResult:
    """Minimum width over simple re-pairings (matched pairs only).

    Any order of matched pairs is valid, so this is a minimax path
    through the subsets of pairs.
    """
    w = as_word(sigma)
    match = matching(w)
    opens = [i for i in range(len(w)) if w[i] > 0]
    k = len(opens)
    if k > 22:
        raise CapExceeded("simple exact search limited to 22 pairs")
    if k == 0:
        return SearchResult(0, [])
    bits = [(1 << i) | (1 << match[i]) for i in opens]
    best = {0: (0, None, None)}
    for size in range(k):
        for sub in [s for s in best if bin(s).count("1") == 2 * size]:
            cur = best[sub][0]
            for j, b in enumerate(bits):
                if sub & b:
                    continue
                nm = sub | b
                val = max(cur, bin(nm & ~(nm << 1)).count("1"))
                if nm not in best or val < best[nm][0]:
                    best[nm] = (val, sub, j)
    full = (1 << len(w)) - 1
    seq, m = [], full
    while m:
        _, prev, j = best[m]
        seq.append((opens[j] + 1, match[opens[j]] + 1))
        m = prev
    return SearchResult(best[full][0], seq[::-1])
