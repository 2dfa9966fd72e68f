"""Dyck words over {+1, -1} and the word families used throughout.

A word is stored as a tuple of +1/-1 integers.  Positions handed to and
from re-pairings are 1-based; Python indexing stays 0-based.

The families are

* ``Z(1) = +-``, ``Z(n+1) = + Z(n) Z(n) -``
* ``X(a0) = +^a0 -^a0``, ``X(a0..ak) = +^ak X(a0..ak-1) X(a0..ak-1) -^ak``
* ``Y(m, l) = X(a0..a_{ml-1})`` with ``a_i = 2^(i // l)``

``Z(n)`` is ``X(1, ..., 1)`` with n ones, so one implicit representation
covers all three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, InvalidWord

MATERIALIZE_CAP = 1 << 30

_CHARS = {"+": 1, "-": -1, "−": -1, "(": 1, ")": -1}


@dataclass(frozen=True)
class DyckWord:
    signs: tuple

    def __post_init__(self):
        h = 0
        for i, s in enumerate(self.signs):
            if s not in (1, -1):
                raise InvalidWord(f"symbol {s!r} at index {i} is not +1/-1")
            h += s
            if h < 0:
                raise InvalidWord(f"prefix height drops below zero at index {i}")
        if h != 0:
            raise InvalidWord(f"word ends at height {h}, not 0")

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, i):
        return self.signs[i]

    def __iter__(self):
        return iter(self.signs)

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def __repr__(self):
        return f"DyckWord('{self}')"

    def array(self) -> np.ndarray:
        return np.fromiter(self.signs, dtype=np.int8, count=len(self.signs))


def parse_signs(text: str) -> tuple:
    out = []
    for ch in text:
        if ch.isspace():
            continue
        try:
            out.append(_CHARS[ch])
        except KeyError:
            raise InvalidWord(f"unexpected character {ch!r}") from None
    return tuple(out)


def as_word(w) -> DyckWord:
    """Coerce a string, sign sequence or DyckWord into a validated DyckWord."""
    if isinstance(w, DyckWord):
        return w
    if isinstance(w, str):
        return DyckWord(parse_signs(w))
    return DyckWord(tuple(int(s) for s in w))


def is_dyck(signs: Iterable[int]) -> bool:
    h = 0
    for s in signs:
        if s not in (1, -1):
            return False
        h += s
        if h < 0:
            return False
    return h == 0


def heights(w) -> list[int]:
    """Prefix heights h(0..N); h(0) = 0."""
    out = [0]
    for s in as_word(w):
        out.append(out[-1] + s)
    return out


def height_profile(w) -> list[int]:
    """Heights after each symbol, h(1..N)."""
    return heights(w)[1:]


def max_height(w) -> int:
    return max(heights(w))


def delta(factor: Sequence[int] | str) -> int:
    """Height change across a factor (need not be Dyck)."""
    if isinstance(factor, str):
        factor = parse_signs(factor)
    return sum(factor)


def mu(factor: Sequence[int] | str) -> int:
    """Length of the longest run of minuses."""
    if isinstance(factor, str):
        factor = parse_signs(factor)
    best = run = 0
    for s in factor:
        run = run + 1 if s < 0 else 0
        best = max(best, run)
    return best


def matching(w) -> list[int]:
    """match[i] is the 0-based index paired with i under bracket matching."""
    w = as_word(w)
    match = [0] * len(w)
    stack = []
    for i, s in enumerate(w):
        if s > 0:
            stack.append(i)
        else:
            j = stack.pop()
            match[i], match[j] = j, i
    return match


def primes(w, lo: int = 0, hi: int | None = None) -> list[tuple[int, int]]:
    """Split w[lo:hi] into Dyck primes, returned as half-open index ranges."""
    signs = as_word(w).signs
    hi = len(signs) if hi is None else hi
    out = []
    h, start = 0, lo
    for i in range(lo, hi):
        h += signs[i]
        if h == 0:
            out.append((start, i + 1))
            start = i + 1
    return out


@dataclass(frozen=True)
class Forest:
    """Ordered forest of matched pairs; ``pairs[v]`` is the 1-based (open, close)."""

    parent: tuple
    children: tuple
    pairs: tuple

    @property
    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p == -1]

    def to_word(self) -> DyckWord:
        n = 2 * len(self.pairs)
        out = [0] * n
        for a, b in self.pairs:
            out[a - 1], out[b - 1] = 1, -1
        return DyckWord(tuple(out))


def matched_forest(w) -> Forest:
    """Nodes numbered in order of their opening bracket."""
    w = as_word(w)
    parent, children, pairs = [], [], []
    stack = []
    for i, s in enumerate(w.signs):
        if s > 0:
            v = len(parent)
            parent.append(stack[-1] if stack else -1)
            children.append([])
            pairs.append([i + 1, 0])
            if stack:
                children[stack[-1]].append(v)
            stack.append(v)
        else:
            pairs[stack.pop()][1] = i + 1
    return Forest(tuple(parent), tuple(tuple(c) for c in children), tuple(tuple(p) for p in pairs))


def is_symmetric(w) -> bool:
    """True when reversing the word and flipping every sign gives it back."""
    s = as_word(w).signs
    return all(s[i] == -s[-1 - i] for i in range(len(s)))


# ---------------------------------------------------------------- families


@lru_cache(maxsize=None)
def x_length(a: tuple) -> int:
    if not a:
        raise InvalidWord("X needs at least one parameter")
    n = 2 * a[0]
    for ak in a[1:]:
        n = 2 * n + 2 * ak
    return n


def z_length(n: int) -> int:
    if n < 1:
        raise InvalidWord("Z(n) needs n >= 1")
    return 2 * (2**n - 1)


def y_params(m: int, ell: int) -> tuple:
    if m < 1 or ell < 1:
        raise InvalidWord("Y(m, l) needs m, l >= 1")
    return tuple(2 ** (i // ell) for i in range(m * ell))


def y_length(m: int, ell: int) -> int:
    """Closed form for |Y(m, l)|, valid for l > 1."""
    if ell < 2:
        return x_length(y_params(m, ell))
    num = (2**ell - 1) * (2 ** (m * ell) - 2**m)
    den = 2 ** (ell - 1) - 1
    return num // den


def y_ell_params(ell: int, base: float = 2) -> tuple[int, int]:
    """(m, l) for the one-parameter word Y(l) = Y(floor(l log l), l)."""
    if ell < 2:
        raise InvalidWord("Y(l) needs l >= 2")
    m = int(math.floor(ell * math.log(ell, base) + 1e-12))
    return max(m, 1), ell


class ImplicitX:
    """X(a0..ak) represented by its parameters.

    Symbols are computed by descending the recursive structure, so words
    far beyond the materialization cap can still be inspected.
    """

    def __init__(self, a: Sequence[int], frame: int = 0):
        self.a = tuple(int(v) for v in a)
        if not self.a or min(self.a) < 1:
            raise InvalidWord("X parameters must be positive")
        if frame < 0:
            raise InvalidWord("frame size must be nonnegative")
        self.frame = frame
        self._lens = [2 * self.a[0]]
        for ak in self.a[1:]:
            self._lens.append(2 * self._lens[-1] + 2 * ak)

    def __len__(self):
        return self._lens[-1] + 2 * self.frame

    @property
    def height(self) -> int:
        return sum(self.a) + self.frame

    def symbol_at(self, i: int) -> int:
        n = len(self)
        if not 0 <= i < n:
            raise IndexError(i)
        if i < self.frame:
            return 1
        if i >= n - self.frame:
            return -1
        i -= self.frame
        for k in range(len(self.a) - 1, 0, -1):
            ak, lk = self.a[k], self._lens[k]
            if i < ak:
                return 1
            if i >= lk - ak:
                return -1
            i -= ak
            inner = self._lens[k - 1]
            if i >= inner:
                i -= inner
        return 1 if i < self.a[0] else -1

    __getitem__ = symbol_at

    def __iter__(self) -> Iterator[int]:
        # streamed in order without recursion depth issues
        yield from (1 for _ in range(self.frame))
        yield from self._emit(len(self.a) - 1)
        yield from (-1 for _ in range(self.frame))

    def _emit(self, k):
        if k == 0:
            yield from (1 for _ in range(self.a[0]))
            yield from (-1 for _ in range(self.a[0]))
            return
        yield from (1 for _ in range(self.a[k]))
        yield from self._emit(k - 1)
        yield from self._emit(k - 1)
        yield from (-1 for _ in range(self.a[k]))

    def materialize(self, cap: int = MATERIALIZE_CAP) -> DyckWord:
        if len(self) > cap:
            raise CapExceeded(f"word of length {len(self)} exceeds cap {cap}")
        return DyckWord(tuple(self._build()))

    def _build(self) -> list[int]:
        w = [1] * self.a[0] + [-1] * self.a[0]
        for ak in self.a[1:]:
            w = [1] * ak + w + w + [-1] * ak
        if self.frame:
            w = [1] * self.frame + w + [-1] * self.frame
        return w


def x_word(*a: int, cap: int = MATERIALIZE_CAP) -> DyckWord:
    if len(a) == 1 and not isinstance(a[0], int):
        a = tuple(a[0])
    return ImplicitX(a).materialize(cap)


def z_word(n: int, cap: int = MATERIALIZE_CAP) -> DyckWord:
    if n < 1:
        raise InvalidWord("Z(n) needs n >= 1")
    return ImplicitX((1,) * n).materialize(cap)


def y_word(m: int, ell: int, cap: int = MATERIALIZE_CAP) -> DyckWord:
    return ImplicitX(y_params(m, ell)).materialize(cap)


def y_ell_word(ell: int, base: float = 2, cap: int = MATERIALIZE_CAP) -> DyckWord:
    return y_word(*y_ell_params(ell, base), cap=cap)


def frame(w, k: int) -> DyckWord:
    """+^k w -^k."""
    if k < 0:
        raise InvalidWord("frame size must be nonnegative")
    return DyckWord((1,) * k + as_word(w).signs + (-1,) * k)


# ---------------------------------------------------------------- phi / psi


def _minus_runs(signs) -> list[tuple[int, int]]:
    runs = []
    i, n = 0, len(signs)
    while i < n:
        if signs[i] < 0:
            j = i
            while j < n and signs[j] < 0:
                j += 1
            runs.append((i, j - i))
            i = j
        else:
            i += 1
    return runs


def _longest_avoiding(runs, n, d) -> int:
    """Longest factor whose minus runs are all shorter than d."""
    block = [(s, ln) for s, ln in runs if ln >= d]
    if not block:
        return n
    best = block[0][0] + d - 1
    for (s0, l0), (s1, _) in zip(block, block[1:]):
        best = max(best, s1 - s0 - l0 + 2 * d - 2)
    s, ln = block[-1]
    return max(best, n - (s + ln - d + 1))


def phi_table(w) -> list[int]:
    """phi(W, x) for every x in 1..|W| (index 0 unused)."""
    signs = as_word(w).signs
    n = len(signs)
    runs = _minus_runs(signs)
    top = max((ln for _, ln in runs), default=0)
    gaps = [_longest_avoiding(runs, n, d) for d in range(1, top + 1)]
    out = [0] * (n + 1)
    for x in range(1, n + 1):
        out[x] = sum(1 for g in gaps if g < x)
    return out


def phi(w, x: int) -> int:
    """Smallest longest-minus-run over factors of length at least x."""
    signs = as_word(w).signs
    if not 1 <= x <= len(signs):
        raise ValueError(f"x={x} outside 1..{len(signs)}")
    runs = _minus_runs(signs)
    top = max((ln for _, ln in runs), default=0)
    return sum(1 for d in range(1, top + 1) if _longest_avoiding(runs, len(signs), d) < x)


def psi(w, x: int) -> int:
    """min |u v -^x| - 1 over factors u v -^x with Delta(u) >= x."""
    signs = as_word(w).signs
    if x < 1:
        raise ValueError("x must be positive")
    h = heights(signs)
    best = None
    for s, ln in _minus_runs(signs):
        if ln < x:
            continue
        # the run starts at 1-based symbol s+1; u v ends at prefix index s
        end = s
        top = -1
        i = end - 1
        while i >= 0:
            top = max(top, h[i + 1])
            length = end + x - i
            if best is not None and length >= best:
                break
            if top >= h[i] + x:
                best = length
                break
            i -= 1
    if best is None:
        raise ValueError(f"no factor ending in -^{x}")
    return best - 1


def phi_bruteforce(w, x: int) -> int:
    signs = as_word(w).signs
    n = len(signs)
    if not 1 <= x <= n:
        raise ValueError(f"x={x} outside 1..{n}")
    return min(mu(signs[i:j]) for i in range(n) for j in range(i + x, n + 1))


def psi_bruteforce(w, x: int) -> int:
    signs = as_word(w).signs
    n = len(signs)
    best = None
    for a in range(n):
        for e in range(a + x, n + 1):
            if any(s > 0 for s in signs[e - x:e]):
                continue
            # u = signs[a:b], v = signs[b:e-x], u nonempty
            if any(sum(signs[a:b]) >= x for b in range(a + 1, e - x + 1)):
                length = e - a
                if best is None or length < best:
                    best = length
    if best is None:
        raise ValueError(f"no factor ending in -^{x}")
    return best - 1


# ---------------------------------------------------------------- generation


def all_dyck(pairs: int) -> Iterator[DyckWord]:
    """Every Dyck word with the given number of pairs, lexicographic in +<-."""

    def rec(prefix, opened, closed):
        if closed == pairs:
            yield tuple(prefix)
            return
        if opened < pairs:
            prefix.append(1)
            yield from rec(prefix, opened + 1, closed)
            prefix.pop()
        if closed < opened:
            prefix.append(-1)
            yield from rec(prefix, opened, closed + 1)
            prefix.pop()

    for s in rec([], 0, 0):
        yield DyckWord(s)


def random_dyck(pairs: int, rng: np.random.Generator) -> DyckWord:
    """Uniform random Dyck word via the cycle lemma."""
    seq = np.array([1] * pairs + [-1] * (pairs + 1), dtype=np.int64)
    rng.shuffle(seq)
    pre = np.cumsum(seq)
    j = int(np.argmin(pre)) + 1
    rot = np.concatenate([seq[j:], seq[:j]])
    return DyckWord(tuple(int(v) for v in rot[:-1]))
