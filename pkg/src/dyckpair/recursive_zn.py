"""The recursive re-pairing p(q, n, k) of framed words Z(n)^(k) = +^k Z(n) -^k.

Every step erases the leftmost surviving minus.  For n <= 2 it is paired
with the leftmost surviving plus.  Otherwise the word is cut as

    w_0 Z_1 w_1 Z_2 ... w_{N-1} Z_N w_N,   N = 2^(n-q),  Z_t = Z(q),

with w_0 = +^(k+n-q), w_N = -^(k+n-q) and w_t = -^r_t +^r_t where r_t is
the 2-adic valuation of t.  Stage t starts once every minus left of Z_t
is gone.  It re-pairs the subsequence Z'_t (the k_t rightmost surviving
pluses left of Z_t, Z_t itself, and the k_t leftmost surviving minuses
after it) with the best p(q', q, k_t), q' <= q/3, until either Z'_t is
used up or every minus left of Z_{t+1} is gone; leftover minuses before
Z_{t+1} are then paired greedily with the leftmost surviving pluses.

Two simulators are provided.  ``recursive_repairing`` materializes the
whole pair sequence.  ``streaming_width`` keeps only a run-length picture
of the already-processed prefix and memoizes what a stage does to its
local window, which is what makes n = 30 reachable.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidWord, InvariantViolation
from .repairing import width_of
from .words import frame, z_word

INF = np.int64(1) << 60


def zn_word(n: int, k: int = 0):
    return frame(z_word(n), k)


def k_seq(t: int, q: int) -> int:
    """k_t: 0 at the start of each period of 2^q stages, else ceil(log2 a) - 1."""
    a = (t - 1) % (1 << q) + 1
    return 0 if a == 1 else (a - 1).bit_length() - 1


def two_adic(t: int) -> int:
    return (t & -t).bit_length() - 1


@lru_cache(maxsize=None)
def _z_offsets(q: int):
    w = z_word(q).signs
    pl = np.array([i for i, s in enumerate(w) if s > 0], dtype=np.int64)
    mi = np.array([i for i, s in enumerate(w) if s < 0], dtype=np.int64)
    return pl, mi


@dataclass
class Geometry:
    """Positions of the factors Z_t and separators w_t inside Z(n)^(k)."""

    q: int
    n: int
    k: int
    zq: int = field(init=False)
    stages: int = field(init=False)
    lead: int = field(init=False)
    total: int = field(init=False)
    r: list = field(init=False)
    start: list = field(init=False)
    minus_before: list = field(init=False)

    def __post_init__(self):
        q, n, k = self.q, self.n, self.k
        self.zq = 2 * (2**q - 1)
        self.stages = N = 2 ** (n - q)
        self.lead = k + n - q
        self.total = 2 * (2**n - 1) + 2 * k
        self.r = [0] + [two_adic(t) for t in range(1, N)] + [self.lead]
        self.start = [0, self.lead + 1]
        self.minus_before = [0, 0]
        for t in range(1, N):
            self.start.append(self.start[t] + self.zq + 2 * self.r[t])
            self.minus_before.append(self.minus_before[t] + self.zq // 2 + self.r[t])
        self.start.append(self.total + 1)
        self.minus_before.append(self.total // 2)

    def w_plus_block(self, j: int) -> tuple[int, int]:
        if j == 0:
            return 1, self.lead
        s = self.start[j] + self.zq + self.r[j]
        return s, s + self.r[j] - 1


def check_args(q: int, n: int, k: int) -> None:
    if n < 1:
        raise InvalidWord("n must be positive")
    if not 1 <= q <= (n + 1) / 2 and n > 2:
        raise InvalidWord(f"q={q} outside 1..(n+1)/2 for n={n}")
    if not 0 <= k <= n:
        raise InvalidWord(f"k={k} outside 0..n")


@dataclass
class StageRecord:
    t: int
    k_t: int
    r_t: int
    executed: int  # inner pairs actually used
    exhausted: bool  # Z'_t fully re-paired
    final_steps: int  # greedy steps after the inner re-pairing
    skipped_runs: tuple  # lengths of skipped-plus runs at stage start

    @property
    def narrow(self) -> bool:
        return self.final_steps > 0


def _normality(runs, kt, t, geo: Geometry, strict: bool):
    """Check the stage-start shape of the surviving pluses left of Z_t.

    ``runs`` lists maximal runs (a, b) of surviving positions left of Z_t
    (all of them pluses).  The kt rightmost form the group; the others are
    skipped runs.  Returns the skipped run lengths.
    """
    total = sum(b - a + 1 for a, b in runs)
    if total < kt:
        raise InvariantViolation(f"stage {t}: only {total} pluses left for a group of {kt}")
    skipped = []
    need = kt
    group_lo = None
    for a, b in reversed(runs):
        ln = b - a + 1
        if need >= ln:
            need -= ln
            group_lo = a
            continue
        if need:
            group_lo = b - need + 1
            b -= need
            need = 0
        skipped.append((a, b))
    skipped.reverse()
    lengths = tuple(b - a + 1 for a, b in skipped)
    if not strict:
        return lengths
    if kt and t >= 2 and group_lo < geo.start[t - 1]:
        raise InvariantViolation(f"stage {t}: group reaches left of Z_(t-1)")
    import bisect as _b

    for a, b in skipped:
        j = _b.bisect_right(geo.start, a, 1, t + 1) - 1
        lo, hi = geo.w_plus_block(j)
        if not (lo <= a and b <= hi):
            raise InvariantViolation(f"stage {t}: skipped run {a}..{b} is not inside a separator")
    for i, ln in enumerate(lengths[1:], start=2):
        if ln < geo.q:
            raise InvariantViolation(f"stage {t}: skipped run {i} has length {ln} < q")
    if sum(lengths) > geo.n + geo.k:
        raise InvariantViolation(f"stage {t}: {sum(lengths)} skipped pluses exceed n+k")
    return lengths


def _compress(positions) -> list[tuple[int, int]]:
    runs = []
    for p in positions:
        if runs and runs[-1][1] == p - 1:
            runs[-1] = (runs[-1][0], p)
        else:
            runs.append((p, p))
    return runs


class Planner:
    """Caches inner re-pairings and the choice of q' for each (q, k)."""

    def __init__(self, strict: bool = True):
        self.strict = strict
        self._pairs: dict = {}
        self._width: dict = {}
        self._best: dict = {}

    def pairs(self, q: int, n: int, k: int) -> np.ndarray:
        key = (q, n, k)
        if key not in self._pairs:
            self._pairs[key] = _simulate(q, n, k, self, record=False)[0]
        return self._pairs[key]

    def width(self, q: int, n: int, k: int) -> int:
        key = (q, n, k)
        if key not in self._width:
            p = self.pairs(q, n, k)
            self._width[key] = width_of(2 * (2**n - 1) + 2 * k, p, check=False).width
        return self._width[key]

    def best_inner(self, q: int, k: int) -> int | None:
        """Best q' in 1..q/3 for re-pairing Z(q)^(k); None means the greedy base case."""
        if q <= 2:
            return None
        key = (q, k)
        if key not in self._best:
            cands = range(1, q // 3 + 1)
            self._best[key] = min(cands, key=lambda qq: (self.width(qq, q, k), qq))
        return self._best[key]

    def inner(self, q: int, k: int) -> np.ndarray:
        qq = self.best_inner(q, k)
        if qq is None:
            return _greedy_zn(q, k)
        return self.pairs(qq, q, k)

    def w_table(self, n: int, qs=None, ks=None) -> dict:
        qs = qs if qs is not None else range(1, n // 3 + 1)
        ks = ks if ks is not None else range(0, n + 1)
        return {(q, k): self.width(q, n, k) for q in qs for k in ks}


@lru_cache(maxsize=None)
def _greedy_zn(n: int, k: int) -> np.ndarray:
    w = zn_word(n, k).array()
    plus = np.flatnonzero(w > 0) + 1
    minus = np.flatnonzero(w < 0) + 1
    out = np.stack([plus, minus], axis=1)
    out.setflags(write=False)
    return out


def _simulate(q, n, k, planner: Planner, record: bool):
    if n <= 2:
        return _greedy_zn(n, k), []
    check_args(q, n, k)
    geo = Geometry(q, n, k)
    zq, N = geo.zq, geo.stages
    zpl, zmi = _z_offsets(q)
    erased = np.zeros(geo.total + 2, dtype=bool)
    out = np.empty((geo.total // 2, 2), dtype=np.int64)
    ptr = 0
    left = deque(range(1, geo.lead + 1))
    minus_done = 0
    stages = []
    for t in range(1, N + 1):
        if minus_done != geo.minus_before[t]:
            raise InvariantViolation(f"stage {t} started with minuses still to the left")
        kt = k_seq(t, q)
        skipped = _normality(_compress(left), kt, t, geo, planner.strict)
        group = [left.pop() for _ in range(kt)][::-1]
        it = geo.start[t]
        end_z = it + zq
        rt = geo.r[t]
        if t < N:
            near = min(kt, rt)
            outer = list(range(end_z, end_z + near))
            outer += (geo.start[t + 1] + zmi[: kt - near]).tolist()
        else:
            outer = list(range(end_z, end_z + kt))
        mp = np.array(group + list(range(it, end_z)) + outer, dtype=np.int64)
        inner = planner.inner(q, kt)
        gl = mp[inner[:, 0] - 1]
        gr = mp[inner[:, 1] - 1]
        bound = geo.start[t + 1] if t < N else geo.total + 1
        exe = int(np.searchsorted(gr, bound))
        out[ptr:ptr + exe, 0] = gl[:exe]
        out[ptr:ptr + exe, 1] = gr[:exe]
        ptr += exe
        erased[gl[:exe]] = True
        erased[gr[:exe]] = True
        minus_done += exe
        for g in group:
            if not erased[g]:
                left.append(g)
        exhausted = exe == len(inner)
        final = 0
        if exhausted:
            final = geo.minus_before[t + 1] - minus_done
            nxt = end_z + min(kt, rt)
            for j in range(final):
                m = nxt + j
                p = left.popleft()
                if p > m:
                    raise InvariantViolation(f"stage {t}: greedy plus {p} right of minus {m}")
                out[ptr] = (p, m)
                ptr += 1
                erased[p] = erased[m] = True
            minus_done += final
        elif minus_done != geo.minus_before[t + 1]:
            raise InvariantViolation(f"stage {t}: inner re-pairing stopped early")
        if t < N:
            zp = it + zpl
            left.extend(zp[~erased[zp]].tolist())
            left.extend(range(end_z + rt, end_z + 2 * rt))
        if record:
            stages.append(StageRecord(t, kt, rt, exe, exhausted, final, skipped))
    if ptr != geo.total // 2:
        raise InvariantViolation("simulation ended with symbols left")
    return out, stages


def recursive_repairing(q: int, n: int, k: int = 0, planner: Planner | None = None):
    """Pair sequence of p(q, n, k) on Z(n)^(k) plus per-stage records."""
    check_args(q, n, k)
    planner = planner or Planner()
    return _simulate(q, n, k, planner, record=True)


def narrow_check(stages, q: int, geo: Geometry) -> None:
    """A stage has a greedy tail exactly when r_t > k_t; q such stages per period."""
    for s in stages:
        if s.narrow != (s.r_t > s.k_t):
            raise InvariantViolation(f"stage {s.t}: narrow={s.narrow} but r_t={s.r_t}, k_t={s.k_t}")
    period = 1 << q
    for start in range(0, geo.stages - period + 1, period):
        block = stages[start:start + period]
        if block[-1].t == geo.stages:
            continue  # the last separator is the closing frame, not a valuation
        count = sum(s.narrow for s in block)
        if count != q:
            raise InvariantViolation(f"period at stage {start + 1} has {count} narrow stages, expected {q}")


# ---------------------------------------------------------------- streaming


def _rle_from_bool(arr: np.ndarray, offset: int) -> list[list]:
    if arr.size == 0:
        return []
    cuts = np.flatnonzero(arr[1:] != arr[:-1]) + 1
    starts = np.concatenate([[0], cuts])
    ends = np.concatenate([cuts, [arr.size]]) - 1
    return [[int(a) + offset, int(b) + offset, bool(arr[a])] for a, b in zip(starts, ends)]


def _append_runs(runs, more):
    for r in more:
        if runs and runs[-1][2] == r[2] and runs[-1][1] == r[0] - 1:
            runs[-1][1] = r[1]
        else:
            runs.append(list(r))


def _count_erased(runs) -> int:
    return sum(1 for r in runs if r[2])


def _erase_front_plus(runs) -> tuple[int, int]:
    """Erase the leftmost surviving position; returns (position, run delta)."""
    for i, (a, b, er) in enumerate(runs):
        if er:
            continue
        prev_er = i > 0  # runs alternate, so a predecessor is erased
        if a == b:
            nxt_er = i + 1 < len(runs)
            if prev_er and nxt_er:
                runs[i - 1][1] = runs[i + 1][1]
                del runs[i:i + 2]
                return a, -1
            if prev_er:
                runs[i - 1][1] = a
                del runs[i]
                return a, 0
            if nxt_er:
                runs[i + 1][0] = a
                del runs[i]
                return a, 0
            runs[i][2] = True
            return a, 1
        runs[i][0] = a + 1
        if prev_er:
            runs[i - 1][1] = a
            return a, 0
        runs.insert(i, [a, a, True])
        return a, 1
    raise InvariantViolation("no surviving plus to pair with")


def _erase_at(runs, pos) -> int:
    """Erase one surviving position (searched from the right); returns run delta."""
    for i in range(len(runs) - 1, -1, -1):
        a, b, er = runs[i]
        if a <= pos <= b:
            break
    else:
        raise InvariantViolation(f"position {pos} outside tracked region")
    if er:
        raise InvariantViolation(f"position {pos} already erased")
    left_er = i > 0 and a == pos
    right_er = i + 1 < len(runs) and b == pos
    pieces = []
    if a < pos:
        pieces.append([a, pos - 1, False])
    pieces.append([pos, pos, True])
    if pos < b:
        pieces.append([pos + 1, b, False])
    runs[i:i + 1] = pieces
    # merge the new erased cell with erased neighbours
    j = i + (1 if a < pos else 0)
    if right_er:
        runs[j][1] = runs[j + 1][1]
        del runs[j + 1]
    if left_er:
        runs[j - 1][1] = runs[j][1]
        del runs[j]
    return 1 - left_er - right_er


def streaming_width(q: int, n: int, k: int = 0, planner: Planner | None = None,
                    strict: bool | None = None):
    """Width of p(q, n, k) without materializing the word.

    Returns (width, stage records).  The processed prefix is kept as a
    run-length list; each stage's first part only touches a window made of
    the run holding its group, Z_t and w_t, and the effect of that part is
    memoized on the window's shape.
    """
    check_args(q, n, k)
    planner = planner or Planner()
    strict = planner.strict if strict is None else strict
    if n <= 2:
        return width_of(2 * (2**n - 1) + 2 * k, _greedy_zn(n, k), check=False).width, []
    geo = Geometry(q, n, k)
    zq, N = geo.zq, geo.stages
    runs: list[list] = [[1, geo.lead, False]] if geo.lead else []
    minus_done = 0
    best = 0
    memo: dict = {}
    stages = []
    for t in range(1, N + 1):
        if minus_done != geo.minus_before[t]:
            raise InvariantViolation(f"stage {t} started with minuses still to the left")
        kt = k_seq(t, q)
        it = geo.start[t]
        alive = [(a, b) for a, b, er in runs if not er]
        skipped = _normality(alive, kt, t, geo, strict)
        # find the run holding the leftmost group plus
        idx, need = len(runs), kt
        while need > 0:
            idx -= 1
            a, b, er = runs[idx]
            if not er:
                need -= b - a + 1
        tail_start = runs[idx][0] if kt else it
        deep = runs[:idx] if kt else runs
        flag = bool(deep) and deep[-1][2]
        tail = runs[idx:] if kt else []
        rt = geo.r[t]
        last = t == N
        sig = (kt, tuple((b - a + 1, er) for a, b, er in tail), -geo.lead if last else rt, flag)
        res = memo.get(sig)
        if res is None:
            res = memo[sig] = _window_stage(planner, q, kt, sig[1], rt, last, geo.lead, flag)
        exe, exhausted, rel0, max_cum, win_runs = res
        a_deep = _count_erased(deep)
        if max_cum is not None:
            best = max(best, a_deep + rel0 + max_cum)
        runs = [list(r) for r in deep]
        _append_runs(runs, [[a + tail_start, b + tail_start, er] for a, b, er in win_runs])
        minus_done += exe
        final = 0
        if exhausted:
            final = geo.minus_before[t + 1] - minus_done
            nxt = it + zq + min(kt, rt)
            count = _count_erased(runs)
            for j in range(final):
                p, d1 = _erase_front_plus(runs)
                if p > nxt + j:
                    raise InvariantViolation(f"stage {t}: greedy plus right of its minus")
                d2 = _erase_at(runs, nxt + j)
                count += d1 + d2
                best = max(best, count)
            minus_done += final
        elif minus_done != geo.minus_before[t + 1]:
            raise InvariantViolation(f"stage {t}: inner re-pairing stopped early")
        stages.append(StageRecord(t, kt, rt, exe, exhausted, final, skipped))
    return best, stages


def _window_stage(planner, q, kt, tail_sig, rt, last, lead, flag):
    zq = 2 * (2**q - 1)
    tail_len = sum(ln for ln, _ in tail_sig)
    sep = lead if last else 2 * rt
    wlen = tail_len + zq + sep
    er0 = np.zeros(wlen, dtype=bool)
    pos = 0
    for ln, e in tail_sig:
        er0[pos:pos + ln] = e
        pos += ln
    alive_tail = np.flatnonzero(~er0[:tail_len])
    group = alive_tail[len(alive_tail) - kt:] if kt else alive_tail[:0]
    base = tail_len + zq
    if last:
        outer = base + np.arange(kt)
    else:
        near = min(kt, rt)
        outer = np.concatenate([base + np.arange(near), wlen + np.arange(kt - near)])
    mp = np.concatenate([group, tail_len + np.arange(zq), outer]).astype(np.int64)
    inner = planner.inner(q, kt)
    gl = mp[inner[:, 0] - 1]
    gr = mp[inner[:, 1] - 1]
    exe = len(inner) if last else int(np.searchsorted(gr, base + rt))
    key = np.where(er0, -1, INF).astype(np.int64)
    key = np.concatenate([[-1 if flag else INF], key, [INF]])
    steps = np.arange(exe, dtype=np.int64)
    key[gl[:exe] + 1] = 2 * steps
    key[gr[:exe] + 1] = 2 * steps + 1

    def dl(p):
        k0 = key[p]
        return 1 - (key[p - 1] < k0).astype(np.int64) - (key[p + 1] < k0)

    cum = np.cumsum(dl(gl[:exe] + 1) + dl(gr[:exe] + 1))
    ext = np.concatenate([[flag], er0])
    run0 = int(np.count_nonzero(ext[1:] & ~ext[:-1])) + int(ext[0])
    er1 = er0.copy()
    er1[gl[:exe]] = True
    er1[gr[:exe]] = True
    max_cum = int(cum.max()) if exe else None
    return exe, exe == len(inner), run0 - int(flag), max_cum, _rle_from_bool(er1, 0)


# ---------------------------------------------------------------- W_n and x_n


def w_value(planner: Planner, n: int, qs=None) -> tuple[int, int]:
    """W_n = min over q of max over k of width(p(q, n, k)); returns (W_n, best q)."""
    if qs is None:
        qs = range(15, n // 3 + 1) if n >= 45 else range(1, n // 3 + 1)
    best = None
    for q in qs:
        val = max(planner.width(q, n, k) for k in range(n + 1))
        if best is None or val < best[0]:
            best = (val, q)
    if best is None:
        raise InvalidWord(f"no admissible q for n={n}")
    return best


def surrogate_w(measured: dict[int, int], upto: int = 44) -> dict[int, tuple[float, str]]:
    """Base values W_i for 3 <= i <= upto.

    Measured values are used where available; beyond them the recurrence
    2i/q + 2W_q + 3 over 1 <= q <= i/3 stands in, labelled as a surrogate.
    """
    out: dict[int, tuple[float, str]] = {}
    for i in range(3, upto + 1):
        if i in measured:
            out[i] = (float(measured[i]), "measured")
            continue
        cands = [2 * i / q + 2 * out[q][0] + 3 for q in range(3, i // 3 + 1)]
        if not cands:
            raise InvalidWord(f"W_{i} must be measured (no q >= 3 with q <= i/3)")
        out[i] = (min(cands), "surrogate")
    return out


def xn_solve(n_max: int, base: dict[int, float]) -> np.ndarray:
    """x_n for n <= n_max: x_i = W_i + 3 below 45, else min_{15<=q<=n/3} 2n/q + 2x_q.

    The argmin is monotone in n (the cost 2n/q + 2x_q has the Monge
    property), so each block [B, 3B) is solved by divide and conquer,
    vectorized level by level.
    """
    x = np.full(n_max + 1, np.nan)
    for i, w in base.items():
        if 3 <= i < 45 and i <= n_max:
            x[i] = w + 3
    lo = 45
    while lo <= n_max:
        hi = min(3 * lo, n_max + 1)
        _dc_block(x, lo, hi)
        lo = hi
    return x


def _dc_block(x, lo, hi):
    # tasks: (n_lo, n_hi, opt_lo, opt_hi), inclusive n range
    tasks = [(lo, hi - 1, 15, (hi - 1) // 3)]
    while tasks:
        mids, qs, seg = [], [], []
        for a, b, ql, qh in tasks:
            m = (a + b) // 2
            top = min(qh, m // 3)
            mids.append(m)
            seg.append(len(qs))
            qs.extend(range(ql, top + 1))
        qa = np.array(qs, dtype=np.int64)
        owner = np.repeat(np.arange(len(tasks)), np.diff(np.append(seg, len(qs))))
        ma = np.array(mids, dtype=np.float64)[owner]
        cost = 2 * ma / qa + 2 * x[qa]
        nxt = []
        bounds = np.append(seg, len(qs))
        for i, (a, b, ql, qh) in enumerate(tasks):
            s, e = bounds[i], bounds[i + 1]
            j = s + int(np.argmin(cost[s:e]))
            m = mids[i]
            x[m] = cost[j]
            opt = int(qa[j])
            if a <= m - 1:
                nxt.append((a, m - 1, ql, opt))
            if m + 1 <= b:
                nxt.append((m + 1, b, opt, qh))
        tasks = nxt


def xn_bruteforce(n_max: int, base: dict[int, float]) -> np.ndarray:
    x = np.full(n_max + 1, np.nan)
    for i, w in base.items():
        if 3 <= i < 45 and i <= n_max:
            x[i] = w + 3
    for n in range(45, n_max + 1):
        q = np.arange(15, n // 3 + 1)
        x[n] = np.min(2 * n / q + 2 * x[q])
    return x


def fit_sqrt_log(x: np.ndarray, n_lo: int = 1000) -> dict:
    """Least-squares fit log2 x_n = a * sqrt(log2 n) + b over n >= n_lo."""
    ns = np.arange(n_lo, len(x))
    ns = ns[np.isfinite(x[ns])]
    s = np.sqrt(np.log2(ns))
    y = np.log2(x[ns])
    a, b = np.polyfit(s, y, 1)
    resid = y - (a * s + b)
    ratio = y / s
    return {
        "slope": float(a),
        "intercept": float(b),
        "max_abs_residual": float(np.abs(resid).max()),
        "rms_residual": float(np.sqrt(np.mean(resid**2))),
        "ratio_min": float(ratio.min()),
        "ratio_max": float(ratio.max()),
        "n_lo": int(n_lo),
        "n_hi": int(ns[-1]),
    }
