"""Vectors, cones and set families behind the automaton lower bound.

Coordinates are indexed 0..n-1 with n even.  A vector x lies in the cone
K when its alternating sum x_0 - x_1 + x_2 - ... is zero and every
alternating prefix sum is nonnegative; K is generated by the vectors
e_{i,j} = e_i + e_j with i even, j odd, i < j.

U_n collects pairs (y, x): y marks the edges of a monotone path from 0 to
n-1, x lies in K, and every coordinate in the support of x is touched by
the path on the appropriate side.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import InvalidWord, InvariantViolation, ParseError
from .words import as_word


def _frac_vec(x) -> list[Fraction]:
    return [Fraction(v) for v in x]


def in_cone(x: Sequence) -> bool:
    x = _frac_vec(x)
    if any(v < 0 for v in x):
        return False
    acc = Fraction(0)
    for i, v in enumerate(x):
        acc += v if i % 2 == 0 else -v
        if acc < 0:
            return False
    return acc == 0


def is_in_un(n: int, y: Mapping[tuple[int, int], int], x: Sequence) -> tuple[bool, list[str]]:
    """Membership in U_n with a list of the conditions that fail."""
    why = []
    if n < 2 or n % 2:
        return False, ["n must be even and at least 2"]
    if len(x) != n:
        return False, [f"x has {len(x)} coordinates, expected {n}"]
    edges = []
    for (i, j), val in y.items():
        if val not in (0, 1):
            why.append(f"y[{i},{j}]={val} is not 0/1")
        if not 0 <= i < j < n:
            why.append(f"y index ({i},{j}) is not an increasing pair in range")
        elif val == 1:
            edges.append((i, j))
    succ = {}
    for i, j in edges:
        if i in succ:
            why.append(f"vertex {i} has two outgoing path edges")
        succ[i] = j
    v, seen = 0, 0
    while v in succ and seen <= n:
        v = succ[v]
        seen += 1
    if v != n - 1 or seen != len(edges):
        why.append("y is not a single monotone path from 0 to n-1")
    if not in_cone(x):
        why.append("x is not in the cone K")
    heads = {j for _, j in edges}
    tails = {i for i, _ in edges}
    for j, v in enumerate(x):
        if v > 0 and j > 0 and j not in heads:
            why.append(f"x[{j}] > 0 but no path edge enters {j}")
        if v > 0 and j < n - 1 and j not in tails:
            why.append(f"x[{j}] > 0 but no path edge leaves {j}")
    return not why, why


def cone_decompose(x: Sequence) -> dict[tuple[int, int], Fraction]:
    """Nonnegative coefficients c_{i,j} with x = sum c_{i,j} e_{i,j}.

    Repeatedly take the first odd coordinate that is still nonzero and pay
    for it out of the even coordinates before it, leftmost first.
    """
    x = _frac_vec(x)
    if not in_cone(x):
        raise InvalidWord("vector is not in the cone")
    out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for j in range(1, len(x), 2):
        need = x[j]
        i = 0
        while need > 0:
            take = min(need, x[i])
            if take > 0:
                out[(i, j)] += take
                x[i] -= take
                need -= take
            i += 2
            if i > j and need > 0:
                raise InvariantViolation("cone decomposition ran out of even mass")
        x[j] = Fraction(0)
    if any(v != 0 for v in x):
        raise InvariantViolation("cone decomposition left a remainder")
    return dict(out)


def cone_compose(n: int, coeffs: Mapping[tuple[int, int], Fraction]) -> list[Fraction]:
    x = [Fraction(0)] * n
    for (i, j), c in coeffs.items():
        x[i] += c
        x[j] += c
    return x


# ---------------------------------------------------------------- Birkhoff


def _perfect_matching(support: list[list[bool]]) -> list[int]:
    # integer node ids keep the matching independent of string hashing
    n = len(support)
    g = nx.Graph()
    g.add_nodes_from(range(2 * n))
    g.add_edges_from((i, n + j) for i in range(n) for j in range(n) if support[i][j])
    m = nx.bipartite.hopcroft_karp_matching(g, top_nodes=range(n))
    if any(i not in m for i in range(n)):
        raise InvariantViolation("support has no perfect matching")
    return [m[i] - n for i in range(n)]


def bvn_decompose(matrix) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Exact Birkhoff-von Neumann decomposition into weighted permutations.

    Each permutation is given as a tuple perm with perm[i] the column of
    row i.  The number of terms is at most (n-1)^2 + 1.
    """
    m = [[Fraction(v) for v in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise InvalidWord("matrix must be square")
    if any(v < 0 for row in m for v in row):
        raise InvalidWord("matrix has a negative entry")
    for i in range(n):
        if sum(m[i]) != 1 or sum(m[j][i] for j in range(n)) != 1:
            raise InvalidWord("matrix is not doubly stochastic")
    terms = []
    while any(v for row in m for v in row):
        perm = _perfect_matching([[v > 0 for v in row] for row in m])
        wt = min(m[i][perm[i]] for i in range(n))
        for i in range(n):
            m[i][perm[i]] -= wt
        terms.append((wt, tuple(perm)))
    return _caratheodory(terms, n)


def _caratheodory(terms, n):
    """Shrink a convex combination of permutation matrices to (n-1)^2 + 1 terms."""
    limit = (n - 1) ** 2 + 1
    while len(terms) > limit:
        # affine dependence: sum a_k P_k = 0 with sum a_k = 0
        cols = []
        for _, perm in terms:
            v = [Fraction(0)] * (n * n) + [Fraction(1)]
            for i, j in enumerate(perm):
                v[i * n + j] = Fraction(1)
            cols.append(v)
        a = _null_vector(cols)
        pos = [k for k, v in enumerate(a) if v > 0]
        step = min(terms[k][0] / a[k] for k in pos)
        new = []
        for k, (wt, perm) in enumerate(terms):
            w2 = wt - step * a[k]
            if w2 > 0:
                new.append((w2, perm))
        terms = new
    return terms


def _null_vector(cols):
    rows = len(cols[0])
    m = len(cols)
    a = [[cols[c][r] for c in range(m)] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(m) if c not in pivots)
    vec = [Fraction(0)] * m
    vec[free] = Fraction(1)
    for row, c in enumerate(pivots):
        vec[c] = -a[row][free]
    return vec


def bvn_compose(n: int, terms) -> list[list[Fraction]]:
    m = [[Fraction(0)] * n for _ in range(n)]
    for wt, perm in terms:
        for i, j in enumerate(perm):
            m[i][j] += wt
    return m


def random_doubly_stochastic(n: int, terms: int, rng: np.random.Generator) -> list[list[Fraction]]:
    """Random rational convex combination of permutation matrices."""
    raw = [int(v) for v in rng.integers(1, 20, size=terms)]
    tot = sum(raw)
    return bvn_compose(n, [(Fraction(w, tot), tuple(int(v) for v in rng.permutation(n))) for w in raw])


# ---------------------------------------------------------------- set families


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def admissible_primes(n: int) -> list[int]:
    """Odd primes p with sqrt(n/8 - 1/2) < p < sqrt(n/2 - 2)."""
    out = []
    for p in range(3, math.isqrt(max(n, 0)) + 2, 2):
        if is_prime(p) and n / 8 - 0.5 < p * p < n / 2 - 2:
            out.append(p)
    return out


def nw_family(n: int, d: int, p: int | None = None) -> tuple[int, list[tuple[int, ...]]]:
    """Sets in [n/2] of size p+1 with pairwise intersections at most d+1.

    Graphs of polynomials of degree < d over F_p, restricted to the first
    p-1 field elements, are laid out lexicographically on 1..p^2; every
    set also gets 0 and n/2 - 1.  Returns (p, sorted list of sets).
    """
    if n % 2:
        raise InvalidWord("n must be even")
    primes = admissible_primes(n)
    if p is None:
        if not primes:
            raise InvalidWord(f"no admissible prime for n={n}")
        p = primes[-1]
    elif p not in primes:
        raise InvalidWord(f"p={p} is not admissible for n={n}")
    m = p - 1
    if not 1 <= d < m:
        raise InvalidWord(f"d={d} outside 1..{m - 1}")
    half = n // 2
    if p * p + 1 > half - 2:
        raise InvariantViolation("grid does not fit between 0 and n/2-1")
    sets = []
    for coeffs in product(range(p), repeat=d):
        pts = []
        for a in range(m):
            val = 0
            for c in reversed(coeffs):
                val = (val * a + c) % p
            pts.append(1 + a * p + val)
        sets.append(tuple(sorted([0, half - 1] + pts)))
    return p, sorted(sets)


def family_invariants(n: int, d: int, p: int, sets) -> dict:
    """Exhaustive check of sizes, distinctness and pairwise intersections."""
    half = n // 2
    masks = np.zeros(len(sets), dtype=np.uint64)
    for k, s in enumerate(sets):
        mk = 0
        for e in s:
            mk |= 1 << e
        masks[k] = mk
    if half > 64:
        raise InvariantViolation("bitmask check supports n/2 <= 64")
    sizes = {len(s) for s in sets}
    inside = all(0 <= e < half for s in sets for e in s)
    ends = all(0 in s and half - 1 in s for s in sets)
    worst = 0
    block = 2048
    for a in range(0, len(masks), block):
        inter = np.bitwise_count(masks[a:a + block, None] & masks[None, :])
        idx = np.arange(a, min(a + block, len(masks)))
        inter[idx - a, idx] = 0
        worst = max(worst, int(inter.max()) if inter.size else 0)
    return {
        "count": len(sets),
        "expected_count": p**d,
        "distinct": len(set(sets)) == len(sets),
        "sizes": sorted(sizes),
        "expected_size": p + 1,
        "max_intersection": worst,
        "bound": d + 1,
        "inside": inside,
        "ends": ends,
        "ok": (len(sets) == p**d and len(set(sets)) == len(sets) and sizes == {p + 1}
               and worst <= d + 1 and inside and ends),
    }


def c_f_vector(sigma, f: Sequence[int], lam, n: int) -> tuple[dict, list]:
    """(y, x) for a word sigma and a set F of positions in [n/2].

    The i-th smallest element j of F becomes 2j when sigma(i) is + and
    2j+1 otherwise; y links consecutive elements of the resulting set C_F
    and x puts weight lam on every element of C_F.
    """
    w = as_word(sigma)
    fs = sorted(set(f))
    if len(fs) != len(f) or len(fs) != len(w):
        raise InvalidWord("F must have |sigma| distinct elements")
    half = n // 2
    if n % 2 or not all(0 <= j < half for j in fs):
        raise InvalidWord("F must lie in [n/2]")
    if fs[0] != 0 or fs[-1] != half - 1:
        raise InvalidWord("F must contain 0 and n/2 - 1")
    c = [2 * j if s > 0 else 2 * j + 1 for j, s in zip(fs, w)]
    y = {(a, b): 1 for a, b in zip(c, c[1:])}
    x = [Fraction(0)] * n
    for e in c:
        x[e] = Fraction(lam)
    return y, x


def c_f_set(sigma, f: Sequence[int]) -> list[int]:
    w = as_word(sigma)
    return [2 * j if s > 0 else 2 * j + 1 for j, s in zip(sorted(f), w)]


# ---------------------------------------------------------------- automata


class NFA:
    def __init__(self, states: int, initial: int, final: set, transitions: list):
        self.states = states
        self.initial = initial
        self.final = set(final)
        self.transitions = transitions  # (src, label, dst)

    @staticmethod
    def parse(text: str) -> "NFA":
        states = initial = None
        final: set = set()
        trans = []
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "states":
                    states = int(parts[1])
                elif parts[0] == "initial":
                    initial = int(parts[1])
                elif parts[0] == "final":
                    final |= {int(v) for v in parts[1:]}
                else:
                    src, label, dst = parts
                    _label_kind(label)
                    trans.append((int(src), label, int(dst)))
            except (ValueError, IndexError):
                raise ParseError(f"line {ln}: cannot parse {raw!r}") from None
        if states is None or initial is None:
            raise ParseError("NFA needs 'states' and 'initial' lines")
        for s, _, d in trans:
            if not (0 <= s < states and 0 <= d < states):
                raise ParseError(f"transition {s}->{d} uses an unknown state")
        return NFA(states, initial, final, trans)

    def alphabet_size(self) -> int:
        top = -1
        for _, label, _ in self.transitions:
            kind, idx = _label_kind(label)
            if kind == "a":
                top = max(top, idx[0])
            elif kind == "c":
                top = max(top, *idx)
        return top + 1 + (top + 1) % 2


def _label_kind(label: str):
    if label == "eps":
        return "eps", ()
    if label.startswith("a") and label[1:].isdigit():
        return "a", (int(label[1:]),)
    if label.startswith("c") and "_" in label:
        i, j = label[1:].split("_", 1)
        if i.isdigit() and j.isdigit():
            return "c", (int(i), int(j))
    raise ParseError(f"unknown label {label!r}")


def nfa_validate(nfa: NFA, n: int | None = None, cycle_cap: int = 10_000) -> dict:
    """Structural checks on an automaton for the U_n language.

    Only states reachable from the initial state and co-reachable to a
    final one are considered.  Lists the edges of the condensation
    (c-labels kept, everything else as eps), flags c-transitions inside a
    strongly connected component, and flags simple cycles whose a-letter
    counts fall outside K.  Cycles are expanded over parallel labels and
    the expansion stops after ``cycle_cap`` labelled cycles.
    """
    n = n or nfa.alphabet_size()
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(nfa.states))
    for s, label, d in nfa.transitions:
        g.add_edge(s, d, label=label)
    useful = nx.descendants(g, nfa.initial) | {nfa.initial}
    co = set()
    for f in nfa.final:
        co |= nx.ancestors(g, f) | {f}
    keep = useful & co
    sub = g.subgraph(keep)
    comp_of = {}
    for ci, comp in enumerate(nx.strongly_connected_components(sub)):
        for v in comp:
            comp_of[v] = ci
    inside_c = [
        (s, lab, d) for s, d, lab in sub.edges(data="label")
        if _label_kind(lab)[0] == "c" and comp_of[s] == comp_of[d]
    ]
    condensation = sorted({
        (comp_of[s], comp_of[d], lab if _label_kind(lab)[0] == "c" else "eps")
        for s, d, lab in sub.edges(data="label") if comp_of[s] != comp_of[d]
    })
    simple = nx.DiGraph()
    simple.add_nodes_from(sub.nodes)
    labels = defaultdict(list)
    for s, d, lab in sub.edges(data="label"):
        simple.add_edge(s, d)
        labels[(s, d)].append(lab)
    bad_cycles = []
    checked = 0
    capped = False
    for cyc in nx.simple_cycles(simple):
        steps = list(zip(cyc, cyc[1:] + cyc[:1]))
        for choice in product(*(labels[e] for e in steps)):
            checked += 1
            if checked > cycle_cap:
                capped = True
                break
            vec = [0] * n
            for lab in choice:
                kind, idx = _label_kind(lab)
                if kind == "a":
                    vec[idx[0]] += 1
            if not in_cone(vec):
                bad_cycles.append((cyc, list(choice), vec))
        if capped:
            break
    return {
        "alphabet": n,
        "useful_states": len(keep),
        "components": len(set(comp_of.values())),
        "condensation_edges": condensation,
        "c_inside_component": inside_c,
        "cycles_checked": min(checked, cycle_cap),
        "cycles_capped": capped,
        "bad_cycles": bad_cycles,
        "ok": not inside_c and not bad_cycles,
    }


def u2_automaton() -> NFA:
    """A small automaton whose Parikh image is U_2: one c0_1 and (a0 a1)^*."""
    return NFA(3, 0, {2}, [(0, "a0", 1), (1, "a1", 0), (0, "c0_1", 2)])


# ---------------------------------------------------------------- planning


def plan_lower_bound(sigma, width: int) -> dict:
    """Parameters for the set-family argument given a word and its width.

    p = |sigma| - 1 must be an odd prime; n is the smallest even length
    with p admissible and |sigma| <= n/2; d = width - 1.
    """
    w = as_word(sigma)
    s = len(w)
    p = s - 1
    if not (p >= 3 and is_prime(p)):
        raise InvalidWord(f"|sigma| - 1 = {p} is not an odd prime")
    lo = 2 * p * p + 4  # exclusive
    hi = 8 * p * p + 4  # exclusive
    cands = [n for n in range(lo + 1, hi) if n % 2 == 0 and p in admissible_primes(n) and s <= n // 2]
    if not cands:
        raise InvalidWord("no admissible n")
    n = cands[0]
    d = width - 1
    m = p - 1
    rec = {
        "word": str(w),
        "length": s,
        "width": width,
        "p": p,
        "m": m,
        "n": n,
        "n_range": [cands[0], cands[-1]],
        "d": d,
        "family_size": p**d if d >= 0 else 0,
        "degenerate": d < 1,
        "admissible_d": 0 <= d < m,
        "length_over_sqrt_n": s / math.sqrt(n),
    }
    rec["log_family_over_log_n"] = (d * math.log(p) / math.log(n)) if d > 0 else 0.0
    return rec
