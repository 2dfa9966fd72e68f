"""Timed binary trees, derivations, and their correspondence with re-pairings.

Edges are named by their lower endpoint; an edge's time is the depth of
that node, so edges leaving the root have time 1.  The traversal lists
every edge twice (before and after its subtree).  A derivation puts at
most one sign on each side of an edge so that, for every time t, the
signs on time-t edges read either nothing or ``+-`` along the traversal.
Reading all signs along the traversal gives the derived word; the pair
derived at time t becomes one step of a re-pairing, latest time first.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .errors import CapExceeded, InvalidRepairing, NotBinaryTree, ParseError
from .repairing import as_pairs, iter_repairings, validate
from .words import as_word

L_CAP = 10
LEFT, RIGHT = 0, 1


@dataclass
class TimedTree:
    parent: list = field(default_factory=lambda: [-1])
    children: list = field(default_factory=lambda: [[]])
    depth: list = field(default_factory=lambda: [0])
    signs: dict = field(default_factory=dict)  # (edge, side) -> +1 / -1

    def add(self, parent: int, left: int | None = None, right: int | None = None) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.children.append([])
        self.depth.append(self.depth[parent] + 1)
        self.children[parent].append(v)
        if len(self.children[parent]) > 2:
            raise NotBinaryTree(f"node {parent} has more than two children")
        if left is not None:
            self.signs[(v, LEFT)] = left
        if right is not None:
            self.signs[(v, RIGHT)] = right
        return v

    def time(self, e: int) -> int:
        return self.depth[e]

    @property
    def edges(self) -> range:
        return range(1, len(self.parent))

    def traversal(self) -> list[tuple[int, int]]:
        """Edge occurrences (edge, side) in traversal order."""
        out = []
        stack = [(c, False) for c in reversed(self.children[0])]
        while stack:
            e, done = stack.pop()
            if done:
                out.append((e, RIGHT))
                continue
            out.append((e, LEFT))
            stack.append((e, True))
            stack.extend((c, False) for c in reversed(self.children[e]))
        return out

    def width(self) -> int:
        counts = Counter(self.depth[e] for e in self.edges)
        return max(counts.values(), default=0)

    def check_binary(self) -> None:
        for v, ch in enumerate(self.children):
            if len(ch) > 2:
                raise NotBinaryTree(f"node {v} has {len(ch)} children")


# ---------------------------------------------------------------- derivations


def check_derivation(tree: TimedTree) -> None:
    """Raise InvalidRepairing unless every time slice reads '' or '+-'."""
    tree.check_binary()
    per_time: dict[int, list[int]] = {}
    for e, side in tree.traversal():
        s = tree.signs.get((e, side))
        if s is not None:
            per_time.setdefault(tree.time(e), []).append(s)
    for t, seq in per_time.items():
        if seq != [1, -1]:
            txt = "".join("+" if s > 0 else "-" for s in seq)
            raise InvalidRepairing(f"time {t} derives '{txt}' instead of '+-'")


def derived_word(tree: TimedTree) -> str:
    return "".join(
        "+" if tree.signs[o] > 0 else "-" for o in tree.traversal() if o in tree.signs
    )


def repairing_from_derivation(tree: TimedTree) -> list[tuple[int, int]]:
    """The re-pairing p_pi: pairs derived at each time, latest time first."""
    check_derivation(tree)
    at: dict[int, list[int]] = {}
    idx = 0
    for o in tree.traversal():
        if o in tree.signs:
            idx += 1
            at.setdefault(tree.time(o[0]), []).append(idx)
    return [tuple(at[t]) for t in sorted(at, reverse=True)]


def _intervals(positions: set) -> list[tuple[int, int]]:
    out = []
    for p in sorted(positions):
        if out and out[-1][1] == p - 1:
            out[-1] = (out[-1][0], p)
        else:
            out.append((p, p))
    return out


def derivation_from_repairing(sigma, p, binarize: str = "left") -> TimedTree:
    """Tree whose derivation reproduces p exactly.

    Nodes stand for maximal erased intervals; walking the re-pairing
    backwards, each interval of B_s splits into the intervals of B_{s-1}
    it contains plus the signs erased at step s.  A new sign goes on the
    free side of an adjacent edge; a freshly born interval, or two new
    signs on the same side of one old interval, get an extra leaf edge.
    A three-way merge is binarized through an extra node, and that step
    then takes two tree levels (other intervals pass straight through).
    ``binarize`` chooses which neighbouring pair is grouped first.
    """
    w = as_word(sigma)
    pairs = as_pairs(p).tolist()
    validate(w, pairs)
    if binarize not in ("left", "right"):
        raise ValueError("binarize must be 'left' or 'right'")
    m = len(pairs)
    tree = TimedTree()
    if m == 0:
        return tree
    erased = set()
    levels = [[]]
    for l, r in pairs:
        erased |= {l, r}
        levels.append(_intervals(erased))
    node_of = {levels[m][0]: 0}
    for s in range(m, 0, -1):
        l, r = pairs[s - 1]
        below = levels[s - 1]
        plan = []
        three = False
        for iv in levels[s]:
            a, b = iv
            js = [j for j in below if a <= j[0] and j[1] <= b]
            new = [x for x in (l, r) if a <= x <= b]
            plan.append((iv, js, new))
            three |= len(js) == 3
        nxt = {}
        for iv, js, new in plan:
            v = node_of[iv]
            if three and len(js) != 3:
                v = tree.add(v)  # pass-through level
            _expand(tree, v, js, new, w, nxt, three, binarize)
        node_of = nxt
    return tree


def _expand(tree, v, js, new, w, nxt, three, binarize):
    sgn = {x: w[x - 1] for x in new}
    if len(js) == 3:
        j1, j2, j3 = js
        plus, minus = sorted(new)
        if binarize == "left":
            aux = tree.add(v)
            pas = tree.add(v)
            nxt[j1] = tree.add(aux, right=sgn[plus])
            nxt[j2] = tree.add(aux, right=sgn[minus])
            nxt[j3] = tree.add(pas)
        else:
            pas = tree.add(v)
            aux = tree.add(v)
            nxt[j1] = tree.add(pas)
            nxt[j2] = tree.add(aux, left=sgn[plus], right=sgn[minus])
            nxt[j3] = tree.add(aux)
        return
    if not js:
        xs = sorted(new)
        if len(xs) == 2 and xs[1] == xs[0] + 1:
            tree.add(v, left=sgn[xs[0]], right=sgn[xs[1]])
        else:
            for x in xs:
                tree.add(v, left=sgn[x])
        return
    before = [x for x in new if x < js[0][0]]
    after = [x for x in new if x > js[-1][1]]
    between = [x for x in new if js[0][1] < x < js[-1][0]]
    if len(js) == 1:
        (j,) = js
        if len(before) == 2:
            tree.add(v, left=sgn[before[0]], right=sgn[before[1]])
            nxt[j] = tree.add(v)
        elif len(after) == 2:
            nxt[j] = tree.add(v)
            tree.add(v, left=sgn[after[0]], right=sgn[after[1]])
        else:
            nxt[j] = tree.add(
                v,
                left=sgn[before[0]] if before else None,
                right=sgn[after[0]] if after else None,
            )
        return
    j1, j2 = js
    between = sorted(between)
    r1 = between[0] if between else None
    l2 = between[1] if len(between) > 1 else None
    nxt[j1] = tree.add(
        v,
        left=sgn[before[0]] if before else None,
        right=sgn[r1] if r1 is not None else None,
    )
    nxt[j2] = tree.add(
        v,
        left=sgn[l2] if l2 is not None else None,
        right=sgn[after[0]] if after else None,
    )


def derivations_of(sigma, p) -> Iterator[TimedTree]:
    """All trees built from p, over both groupings of every three-way merge."""
    yield derivation_from_repairing(sigma, p, "left")
    right = derivation_from_repairing(sigma, p, "right")
    if _shape(right) != _shape(derivation_from_repairing(sigma, p, "left")):
        yield right


def _shape(tree):
    return (tuple(map(tuple, tree.children)), tuple(sorted(tree.signs.items())))


# ---------------------------------------------------------------- fragments


def sign_indices(tree: TimedTree) -> list[int]:
    """Traversal index of each derived sign, in word order."""
    return [i for i, o in enumerate(tree.traversal()) if o in tree.signs]


def fragment_edges(tree: TimedTree, i: int, j: int) -> set[int]:
    trav = tree.traversal()
    return {trav[x][0] for x in range(i, j + 1)}


def fragment_width(tree: TimedTree, edges) -> int:
    counts = Counter(tree.time(e) for e in edges)
    return max(counts.values(), default=0)


def factor_fragment(tree: TimedTree, a: int, b: int) -> set[int]:
    """Edges of the fragment for the factor at word positions a..b (1-based)."""
    idx = sign_indices(tree)
    return fragment_edges(tree, idx[a - 1], idx[b - 1])


def factor_widths(tree: TimedTree) -> dict[tuple[int, int], int]:
    """Fragment width of every factor (a, b)."""
    trav = tree.traversal()
    idx = [i for i, o in enumerate(trav) if o in tree.signs]
    out = {}
    for a in range(len(idx)):
        counts: Counter = Counter()
        seen: set = set()
        top = 0
        pos = idx[a]
        for b in range(a, len(idx)):
            while pos <= idx[b]:
                e = trav[pos][0]
                if e not in seen:
                    seen.add(e)
                    counts[tree.time(e)] += 1
                    top = max(top, counts[tree.time(e)])
                pos += 1
            out[(a + 1, b + 1)] = top
    return out


def l_value(tree: TimedTree, k: int) -> int:
    """Longest factor whose fragment has width at most k."""
    return max((b - a + 1 for (a, b), wd in factor_widths(tree).items() if wd <= k), default=0)


def l_profile(word, cap: int = L_CAP) -> dict[int, int]:
    """L(W, k) for k = 1..|W|/2+1, maximized over enumerated derivations.

    The enumeration covers every re-pairing of W and both groupings of
    each three-way merge.  This is a lower bound for the maximum over all
    derivations of W.
    """
    w = as_word(word)
    if len(w) > cap:
        raise CapExceeded(f"L enumeration limited to length {cap}")
    ks = range(1, len(w) // 2 + 2)
    best = {k: 0 for k in ks}
    for p in iter_repairings(w):
        for tree in derivations_of(w, p):
            fw = factor_widths(tree)
            for k in ks:
                v = max((b - a + 1 for (a, b), x in fw.items() if x <= k), default=0)
                best[k] = max(best[k], v)
    return best


def l_oracle(word, k: int, cap: int = L_CAP) -> int:
    return l_profile(word, cap)[min(k, len(as_word(word)) // 2 + 1)]


# ---------------------------------------------------------------- claims


def traversal_division(tree: TimedTree, t: int) -> bool:
    """The traversal reads U_0 e_1 D_1 e_1 U_1 ... e_k D_k e_k U_k.

    Here e_i are the time-t edges, the D parts only hold later edges and
    the U parts only earlier ones.
    """
    depth_open = 0
    for e, side in tree.traversal():
        te = tree.time(e)
        if te == t:
            depth_open += 1 if side == LEFT else -1
            continue
        inside = depth_open == 1
        if depth_open not in (0, 1):
            return False
        if inside and te < t:
            return False
        if not inside and te > t:
            return False
    return depth_open == 0


def window_factors(tree: TimedTree, t1: int, t2: int) -> list[list[tuple[int, int]]]:
    """S(t1, t2): maximal traversal blocks with times in [t1, t2].

    Each block is returned as its derived signs, as (sign, time) tuples.
    """
    out, cur, open_ = [], [], False
    for o in tree.traversal():
        t = tree.time(o[0])
        if t1 <= t <= t2:
            open_ = True
            if o in tree.signs:
                cur.append((tree.signs[o], t))
        elif open_:
            out.append(cur)
            cur, open_ = [], False
    if open_:
        out.append(cur)
    return out


def balance_check(tree: TimedTree, t1: int, t2: int, split: tuple[int, int, int]) -> dict:
    """Check the balance inequality for S = S0 S1 S2 S3 cut at ``split``.

    When S0 is independent of S1 S2 and S2 holds only minuses, the total
    height change over S1 must cover the number of minuses in S2.
    """
    fac = window_factors(tree, t1, t2)
    a, b, c = split
    if not 0 <= a <= b <= c <= len(fac):
        raise ValueError("split indices out of range")
    s0, s1, s2 = fac[:a], fac[a:b], fac[b:c]
    only_minus = all(s < 0 for u in s2 for s, _ in u)
    plus_times = {t for u in s0 for s, t in u if s > 0}
    minus_times = {t for u in s1 + s2 for s, t in u if s < 0}
    independent = not (plus_times & minus_times)
    lhs = sum(s for u in s1 for s, _ in u)
    rhs = sum(len(u) for u in s2)
    applicable = only_minus and independent
    return {"applicable": applicable, "lhs": lhs, "rhs": rhs, "holds": (lhs >= rhs) or not applicable}


# ---------------------------------------------------------------- serialization


def to_json(tree: TimedTree) -> str:
    def node(v):
        out = []
        for c in tree.children[v]:
            e = {"time": tree.time(c), "node": node(c)}
            for side, name in ((LEFT, "left"), (RIGHT, "right")):
                if (c, side) in tree.signs:
                    e[name] = "+" if tree.signs[(c, side)] > 0 else "-"
            out.append(e)
        return {"children": out}

    return json.dumps(node(0))


def from_json(text: str) -> TimedTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad tree JSON: {exc}") from None
    tree = TimedTree()

    def walk(obj, v):
        for e in obj.get("children", []):
            signs = {}
            for name in ("left", "right"):
                if name in e:
                    if e[name] not in ("+", "-"):
                        raise ParseError(f"bad sign {e[name]!r}")
                    signs[name] = 1 if e[name] == "+" else -1
            c = tree.add(v, signs.get("left"), signs.get("right"))
            if "time" in e and e["time"] != tree.time(c):
                raise ParseError(f"edge time {e['time']} does not match depth {tree.time(c)}")
            walk(e.get("node", {}), c)

    walk(data, 0)
    return tree


def to_text(tree: TimedTree) -> str:
    """Nested form: node = '(' edge* ')', edge = time '[' left '|' right ']' node."""

    def node(v):
        parts = []
        for c in tree.children[v]:
            ls = tree.signs.get((c, LEFT))
            rs = tree.signs.get((c, RIGHT))
            lab = ""
            if ls is not None or rs is not None:
                lab = "[{}|{}]".format("" if ls is None else "+-"[ls < 0], "" if rs is None else "+-"[rs < 0])
            parts.append(f"{tree.time(c)}{lab}{node(c)}")
        return "(" + "".join(parts) + ")"

    return node(0)


def from_text(text: str) -> TimedTree:
    s = "".join(text.split())
    tree = TimedTree()
    pos = 0

    def expect(ch):
        nonlocal pos
        if pos >= len(s) or s[pos] != ch:
            raise ParseError(f"expected {ch!r} at offset {pos}")
        pos += 1

    def sign():
        nonlocal pos
        if pos < len(s) and s[pos] in "+-":
            pos += 1
            return 1 if s[pos - 1] == "+" else -1
        return None

    def node(v):
        nonlocal pos
        expect("(")
        while pos < len(s) and s[pos] != ")":
            start = pos
            while pos < len(s) and s[pos].isdigit():
                pos += 1
            if start == pos:
                raise ParseError(f"expected edge time at offset {pos}")
            t = int(s[start:pos])
            left = right = None
            if pos < len(s) and s[pos] == "[":
                pos += 1
                left = sign()
                expect("|")
                right = sign()
                expect("]")
            c = tree.add(v, left, right)
            if t != tree.time(c):
                raise ParseError(f"edge time {t} does not match depth {tree.time(c)}")
            node(c)
        expect(")")

    node(0)
    if pos != len(s):
        raise ParseError(f"trailing text at offset {pos}")
    return tree
