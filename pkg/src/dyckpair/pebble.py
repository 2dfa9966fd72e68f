"""Black-white pebbling on the tree of a Dyck word, and the bridge to re-pairings.

The tree of a Dyck prime has one node per matched pair, children being
the pairs directly inside.  Edges point from children to parents, so the
only sink is the root.  Moves:

* ``B+ v``  place a black pebble, allowed when all children are pebbled
* ``B- v``  remove a black pebble
* ``W+ v``  place a white pebble anywhere
* ``W- v``  remove a white pebble, allowed when all children are pebbled
* ``W-> v`` turn a white pebble black, same condition (the M4' variant)

A strategy succeeds when the root is pebbled and no white pebble is left.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import CapExceeded, InvalidRepairing, InvariantViolation, NotBinaryTree
from .repairing import as_pairs, is_simple, width_of
from .words import as_word, matching

BW_CAP = 15
MOVES = ("B+", "B-", "W+", "W-", "W->")


@dataclass
class Tree:
    """Rooted ordered tree; node 0 is the root."""

    parent: list
    children: list

    @property
    def size(self) -> int:
        return len(self.parent)

    def check_binary(self) -> None:
        for v, ch in enumerate(self.children):
            if len(ch) > 2:
                raise NotBinaryTree(f"node {v} has {len(ch)} children")

    def ancestors(self, v: int):
        v = self.parent[v]
        while v != -1:
            yield v
            v = self.parent[v]

    def to_word(self) -> str:
        out = []

        def rec(v):
            out.append("+")
            for c in self.children[v]:
                rec(c)
            out.append("-")

        rec(0)
        return "".join(out)


def tree_of(sigma) -> tuple[Tree, list[tuple[int, int]]]:
    """Tree of a Dyck prime plus the 1-based (open, close) pair of each node."""
    w = as_word(sigma)
    if len(w) == 0:
        raise NotBinaryTree("empty word has no tree")
    match = matching(w)
    if match[0] != len(w) - 1:
        raise NotBinaryTree("word is not a Dyck prime, its forest has several roots")
    parent, children, span = [], [], []
    stack = []
    for i, s in enumerate(w):
        if s > 0:
            v = len(parent)
            parent.append(stack[-1] if stack else -1)
            children.append([])
            if stack:
                children[stack[-1]].append(v)
            span.append((i + 1, match[i] + 1))
            stack.append(v)
        else:
            stack.pop()
    return Tree(parent, children), span


def parse_tree(text: str) -> Tree:
    """Trees are written as their Dyck word, e.g. ``(()())`` or ``++-+--``."""
    return tree_of(text)[0]


def strahler(tree: Tree) -> int:
    """Leaves count 1; two children of equal value s give s+1, otherwise the max."""
    tree.check_binary()
    val = [0] * tree.size
    for v in reversed(range(tree.size)):  # children have larger ids
        ch = [val[c] for c in tree.children[v]]
        if not ch:
            val[v] = 1
        elif len(ch) == 2 and ch[0] == ch[1]:
            val[v] = ch[0] + 1
        else:
            val[v] = max(ch)
    return val[0]


# ---------------------------------------------------------------- exact search


def _state_moves(tree, masks, state, budget, variant, black_only):
    black, white = state
    peb = black | white
    count = bin(peb).count("1")
    kids = masks
    for v in range(tree.size):
        bit = 1 << v
        ready = (kids[v] & peb) == kids[v]
        if peb & bit:
            if black & bit:
                yield ("B-", v), (black & ~bit, white)
            elif ready:
                if variant == "M4":
                    yield ("W-", v), (black, white & ~bit)
                else:
                    yield ("W->", v), (black | bit, white & ~bit)
            continue
        if count >= budget:
            continue
        if ready:
            yield ("B+", v), (black | bit, white)
        if not black_only:
            yield ("W+", v), (black, white | bit)


def _children_masks(tree):
    return [sum(1 << c for c in ch) for ch in tree.children]


def bw_search(tree: Tree, budget: int, variant: str = "M4'", black_only: bool = False):
    """Breadth-first search for a successful strategy using at most ``budget`` pebbles."""
    masks = _children_masks(tree)
    start = (0, 0)
    prev = {start: None}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        if st[0] & 1 and not st[1]:
            moves = []
            while prev[st] is not None:
                st, mv = prev[st]
                moves.append(mv)
            return moves[::-1]
        for mv, nxt in _state_moves(tree, masks, st, budget, variant, black_only):
            if nxt not in prev:
                prev[nxt] = (st, mv)
                queue.append(nxt)
    return None


def bw_exact(tree: Tree, variant: str = "M4'", black_only: bool = False,
             cap: int = BW_CAP) -> tuple[int, list]:
    """Minimum peak pebble count and a strategy achieving it."""
    if variant not in ("M4", "M4'"):
        raise ValueError("variant must be 'M4' or \"M4'\"")
    if tree.size > cap:
        raise CapExceeded(f"pebbling search limited to {cap} nodes")
    for b in range(1, tree.size + 2):
        moves = bw_search(tree, b, variant, black_only)
        if moves is not None:
            return b, moves
    raise InvariantViolation("no strategy found, which cannot happen on a tree")


def bw_black(tree: Tree, cap: int = BW_CAP) -> tuple[int, list]:
    return bw_exact(tree, black_only=True, cap=cap)


def run_strategy(tree: Tree, moves, variant: str = "M4'") -> int:
    """Replay a strategy, checking every move; returns the peak pebble count."""
    black, white = set(), set()
    peak = 0
    for i, (kind, v) in enumerate(moves):
        if not 0 <= v < tree.size:
            raise InvariantViolation(f"move {i}: node {v} out of range")
        peb = black | white
        ready = all(c in peb for c in tree.children[v])
        if kind == "B+":
            ok = v not in peb and ready
            black.add(v)
        elif kind == "B-":
            ok = v in black
            black.discard(v)
        elif kind == "W+":
            ok = v not in peb
            white.add(v)
        elif kind == "W-":
            ok = v in white and ready and variant == "M4"
            white.discard(v)
        elif kind == "W->":
            ok = v in white and ready and variant == "M4'"
            white.discard(v)
            black.add(v)
        else:
            raise InvariantViolation(f"move {i}: unknown move {kind!r}")
        if not ok:
            raise InvariantViolation(f"move {i}: illegal {kind} {v}")
        peak = max(peak, len(black) + len(white))
    if 0 not in black or white:
        raise InvariantViolation("strategy does not end with a black root and no whites")
    return peak


def peak(moves) -> int:
    cur = best = 0
    for kind, _ in moves:
        if kind in ("B+", "W+"):
            cur += 1
        elif kind in ("B-", "W-"):
            cur -= 1
        best = max(best, cur)
    return best


# ---------------------------------------------------------------- re-pairing -> pebbling


@dataclass
class Bridge:
    doubled: list  # the re-pairing p' (sibling pairs added)
    doubled_width: int
    moves: list
    peak: int


def double_siblings(sigma, p) -> list[tuple[int, int]]:
    """p': whenever p erases a non-root node, also erase its sibling."""
    tree, span = tree_of(sigma)
    tree.check_binary()
    node_at = {a: v for v, (a, _) in enumerate(span)}
    done = [False] * tree.size
    out = []
    for l, r in as_pairs(p).tolist():
        v = node_at[l]
        if done[v]:
            continue
        done[v] = True
        out.append(span[v])
        par = tree.parent[v]
        if par >= 0:
            for s in tree.children[par]:
                if s != v and not done[s]:
                    done[s] = True
                    out.append(span[s])
    return out


def simple_to_pebble(sigma, p, check_invariant: bool = True) -> Bridge:
    """Black-white strategy (M4' variant) from a simple re-pairing.

    White pebbles are placed on the node of each pair erased by p'; after
    each placement and at the end the rules are applied to a fixpoint:
    a white node whose children are all pebbled turns black, and a black
    node with a black ancestor and no pebble in between is cleared.
    """
    tree, span = tree_of(sigma)
    tree.check_binary()
    if not is_simple(sigma, p):
        raise InvalidRepairing("re-pairing is not simple")
    doubled = double_siblings(sigma, p)
    dw = width_of(sigma, doubled).width
    node_at = {a: v for v, (a, _) in enumerate(span)}
    state = [None] * tree.size  # None, "B" or "W"
    erased = [False] * tree.size
    moves = []

    def first_pebbled_above(v):
        for a in tree.ancestors(v):
            if state[a] is not None:
                return a
        return None

    def invariant():
        for v in range(tree.size):
            if state[v] is not None:
                chi = True
            else:
                a = first_pebbled_above(v)
                chi = a is not None and state[a] == "B"
            if erased[v] != chi:
                raise InvariantViolation(f"node {v}: erased={erased[v]} but pebble state says {chi}")

    def saturate():
        while True:
            for v in range(tree.size):
                if state[v] == "W" and all(state[c] is not None for c in tree.children[v]):
                    state[v] = "B"
                    moves.append(("W->", v))
                    break
            else:
                for v in range(tree.size):
                    if state[v] == "B":
                        a = first_pebbled_above(v)
                        if a is not None and state[a] == "B":
                            state[v] = None
                            moves.append(("B-", v))
                            break
                else:
                    return
            if check_invariant:
                invariant()

    for l, _ in doubled:
        saturate()
        v = node_at[l]
        if state[v] is not None:
            raise InvariantViolation(f"node {v} already pebbled when its pair is erased")
        state[v] = "W"
        erased[v] = True
        moves.append(("W+", v))
        if check_invariant:
            invariant()
    saturate()
    pk = run_strategy(tree, moves, "M4'")
    return Bridge(doubled, dw, moves, pk)


# ---------------------------------------------------------------- black pebbling -> re-pairing


def normalize_black(tree: Tree, moves) -> list:
    """Rewrite a black strategy so every removal happens under a black ancestor.

    A placement whose pebble is removed before the parent ever uses it is
    dropped together with that removal.  Otherwise the removal is moved to
    just before the parent's pebble goes away.
    """
    moves = list(moves)
    if any(k not in ("B+", "B-") for k, _ in moves):
        raise InvariantViolation("strategy uses white pebbles")
    while True:
        black = set()
        fix = None
        for i, (kind, v) in enumerate(moves):
            if kind == "B-" and not any(a in black for a in tree.ancestors(v)):
                fix = i
                break
            if kind == "B+":
                black.add(v)
            else:
                black.discard(v)
        if fix is None:
            return moves
        v = moves[fix][1]
        a = max(j for j in range(fix) if moves[j] == ("B+", v))
        par = tree.parent[v]
        uses = [j for j in range(a + 1, fix) if par >= 0 and moves[j] == ("B+", par)]
        if not uses:
            del moves[fix]
            del moves[a]
            continue
        c = uses[-1]
        d = next(j for j in range(c + 1, fix) if moves[j] == ("B-", par))
        mv = moves.pop(fix)
        moves.insert(d, mv)


def black_to_repairing(sigma, moves) -> tuple[list[tuple[int, int]], list]:
    """Simple re-pairing: erase a node's pair when it first receives a pebble."""
    tree, span = tree_of(sigma)
    norm = normalize_black(tree, moves)
    run_strategy(tree, norm)
    seen = set()
    out = []
    for kind, v in norm:
        if kind == "B+" and v not in seen:
            seen.add(v)
            out.append(span[v])
    if len(out) != tree.size:
        raise InvariantViolation("strategy never pebbles some node")
    return out, norm


def binary_primes(max_len: int):
    """Dyck primes of length <= max_len whose tree is binary."""
    from .words import all_dyck

    for pairs in range(1, max_len // 2 + 1):
        for w in all_dyck(pairs):
            if matching(w)[0] != len(w) - 1:
                continue
            tree, _ = tree_of(w)
            if all(len(c) <= 2 for c in tree.children):
                yield w
