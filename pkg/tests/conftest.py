import numpy as np
from hypothesis import strategies as st

from dyckpair.words import random_dyck


@st.composite
def dyck_words(draw, max_pairs=8, min_pairs=0):
    pairs = draw(st.integers(min_pairs, max_pairs))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_dyck(pairs, np.random.default_rng(seed))


def random_repairing(w, rng):
    """Uniformly pick a legal next pair until the word is used up."""
    from dyckpair.repairing import extendable

    n = len(w)
    used = [False] * n
    out = []
    while len(out) * 2 < n:
        opts = []
        for a in range(n):
            if used[a] or w[a] < 0:
                continue
            for b in range(a + 1, n):
                if used[b] or w[b] > 0:
                    continue
                opts.append((a + 1, b + 1))
        rng.shuffle(opts)
        for a, b in opts:
            if extendable(w, out + [(a, b)]):
                out.append((a, b))
                used[a - 1] = used[b - 1] = True
                break
    return out


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
