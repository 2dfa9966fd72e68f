"""Table generators behind ``dyckpair experiment``.

Each suite returns (header, rows).  Rows that test an inequality carry
lhs, rhs and holds columns.  Everything is deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import parikh, pebble
from .errors import CapExceeded
from .recursive_zn import (Geometry, Planner, fit_sqrt_log, narrow_check, recursive_repairing,
                           surrogate_w, w_value, xn_solve)
from .repairing import (exact_width, exact_width_naive, is_simple, simple_exact_width, validate,
                        width_of)
from .strategies import bisect, bisect_bound
from .words import all_dyck, frame, max_height, mu, phi_table, psi, random_dyck, y_word, z_word


def pmap(fn, items, jobs: int = 1):
    """Ordered map, optionally across processes."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- widths-small


def _width_row(w):
    n = len(w)
    try:
        ex = exact_width(w).width
    except CapExceeded:
        ex = "cap"
    naive = exact_width_naive(w) if n <= 14 else ""
    b = width_of(w, bisect(w)).width
    bound = bisect_bound(n) if n else 0
    return [str(w), n, ex, naive, b, b, bound, b <= bound]


def widths_small(max_len: int = 12, jobs: int = 1):
    header = ["word", "length", "exact_width", "naive_width", "bisect_width", "lhs", "rhs", "holds"]
    words = [w for pairs in range(1, max_len // 2 + 1) for w in all_dyck(pairs)]
    return header, pmap(_width_row, words, jobs)


# ---------------------------------------------------------------- zn-table


def _zn_cells(n):
    planner = Planner(strict=True)
    rows = []
    for q in range(1, n // 3 + 1):
        for k in range(n + 1):
            pairs, stages = recursive_repairing(q, n, k, planner)
            w = frame(z_word(n), k)
            validate(w, pairs)
            narrow_check(stages, q, Geometry(q, n, k))
            rows.append([q, n, k, width_of(w, pairs, check=False).width, sum(s.narrow for s in stages)])
    return rows


def zn_table(n_min: int = 3, n_max: int = 12, jobs: int = 1):
    header = ["q", "n", "k", "width", "narrow_stages"]
    rows = []
    for chunk in pmap(_zn_cells, range(n_min, n_max + 1), jobs):
        rows.extend(chunk)
    return header, rows


# ---------------------------------------------------------------- phi-psi


def phi_psi_rows(z_max: int = 14, y_cells=None):
    """Checks of the four phi/psi lower bounds at every admissible x."""
    if y_cells is None:
        y_cells = [(m, ell) for ell in (2, 3) for m in range(1, 12 // ell + 1)]
    rows = []
    for n in range(1, z_max + 1):
        w = z_word(n)
        tab = phi_table(w)
        for x in range(6 * n, len(w) + 1):
            rhs = math.log2(x / 12)
            rows.append(["phiZ", f"Z({n})", x, tab[x], rhs, tab[x] >= rhs])
        for x in range(2, n + 1):
            val = psi(w, x)
            rows.append(["psiZ", f"Z({n})", x, val, 2**x, val >= 2**x])
    for m, ell in y_cells:
        w = y_word(m, ell)
        h = max_height(w)
        tab = phi_table(w)
        for x in range(max(6 * h, 9 * 6**ell), len(w) + 1):
            rhs = ell / 3 * (x / 9) ** (1 / ell)
            rows.append(["phiY", f"Y({m},{ell})", x, tab[x], rhs, tab[x] >= rhs])
        for x in range(1, mu(w) + 1):
            val = psi(w, x)
            rhs = (x / (2 * ell)) ** ell
            rows.append(["psiY", f"Y({m},{ell})", x, val, rhs, val >= rhs])
    return ["claim", "word", "x", "lhs", "rhs", "holds"], rows


# ---------------------------------------------------------------- pebble-bridge


def pebble_bridge(max_len: int = 16):
    header = ["word", "check", "lhs", "rhs", "holds"]
    rows = []
    for w in pebble.binary_primes(max_len):
        tree, _ = pebble.tree_of(w)
        b4, _ = pebble.bw_exact(tree, "M4")
        b4p, _ = pebble.bw_exact(tree, "M4'")
        bb, moves = pebble.bw_black(tree)
        s = str(w)
        rows.append([s, "bw_M4_eq_bw_M4prime", b4, b4p, b4 == b4p])
        rows.append([s, "bw_black_le_2bw", bb, 2 * b4p, bb <= 2 * b4p])
        opt = simple_exact_width(w).witness
        for name, p in (("optimal", opt), ("bisect", bisect(w))):
            wp = width_of(w, p).width
            br = pebble.simple_to_pebble(w, p)
            rows.append([s, f"{name}:width_doubled_le_3w", br.doubled_width, 3 * wp, br.doubled_width <= 3 * wp])
            rows.append([s, f"{name}:peak_le_4w'+3", br.peak, 4 * br.doubled_width + 3,
                         br.peak <= 4 * br.doubled_width + 3])
        pairs, norm = pebble.black_to_repairing(w, moves)
        pk = pebble.run_strategy(tree, norm)
        wb = width_of(w, pairs).width
        rows.append([s, "black_width_le_2peak", wb, 2 * pk, wb <= 2 * pk and is_simple(w, pairs)])
    return header, rows


# ---------------------------------------------------------------- parikh-props


def parikh_props(seed: int = 0, count: int = 100, cf_count: int = 1000):
    rng = np.random.default_rng(seed)
    header = ["check", "instance", "lhs", "rhs", "holds"]
    rows = []
    for i in range(count):
        x = random_cone_vector(rng)
        dec = parikh.cone_decompose(x)
        ok = parikh.cone_compose(len(x), dec) == x and all(a % 2 == 0 and b % 2 == 1 and a < b for a, b in dec)
        rows.append(["cone_reconstruct", i, len(dec), "", ok])
    for i in range(count):
        k = int(rng.integers(1, 7))
        m = parikh.random_doubly_stochastic(k, int(rng.integers(1, 40)), rng)
        terms = parikh.bvn_decompose(m)
        ok = parikh.bvn_compose(k, terms) == m and sum(t[0] for t in terms) == 1
        rows.append(["bvn_terms", i, len(terms), (k - 1) ** 2 + 1, ok and len(terms) <= (k - 1) ** 2 + 1])
    for n in (32, 64, 128):
        for p in parikh.admissible_primes(n):
            for d in range(1, p - 1):
                _, sets = parikh.nw_family(n, d, p)
                rep = parikh.family_invariants(n, d, p, sets)
                inst = f"n={n},p={p},d={d}"
                rows.append(["nw_size", inst, rep["count"], rep["expected_count"], rep["ok"]])
                rows.append(["nw_intersection", inst, rep["max_intersection"], d + 1,
                             rep["max_intersection"] <= d + 1])
    for i in range(cf_count):
        sigma, f, lam, n = random_cf_instance(rng)
        y, x = parikh.c_f_vector(sigma, f, lam, n)
        ok, _ = parikh.is_in_un(n, y, x)
        rows.append(["cf_in_Un", i, "", "", ok])
    return header, rows


def random_cone_vector(rng, max_n: int = 10, max_terms: int = 6) -> list[Fraction]:
    n = 2 * int(rng.integers(1, max_n // 2 + 1))
    x = [Fraction(0)] * n
    for _ in range(int(rng.integers(0, max_terms + 1))):
        i = 2 * int(rng.integers(0, n // 2))
        j = 2 * int(rng.integers(i // 2, n // 2)) + 1
        c = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5)))
        x[i] += c
        x[j] += c
    return x


def random_cf_instance(rng):
    pairs = int(rng.integers(1, 9))
    sigma = random_dyck(pairs, rng)
    s = len(sigma)
    half = s + int(rng.integers(0, 10))
    n = 2 * half
    inner = sorted(int(v) for v in rng.choice(np.arange(1, half - 1), size=s - 2, replace=False)) if s > 2 else []
    f = [0] + inner + [half - 1]
    lam = int(rng.integers(0, 5))
    return sigma, f, lam, n


# ---------------------------------------------------------------- x_n


def measured_w(n_max: int = 14) -> dict[int, int]:
    planner = Planner(strict=False)
    return {n: w_value(planner, n)[0] for n in range(3, n_max + 1)}


def xn_fit(n_max: int = 10**6, w_max: int = 14):
    meas = measured_w(w_max)
    base = surrogate_w(meas)
    x = xn_solve(n_max, {i: v for i, (v, _) in base.items()})
    fit = fit_sqrt_log(x)
    header = ["n", "x_n", "label"]
    marks = sorted({i for i in range(3, 45)} | {10**e for e in range(2, 7) if 10**e <= n_max} | {n_max})
    rows = [[n, float(x[n]), base[n][1] if n < 45 else "recurrence"] for n in marks if n <= n_max]
    return header, rows, fit


SUITES = {
    "widths-small": widths_small,
    "zn-table": zn_table,
    "phi-psi": phi_psi_rows,
    "pebble-bridge": pebble_bridge,
    "parikh-props": parikh_props,
}
