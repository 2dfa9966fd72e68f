from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyckpair.errors import InvalidWord, ParseError
from dyckpair.experiments import random_cf_instance, random_cone_vector
from dyckpair.parikh import (NFA, admissible_primes, bvn_compose, bvn_decompose, c_f_set,
                             c_f_vector, cone_compose, cone_decompose, family_invariants, in_cone,
                             is_in_un, nfa_validate, nw_family, plan_lower_bound,
                             random_doubly_stochastic, u2_automaton)
from dyckpair.words import z_word


def test_un_examples():
    for lam in (0, 1, 5):
        ok, why = is_in_un(4, {(0, 3): 1}, [lam, 0, 0, lam])
        assert ok, why
    assert is_in_un(6, {(0, 2): 1, (2, 5): 1}, [0] * 6)[0]
    ok, why = is_in_un(6, {(0, 2): 1}, [0] * 6)
    assert not ok and any("path" in m for m in why)
    ok, why = is_in_un(4, {(0, 3): 1}, [1, 0, 0, 0])
    assert not ok and any("cone" in m for m in why)
    ok, why = is_in_un(4, {(0, 3): 1}, [1, 1, 0, 0])
    assert not ok and any("x[1]" in m for m in why)


@settings(max_examples=100)
@given(st.integers(1, 8), st.data())
def test_any_path_with_zero_x(half, data):
    n = 2 * half
    inner = data.draw(st.sets(st.integers(1, n - 2))) if n > 2 else set()
    s = sorted({0, n - 1} | inner)
    y = {(a, b): 1 for a, b in zip(s, s[1:])}
    assert is_in_un(n, y, [0] * n)[0]


def test_cone_examples():
    assert cone_decompose([1, 1]) == {(0, 1): 1}
    assert cone_decompose([2, 1, 0, 1]) == {(0, 1): 1, (0, 3): 1}
    with pytest.raises(InvalidWord):
        cone_decompose([1, 0])
    assert not in_cone([0, 1])
    assert in_cone([1, 0, 1, 2])


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_cone_reconstruction(seed):
    x = random_cone_vector(np.random.default_rng(seed))
    dec = cone_decompose(x)
    assert cone_compose(len(x), dec) == x
    assert all(i % 2 == 0 and j % 2 == 1 and i < j and c > 0 for (i, j), c in dec.items())


def test_bvn_examples():
    eye = [[F(int(i == j)) for j in range(3)] for i in range(3)]
    assert bvn_decompose(eye) == [(1, (0, 1, 2))]
    half = [[F(1, 2)] * 2 for _ in range(2)]
    assert sorted(bvn_decompose(half)) == [(F(1, 2), (0, 1)), (F(1, 2), (1, 0))]
    with pytest.raises(InvalidWord):
        bvn_decompose([[F(1), F(0)], [F(1), F(0)]])
    with pytest.raises(InvalidWord):
        bvn_decompose([[F(2), F(-1)], [F(-1), F(2)]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 60), st.integers(0, 2**32 - 1))
def test_bvn_reconstruction(k, terms, seed):
    m = random_doubly_stochastic(k, terms, np.random.default_rng(seed))
    dec = bvn_decompose(m)
    assert bvn_compose(k, dec) == m
    assert sum(w for w, _ in dec) == 1
    assert all(w > 0 for w, _ in dec)
    assert len(dec) <= (k - 1) ** 2 + 1


def test_nw_examples():
    p, sets = nw_family(32, 1)
    assert p == 3 and len(sets) == 3 and all(len(s) == 4 for s in sets)
    assert admissible_primes(32) == [3]
    assert admissible_primes(128) == [5, 7]
    p, sets = nw_family(128, 2)
    rep = family_invariants(128, 2, p, sets)
    assert rep["ok"] and rep["max_intersection"] <= 3 and rep["count"] == p**2
    with pytest.raises(InvalidWord):
        nw_family(32, 2)  # d must be below m = 2
    with pytest.raises(InvalidWord):
        nw_family(10, 1)  # no admissible prime


def test_c_f_examples():
    assert c_f_set(z_word(2), [0, 1, 3, 5, 6, 7]) == [0, 2, 7, 10, 13, 15]
    y, x = c_f_vector(z_word(2), [0, 1, 3, 5, 6, 7], 2, 16)
    assert y == {(0, 2): 1, (2, 7): 1, (7, 10): 1, (10, 13): 1, (13, 15): 1}
    assert is_in_un(16, y, x)[0]
    assert c_f_set("+-", [0, 1]) == [0, 3]
    y, x = c_f_vector("+-", [0, 1], 0, 4)
    assert all(v == 0 for v in x) and is_in_un(4, y, x)[0]
    with pytest.raises(InvalidWord):
        c_f_vector("+-", [0, 2], 1, 8)  # 3 = n/2 - 1 missing


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_c_f_membership(seed):
    sigma, f, lam, n = random_cf_instance(np.random.default_rng(seed))
    y, x = c_f_vector(sigma, f, lam, n)
    ok, why = is_in_un(n, y, x)
    assert ok, why


def test_nfa_validators():
    rep = nfa_validate(u2_automaton())
    assert rep["ok"] and rep["cycles_checked"] == 1 and not rep["cycles_capped"]
    loop = NFA.parse("states 2\ninitial 0\nfinal 1\n0 c0_1 1\n1 c0_1 1\n")
    assert nfa_validate(loop)["c_inside_component"] == [(1, "c0_1", 1)]
    acyclic = NFA.parse("states 3\ninitial 0\nfinal 2\n0 a0 1\n1 a1 2\n")
    rep = nfa_validate(acyclic)
    assert rep["ok"] and rep["cycles_checked"] == 0
    unbalanced = NFA.parse("states 2\ninitial 0\nfinal 1\n0 a1 0\n0 c0_1 1\n")
    assert nfa_validate(unbalanced)["bad_cycles"]
    with pytest.raises(ParseError):
        NFA.parse("states 2\ninitial 0\n0 b0 1\n")


def test_nfa_cycle_cap():
    lines = ["states 1", "initial 0", "final 0"] + [f"0 a{i} 0" for i in range(6)]
    rep = nfa_validate(NFA.parse("\n".join(lines)), cycle_cap=3)
    assert rep["cycles_capped"] and rep["cycles_checked"] == 3


def test_plan_examples():
    rec = plan_lower_bound("++--", 2)
    assert rec["p"] == 3 and rec["n"] == 24 and rec["n_range"] == [24, 74]
    assert rec["family_size"] == 3
    rec = plan_lower_bound("++--", 1)
    assert rec["d"] == 0 and rec["family_size"] == 1 and rec["degenerate"]
    rec = plan_lower_bound(z_word(2), 1)
    assert rec["p"] == 5
    with pytest.raises(InvalidWord):
        plan_lower_bound("+-+-+", 1)
    with pytest.raises(InvalidWord):
        plan_lower_bound("+-" * 5, 1)  # 9 is not prime


def test_u2_fixture_parikh_image():
    # enumerate accepted words up to length 9 and compare with U_2
    nfa = u2_automaton()
    images = set()
    frontier = [(nfa.initial, (0, 0, 0))]
    for _ in range(9):
        nxt = []
        for state, (c, a0, a1) in frontier:
            for s, label, d in nfa.transitions:
                if s != state:
                    continue
                vec = (c + (label == "c0_1"), a0 + (label == "a0"), a1 + (label == "a1"))
                nxt.append((d, vec))
                if d in nfa.final:
                    images.add(vec)
        frontier = nxt
    for c, a0, a1 in images:
        assert c == 1 and is_in_un(2, {(0, 1): 1}, [a0, a1])[0]
    assert images == {(1, lam, lam) for lam in range(5)}
