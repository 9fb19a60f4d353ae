import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cycle_graph, gadget, theta
from phaselab import Formula, Graph, Seed, count_satisfied, cut_size, gen_gnm, gen_ksat
from phaselab.errors import ResourceLimitError
from phaselab.exact import (COMPLEX_PRESENT, brute_max_cut, brute_max_sat, exact_max_cut,
                            exact_max_sat, min_uncut_via_components, prefix_max_sat,
                            two_sat_decide, two_sat_solve)


def naive_max_sat(F):
    """Plain itertools enumeration; lexicographic order gives the smallest witness first."""
    best, arg = -1, None
    for bits in itertools.product((False, True), repeat=F.n):
        s = count_satisfied(F, np.array(bits))
        if s > best:
            best, arg = s, np.array(bits)
    return best, arg


def naive_max_cut(G):
    best, arg = -1, None
    for bits in itertools.product((False, True), repeat=G.n):
        s = cut_size(G, np.array(bits))
        if s > best:
            best, arg = s, np.array(bits)
    return best, arg


def test_brute_max_sat_examples():
    assert brute_max_sat(Formula.from_clauses(2, [[(0, False), (1, False)]]))[0] == 1
    assert brute_max_sat(gadget())[0] == 3
    four = Formula.from_clauses(2, [[(0, a), (1, b)] for a in (False, True) for b in (False, True)])
    assert brute_max_sat(four)[0] == 3


def test_brute_budget():
    with pytest.raises(ResourceLimitError):
        brute_max_sat(gen_ksat(31, 5, 2, 0))
    with pytest.raises(ResourceLimitError):
        brute_max_cut(gen_gnm(31, 5, 0))


def test_brute_max_cut_examples():
    assert brute_max_cut(Graph(3, cycle_graph(3)))[0] == 2
    assert brute_max_cut(Graph(4, cycle_graph(4)))[0] == 4
    assert brute_max_cut(Graph(5, cycle_graph(5)))[0] == 4


@settings(max_examples=80, deadline=None)
@given(n=st.integers(1, 9), m=st.integers(0, 30), k=st.integers(1, 3), seed=st.integers(0, 2**32))
def test_brute_max_sat_matches_naive_with_lexicographic_witness(n, m, k, seed):
    F = gen_ksat(n, m, min(k, n), seed)
    best, wit = brute_max_sat(F)
    nb, nw = naive_max_sat(F)
    assert best == nb
    assert np.array_equal(wit, nw)
    assert count_satisfied(F, wit) == best


@settings(max_examples=80, deadline=None)
@given(n=st.integers(2, 9), m=st.integers(0, 30), seed=st.integers(0, 2**32))
def test_brute_max_cut_matches_naive(n, m, seed):
    G = gen_gnm(n, m, seed)
    best, wit = brute_max_cut(G)
    nb, nw = naive_max_cut(G)
    assert best == nb and np.array_equal(wit, nw)
    assert best >= -(-G.m // 2)


def test_two_sat_examples():
    assert two_sat_decide(Formula(3, np.empty((0, 2), dtype=np.int64)))
    assert not two_sat_decide(gadget())
    F = Formula.from_clauses(2, [[(0, False), (1, False)], [(0, True), (1, False)]])
    A = two_sat_solve(F)
    assert A is not None and count_satisfied(F, A) == 2
    with pytest.raises(ValueError):
        two_sat_decide(gen_ksat(5, 3, 3, 0))


def test_two_sat_units():
    F = Formula.from_dimacs_lists(2, [[1], [-1, 2], [-2]])
    assert not two_sat_decide(F)
    G = Formula.from_dimacs_lists(2, [[1], [-1, 2]])
    A = two_sat_solve(G)
    assert A.tolist() == [True, True]


@pytest.mark.parametrize("n", [6, 10, 14, 18, 20])
def test_two_sat_agrees_with_brute(n):
    for t in range(60):
        F = gen_ksat(n, int(n * (0.6 + t / 50)), 2, Seed(n, t))
        best = brute_max_sat(F)[0]
        sat = two_sat_decide(F)
        assert (best == F.m) == sat
        if sat:
            assert count_satisfied(F, two_sat_solve(F)) == F.m
        assert 4 * best >= 3 * F.m


def test_two_sat_large_linear_time():
    F = gen_ksat(200000, 150000, 2, 1)
    assert two_sat_decide(F)
    A = two_sat_solve(F)
    assert count_satisfied(F, A) == F.m


def test_min_uncut_examples():
    forest = Graph(6, [(0, 1), (1, 2), (3, 4)])
    assert min_uncut_via_components(forest) == 0
    edges = cycle_graph(3) + cycle_graph(4, 3) + [(7, 8), (8, 9)]
    assert min_uncut_via_components(Graph(10, edges)) == 1
    assert min_uncut_via_components(theta([1, 2, 3])) == COMPLEX_PRESENT


def test_min_uncut_agrees_with_brute():
    checked = 0
    for t in range(300):
        n = 8 + t % 13
        G = gen_gnm(n, int(0.45 * n) + t % 3, Seed(99, t))
        r = min_uncut_via_components(G)
        if r == COMPLEX_PRESENT:
            continue
        checked += 1
        assert G.m - brute_max_cut(G)[0] == r
    assert checked > 200


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0, 4.0])
def test_exact_max_sat_agrees_with_brute(c):
    for t in range(40):
        n = 6 + t % 12
        F = gen_ksat(n, int(c * n), 2 + (t % 4 == 0), Seed(3, t))
        best, wit = exact_max_sat(F)
        assert best == brute_max_sat(F)[0]
        assert count_satisfied(F, wit) == best


def test_exact_max_cut_agrees_with_brute():
    for t in range(60):
        n = 6 + t % 14
        G = gen_gnm(n, int((0.4 + t / 40) * n), Seed(4, t))
        best, P = exact_max_cut(G)
        assert best == brute_max_cut(G)[0] == cut_size(G, P)


def test_prefix_max_sat():
    F = gen_ksat(9, 25, 2, 8)
    pre = prefix_max_sat(F)
    assert pre[0] == 0 and pre[1] == 1
    for t in range(F.m + 1):
        assert pre[t] == brute_max_sat(F.prefix(t))[0]
