import math

import numpy as np
import pytest

from phaselab import Formula, Graph, Seed
from phaselab.analysis import ode_trajectory, online_fraction, rejected_density, rho_star
from phaselab.core import count_satisfied, cut_size
from phaselab.errors import DomainError
from phaselab.exact import brute_max_cut, brute_max_sat, two_sat_decide
from phaselab.generators import gen_gnm, gen_ksat
from phaselab.heuristics import (ACCEPT_FORCED, ACCEPT_FREE, ACCEPT_TRUE, REJECT,
                                 ksat_greedy_assignment, ksat_sequential_greedy,
                                 majority_greedy_cut, online_lazy, potential_greedy,
                                 scc_repair, unit_clause_cut, unit_clause_resolve)

from conftest import cycle_graph


def _f(n, *clauses):
    return Formula.from_clauses(n, clauses)


# potential greedy

def test_potential_empty():
    r = potential_greedy(Formula(3, np.zeros((0, 2), dtype=np.int64)))
    assert r.satisfied == 0


def test_potential_initial_q_and_invariants():
    F = gen_ksat(200, 500, 2, Seed(1))
    r = potential_greedy(F)
    tr = r.trace
    assert tr[0].q == 0.75 * F.m
    np.testing.assert_array_equal(tr.q, tr.potential())
    assert np.all(np.diff(tr.q) >= 0)
    assert r.satisfied == count_satisfied(F, r.assignment)
    assert r.satisfied >= math.ceil(0.75 * F.m)
    assert tr[-1].unit_count == 0 and tr[-1].two_count == 0


def test_potential_tie_goes_true():
    F = _f(2, [(0, False), (1, False)], [(0, True), (1, False)])
    r = potential_greedy(F)
    assert r.assignment[0]


def test_potential_high_density_band():
    n, c = 10**4, 100
    vals = []
    for t in range(50):
        F = gen_ksat(n, c * n, 2, Seed(7, t))
        vals.append((potential_greedy(F).satisfied - 0.75 * F.m) / (math.sqrt(c) * n))
    mean = float(np.mean(vals))
    print(f"potential greedy second-order coefficient {mean:.4f}")
    assert 0.30 <= mean <= 0.52


def test_potential_rejects_wide_clauses():
    with pytest.raises(ValueError):
        potential_greedy(gen_ksat(5, 3, 3, Seed(0)))


# unit-clause resolution

def test_unit_resolve_chain():
    F = _f(3, [(0, True), (1, False)], [(1, True), (2, False)])
    for s in range(20):
        r = unit_clause_resolve(F, Seed(s))
        assert r.trace.dissatisfied == 0
        assert count_satisfied(F, r.assignment) == 2


def test_unit_resolve_conservation():
    F = gen_ksat(2000, 3000, 2, Seed(3))
    r = unit_clause_resolve(F, Seed(4))
    for p in r.trace.samples:
        assert p.satisfied + p.dissatisfied + p.unit_count + p.two_count == F.m
        assert 0 <= p.rho <= 1 and p.rho1 >= 0 and p.rho2 >= 0
    rhos = [p.rho for p in r.trace.samples]
    assert rhos == sorted(rhos, reverse=True)
    assert F.m - count_satisfied(F, r.assignment) <= r.trace.dissatisfied


def test_unit_resolve_without_seeds_satisfies_sparse_formula():
    F = gen_ksat(5000, 1500, 2, Seed(5))
    r = unit_clause_resolve(F, Seed(5), seed_count=0)
    assert two_sat_decide(F)
    assert count_satisfied(F, r.assignment) == F.m


def test_unit_resolve_trajectory_matches_ode():
    n, c = 10**5, 1.5
    F = gen_ksat(n, int(c * n), 2, Seed(11))
    r = unit_clause_resolve(F, Seed(12))
    a = r.trace.as_arrays()
    keep = a["rho"] >= rho_star(c)
    rho1, rho2 = ode_trajectory(c, a["rho"][keep])
    assert np.max(np.abs(a["rho1"][keep] - rho1)) < 0.01
    assert np.max(np.abs(a["rho2"][keep] - rho2)) < 0.01


def test_unit_resolve_density_c2():
    n, c = 10**5, 2.0
    vals = [unit_clause_resolve(gen_ksat(n, int(c * n), 2, Seed(21, t)), Seed(22, t)).trace.dissatisfied / n
            for t in range(100)]
    mean = float(np.mean(vals))
    print(f"rejected density at c=2: {mean:.5f}")
    assert abs(mean / 0.0809517 - 1) <= 0.15


def test_scc_repair_makes_satisfiable():
    for s in range(30):
        F = gen_ksat(40, 60, 2, Seed(s))
        keep, A = scc_repair(F)
        sub = F.subformula(keep)
        assert count_satisfied(sub, A) == sub.m
        assert keep.all() == two_sat_decide(F)


# k-SAT sequential greedy

def test_ksat_greedy_empty():
    assert ksat_sequential_greedy(Formula(4, np.zeros((0, 3), dtype=np.int64))) == 0


def test_ksat_greedy_consistent_with_assignment():
    F = gen_ksat(50, 300, 3, Seed(2))
    A = ksat_greedy_assignment(F, ell=5, seed=9)
    assert ksat_sequential_greedy(F, ell=5, seed=9) == count_satisfied(F, A)


def test_ksat_greedy_k3_second_order():
    n, c, k = 10**4, 50, 3
    bound = 0.5 * (2 / (k + 1)) * math.sqrt(k / (math.pi * 2**k))
    vals = []
    for t in range(10):
        F = gen_ksat(n, c * n, k, Seed(31, t))
        vals.append((ksat_sequential_greedy(F, seed=Seed(32, t)) - 7 / 8 * F.m) / (math.sqrt(c) * n))
    mean = float(np.mean(vals))
    print(f"k=3 greedy coefficient {mean:.4f} vs bound {bound:.4f}")
    assert mean >= bound


def test_ksat_greedy_rejects_bad_ell():
    F = gen_ksat(5, 3, 2, Seed(0))
    with pytest.raises((ValueError, DomainError)):
        ksat_sequential_greedy(F, ell=6)


# Online-Lazy

def test_online_accept_when_literal_true():
    F = _f(2, [(0, False), (1, False)], [(0, False), (1, True)])
    r = online_lazy(F)
    assert r.decisions[1] == ACCEPT_TRUE
    assert list(r.assignment) == [1, -1]


def test_online_reject_when_both_false():
    F = _f(2, [(0, True), (1, True)], [(0, False), (1, True)], [(0, True), (1, False)],
           [(0, False), (1, False)])
    r = online_lazy(F)
    assert list(r.decisions) == [ACCEPT_FREE, ACCEPT_FORCED, ACCEPT_TRUE, REJECT]
    assert r.accepted == 3


def test_online_invariants():
    F = gen_ksat(300, 600, 2, Seed(8))
    r = online_lazy(F)
    A = r.assignment
    # replay: each clause sets at most one variable, and only its own
    value = np.full(F.n, -1, dtype=np.int8)
    for i, clause in enumerate(F):
        before = value.copy()
        vars_ = {lit.variable for lit in clause}
        if r.decisions[i] in (ACCEPT_FORCED, ACCEPT_FREE):
            lit = next(l for l in clause if value[l.variable] == -1)
            value[lit.variable] = 0 if lit.negated else 1
        changed = set(np.flatnonzero(value != before).tolist())
        assert changed <= vars_ and len(changed) <= 1
    np.testing.assert_array_equal(value, A)
    full = A == 1
    accepted = r.decisions != REJECT
    sat = np.zeros(F.m, dtype=bool)
    for i, clause in enumerate(F):
        sat[i] = any(A[l.variable] == (0 if l.negated else 1) for l in clause)
    assert np.all(sat[accepted])
    assert count_satisfied(F.subformula(accepted), full) == r.accepted


def test_online_fraction_simulation():
    n = 10**5
    vals = [online_lazy(gen_ksat(n, n, 2, Seed(41, t))).accepted / n for t in range(100)]
    mean = float(np.mean(vals))
    print(f"online accepted/n at c=1: {mean:.5f} vs {online_fraction(1):.5f}")
    assert abs(mean - online_fraction(1)) <= 0.005


# MAX-CUT heuristics

def test_majority_path():
    G = Graph(3, [[0, 1], [1, 2]])
    for s in range(10):
        assert majority_greedy_cut(G, order=[0, 1, 2], seed=s).cut == 2


def test_majority_empty_graph():
    assert majority_greedy_cut(Graph(5, np.zeros((0, 2)))).cut == 0
    assert majority_greedy_cut(Graph(0, np.zeros((0, 2)))).cut == 0


def test_majority_cut_at_least_half_and_consistent():
    for s in range(20):
        G = gen_gnm(100, 400, Seed(s))
        r = majority_greedy_cut(G, seed=s)
        assert r.cut == cut_size(G, r.partition)
        # each vertex cuts at least half of its edges to earlier vertices
        assert r.cut >= math.ceil(G.m / 2)


def test_majority_bad_order():
    with pytest.raises(ValueError):
        majority_greedy_cut(Graph(3, [[0, 1]]), order=[0, 0, 1])


def test_majority_high_density_band():
    n, c = 10**4, 50
    vals = []
    for t in range(50):
        G = gen_gnm(n, c * n, Seed(51, t))
        vals.append((majority_greedy_cut(G, seed=Seed(52, t)).cut - G.m / 2) / (math.sqrt(c) * n))
    mean = float(np.mean(vals))
    print(f"majority greedy second-order coefficient {mean:.4f}")
    assert 0.48 <= mean <= 0.60


def test_unit_cut_tree():
    edges = [[i, (i - 1) // 2] for i in range(1, 31)]
    for s in range(10):
        assert unit_clause_cut(Graph(31, edges), seed=s).uncut == 0


@pytest.mark.parametrize("k", [3, 5, 9])
def test_unit_cut_odd_cycle(k):
    G = Graph(k, cycle_graph(k))
    for s in range(10):
        r = unit_clause_cut(G, seed=s)
        assert r.uncut == 1
        assert r.uncut == G.m - cut_size(G, r.partition)


def test_unit_cut_subcritical_bound():
    n, c = 10**5, 0.6
    vals = [unit_clause_cut(gen_gnm(n, int(c * n), Seed(61, t)), seed=Seed(62, t)).uncut / n
            for t in range(100)]
    mean = float(np.mean(vals))
    print(f"unit cut uncut/n at c=0.6: {mean:.5f}")
    assert mean <= 16 / 3 * 0.001 + math.log(n) / n


# heuristics never beat the oracle

def test_heuristics_below_oracle():
    rng = np.random.default_rng(2024)
    for t in range(300):
        n = int(rng.integers(1, 17))
        m = int(rng.integers(0, 3 * n + 1))
        if n >= 2:
            F = gen_ksat(n, m, 2, Seed(71, t))
            best, _ = brute_max_sat(F)
            assert potential_greedy(F).satisfied <= best
            assert count_satisfied(F, unit_clause_resolve(F, Seed(72, t)).assignment) <= best
            assert online_lazy(F).accepted <= best
            assert ksat_sequential_greedy(F, seed=t) <= best
        if n >= 3:
            F3 = gen_ksat(n, m, 3, Seed(73, t))
            assert ksat_sequential_greedy(F3, seed=t) <= brute_max_sat(F3)[0]
        G = gen_gnm(n, m, Seed(74, t)) if n >= 2 else Graph(n, np.zeros((0, 2)))
        best, _ = brute_max_cut(G)
        assert majority_greedy_cut(G, seed=t).cut <= best
        assert G.m - unit_clause_cut(G, seed=t).uncut <= best


def test_majority_high_density_matches_binomial_drift():
    # vertex t sees Bin(2ct/n, 1/2) earlier neighbours, so its gain is E|B - mean|
    # ~ sqrt(ct/(pi n)); integrating over t gives (2/3) sqrt(c/pi) n
    n, c = 10**4, 50
    vals = []
    for t in range(20):
        G = gen_gnm(n, c * n, Seed(53, t))
        vals.append((majority_greedy_cut(G, seed=Seed(54, t)).cut - G.m / 2) / (math.sqrt(c) * n))
    assert abs(np.mean(vals) / (2 / 3 / math.sqrt(math.pi)) - 1) < 0.05
