import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaselab import (ConstraintFn, CspFormula, Formula, Graph, Literal, complement,
                      count_satisfied, count_unsatisfied, cut_size, gen_gnm, gen_ksat)
from phaselab.core import variable_occurrences


def all_assignments(n):
    return [np.array(bits, dtype=bool) for bits in itertools.product((False, True), repeat=n)]


def test_literal_codes_roundtrip():
    lit = Literal(3, True)
    assert lit.code == 7
    assert Literal.from_code(7) == lit
    assert ~lit == Literal(3, False)
    assert Literal.from_dimacs(-4) == lit and lit.to_dimacs() == -4


def test_count_satisfied_examples():
    F = Formula.from_clauses(2, [[(0, False), (1, False)]])
    assert count_satisfied(F, [True, False]) == 1
    assert count_satisfied(Formula(2, np.empty((0, 2), dtype=np.int64)), [True, True]) == 0
    four = Formula.from_clauses(2, [[(0, a), (1, b)] for a in (False, True) for b in (False, True)])
    for A in all_assignments(2):
        assert count_satisfied(four, A) == 3


def test_count_satisfied_length_mismatch():
    F = Formula.from_clauses(2, [[(0, False), (1, False)]])
    with pytest.raises(ValueError):
        count_satisfied(F, [True])


def test_cut_size_examples():
    tri = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert cut_size(tri, [True, False, False]) == 2
    assert cut_size(tri, [True, True, True]) == 0
    path = Graph(3, [(0, 1), (1, 2)])
    assert cut_size(path, [True, False, True]) == 2
    with pytest.raises(ValueError):
        cut_size(tri, [True, False])


def test_multiedges_counted_with_multiplicity():
    G = Graph(2, [(0, 1), (0, 1), (1, 0)])
    assert cut_size(G, [False, True]) == 3


def test_formula_validation():
    with pytest.raises(ValueError):
        Formula.from_clauses(2, [[(0, False), (0, True)]])  # improper
    with pytest.raises(ValueError):
        Formula.from_clauses(2, [[(0, False), (2, False)]])  # out of range
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_mixed_width_and_subformula():
    F = Formula.from_dimacs_lists(3, [[1, -2], [3], [-1, 2, 3]])
    assert F.arity is None
    assert list(F.sizes) == [2, 1, 3]
    assert F[1] == (Literal(2, False),)
    sub = F.subformula([0, 1])
    assert sub.width == 2 and sub.m == 2
    assert F.prefix(1).to_dimacs_lists() == [[1, -2]]


def test_formula_is_immutable():
    F = gen_ksat(5, 4, 2, 0)
    with pytest.raises(ValueError):
        F.clauses[0, 0] = 0


def test_occurrence_index_covers_every_literal():
    F = gen_ksat(20, 50, 3, 1)
    ptr, clause, pos = variable_occurrences(F)
    assert ptr[-1] == 150
    for v in range(F.n):
        for c, p in zip(clause[ptr[v]:ptr[v + 1]], pos[ptr[v]:ptr[v + 1]]):
            assert F.clauses[c, p] >> 1 == v


def test_csp_scoring_matches_truth_table():
    g = ConstraintFn.XOR(2)
    F = gen_ksat(6, 30, 2, 3)
    P = CspFormula(F, g)
    A = np.array([True, False, True, True, False, False])
    expect = 0
    for clause in F:
        y = [A[l.variable] ^ l.negated for l in clause]
        expect += g(*y)
    assert count_satisfied(P, A) == expect


def test_constraint_functions():
    assert ConstraintFn.OR(2).mean == 0.75
    assert ConstraintFn.XOR(2).bits() == "0110"
    assert ConstraintFn.from_bits("0110") == ConstraintFn.XOR(2)
    assert len(list(ConstraintFn.all_of_arity(2))) == 16
    with pytest.raises(ValueError):
        ConstraintFn.from_bits("011")


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 10), m=st.integers(0, 25), k=st.integers(1, 3), seed=st.integers(0, 2**32))
def test_satisfied_plus_unsatisfied(n, m, k, seed):
    k = min(k, n)
    F = gen_ksat(n, m, k, seed)
    A = np.random.default_rng(seed).random(n) < 0.5
    assert count_satisfied(F, A) + count_unsatisfied(F, A) == m


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 12), m=st.integers(0, 30), seed=st.integers(0, 2**32))
def test_cut_complement_symmetry(n, m, seed):
    G = gen_gnm(n, m, seed)
    P = np.random.default_rng(seed).random(n) < 0.5
    assert cut_size(G, P) == cut_size(G, complement(P))


@pytest.mark.parametrize("seed", range(5))
def test_random_assignment_average_is_three_quarters(seed):
    n = 8 + seed
    F = gen_ksat(n, 3 * n, 2, seed)
    total = sum(count_satisfied(F, A) for A in all_assignments(n))
    assert total * 4 == 3 * F.m * 2 ** n


@pytest.mark.parametrize("seed", range(5))
def test_random_partition_average_is_half(seed):
    n = 8 + seed
    G = gen_gnm(n, 2 * n, seed)
    total = sum(cut_size(G, P) for P in all_assignments(n))
    assert total * 2 == G.m * 2 ** n
