"""Domain types for formulas, graphs, assignments and cuts.

Literals are stored as integer codes ``2 * variable + negated`` so that the
complement of a literal is ``code ^ 1``.  A :class:`Formula` keeps its clauses
in a dense ``(m, width)`` array padded with ``-1`` for clauses shorter than the
widest one (unit clauses appear during resolution).

Assignments and partitions are plain boolean numpy vectors indexed from 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple, Sequence

import numpy as np

PAD = -1


class Literal(NamedTuple):
    variable: int
    negated: bool = False

    @property
    def code(self) -> int:
        return 2 * self.variable + int(self.negated)

    @classmethod
    def from_code(cls, code: int) -> "Literal":
        return cls(int(code) >> 1, bool(code & 1))

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise ValueError("0 is not a DIMACS literal")
        return cls(abs(value) - 1, value < 0)

    def to_dimacs(self) -> int:
        return -(self.variable + 1) if self.negated else self.variable + 1

    def __invert__(self) -> "Literal":
        return Literal(self.variable, not self.negated)

    def __str__(self) -> str:
        return f"{'~' if self.negated else ''}x{self.variable}"


Clause = tuple  # tuple[Literal, ...]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Formula:
    """A CNF formula over ``n`` variables; clause order is significant."""

    n: int
    clauses: np.ndarray

    def __post_init__(self):
        lits = np.asarray(self.clauses, dtype=np.int64)
        if lits.ndim == 1 and lits.size == 0:
            lits = lits.reshape(0, 0)
        if lits.ndim != 2:
            raise ValueError("clauses must be a 2-d array of literal codes")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        live = lits >= 0
        if lits.size:
            if np.any(lits < PAD):
                raise ValueError("literal codes must be >= 0 (or -1 padding)")
            if np.any(lits[live] >> 1 >= self.n):
                raise ValueError(f"literal variable out of range for n={self.n}")
            if np.any(live.sum(axis=1) == 0):
                raise ValueError("empty clause")
            # padding must trail the live literals
            if np.any(~live[:, :-1] & live[:, 1:]):
                raise ValueError("padding must follow the literals of a clause")
            if lits.shape[1] > 1:
                v = np.where(live, lits >> 1, -1 - np.arange(lits.shape[1]))
                v.sort(axis=1)
                if np.any(v[:, 1:] == v[:, :-1]):
                    raise ValueError("clause repeats a variable (clauses must be proper)")
        object.__setattr__(self, "clauses", _frozen(lits))

    @classmethod
    def _trusted(cls, n: int, clauses: np.ndarray) -> "Formula":
        # generator output is proper by construction; skip the validation pass
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "clauses", _frozen(clauses))
        return obj

    @classmethod
    def from_clauses(cls, n: int, clauses: Iterable[Iterable]) -> "Formula":
        """Build from clauses given as sequences of :class:`Literal` or ``(var, negated)``."""
        rows = [[Literal(*lit).code for lit in clause] for clause in clauses]
        return cls(n, _pad_rows(rows))

    @classmethod
    def from_dimacs_lists(cls, n: int, clauses: Iterable[Iterable[int]]) -> "Formula":
        rows = [[Literal.from_dimacs(v).code for v in clause] for clause in clauses]
        return cls(n, _pad_rows(rows))

    @property
    def m(self) -> int:
        return self.clauses.shape[0]

    @property
    def width(self) -> int:
        return self.clauses.shape[1]

    @property
    def sizes(self) -> np.ndarray:
        return (self.clauses >= 0).sum(axis=1)

    @property
    def arity(self) -> int | None:
        """Common clause length, or ``None`` for mixed lengths (or no clauses)."""
        if self.m == 0:
            return None
        s = self.sizes
        return int(s[0]) if np.all(s == s[0]) else None

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, i: int) -> Clause:
        return tuple(Literal.from_code(c) for c in self.clauses[i] if c >= 0)

    def __iter__(self):
        for i in range(self.m):
            yield self[i]

    def subformula(self, index) -> "Formula":
        """Clauses selected by an index array or boolean mask, order preserved."""
        sub = self.clauses[index]
        if sub.size and np.all(sub[:, -1] < 0):
            sub = sub[:, : int((sub >= 0).sum(axis=1).max())]
        return Formula(self.n, sub)

    def prefix(self, m: int) -> "Formula":
        return Formula(self.n, self.clauses[:m])

    def to_dimacs_lists(self) -> list[list[int]]:
        return [[lit.to_dimacs() for lit in clause] for clause in self]


def _pad_rows(rows: Sequence[Sequence[int]]) -> np.ndarray:
    width = max((len(r) for r in rows), default=0)
    out = np.full((len(rows), width), PAD, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


@dataclass(frozen=True)
class ConstraintFn:
    """A k-ary boolean constraint given by its truth table.

    ``table[idx]`` is the value on input bits ``y`` where ``idx = sum(y[j] << j)``.
    A clause with variables ``i_j`` and signs ``s_j`` sees ``y[j] = x[i_j] xor s_j``,
    so with ``OR`` the sign bit plays the role of a negated literal.
    """

    arity: int
    table: tuple

    def __post_init__(self):
        table = tuple(int(bool(b)) for b in self.table)
        if self.arity < 1 or len(table) != 1 << self.arity:
            raise ValueError("truth table must have 2**arity entries")
        object.__setattr__(self, "table", table)

    @classmethod
    def OR(cls, k: int) -> "ConstraintFn":
        return cls(k, tuple(int(i != 0) for i in range(1 << k)))

    @classmethod
    def XOR(cls, k: int) -> "ConstraintFn":
        return cls(k, tuple(bin(i).count("1") & 1 for i in range(1 << k)))

    @classmethod
    def from_bits(cls, bits: str) -> "ConstraintFn":
        """Parse a truth table written as a bit string, entry 0 first (``"0110"`` is XOR2)."""
        k = len(bits).bit_length() - 1
        if 1 << k != len(bits) or set(bits) - {"0", "1"}:
            raise ValueError(f"not a truth table: {bits!r}")
        return cls(k, tuple(int(b) for b in bits))

    @classmethod
    def all_of_arity(cls, k: int):
        for bits in product((0, 1), repeat=1 << k):
            yield cls(k, bits)

    @property
    def mean(self) -> float:
        return sum(self.table) / len(self.table)

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    def bits(self) -> str:
        return "".join(map(str, self.table))

    def __call__(self, *y) -> int:
        return self.table[sum(int(b) << j for j, b in enumerate(y))]


@dataclass(frozen=True, eq=False)
class CspFormula:
    """Clauses of a random CSP: each row of ``formula`` is a signed variable tuple fed to ``g``."""

    formula: Formula
    g: ConstraintFn

    def __post_init__(self):
        if self.formula.m and self.formula.arity != self.g.arity:
            raise ValueError("every clause must have the constraint's arity")

    @property
    def n(self) -> int:
        return self.formula.n

    @property
    def m(self) -> int:
        return self.formula.m


@dataclass(frozen=True, eq=False)
class Graph:
    """An undirected multigraph on vertices ``0..n-1`` given as an edge list."""

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise ValueError(f"edge endpoint out of range for n={self.n}")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
        object.__setattr__(self, "edges", _frozen(e))

    @classmethod
    def _trusted(cls, n: int, edges: np.ndarray) -> "Graph":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", _frozen(edges))
        return obj

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def adjacency(self):
        """CSR incidence lists ``(ptr, neighbor, edge_id)``; parallel edges appear separately."""
        return incidence_csr(self.n, self.edges)

    def edge_subgraph(self, index) -> "Graph":
        return Graph._trusted(self.n, self.edges[index])


def incidence_csr(n: int, edges: np.ndarray):
    m = edges.shape[0]
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, dst[order].astype(np.int64), eid[order].astype(np.int64)


def variable_occurrences(F: Formula):
    """CSR index of clause occurrences per variable: ``(ptr, clause, position)``."""
    lits = F.clauses
    rows, cols = np.nonzero(lits >= 0)
    var = lits[rows, cols] >> 1
    order = np.argsort(var, kind="stable")
    ptr = np.zeros(F.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(var, minlength=F.n), out=ptr[1:])
    return ptr, rows[order].astype(np.int64), cols[order].astype(np.int64)


def _check_vector(x, n: int, what: str) -> np.ndarray:
    v = np.asarray(x, dtype=bool)
    if v.shape != (n,):
        raise ValueError(f"{what} has length {v.shape[0] if v.ndim else 0}, expected {n}")
    return v


def literal_values(F: Formula, A) -> np.ndarray:
    """Truth value of every literal slot of ``F`` under ``A`` (padding reads False)."""
    A = _check_vector(A, F.n, "assignment")
    lits = F.clauses
    safe = np.where(lits >= 0, lits, 0)
    truth = A[safe >> 1] ^ (safe & 1).astype(bool)
    return truth & (lits >= 0)


def clause_satisfied(F, A) -> np.ndarray:
    if isinstance(F, CspFormula):
        y = literal_values(F.formula, A).astype(np.int64)
        idx = (y << np.arange(F.g.arity)).sum(axis=1)
        return np.asarray(F.g.table, dtype=bool)[idx]
    return literal_values(F, A).any(axis=1)


def count_satisfied(F, A) -> int:
    """Number of clauses with at least one true literal (or with ``g = 1`` for a CSP)."""
    return int(clause_satisfied(F, A).sum())


def count_unsatisfied(F, A) -> int:
    return F.m - count_satisfied(F, A)


def cut_size(G: Graph, P) -> int:
    """Edges with endpoints on different sides, parallel edges counted separately."""
    P = _check_vector(P, G.n, "partition")
    e = G.edges
    return int(np.count_nonzero(P[e[:, 0]] != P[e[:, 1]]))


def complement(P) -> np.ndarray:
    return ~np.asarray(P, dtype=bool)
