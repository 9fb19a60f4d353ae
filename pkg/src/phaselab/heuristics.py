"""Constructive lower-bound algorithms for MAX-2-SAT, MAX-k-SAT and MAX-CUT.

The inner loops are numba kernels that read their randomness from arrays of
uniforms drawn up front with the caller's generator, so each run is a pure
function of its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .core import Formula, Graph, count_satisfied, cut_size, incidence_csr, variable_occurrences
from .exact import brute_max_cut, implication_graph, literal_components, two_sat_solve
from .generators import as_rng
from .structures import COMPLEX, classify_components


def _require_two_cnf(F: Formula, who: str):
    if F.m and np.any(F.sizes > 2):
        raise ValueError(f"{who} needs clauses of length at most 2")


def _two_wide(F: Formula) -> np.ndarray:
    lits = F.clauses
    if lits.shape[1] == 2:
        return np.ascontiguousarray(lits)
    out = np.full((F.m, 2), -1, dtype=np.int64)
    out[:, : lits.shape[1]] = lits
    return out


# ----------------------------------------------------------------------------
# potential-driven greedy


class GreedyState(NamedTuple):
    q: float
    satisfied: int
    unit_count: int
    two_count: int


class GreedyTrace:
    """Per-step states of :func:`potential_greedy`; entry ``t`` follows ``t`` settings."""

    def __init__(self, satisfied, unit, two, q):
        self.satisfied = satisfied
        self.unit = unit
        self.two = two
        self.q = q

    def __len__(self):
        return self.q.size

    def __getitem__(self, t):
        return GreedyState(float(self.q[t]), int(self.satisfied[t]), int(self.unit[t]), int(self.two[t]))

    def __iter__(self):
        for t in range(len(self)):
            yield self[t]

    def potential(self) -> np.ndarray:
        """The potential recomputed from the counts, for checking against ``q``."""
        return self.satisfied + 0.75 * self.two + 0.5 * self.unit


class PotentialResult(NamedTuple):
    satisfied: int
    assignment: np.ndarray
    trace: GreedyTrace


@njit(cache=True)
def _potential_greedy(n, lits, ptr, occ_c, occ_p):
    m = lits.shape[0]
    rem = np.zeros(m, dtype=np.int64)
    done = np.zeros(m, dtype=np.bool_)
    unit = 0
    two = 0
    for c in range(m):
        r = 0
        for p in range(2):
            if lits[c, p] >= 0:
                r += 1
        rem[c] = r
        if r == 2:
            two += 1
        else:
            unit += 1
    sat = 0
    q = 0.75 * two + 0.5 * unit
    tr_sat = np.empty(n + 1, dtype=np.int64)
    tr_unit = np.empty(n + 1, dtype=np.int64)
    tr_two = np.empty(n + 1, dtype=np.int64)
    tr_q = np.empty(n + 1, dtype=np.float64)
    tr_sat[0] = 0
    tr_unit[0] = unit
    tr_two[0] = two
    tr_q[0] = q
    value = np.zeros(n, dtype=np.bool_)
    for v in range(n):
        delta = 0.0
        for p in range(ptr[v], ptr[v + 1]):
            c = occ_c[p]
            if done[c]:
                continue
            sign = 1.0 if (lits[c, occ_p[p]] & 1) == 0 else -1.0
            delta += sign * (0.5 if rem[c] == 1 else 0.25)
        val = delta >= 0.0
        value[v] = val
        q += abs(delta)
        for p in range(ptr[v], ptr[v + 1]):
            c = occ_c[p]
            if done[c]:
                continue
            neg = (lits[c, occ_p[p]] & 1) == 1
            if val != neg:
                done[c] = True
                sat += 1
                if rem[c] == 2:
                    two -= 1
                else:
                    unit -= 1
            else:
                rem[c] -= 1
                if rem[c] == 1:
                    two -= 1
                    unit += 1
                else:
                    unit -= 1
                    done[c] = True
        tr_sat[v + 1] = sat
        tr_unit[v + 1] = unit
        tr_two[v + 1] = two
        tr_q[v + 1] = q
    return value, sat, tr_sat, tr_unit, tr_two, tr_q


def potential_greedy(F: Formula, seed=None) -> PotentialResult:
    """Set variables in index order, each way that raises the potential
    ``q = satisfied + 3/4 * (2-clauses) + 1/2 * (unit clauses)``; ties go to True.

    The run is deterministic; ``seed`` is accepted for a uniform heuristic signature.
    """
    _require_two_cnf(F, "potential_greedy")
    lits = _two_wide(F)
    ptr, occ_c, occ_p = variable_occurrences(F)
    value, sat, ts, tu, tt, tq = _potential_greedy(F.n, lits, ptr, occ_c, occ_p)
    return PotentialResult(int(sat), value, GreedyTrace(ts, tu, tt, tq))


# ----------------------------------------------------------------------------
# unit-clause resolution


class TrajectoryPoint(NamedTuple):
    rho: float
    rho1: float
    rho2: float
    step: int = 0
    satisfied: int = 0
    dissatisfied: int = 0
    unit_count: int = 0
    two_count: int = 0


@dataclass
class ResolutionTrace:
    samples: list
    dissatisfied_unit: int
    dissatisfied_residual: int
    steps_phaseI_II: int
    free_steps: int = 0
    residual_clauses: int = 0

    @property
    def dissatisfied(self) -> int:
        return self.dissatisfied_unit + self.dissatisfied_residual

    def as_arrays(self) -> dict:
        cols = TrajectoryPoint._fields
        return {k: np.array([getattr(s, k) for s in self.samples]) for k in cols}


class ResolutionResult(NamedTuple):
    assignment: np.ndarray
    trace: ResolutionTrace


def _sample_every(n: int) -> int:
    return max(1, n // 100)


@njit(cache=True)
def _pool_add(pool, pos, size, x):
    pool[size] = x
    pos[x] = size
    return size + 1


@njit(cache=True)
def _pool_remove(pool, pos, size, x):
    i = pos[x]
    last = pool[size - 1]
    pool[i] = last
    pos[last] = i
    pos[x] = -1
    return size - 1


@njit(cache=True)
def _unit_resolve(n, lits, ptr, occ_c, occ_p, n_seeds, uni, every, allow_free):
    m = lits.shape[0]
    rem = np.zeros(m, dtype=np.int64)
    done = np.zeros(m, dtype=np.bool_)
    dead = np.zeros((m, 2), dtype=np.bool_)
    value = np.full(n, -1, dtype=np.int8)
    pool = np.empty(m, dtype=np.int64)
    ppos = np.full(m, -1, dtype=np.int64)
    psize = 0
    two = 0
    units = 0
    nsat = 0
    ndis = 0
    twos = np.empty(m, dtype=np.int64)
    ntwos = 0
    for c in range(m):
        r = 0
        for p in range(2):
            if lits[c, p] >= 0:
                r += 1
        rem[c] = r
        if r == 2:
            two += 1
            twos[ntwos] = c
            ntwos += 1
        else:
            units += 1
            psize = _pool_add(pool, ppos, psize, c)
    free = np.arange(n)
    fpos = np.arange(n)
    nfree = n
    ri = 0
    for s in range(n_seeds):
        if ntwos == 0:
            break
        c = twos[int(uni[ri] * ntwos)]
        side = int(uni[ri + 1] * 2)
        ri += 2
        if done[c] or rem[c] != 2:
            continue
        dead[c, side] = True
        rem[c] = 1
        two -= 1
        units += 1
        psize = _pool_add(pool, ppos, psize, c)

    cap = n // every + 3
    s_rho = np.empty(cap, dtype=np.int64)
    s_units = np.empty(cap, dtype=np.int64)
    s_two = np.empty(cap, dtype=np.int64)
    s_step = np.empty(cap, dtype=np.int64)
    s_sat = np.empty(cap, dtype=np.int64)
    s_dis = np.empty(cap, dtype=np.int64)
    ns = 0
    s_rho[0] = nfree
    s_units[0] = units
    s_two[0] = two
    s_step[0] = 0
    s_sat[0] = nsat
    s_dis[0] = ndis
    ns = 1
    steps = 0
    nfree_steps = 0
    while True:
        if psize > 0:
            c = pool[int(uni[ri] * psize)]
            ri += 1
            lit = -1
            for p in range(2):
                if lits[c, p] >= 0 and not dead[c, p] and value[lits[c, p] >> 1] == -1:
                    lit = lits[c, p]
            var = lit >> 1
            val = 1 - (lit & 1)
        elif allow_free and nfree > 0 and two >= nfree:
            var = free[int(uni[ri] * nfree)]
            val = int(uni[ri + 1] * 2)
            ri += 2
            nfree_steps += 1
        else:
            break
        value[var] = val
        nfree = _pool_remove(free, fpos, nfree, var)
        for p in range(ptr[var], ptr[var + 1]):
            c = occ_c[p]
            pos = occ_p[p]
            if done[c] or dead[c, pos]:
                continue
            if (lits[c, pos] & 1) ^ val == 1:
                done[c] = True
                nsat += 1
                if rem[c] == 2:
                    two -= 1
                else:
                    units -= 1
                    psize = _pool_remove(pool, ppos, psize, c)
            else:
                rem[c] -= 1
                if rem[c] == 1:
                    two -= 1
                    units += 1
                    psize = _pool_add(pool, ppos, psize, c)
                else:
                    units -= 1
                    psize = _pool_remove(pool, ppos, psize, c)
                    done[c] = True
                    ndis += 1
        steps += 1
        if steps % every == 0:
            s_rho[ns] = nfree
            s_units[ns] = units
            s_two[ns] = two
            s_step[ns] = steps
            s_sat[ns] = nsat
            s_dis[ns] = ndis
            ns += 1
    if s_step[ns - 1] != steps:
        s_rho[ns] = nfree
        s_units[ns] = units
        s_two[ns] = two
        s_step[ns] = steps
        s_sat[ns] = nsat
        s_dis[ns] = ndis
        ns += 1
    residual = (~done) & (rem == 2)
    return (value, ndis, steps, nfree_steps, residual,
            s_rho[:ns], s_units[:ns], s_two[:ns], s_step[:ns], s_sat[:ns], s_dis[:ns])


def _trace_points(n, cols):
    rho, units, two, step, sat, dis = cols
    return [
        TrajectoryPoint(r / n, u / n, t / n, int(s), int(a), int(d), int(u), int(t))
        for r, u, t, s, a, d in zip(rho.tolist(), units.tolist(), two.tolist(),
                                    step.tolist(), sat.tolist(), dis.tolist())
    ]


def unit_clause_resolve(F: Formula, seed, seed_count: int | None = None,
                        free_steps: bool = True) -> ResolutionResult:
    """Seeded unit-clause resolution followed by an exact finish of the residual.

    ``seed_count`` random 2-clauses (default ``round(n ** 0.1)``) lose a random literal,
    then unit clauses are satisfied one at a time in random order.  When no unit
    clauses remain but the remaining 2-clauses still outnumber the unset variables, a
    random unset variable gets a random value and resolution continues.  Otherwise the
    residual 2-clauses are satisfied by the SCC solver when possible, or by
    :func:`scc_repair`, which drops clauses off contradiction cycles.
    """
    _require_two_cnf(F, "unit_clause_resolve")
    n = F.n
    if seed_count is None:
        seed_count = int(round(n ** 0.1)) if n else 0
    rng = as_rng(seed)
    uni = rng.random(2 * n + 2 * seed_count + 4)
    lits = _two_wide(F)
    ptr, occ_c, occ_p = variable_occurrences(F)
    every = _sample_every(n)
    (value, ndis, steps, nfree, residual, *cols) = _unit_resolve(
        n, lits, ptr, occ_c, occ_p, int(seed_count), uni, every, bool(free_steps))
    samples = _trace_points(max(n, 1), cols)
    res_idx = np.flatnonzero(residual)
    removed = 0
    A = value == 1
    if res_idx.size:
        R = Formula(n, lits[res_idx])
        sol = two_sat_solve(R)
        if sol is None:
            keep, sol = scc_repair(R)
            removed = int(R.m - keep.sum())
        unset = value < 0
        A[unset] = sol[unset]
    trace = ResolutionTrace(samples, int(ndis), removed, int(steps), int(nfree), int(res_idx.size))
    return ResolutionResult(A, trace)


def scc_repair(F: Formula):
    """Drop clauses until the 1/2-CNF formula is satisfiable.

    Repeatedly finds a variable whose two literals share a strongly connected
    component and deletes one clause on an implication path from the literal to its
    complement.  Returns ``(kept_mask, assignment)``.
    """
    keep = np.ones(F.m, dtype=bool)
    while True:
        sub_idx = np.flatnonzero(keep)
        sub = F.subformula(sub_idx) if sub_idx.size < F.m else F
        comp = literal_components(sub)
        clash = np.flatnonzero(comp[0::2] == comp[1::2])
        if clash.size == 0:
            sol = comp[0::2] < comp[1::2] if F.n else np.zeros(0, dtype=bool)
            return keep, sol
        x = 2 * int(clash[0])
        ptr, adj, cid = implication_graph(sub)
        drop = _path_clause(ptr, adj, cid, comp, x, x ^ 1)
        keep[sub_idx[drop]] = False


def _path_clause(ptr, adj, cid, comp, src, dst):
    # BFS inside the shared SCC; returns the clause of the last edge into dst
    target = comp[src]
    parent_edge = {src: -1}
    frontier = [src]
    while frontier:
        nxt = []
        for a in frontier:
            for e in range(ptr[a], ptr[a + 1]):
                b = int(adj[e])
                if comp[b] != target or b in parent_edge:
                    continue
                parent_edge[b] = e
                if b == dst:
                    return int(cid[e])
                nxt.append(b)
        frontier = nxt
    raise RuntimeError("no implication path inside a strongly connected component")


# ----------------------------------------------------------------------------
# sequential greedy for k-SAT


@njit(cache=True)
def _ksat_greedy(n, lits, ptr, closing, ell, uni):
    value = np.zeros(n, dtype=np.bool_)
    width = lits.shape[1]
    for v in range(n):
        if v < ell - 1:
            value[v] = uni[v] < 0.5
            continue
        pos = 0
        neg = 0
        for p in range(ptr[v], ptr[v + 1]):
            c = closing[p]
            others_false = True
            lit_v = -1
            for t in range(width):
                lit = lits[c, t]
                if lit < 0:
                    continue
                if (lit >> 1) == v:
                    lit_v = lit
                elif value[lit >> 1] != ((lit & 1) == 1):
                    others_false = False
                    break
            if others_false:
                if lit_v & 1:
                    neg += 1
                else:
                    pos += 1
        if pos == neg:
            value[v] = uni[v] < 0.5
        else:
            value[v] = pos > neg
    return value


def ksat_sequential_greedy(F: Formula, ell: int = 1, seed=0) -> int:
    """Greedy for k-CNF: the first ``ell - 1`` variables are random, then each variable
    takes the majority sign over the clauses it closes while all their other literals
    are false (ties by coin).  Returns the satisfied count of the final assignment."""
    if F.n and not 1 <= ell <= F.n:
        raise ValueError("ell must satisfy 1 <= ell <= n")
    return int(count_satisfied(F, ksat_greedy_assignment(F, ell, seed)))


def ksat_greedy_assignment(F: Formula, ell: int = 1, seed=0) -> np.ndarray:
    rng = as_rng(seed)
    uni = rng.random(F.n)
    if F.m == 0:
        return uni < 0.5
    lits = np.ascontiguousarray(F.clauses)
    last = np.where(lits >= 0, lits >> 1, -1).max(axis=1)
    order = np.argsort(last, kind="stable")
    ptr = np.zeros(F.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(last, minlength=F.n), out=ptr[1:])
    return _ksat_greedy(F.n, lits, ptr, order.astype(np.int64), int(ell), uni)


# ----------------------------------------------------------------------------
# Online-Lazy

ACCEPT_TRUE, ACCEPT_FORCED, ACCEPT_FREE, REJECT = 0, 1, 2, 3


class OnlineResult(NamedTuple):
    accepted: int
    assignment: np.ndarray  # int8: 1 true, 0 false, -1 never set
    decisions: np.ndarray   # per clause: one of ACCEPT_TRUE, ACCEPT_FORCED, ACCEPT_FREE, REJECT


@njit(cache=True)
def _online_lazy(n, lits):
    m = lits.shape[0]
    value = np.full(n, -1, dtype=np.int8)
    decisions = np.empty(m, dtype=np.int8)
    accepted = 0
    for c in range(m):
        any_true = False
        unset_first = -1
        for t in range(lits.shape[1]):
            lit = lits[c, t]
            if lit < 0:
                continue
            x = value[lit >> 1]
            if x == -1:
                if unset_first < 0:
                    unset_first = lit
            elif x != (lit & 1):
                any_true = True
        if any_true:
            decisions[c] = 0
            accepted += 1
        elif unset_first < 0:
            decisions[c] = 3
        else:
            n_unset = 0
            for t in range(lits.shape[1]):
                lit = lits[c, t]
                if lit >= 0 and value[lit >> 1] == -1:
                    n_unset += 1
            value[unset_first >> 1] = 1 - (unset_first & 1)
            decisions[c] = 1 if n_unset == 1 else 2
            accepted += 1
    return accepted, value, decisions


def online_lazy(F: Formula, seed=None) -> OnlineResult:
    """Online play that accepts every clause it can and sets as little as possible.

    A clause with a true literal is accepted untouched; one whose literals are all
    false is rejected; otherwise the first unset literal is made true.  Deterministic;
    ``seed`` is accepted for a uniform heuristic signature.
    """
    _require_two_cnf(F, "online_lazy")
    acc, value, dec = _online_lazy(F.n, np.ascontiguousarray(F.clauses))
    return OnlineResult(int(acc), value, dec)


# ----------------------------------------------------------------------------
# MAX-CUT heuristics


class CutResult(NamedTuple):
    cut: int
    partition: np.ndarray


@njit(cache=True)
def _majority_cut(n, ptr, nbr, order, coins):
    side = np.full(n, -1, dtype=np.int8)
    for t in range(order.shape[0]):
        v = order[t]
        black = 0
        white = 0
        for p in range(ptr[v], ptr[v + 1]):
            s = side[nbr[p]]
            if s == 1:
                black += 1
            elif s == 0:
                white += 1
        if black > white:
            side[v] = 0
        elif white > black:
            side[v] = 1
        else:
            side[v] = 1 if coins[t] < 0.5 else 0
    return side


def majority_greedy_cut(G: Graph, order=None, seed=0) -> CutResult:
    """Colour vertices in ``order`` (default: a seeded random permutation), each opposite
    the majority colour among its already coloured neighbours; ties by coin."""
    rng = as_rng(seed)
    if order is None:
        order = rng.permutation(G.n)
    order = np.asarray(order, dtype=np.int64)
    if order.shape != (G.n,) or not np.array_equal(np.sort(order), np.arange(G.n)):
        raise ValueError("order must be a permutation of the vertices")
    coins = rng.random(G.n)
    ptr, nbr, _ = incidence_csr(G.n, G.edges)
    P = _majority_cut(G.n, ptr, nbr, order, coins) == 1
    return CutResult(cut_size(G, P), P)


class UnitCutResult(NamedTuple):
    partition: np.ndarray
    uncut: int
    trace: ResolutionTrace


@njit(cache=True)
def _unit_cut(n, edges, ptr, nbr, eid, uni, every):
    m = edges.shape[0]
    state = np.full(m, 2, dtype=np.int64)  # uncoloured endpoints left
    side = np.full(n, -1, dtype=np.int8)
    upool = np.empty(m, dtype=np.int64)
    upos = np.full(m, -1, dtype=np.int64)
    usize = 0
    tpool = np.arange(m)
    tpos = np.arange(m)
    tsize = m
    uncoloured = n
    ncut = 0
    nuncut = 0
    cap = n // every + 3
    s_rho = np.empty(cap, dtype=np.int64)
    s_units = np.empty(cap, dtype=np.int64)
    s_two = np.empty(cap, dtype=np.int64)
    s_step = np.empty(cap, dtype=np.int64)
    s_sat = np.empty(cap, dtype=np.int64)
    s_dis = np.empty(cap, dtype=np.int64)
    s_rho[0] = n
    s_units[0] = 0
    s_two[0] = m
    s_step[0] = 0
    s_sat[0] = 0
    s_dis[0] = 0
    ns = 1
    ri = 0
    steps = 0
    nfree = 0
    while True:
        if usize > 0:
            e = upool[int(uni[ri] * usize)]
            ri += 1
            a = edges[e, 0]
            b = edges[e, 1]
            if side[a] == -1:
                v = a
                col = 1 - side[b]
            else:
                v = b
                col = 1 - side[a]
        elif tsize > 0 and 2 * tsize >= uncoloured:
            e = tpool[int(uni[ri] * tsize)]
            v = edges[e, int(uni[ri + 1] * 2)]
            col = int(uni[ri + 2] * 2)
            ri += 3
            nfree += 1
        else:
            break
        side[v] = col
        uncoloured -= 1
        for p in range(ptr[v], ptr[v + 1]):
            f = eid[p]
            if state[f] == 2:
                state[f] = 1
                tsize = _pool_remove(tpool, tpos, tsize, f)
                usize = _pool_add(upool, upos, usize, f)
            elif state[f] == 1:
                state[f] = 0
                usize = _pool_remove(upool, upos, usize, f)
                if side[nbr[p]] != col:
                    ncut += 1
                else:
                    nuncut += 1
        steps += 1
        if steps % every == 0:
            s_rho[ns] = uncoloured
            s_units[ns] = usize
            s_two[ns] = tsize
            s_step[ns] = steps
            s_sat[ns] = ncut
            s_dis[ns] = nuncut
            ns += 1
    if s_step[ns - 1] != steps:
        s_rho[ns] = uncoloured
        s_units[ns] = usize
        s_two[ns] = tsize
        s_step[ns] = steps
        s_sat[ns] = ncut
        s_dis[ns] = nuncut
        ns += 1
    residual = state == 2
    return (side, nuncut, steps, nfree, residual,
            s_rho[:ns], s_units[:ns], s_two[:ns], s_step[:ns], s_sat[:ns], s_dis[:ns])


@njit(cache=True)
def _bfs_two_colour(n, ptr, nbr, side):
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        if side[s] != -1:
            continue
        side[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            for p in range(ptr[v], ptr[v + 1]):
                w = nbr[p]
                if side[w] == -1:
                    side[w] = 1 - side[v]
                    queue[tail] = w
                    tail += 1
    return side


def finish_cut(R: Graph, seed=0, brute_limit: int = 24) -> np.ndarray:
    """Good partition of a sparse residual graph: BFS 2-colouring (optimal on trees and
    unicyclic components), exact search on small complex components, majority greedy
    on the rest."""
    ptr, nbr, _ = incidence_csr(R.n, R.edges)
    side = _bfs_two_colour(R.n, ptr, nbr, np.full(R.n, -1, dtype=np.int8)) == 1
    if R.m == 0:
        return side
    rep = classify_components(R)
    rng = as_rng(seed)
    elab = rep.labels[R.edges[:, 0]]
    for lab in np.flatnonzero(rep.classes == COMPLEX):
        verts = np.flatnonzero(rep.labels == lab)
        remap = np.full(R.n, -1, dtype=np.int64)
        remap[verts] = np.arange(verts.size)
        sub = Graph(int(verts.size), remap[R.edges[elab == lab]])
        if verts.size <= brute_limit:
            _, P = brute_max_cut(sub)
        else:
            P = majority_greedy_cut(sub, seed=rng).partition
            if cut_size(sub, P) < cut_size(sub, side[verts]):
                P = side[verts]
        side[verts] = P
    return side


def unit_clause_cut(G: Graph, seed=0) -> UnitCutResult:
    """Unit-clause colouring for MAX-CUT with edges read as "endpoints differ" constraints.

    A unit clause is an edge with exactly one coloured endpoint; one is picked at random
    and its other endpoint coloured to cut it.  Without unit clauses, while the uncoloured
    part still has at least half as many edges as vertices, a random endpoint of a random
    uncoloured edge gets a random colour.  The sparse residual is finished by
    :func:`finish_cut`.
    """
    rng = as_rng(seed)
    n = G.n
    uni = rng.random(3 * n + 4)
    ptr, nbr, eid = incidence_csr(n, G.edges)
    every = _sample_every(n)
    side, nuncut, steps, nfree, residual, *cols = _unit_cut(
        n, np.ascontiguousarray(G.edges), ptr, nbr, eid, uni, every)
    samples = _trace_points(max(n, 1), cols)
    P = side == 1
    left = side < 0
    removed = 0
    if left.any():
        verts = np.flatnonzero(left)
        remap = np.full(n, -1, dtype=np.int64)
        remap[verts] = np.arange(verts.size)
        R = Graph(int(verts.size), remap[G.edges[residual]])
        Q = finish_cut(R, seed=rng)
        P[verts] = Q
        removed = R.m - cut_size(R, Q)
    uncut = G.m - cut_size(G, P)
    trace = ResolutionTrace(samples, int(nuncut), int(removed), int(steps), int(nfree),
                            int(residual.sum()))
    return UnitCutResult(P, int(uncut), trace)
