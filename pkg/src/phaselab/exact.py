"""Exact oracles: brute-force MAX-SAT / MAX-CUT and linear-time 2-SAT."""

from __future__ import annotations

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import Formula, Graph, incidence_csr, variable_occurrences
from .errors import ResourceLimitError

BRUTE_LIMIT = 30
COMPLEX_PRESENT = "complex-present"


@njit(cache=True)
def _gray_maxsat(n, ptr, occ_clause, occ_code, cnt0):
    cnt = cnt0.copy()
    sat = 0
    for c in range(cnt.shape[0]):
        if cnt[c] > 0:
            sat += 1
    best = sat
    best_key = 0
    key = 0
    state = 0
    total = 1 << n
    for i in range(1, total):
        v = 0
        while not (i >> v) & 1:
            v += 1
        state ^= 1 << v
        key ^= 1 << (n - 1 - v)
        xv = (state >> v) & 1
        for p in range(ptr[v], ptr[v + 1]):
            c = occ_clause[p]
            if xv ^ (occ_code[p] & 1):
                cnt[c] += 1
                if cnt[c] == 1:
                    sat += 1
            else:
                cnt[c] -= 1
                if cnt[c] == 0:
                    sat -= 1
        if sat > best or (sat == best and key < best_key):
            best = sat
            best_key = key
    return best, best_key


@njit(cache=True)
def _gray_maxcut(n, ptr, nbr):
    # vertex 0 stays on side 0; enumerate the other n-1 vertices
    side = np.zeros(n, dtype=np.int8)
    cut = 0
    best = 0
    best_key = 0
    key = 0
    total = 1 << (n - 1)
    for i in range(1, total):
        b = 0
        while not (i >> b) & 1:
            b += 1
        v = b + 1
        key ^= 1 << (n - 1 - v)
        same = 0
        diff = 0
        for p in range(ptr[v], ptr[v + 1]):
            if side[nbr[p]] == side[v]:
                same += 1
            else:
                diff += 1
        side[v] ^= 1
        cut += same - diff
        if cut > best or (cut == best and key < best_key):
            best = cut
            best_key = key
    return best, best_key


def _key_to_vector(key: int, n: int) -> np.ndarray:
    return np.array([(key >> (n - 1 - v)) & 1 for v in range(n)], dtype=bool)


def _initial_true_counts(F: Formula) -> np.ndarray:
    # all-false assignment: exactly the negated literals are true
    lits = F.clauses
    return ((lits >= 0) & ((lits & 1) == 1)).sum(axis=1).astype(np.int64)


def brute_max_sat(F: Formula, limit: int = BRUTE_LIMIT):
    """Maximum number of simultaneously satisfiable clauses, by Gray-code enumeration.

    Returns ``(best, witness)`` where the witness is the lexicographically smallest
    optimal assignment (``False < True``, variable 0 most significant).
    """
    if F.n > limit:
        raise ResourceLimitError(f"brute force over 2^{F.n} assignments exceeds budget 2^{limit}")
    if F.n == 0:
        return 0, np.zeros(0, dtype=bool)
    ptr, occ_clause, occ_pos = variable_occurrences(F)
    occ_code = F.clauses[occ_clause, occ_pos]
    best, key = _gray_maxsat(F.n, ptr, occ_clause, occ_code, _initial_true_counts(F))
    return int(best), _key_to_vector(int(key), F.n)


def brute_max_cut(G: Graph, limit: int = BRUTE_LIMIT):
    """Maximum cut by enumerating the ``2^(n-1)`` partitions with vertex 0 on side False."""
    if G.n > limit:
        raise ResourceLimitError(f"brute force over 2^{G.n - 1} partitions exceeds budget")
    if G.n <= 1:
        return 0, np.zeros(G.n, dtype=bool)
    ptr, nbr, _ = incidence_csr(G.n, G.edges)
    best, key = _gray_maxcut(G.n, ptr, nbr)
    return int(best), _key_to_vector(int(key), G.n)


def _check_two_cnf(F: Formula):
    if F.m and F.width > 2:
        if np.any(F.sizes > 2):
            raise ValueError("2-SAT oracle needs clauses of length 1 or 2")


def implication_graph(F: Formula):
    """Implication digraph on the ``2n`` literal codes as CSR ``(ptr, targets, clause_of_edge)``.

    Clause ``(a or b)`` contributes ``~a -> b`` and ``~b -> a``; a unit ``(a)`` contributes ``~a -> a``.
    """
    _check_two_cnf(F)
    lits = F.clauses
    N = 2 * F.n
    if F.m == 0:
        return np.zeros(N + 1, dtype=np.int64), np.empty(0, np.int64), np.empty(0, np.int64)
    a = lits[:, 0]
    b = lits[:, 1] if lits.shape[1] > 1 else np.full(F.m, -1, dtype=np.int64)
    idx = np.arange(F.m, dtype=np.int64)
    two = b >= 0
    src = np.concatenate([a[two] ^ 1, b[two] ^ 1, a[~two] ^ 1])
    dst = np.concatenate([b[two], a[two], a[~two]])
    cid = np.concatenate([idx[two], idx[two], idx[~two]])
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(N + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=N), out=ptr[1:])
    return ptr, dst[order], cid[order]


@njit(cache=True)
def _tarjan(N, ptr, adj):
    index = np.full(N, -1, dtype=np.int64)
    low = np.zeros(N, dtype=np.int64)
    onstack = np.zeros(N, dtype=np.bool_)
    comp = np.full(N, -1, dtype=np.int64)
    stack = np.empty(N, dtype=np.int64)
    cs_node = np.empty(N, dtype=np.int64)
    cs_edge = np.empty(N, dtype=np.int64)
    sp = 0
    counter = 0
    nc = 0
    for s in range(N):
        if index[s] != -1:
            continue
        index[s] = counter
        low[s] = counter
        counter += 1
        stack[sp] = s
        sp += 1
        onstack[s] = True
        cs_node[0] = s
        cs_edge[0] = ptr[s]
        csp = 1
        while csp > 0:
            v = cs_node[csp - 1]
            e = cs_edge[csp - 1]
            if e < ptr[v + 1]:
                cs_edge[csp - 1] = e + 1
                w = adj[e]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    cs_node[csp] = w
                    cs_edge[csp] = ptr[w]
                    csp += 1
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                csp -= 1
                if csp > 0:
                    u = cs_node[csp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = nc
                        if w == v:
                            break
                    nc += 1
    return comp


def literal_components(F: Formula) -> np.ndarray:
    """Strongly connected component id of every literal code, in Tarjan completion order."""
    ptr, adj, _ = implication_graph(F)
    return _tarjan(2 * F.n, ptr, adj)


def two_sat_solve(F: Formula):
    """A satisfying assignment of a 1/2-CNF formula, or ``None`` if there is none."""
    if F.n == 0:
        return np.zeros(0, dtype=bool)
    comp = literal_components(F)
    pos, neg = comp[0::2], comp[1::2]
    if np.any(pos == neg):
        return None
    # Tarjan numbers components in reverse topological order
    return pos < neg


def two_sat_decide(F: Formula) -> bool:
    """Whether a formula of 1- and 2-literal clauses is satisfiable (linear time)."""
    return two_sat_solve(F) is not None


def min_uncut_via_components(G: Graph):
    """Exact minimum number of uncut edges when no component is complex.

    Returns the number of unicyclic components whose cycle is odd, or
    :data:`COMPLEX_PRESENT` when some component has two or more independent cycles.
    """
    from .structures import classify_components

    report = classify_components(G)
    if report.complex_count:
        return COMPLEX_PRESENT
    return report.odd_unicyclic


def _pure_literal_reduce(F: Formula):
    """Repeatedly satisfy pure literals; returns (fixed values, fixed mask, active clause mask)."""
    n, lits = F.n, F.clauses
    live = lits >= 0
    safe = np.where(live, lits, 0)
    var, neg = safe >> 1, (safe & 1).astype(bool)
    active = np.ones(F.m, dtype=bool)
    fixed = np.zeros(n, dtype=bool)
    value = np.zeros(n, dtype=bool)
    while True:
        rows = live & active[:, None]
        pos_cnt = np.bincount(var[rows & ~neg], minlength=n)
        neg_cnt = np.bincount(var[rows & neg], minlength=n)
        pure = ~fixed & ((pos_cnt > 0) ^ (neg_cnt > 0))
        if not pure.any():
            break
        fixed |= pure
        value[pure] = pos_cnt[pure] > 0
        hit = rows & pure[var] & (value[var] != neg)
        active &= ~hit.any(axis=1)
    return value, fixed, active


def exact_max_sat(F: Formula, limit: int = BRUTE_LIMIT):
    """Exact maximum with the same value as :func:`brute_max_sat`, usually much faster.

    Pure literals are satisfied first (never suboptimal), then each connected
    component of the remaining clause/variable structure is brute-forced separately.
    The witness is optimal but not necessarily the lexicographically smallest one.
    """
    value, fixed, active = _pure_literal_reduce(F)
    best = int(F.m - active.sum())
    if not active.any():
        return best, value
    sub = F.clauses[active]
    live = sub >= 0
    var = np.where(live, sub >> 1, 0)
    used = np.unique(var[live])
    # union variables that share a clause
    rows = np.repeat(var[:, :1], sub.shape[1], axis=1)
    adj = coo_matrix((np.ones(live.sum()), (rows[live], var[live])), shape=(F.n, F.n))
    _, label = connected_components(adj, directed=False)
    clause_label = label[var[:, 0]]
    for lab in np.unique(label[used]):
        cvars = used[label[used] == lab]
        if cvars.size > limit:
            raise ResourceLimitError(
                f"reduced component has {cvars.size} variables, over the budget {limit}")
        remap = np.full(F.n, -1, dtype=np.int64)
        remap[cvars] = np.arange(cvars.size)
        block = sub[clause_label == lab]
        codes = np.where(block >= 0, 2 * remap[np.where(block >= 0, block >> 1, 0)] + (block & 1), -1)
        b, w = brute_max_sat(Formula(int(cvars.size), codes), limit)
        best += b
        value[cvars] = w
    return best, value


def exact_max_cut(G: Graph, limit: int = BRUTE_LIMIT):
    """Exact maximum cut, solving each connected component on its own."""
    if G.m == 0:
        return 0, np.zeros(G.n, dtype=bool)
    e = G.edges
    adj = coo_matrix((np.ones(G.m), (e[:, 0], e[:, 1])), shape=(G.n, G.n))
    _, label = connected_components(adj, directed=False)
    side = np.zeros(G.n, dtype=bool)
    best = 0
    elab = label[e[:, 0]]
    for lab in np.unique(elab):
        verts = np.flatnonzero(label == lab)
        if verts.size > limit:
            raise ResourceLimitError(f"component with {verts.size} vertices exceeds budget {limit}")
        remap = np.full(G.n, -1, dtype=np.int64)
        remap[verts] = np.arange(verts.size)
        b, w = brute_max_cut(Graph(int(verts.size), remap[e[elab == lab]]), limit)
        best += b
        side[verts] = w
    return best, side


@njit(cache=True)
def _gray_prefix_maxsat(n, ptr, occ_clause, occ_code, cnt0):
    m = cnt0.shape[0]
    cnt = cnt0.copy()
    best = np.zeros(m + 1, dtype=np.int64)
    state = 0
    for i in range(0, 1 << n):
        if i:
            v = 0
            while not (i >> v) & 1:
                v += 1
            state ^= 1 << v
            xv = (state >> v) & 1
            for p in range(ptr[v], ptr[v + 1]):
                c = occ_clause[p]
                if xv ^ (occ_code[p] & 1):
                    cnt[c] += 1
                else:
                    cnt[c] -= 1
        run = 0
        for c in range(m):
            if cnt[c] > 0:
                run += 1
            if run > best[c + 1]:
                best[c + 1] = run
    return best


def prefix_max_sat(F: Formula, limit: int = 24) -> np.ndarray:
    """``out[t]`` is the exact maximum satisfiable count of the first ``t`` clauses."""
    if F.n > limit:
        raise ResourceLimitError(f"prefix enumeration over 2^{F.n} assignments exceeds budget")
    if F.m == 0 or F.n == 0:
        return np.zeros(F.m + 1, dtype=np.int64)
    ptr, occ_clause, occ_pos = variable_occurrences(F)
    occ_code = F.clauses[occ_clause, occ_pos]
    return _gray_prefix_maxsat(F.n, ptr, occ_clause, occ_code, _initial_true_counts(F))
