"""Structural analyzers: bicycles, 2-cores, kernels and the component taxonomy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import Formula, Graph, incidence_csr
from .errors import ResourceLimitError
from .generators import as_rng

TREE, UNICYCLIC, COMPLEX = "tree", "unicyclic", "complex"
DEFAULT_BICYCLE_BUDGET = 2_000_000


# ----------------------------------------------------------------------------
# 2-core and kernel


@njit(cache=True)
def _peel(n, m, ptr, nbr, eid):
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = ptr[v + 1] - ptr[v]
    alive_v = np.ones(n, dtype=np.bool_)
    alive_e = np.ones(m, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if deg[v] <= 1:
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        alive_v[v] = False
        for p in range(ptr[v], ptr[v + 1]):
            e = eid[p]
            if alive_e[e]:
                alive_e[e] = False
                w = nbr[p]
                deg[w] -= 1
                if deg[w] == 1:
                    queue[tail] = w
                    tail += 1
    return alive_v, alive_e


def two_core_mask(G: Graph):
    """Boolean masks ``(vertex_in_core, edge_in_core)`` of the 2-core."""
    if G.n == 0:
        return np.zeros(0, dtype=bool), np.zeros(G.m, dtype=bool)
    ptr, nbr, eid = incidence_csr(G.n, G.edges)
    return _peel(G.n, G.m, ptr, nbr, eid)


def two_core(G: Graph) -> Graph:
    """The 2-core as a sub-multigraph on the same vertex ids (peeled vertices become isolated)."""
    _, emask = two_core_mask(G)
    return G.edge_subgraph(emask)


@njit(cache=True)
def _contract(n, m, ptr, nbr, eid, alive_e, deg):
    used = np.zeros(m, dtype=np.bool_)
    ku = np.empty(m, dtype=np.int64)
    kv = np.empty(m, dtype=np.int64)
    klen = np.empty(m, dtype=np.int64)
    pverts = np.empty(2 * m + 1, dtype=np.int64)
    pedges = np.empty(m, dtype=np.int64)
    vptr = np.zeros(m + 1, dtype=np.int64)
    k = 0
    pv = 0
    pe = 0
    for s in range(n):
        if deg[s] < 3:
            continue
        for p in range(ptr[s], ptr[s + 1]):
            e = eid[p]
            if not alive_e[e] or used[e]:
                continue
            used[e] = True
            pverts[pv] = s
            pv += 1
            pedges[pe] = e
            pe += 1
            length = 1
            prev = e
            cur = nbr[p]
            while deg[cur] == 2:
                pverts[pv] = cur
                pv += 1
                nxt = -1
                for q in range(ptr[cur], ptr[cur + 1]):
                    f = eid[q]
                    if alive_e[f] and f != prev:
                        nxt = q
                        break
                f = eid[nxt]
                used[f] = True
                pedges[pe] = f
                pe += 1
                length += 1
                prev = f
                cur = nbr[nxt]
            pverts[pv] = cur
            pv += 1
            ku[k] = s
            kv[k] = cur
            klen[k] = length
            k += 1
            vptr[k] = pv
    # whatever core edges remain lie on bare cycles
    cverts = np.empty(m, dtype=np.int64)
    cptr = np.zeros(m + 1, dtype=np.int64)
    nc = 0
    cv = 0
    for s in range(n):
        if deg[s] != 2:
            continue
        for p in range(ptr[s], ptr[s + 1]):
            e = eid[p]
            if not alive_e[e] or used[e]:
                continue
            used[e] = True
            cverts[cv] = s
            cv += 1
            prev = e
            cur = nbr[p]
            while cur != s:
                cverts[cv] = cur
                cv += 1
                nxt = -1
                for q in range(ptr[cur], ptr[cur + 1]):
                    f = eid[q]
                    if alive_e[f] and f != prev:
                        nxt = q
                        break
                f = eid[nxt]
                used[f] = True
                prev = f
                cur = nbr[nxt]
            nc += 1
            cptr[nc] = cv
            break
    return ku[:k], kv[:k], klen[:k], pverts[:pv], vptr[: k + 1], pedges[:pe], cverts[:cv], cptr[: nc + 1]


@dataclass(frozen=True, eq=False)
class KernelGraph:
    """The 2-core with maximal degree-2 paths contracted.

    ``edges[t]`` joins two kernel vertices (possibly the same one) and stands for the
    2-core path ``paths[t]`` (a vertex sequence of ``lengths[t] + 1`` entries);
    ``parities[t] = lengths[t] % 2``.  Components of the 2-core with no vertex of
    degree 3 or more are listed in ``bare_cycles`` as vertex cycles.
    """

    n: int
    vertices: np.ndarray
    edges: np.ndarray
    lengths: np.ndarray
    paths: list
    path_edge_ids: list
    bare_cycles: list

    @property
    def parities(self) -> np.ndarray:
        return self.lengths % 2

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.size)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def expand(self) -> np.ndarray:
        """Re-subdivide every kernel edge and add the bare cycles; returns sorted-row edges."""
        rows = []
        for path in self.paths:
            rows.append(np.stack([path[:-1], path[1:]], axis=1))
        for cyc in self.bare_cycles:
            rows.append(np.stack([cyc, np.roll(cyc, -1)], axis=1))
        if not rows:
            return np.empty((0, 2), dtype=np.int64)
        e = np.concatenate(rows)
        e.sort(axis=1)
        return e

    def odd_bare_cycles(self) -> int:
        return sum(len(c) % 2 for c in self.bare_cycles)


def kernel(G: Graph) -> KernelGraph:
    """Contract the 2-core of ``G`` into its kernel multigraph."""
    vmask, emask = two_core_mask(G)
    ptr, nbr, eid = incidence_csr(G.n, G.edges)
    deg = np.bincount(G.edges[emask].ravel(), minlength=G.n).astype(np.int64)
    ku, kv, klen, pverts, vptr, pedges, cverts, cptr = _contract(
        G.n, G.m, ptr, nbr, eid, emask, deg)
    eptr = np.concatenate([[0], np.cumsum(klen)])
    paths = [pverts[vptr[t]:vptr[t + 1]] for t in range(klen.size)]
    path_edges = [pedges[eptr[t]:eptr[t + 1]] for t in range(klen.size)]
    cycles = [cverts[cptr[t]:cptr[t + 1]] for t in range(cptr.size - 1)]
    return KernelGraph(
        n=G.n,
        vertices=np.flatnonzero(deg >= 3),
        edges=np.stack([ku, kv], axis=1) if klen.size else np.empty((0, 2), dtype=np.int64),
        lengths=klen.copy(),
        paths=paths,
        path_edge_ids=path_edges,
        bare_cycles=cycles,
    )


# ----------------------------------------------------------------------------
# components


@dataclass(frozen=True, eq=False)
class ComponentReport:
    labels: np.ndarray
    sizes: np.ndarray
    edge_counts: np.ndarray
    classes: np.ndarray
    cycle_lengths: np.ndarray  # per component; 0 unless unicyclic
    giant: int
    odd_unicyclic: int

    @property
    def count(self) -> int:
        return int(self.sizes.size)

    @property
    def complex_count(self) -> int:
        return int(np.count_nonzero(self.classes == COMPLEX))

    @property
    def unicyclic_count(self) -> int:
        return int(np.count_nonzero(self.classes == UNICYCLIC))

    def cycles(self, min_length: int = 1) -> int:
        """Unicyclic components whose cycle has at least ``min_length`` edges."""
        return int(np.count_nonzero((self.classes == UNICYCLIC) & (self.cycle_lengths >= min_length)))


def component_labels(G: Graph) -> np.ndarray:
    e = G.edges
    adj = coo_matrix((np.ones(G.m), (e[:, 0], e[:, 1])), shape=(G.n, G.n))
    return connected_components(adj, directed=False)[1]


def classify_components(G: Graph) -> ComponentReport:
    """Per-component size, edge count and class (tree / unicyclic / complex)."""
    if G.n == 0:
        z = np.zeros(0, dtype=np.int64)
        return ComponentReport(z, z, z, np.zeros(0, dtype="<U9"), z, 0, 0)
    labels = component_labels(G)
    k = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=k)
    edges = np.bincount(labels[G.edges[:, 0]], minlength=k) if G.m else np.zeros(k, dtype=np.int64)
    excess = edges - sizes
    classes = np.where(excess < 0, TREE, np.where(excess == 0, UNICYCLIC, COMPLEX))
    # in a unicyclic component the 2-core is exactly the cycle
    vcore, _ = two_core_mask(G)
    core_size = np.bincount(labels[vcore], minlength=k)
    cycle_len = np.where(classes == UNICYCLIC, core_size, 0)
    odd = int(np.count_nonzero((classes == UNICYCLIC) & (cycle_len % 2 == 1)))
    return ComponentReport(labels, sizes, edges, classes, cycle_len, int(sizes.max()), odd)


# ----------------------------------------------------------------------------
# cut/uncut constraints on the kernel


@njit(cache=True)
def _kernel_gray(nv, ptr, nbr, want):
    # violated constraints with every vertex on side 0: the "cut" edges
    side = np.zeros(nv, dtype=np.int8)
    viol = 0
    for v in range(nv):
        for p in range(ptr[v], ptr[v + 1]):
            if want[p] == 1 and nbr[p] > v:
                viol += 1
    best = viol
    best_key = 0
    key = 0
    for i in range(1, 1 << (nv - 1)):
        b = 0
        while not (i >> b) & 1:
            b += 1
        v = b + 1
        key ^= 1 << b
        delta = 0
        for p in range(ptr[v], ptr[v + 1]):
            w = nbr[p]
            now_ok = (side[v] != side[w]) == (want[p] == 1)
            delta += 1 if now_ok else -1
        side[v] ^= 1
        viol += delta
        if viol < best:
            best = viol
            best_key = key
    return best, best_key


@njit(cache=True)
def _kernel_local_search(nv, ptr, nbr, want, starts):
    best = 1 << 62
    best_side = np.zeros(nv, dtype=np.int8)
    for r in range(starts.shape[0]):
        side = starts[r].copy()
        improved = True
        while improved:
            improved = False
            for v in range(nv):
                gain = 0
                for p in range(ptr[v], ptr[v + 1]):
                    ok = (side[v] != side[nbr[p]]) == (want[p] == 1)
                    gain += -1 if ok else 1
                if gain > 0:
                    side[v] ^= 1
                    improved = True
        viol = 0
        for v in range(nv):
            for p in range(ptr[v], ptr[v + 1]):
                w = nbr[p]
                if w > v and ((side[v] != side[w]) != (want[p] == 1)):
                    viol += 1
        if viol < best:
            best = viol
            best_side[:] = side
    return best, best_side


class KernelCutResult(tuple):
    __slots__ = ()
    _fields = ("violated", "best_found", "exact", "sides")

    def __new__(cls, violated, best_found, exact, sides):
        return super().__new__(cls, (violated, best_found, exact, sides))

    violated = property(lambda s: s[0])
    best_found = property(lambda s: s[1])
    exact = property(lambda s: s[2])
    sides = property(lambda s: s[3])


def kernel_cut_bound(K: KernelGraph, seed=0, exact_limit: int = 30, restarts: int = 32):
    """Fewest violated cut/uncut constraints over side choices for the kernel vertices.

    Odd kernel edges ask for their endpoints on opposite sides, even ones for the same
    side.  Each kernel component is brute-forced when it has at most ``exact_limit``
    vertices, otherwise improved by single-vertex flips from ``restarts`` seeded random
    starts.  Returns ``(violated, best_found, exact, sides)`` where ``best_found`` counts
    satisfied constraints and ``sides`` maps kernel vertex id to side.
    """
    rng = as_rng(seed)
    loops = K.edges[:, 0] == K.edges[:, 1] if K.num_edges else np.zeros(0, dtype=bool)
    odd = (K.lengths % 2 == 1)
    violated = int(np.count_nonzero(loops & odd))
    sides = {}
    exact = True
    real = K.edges[~loops]
    want_all = odd[~loops].astype(np.int8)
    verts = K.vertices
    if verts.size and real.size:
        remap = np.full(K.n, -1, dtype=np.int64)
        remap[verts] = np.arange(verts.size)
        local = remap[real]
        sub = Graph(int(verts.size), local)
        labels = component_labels(sub)
        elab = labels[local[:, 0]]
        for lab in range(int(labels.max()) + 1):
            cv = np.flatnonzero(labels == lab)
            emask = elab == lab
            if not emask.any():
                continue
            cmap = np.full(verts.size, -1, dtype=np.int64)
            cmap[cv] = np.arange(cv.size)
            ce = cmap[local[emask]]
            want_e = want_all[emask]
            ptr, nbr, eidx = incidence_csr(cv.size, ce)
            want = want_e[eidx]
            if cv.size <= exact_limit:
                v, key = _kernel_gray(cv.size, ptr, nbr, want)
                side = np.array([0] + [(key >> b) & 1 for b in range(cv.size - 1)], dtype=np.int8)
            else:
                exact = False
                starts = rng.integers(0, 2, size=(restarts, cv.size)).astype(np.int8)
                v, side = _kernel_local_search(cv.size, ptr, nbr, want, starts)
            violated += int(v)
            for t, vid in enumerate(verts[cv]):
                sides[int(vid)] = bool(side[t])
    for vid in verts:
        sides.setdefault(int(vid), False)
    return KernelCutResult(violated, K.num_edges - violated, exact, sides)


# ----------------------------------------------------------------------------
# bicycles


@dataclass(frozen=True)
class Bicycle:
    """A clause walk ``u -> w_1 -> ... -> w_k -> v`` in the implication digraph.

    ``path`` holds the literal codes ``w_1..w_k`` (distinct variables), and ``u`` / ``v``
    share their variable with ``path[i]`` / ``path[j]`` (0-based).  ``clause_indices``
    lists the ``k + 1`` clause positions in walk order.
    """

    clause_indices: tuple
    path: tuple
    u: int
    v: int
    i: int
    j: int

    @property
    def length(self) -> int:
        return len(self.path)

    @property
    def key(self) -> tuple:
        return min(self.clause_indices, self.clause_indices[::-1])


def variable_graph(F: Formula):
    """Variable multigraph of the 2-clauses of ``F`` and the clause id of each edge."""
    sizes = F.sizes
    two = np.flatnonzero(sizes == 2)
    e = F.clauses[two, :2] >> 1
    return Graph(F.n, e), two


def _bicycle_candidates(F: Formula) -> np.ndarray:
    """Clauses that can lie on a bicycle: 2-core edges within complex components."""
    G, two = variable_graph(F)
    if G.m == 0:
        return np.zeros(0, dtype=np.int64)
    _, emask = two_core_mask(G)
    # a core component is complex exactly when it has a vertex of degree >= 3
    if not np.any(np.bincount(G.edges[emask].ravel(), minlength=G.n) >= 3):
        return np.zeros(0, dtype=np.int64)
    core = G.edge_subgraph(emask)
    rep = classify_components(core)
    cx = rep.classes[rep.labels[core.edges[:, 0]]] == COMPLEX
    return two[np.flatnonzero(emask)[cx]]


def enumerate_bicycles(F: Formula, k_max: int, budget: int = DEFAULT_BICYCLE_BUDGET,
                       limit: int | None = None) -> list:
    """All bicycles of length ``<= k_max``, one per clause sequence up to reversal.

    The walk search is restricted to clauses in complex components of the 2-core of
    the variable graph, outside of which no bicycle can live.  ``budget`` caps the number
    of search nodes (ResourceLimitError beyond it); ``limit`` stops after that many finds.
    """
    if F.m and np.any(F.sizes > 2):
        raise ValueError("bicycles are defined for 2-CNF formulas")
    cand = _bicycle_candidates(F)
    if cand.size == 0 or k_max < 2:
        return []
    lits = F.clauses
    # out-edges of each literal: clause {~a, b} gives a -> b
    out = {}
    for c in cand.tolist():
        a, b = int(lits[c, 0]), int(lits[c, 1])
        out.setdefault(a ^ 1, []).append((b, c))
        out.setdefault(b ^ 1, []).append((a, c))
    found = {}
    nodes = 0
    var_pos = {}
    path, clauses = [], []

    def close(u, upos):
        # try to finish the walk at the current end w_k
        k = len(path)
        if k < 2 or upos is None or upos == 0 or upos >= k:
            return
        for v, c in out.get(path[-1], ()):
            j = var_pos.get(v >> 1)
            if j is None or j >= k - 1 or c in clauses:
                continue
            seq = tuple(clauses) + (c,)
            key = min(seq, seq[::-1])
            if key not in found:
                found[key] = Bicycle(seq, tuple(path), u, v, upos, j)

    def extend(u):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError(f"bicycle search exceeded {budget} nodes")
        close(u, var_pos.get(u >> 1))
        if limit is not None and len(found) >= limit:
            return
        if len(path) >= k_max:
            return
        for w, c in out.get(path[-1], ()):
            if (w >> 1) in var_pos or c in clauses:
                continue
            var_pos[w >> 1] = len(path)
            path.append(w)
            clauses.append(c)
            extend(u)
            path.pop()
            clauses.pop()
            del var_pos[w >> 1]
            if limit is not None and len(found) >= limit:
                return

    for u in sorted(out):
        for w1, c0 in out[u]:
            var_pos[w1 >> 1] = 0
            path.append(w1)
            clauses.append(c0)
            extend(u)
            path.pop()
            clauses.pop()
            del var_pos[w1 >> 1]
            if limit is not None and len(found) >= limit:
                return list(found.values())
    return list(found.values())


def is_bad_bicycle(B: Bicycle, F: Formula | None = None) -> bool:
    """True when ``u`` and ``v`` are the complements of ``w_i`` and ``w_j`` with ``i <= j``.

    Such a walk alone forces a contradiction: ``u`` implies its own negation, and
    ``~u = w_i`` implies both ``w_j`` and ``~w_j``.
    """
    if F is not None:
        for c in B.clause_indices:
            if not 0 <= c < F.m:
                raise ValueError("bicycle does not belong to this formula")
    return B.u == B.path[B.i] ^ 1 and B.v == B.path[B.j] ^ 1 and B.i <= B.j


def bicycle_subformula(B: Bicycle, F: Formula) -> Formula:
    return F.subformula(np.array(B.clause_indices))
