"""Seeded random instance generators.

Every generator takes a ``seed`` that may be a :class:`Seed`, a plain integer
(taken as the master seed with stream 0) or an existing ``numpy.random.Generator``.
Streams are derived with ``SeedSequence(master, spawn_key=(stream,))`` so a trial's
instance depends only on ``(master, stream)``, whatever order trials are run in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConstraintFn, CspFormula, Formula, Graph

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    master: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.master <= MASK64 and 0 <= self.stream <= MASK64):
            raise ValueError("seed components must be unsigned 64-bit integers")

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, salt: int) -> "Seed":
        """A seed for a derived sub-computation that cannot collide with trial streams."""
        return Seed((self.master ^ (salt * 0x9E3779B97F4A7C15)) & MASK64, self.stream)


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, Seed):
        return seed.rng()
    if seed is None:
        raise ValueError("a seed is required (use Seed(master, stream) or an int)")
    return Seed(int(seed) & MASK64).rng()


def distinct_tuples(rng: np.random.Generator, n: int, m: int, k: int) -> np.ndarray:
    """``m`` uniform ordered k-tuples of distinct values in ``[0, n)``."""
    out = np.empty((m, k), dtype=np.int64)
    for j in range(k):
        r = rng.integers(0, n - j, size=m, dtype=np.int64)
        if j:
            # shift r past the earlier picks, taken in increasing order
            prev = np.sort(out[:, :j], axis=1)
            for t in range(j):
                r += r >= prev[:, t]
        out[:, j] = r
    return out


def _signed_tuples(n, m, k, seed):
    if k < 1:
        raise ValueError("arity k must be at least 1")
    if k > n:
        raise ValueError(f"arity k={k} exceeds n={n}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    rng = as_rng(seed)
    var = distinct_tuples(rng, n, m, k)
    neg = rng.integers(0, 2, size=(m, k), dtype=np.int64)
    return 2 * var + neg


def gen_ksat(n: int, m: int, k: int, seed) -> Formula:
    """Random k-CNF: ``m`` independent clauses on distinct variables with fair signs."""
    return Formula._trusted(n, _signed_tuples(n, m, k, seed))


def gen_csp(n: int, m: int, g: ConstraintFn, seed) -> CspFormula:
    """Random CSP instance; each clause is a signed ordered variable tuple fed to ``g``."""
    return CspFormula(Formula._trusted(n, _signed_tuples(n, m, g.arity, seed)), g)


def gen_gnm(n: int, m: int, seed) -> Graph:
    """``m`` edges drawn uniformly with replacement from the unordered pairs of ``[0, n)``."""
    if n < 2:
        raise ValueError("G(n, m) needs n >= 2")
    if m < 0:
        raise ValueError("m must be nonnegative")
    e = distinct_tuples(as_rng(seed), n, m, 2)
    e.sort(axis=1)
    return Graph._trusted(n, e)


def _decode_pairs(idx: np.ndarray, n: int) -> np.ndarray:
    # row-major enumeration of pairs u < v; row u starts at u*n - u*(u+1)/2
    idx = idx.astype(np.int64)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8.0 * idx)) / 2).astype(np.int64)
    start = u * n - u * (u + 1) // 2
    # correct floating point drift at row boundaries
    low = idx < start
    u[low] -= 1
    start = u * n - u * (u + 1) // 2
    high = idx >= start + (n - 1 - u)
    u[high] += 1
    start = u * n - u * (u + 1) // 2
    v = idx - start + u + 1
    return np.stack([u, v], axis=1)


def gen_gnp(n: int, p: float, seed) -> Graph:
    """Each of the ``C(n, 2)`` pairs independently present with probability ``p``."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p={p} is not a probability")
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = as_rng(seed)
    total = n * (n - 1) // 2
    count = int(rng.binomial(total, p)) if total else 0
    if count == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    if count == total:
        idx = np.arange(total, dtype=np.int64)
    else:
        idx = np.sort(rng.choice(total, size=count, replace=False))
    return Graph._trusted(n, _decode_pairs(idx, n))
