"""Closed-form predictions and the numeric solvers behind them.

Density conventions: for formulas ``c = m / n`` with the 2-SAT threshold at 1; for
graphs ``m = c n`` edges with the MAX-CUT threshold at ``c = 1/2`` (edge probability
``2c / n`` in the binomial model).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .core import ConstraintFn
from .errors import DegenerateInputError, DomainError

XTOL = 1e-12

# Limiting values of the kernel parity argument: parity probability p0 -> 1/2 and the
# violated fraction beta0 -> the upper root of H(x) = 1/3 (natural-log entropy).
P0_LIMIT = 0.5

# Absolute constants of cited results that are not known numerically.  They are kept
# as named placeholders so experiments can refer to them; no formula uses them.
ALPHA0 = None
EPS0 = None
LAMBDA0 = None


def _bisect(f, lo, hi):
    return bisect(f, lo, hi, xtol=XTOL, rtol=4 * np.finfo(float).eps, maxiter=500)


def _log_ratio(rho):
    # ln(rho) / (rho - 1), accurate near rho = 1
    d = rho - 1.0
    if d == 0:
        return 1.0
    return (math.log(rho) if rho < 0.5 else math.log1p(d)) / d


def rho_star(c: float) -> float:
    """The root in (0, 1) of ``ln(rho) / (rho - 1) = c``; defined for ``c > 1``."""
    if not c > 1.0:
        raise DomainError(f"rho_star needs c > 1, got {c}")
    if not math.isfinite(c):
        raise DomainError("c must be finite")
    lo = 1e-300
    if _log_ratio(lo) < c:
        return 0.0
    return _bisect(lambda r: _log_ratio(r) - c, lo, 1.0)


def rejected_density(c: float) -> float:
    """Dissatisfied clauses per variable left by unit-clause resolution at density ``c > 1``:
    ``(rho* - 1)/2 - (rho* + 1) ln(rho*) / 4``."""
    r = rho_star(c)
    return 0.5 * (r - 1.0) - 0.25 * (r + 1.0) * math.log(r)


@dataclass(frozen=True)
class TrajectorySolution:
    c: float
    rho_star: float
    rejected_density: float

    @classmethod
    def solve(cls, c: float) -> "TrajectorySolution":
        return cls(c, rho_star(c), rejected_density(c))


def ode_trajectory(c: float, rho):
    """Unit and 2-clause densities ``(rho1, rho2)`` along the resolution trajectory:
    ``rho2 = c rho^2`` and ``rho1 = c rho - c rho^2 + rho ln(rho)``."""
    r = np.asarray(rho, dtype=float)
    if np.any(~(r > 0)) or np.any(r > 1):
        raise DomainError("rho must lie in (0, 1]")
    rho1 = c * r - c * r * r + r * np.log(r)
    rho2 = c * r * r
    if r.ndim == 0:
        return float(rho1), float(rho2)
    return rho1, rho2


def online_fraction(c: float) -> float:
    """Clauses accepted per variable by Online-Lazy: ``3c/4 + (1-e^-c)/4 + (1-e^-c)^2/8``."""
    if c < 0:
        raise DomainError("c must be nonnegative")
    a = -math.expm1(-c)
    return 0.75 * c + a / 4 + a * a / 8


def giant_free_fraction(c: float) -> float:
    """Fraction ``r`` of the ``cn`` edges of G(n, cn) that a giant-free subgraph can keep.

    Solves ``t e^-t = 2c e^-2c`` for ``t < 1`` and then ``t^2/(4c) + 1 = t/(2c) + c r``;
    returns 1 at or below ``c = 1/2``.
    """
    if c <= 0.5:
        return 1.0
    y = 2 * c * math.exp(-2 * c)
    if y <= 0.0:
        t = 0.0
    else:
        t = _bisect(lambda s: s * math.exp(-s) - y, 0.0, 1.0)
    return (t * t / (4 * c) + 1 - t / (2 * c)) / c


def giant_free_threshold(r: float, c_max: float = 1e6) -> float:
    """The density at which :func:`giant_free_fraction` equals ``r`` (for ``0 < r < 1``)."""
    if not 0 < r < 1:
        raise DomainError("r must lie in (0, 1)")
    return _bisect(lambda c: giant_free_fraction(c) - r, 0.5, c_max)


class Bounds(NamedTuple):
    lower: float
    upper: float
    lower_coef: float
    upper_coef: float


def highdensity_bounds_ksat(k: int, c: float) -> Bounds:
    """Lower/upper bounds on max F per variable for random k-SAT at large density ``c``.

    Both are ``(1 - 2^-k) c`` plus a ``sqrt(c)`` term.  The upper coefficient is
    ``sqrt((2^k - 1) ln 2 / 2^(2k-1))``.  The lower coefficient is
    ``(2/(k+1)) sqrt(k / (pi 2^k))`` for ``k >= 3``; for ``k = 2`` the sharper
    potential-greedy constant ``(sqrt(8) - 1) / (3 sqrt(pi))`` is used.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    if c < 0:
        raise DomainError("c must be nonnegative")
    base = (1 - 2.0 ** -k) * c
    if k == 2:
        lo = (math.sqrt(8) - 1) / (3 * math.sqrt(math.pi))
    else:
        lo = (2 / (k + 1)) * math.sqrt(k / (math.pi * 2 ** k))
    hi = math.sqrt((2 ** k - 1) * math.log(2) / 2 ** (2 * k - 1))
    s = math.sqrt(c)
    return Bounds(base + lo * s, base + hi * s, lo, hi)


def highdensity_bounds_cut(c: float) -> Bounds:
    """Max cut of G(n, cn) per vertex at large ``c``: ``c/2 + sqrt(8/(9 pi)) sqrt(c)`` and
    ``c/2 + sqrt(ln2 / 2) sqrt(c)``."""
    if c < 0:
        raise DomainError("c must be nonnegative")
    lo = math.sqrt(8 / (9 * math.pi))
    hi = math.sqrt(math.log(2) / 2)
    s = math.sqrt(c)
    return Bounds(c / 2 + lo * s, c / 2 + hi * s, lo, hi)


def csp_bounds(g: ConstraintFn, c: float) -> Bounds:
    """Bounds on the best satisfied count per variable of a random CSP with constraint ``g``.

    With ``p`` the mean of ``g``, ``P = min(p, 1-p)`` and ``Q = 1 - P``:
    lower ``pc + sqrt(P Q^2 c / k)`` and upper ``pc + sqrt(2 P Q ln2 c)``.
    """
    if g.is_constant:
        raise DegenerateInputError("constant constraint: P = 0")
    p = g.mean
    P = min(p, 1 - p)
    Q = 1 - P
    lo = math.sqrt(P * Q * Q / g.arity)
    hi = math.sqrt(2 * P * Q * math.log(2))
    s = math.sqrt(c)
    return Bounds(p * c + lo * s, p * c + hi * s, lo, hi)


def azuma_tail(lam: float, c: float, n: int) -> float:
    """``2 exp(-2 lam^2 / (c n))``, a bound on ``P(|max F - E max F| > lam)``."""
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    return 2.0 * math.exp(-2.0 * lam * lam / (c * n))


def expected_bicycles(c: float, n: int, partial: bool = False) -> float:
    """Bicycle-count bound ``sum_k k^2 c^(k+1) / (2n)``.

    The default sums to infinity in closed form, ``c * c(1+c)/(1-c)^3 / (2n)``;
    ``partial=True`` adds the terms ``k = 1..n`` directly.
    """
    if not 0 < c < 1:
        raise DomainError("expected_bicycles needs 0 < c < 1")
    if partial:
        k = np.arange(1, n + 1, dtype=float)
        return float(np.sum(k * k * np.exp((k + 1) * math.log(c))) / (2 * n))
    return c * c * (1 + c) / (1 - c) ** 3 / (2 * n)


def expected_enumerated_bicycles(n: int, m: int, k_max: int) -> float:
    """Exact expected number of bicycles reported by ``enumerate_bicycles(F, k_max)``
    for ``F`` drawn with ``m`` random 2-clauses on ``n`` variables.

    A length-k walk is fixed by ordered distinct path variables with signs
    (``2^k (n)_k`` ways) and the two end literals (``2(k-1)`` ways each); its ``k+1``
    clauses occupy an ordered set of distinct positions (``(m)_(k+1)`` ways), each
    position matching with probability ``1/(2n(n-1))``.  Walks pair up with their
    reversals, hence the factor 1/2.
    """
    if n < 2:
        return 0.0
    T = 2.0 * n * (n - 1)
    total = 0.0
    for k in range(2, min(k_max, n) + 1):
        if k + 1 > m:
            break
        log_walks = k * math.log(2) + math.lgamma(n + 1) - math.lgamma(n - k + 1)
        log_pos = math.lgamma(m + 1) - math.lgamma(m - k)
        total += (2 * (k - 1)) ** 2 * math.exp(log_walks + log_pos - (k + 1) * math.log(T))
    return 0.5 * total


def expected_cycles_subcritical(c: float) -> float:
    """Expected number of cycles (length >= 3) in G(n, cn) as n grows, for ``c < 1/2``:
    ``sum_{k>=3} (2c)^k / (2k) = -ln(1-2c)/2 - c - c^2``."""
    if not 0 <= c < 0.5:
        raise DomainError("expected_cycles_subcritical needs 0 <= c < 1/2")
    return -0.5 * math.log1p(-2 * c) - c - c * c


def chernoff_upper(mu: float, delta: float) -> float:
    """``exp(-delta^2 / (2 mu + 2 delta / 3))``, a bound on ``P(X >= mu + delta)``."""
    if mu < 0 or delta < 0:
        raise DomainError("mu and delta must be nonnegative")
    if delta == 0:
        return 1.0
    return math.exp(-delta * delta / (2 * mu + 2 * delta / 3))


def entropy(x: float) -> float:
    """Natural-log binary entropy ``-x ln x - (1-x) ln(1-x)``."""
    if not 0 <= x <= 1:
        raise DomainError("entropy is defined on [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log1p(-x)


def entropy_inverse(y: float, upper: bool = False) -> float:
    """The root of ``entropy(x) = y`` in ``[0, 1/2]`` (or ``[1/2, 1]`` with ``upper``)."""
    if not 0 <= y <= math.log(2):
        raise DomainError("y must lie in [0, ln 2]")
    if upper:
        return _bisect(lambda x: entropy(x) - y, 0.5, 1.0)
    return _bisect(lambda x: entropy(x) - y, 0.0, 0.5)


BETA0_LIMIT = entropy_inverse(1 / 3, upper=True)
