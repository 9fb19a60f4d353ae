"""Monte Carlo experiment runner: sweeps, summary statistics, CSV/JSON output."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import exact, heuristics
from .core import count_satisfied
from .errors import ConfigError, ResourceLimitError
from .generators import MASK64, Seed, gen_gnm, gen_ksat

KINDS = ("transition-sweep", "scaling-window", "trajectory", "algo-compare",
         "concentration", "monotonicity", "cut-sweep")
SAT_ALGORITHMS = ("exact", "brute", "2sat", "potential", "unitclause", "online", "ksat-greedy")
CUT_ALGORITHMS = ("exact", "brute", "cutgreedy", "cutunit")
EXACT_ALGORITHMS = ("exact", "brute")
CSV_COLUMNS = ("trial_index", "n", "c", "algorithm", "score", "total", "dissatisfied",
               "exact_flag", "seed", "runtime_ms")


def salt(*parts) -> int:
    """Stable 64-bit hash of the reprs of ``parts``."""
    h = hashlib.blake2b(repr(parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def fmt_float(x: float) -> str:
    return f"{x:.9g}"


@dataclass
class ExperimentConfig:
    kind: str
    problem: str = "maxsat-2"
    n_values: list = field(default_factory=list)
    c_values: list = field(default_factory=list)
    lambda_values: list = field(default_factory=list)
    trials: int = 1
    master_seed: int = 0
    algorithms: list = field(default_factory=lambda: ["exact"])
    output: str | None = None
    m_max: int | None = None
    timing: bool = False

    @property
    def k(self) -> int | None:
        if self.problem.startswith("maxsat-"):
            return int(self.problem.split("-", 1)[1])
        return None

    @property
    def x_values(self) -> list:
        return self.lambda_values if self.kind == "scaling-window" else self.c_values

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(sorted(extra)[0], "unknown configuration key")
        if "kind" not in d:
            raise ConfigError("kind", "missing")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            d = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"not valid JSON: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("<file>", "top level must be an object")
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}")
        if self.problem == "maxcut":
            allowed = CUT_ALGORITHMS
        elif self.problem.startswith("maxsat-") and self.problem[7:].isdigit() and int(self.problem[7:]) >= 1:
            allowed = SAT_ALGORITHMS
        else:
            raise ConfigError("problem", "must be 'maxcut' or 'maxsat-<k>'")
        if self.kind == "cut-sweep" and self.problem != "maxcut":
            raise ConfigError("problem", "cut-sweep needs problem 'maxcut'")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials", "must be an integer >= 1")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed <= MASK64:
            raise ConfigError("master_seed", "must be an unsigned 64-bit integer")
        if not self.n_values or any(not isinstance(n, int) or n < 2 for n in self.n_values):
            raise ConfigError("n_values", "must be a nonempty list of integers >= 2")
        if self.kind == "monotonicity":
            if not isinstance(self.m_max, int) or self.m_max < 1:
                raise ConfigError("m_max", "monotonicity needs an integer m_max >= 1")
            if self.k != 2 and self.k is not None and self.k > max(self.n_values):
                raise ConfigError("problem", "arity exceeds n")
            if max(self.n_values) > 24:
                raise ResourceLimitError("monotonicity probe enumerates 2^n assignments; n <= 24")
            return
        xs = self.x_values
        name = "lambda_values" if self.kind == "scaling-window" else "c_values"
        if not xs or any(not isinstance(x, (int, float)) or not math.isfinite(x) for x in xs):
            raise ConfigError(name, "must be a nonempty list of numbers")
        if self.kind != "scaling-window" and any(x < 0 for x in xs):
            raise ConfigError(name, "densities must be nonnegative")
        if not self.algorithms:
            raise ConfigError("algorithms", "must name at least one algorithm")
        for a in self.algorithms:
            if a not in allowed:
                raise ConfigError("algorithms", f"{a!r} is not available for {self.problem}")
        if self.problem != "maxcut" and self.k > min(self.n_values):
            raise ConfigError("problem", "arity exceeds the smallest n")
        if self.k not in (None, 2) and set(self.algorithms) - {"exact", "brute", "ksat-greedy"}:
            raise ConfigError("algorithms", "only exact, brute and ksat-greedy handle k != 2")
        if set(self.algorithms) & set(EXACT_ALGORITHMS) and max(self.n_values) > exact.BRUTE_LIMIT:
            raise ResourceLimitError(
                f"exact oracle requested with n={max(self.n_values)} over budget {exact.BRUTE_LIMIT}")

    def edge_count(self, n: int, x: float) -> int:
        c = 1 + x * n ** (-1 / 3) if self.kind == "scaling-window" else x
        return max(0, int(round(c * n)))


class TrialRecord(NamedTuple):
    trial_index: int
    n: int
    c: float
    algorithm: str
    score: int
    total: int
    dissatisfied: int
    exact_flag: bool
    seed: int
    runtime_ms: float

    def row(self) -> list:
        return [self.trial_index, self.n, fmt_float(self.c), self.algorithm, self.score,
                self.total, self.dissatisfied, int(self.exact_flag), self.seed,
                fmt_float(self.runtime_ms)]


class SummaryStats(NamedTuple):
    n: int
    c: float
    algorithm: str
    trials: int
    mean: float
    sd: float
    ci_low: float
    ci_high: float
    mean_score: float
    mean_total: float
    zero_fraction: float  # share of trials with nothing dissatisfied


def instance_seed(cfg: ExperimentConfig, n: int, x: float, trial: int) -> Seed:
    return Seed(salt(cfg.master_seed, cfg.problem, n, float(x)), trial)


def algorithm_seed(cfg: ExperimentConfig, n: int, x: float, alg: str, trial: int) -> Seed:
    return Seed(salt(cfg.master_seed, cfg.problem, n, float(x), alg), trial)


def run_algorithm(alg: str, inst, seed: Seed):
    """``(score, dissatisfied, exact_flag)`` of one algorithm on one instance."""
    m = inst.m
    if alg == "exact":
        if hasattr(inst, "clauses"):
            if inst.width <= 2 and exact.two_sat_decide(inst):
                return m, 0, True
            best, _ = exact.exact_max_sat(inst)
        else:
            best, _ = exact.exact_max_cut(inst)
        return best, m - best, True
    if alg == "brute":
        best = exact.brute_max_sat(inst)[0] if hasattr(inst, "clauses") else exact.brute_max_cut(inst)[0]
        return best, m - best, True
    if alg == "2sat":
        if exact.two_sat_decide(inst):
            return m, 0, False
        keep, _ = heuristics.scc_repair(inst)
        kept = int(keep.sum())
        return kept, m - kept, False
    if alg == "potential":
        s = heuristics.potential_greedy(inst).satisfied
    elif alg == "unitclause":
        A = heuristics.unit_clause_resolve(inst, seed).assignment
        s = count_satisfied(inst, A)
    elif alg == "online":
        s = heuristics.online_lazy(inst).accepted
    elif alg == "ksat-greedy":
        s = heuristics.ksat_sequential_greedy(inst, 1, seed)
    elif alg == "cutgreedy":
        s = heuristics.majority_greedy_cut(inst, seed=seed).cut
    elif alg == "cutunit":
        s = m - heuristics.unit_clause_cut(inst, seed).uncut
    else:
        raise ValueError(f"unknown algorithm {alg!r}")
    return int(s), m - int(s), False


def _make_instance(cfg: ExperimentConfig, n: int, x: float, trial: int):
    m = cfg.edge_count(n, x)
    seed = instance_seed(cfg, n, x, trial)
    if cfg.problem == "maxcut":
        return gen_gnm(n, m, seed), seed
    return gen_ksat(n, m, cfg.k, seed), seed


def _run_cell_trials(cfg: ExperimentConfig, n: int, x: float, trials) -> list:
    out = []
    for t in trials:
        inst, iseed = _make_instance(cfg, n, x, t)
        for alg in cfg.algorithms:
            t0 = time.perf_counter()
            score, dis, ex = run_algorithm(alg, inst, algorithm_seed(cfg, n, x, alg, t))
            ms = (time.perf_counter() - t0) * 1000 if cfg.timing else 0.0
            out.append(TrialRecord(t, n, float(x), alg, int(score), inst.m, int(dis),
                                   bool(ex), iseed.master, ms))
    return out


def _worker(args):
    cfg_dict, n, x, trials = args
    return _run_cell_trials(ExperimentConfig(**cfg_dict), n, x, trials)


def thread_count() -> int:
    raw = os.environ.get("PHASELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError("PHASELAB_THREADS", f"not an integer: {raw!r}") from None


def sort_key(r: TrialRecord):
    return (r.n, r.c, r.algorithm, r.trial_index)


def summarize(records) -> list:
    groups = {}
    for r in records:
        groups.setdefault((r.n, r.c, r.algorithm), []).append(r)
    out = []
    for (n, c, alg), rs in sorted(groups.items()):
        d = np.array([r.dissatisfied for r in rs], dtype=float)
        k = d.size
        mean = float(d.mean())
        sd = float(d.std(ddof=1)) if k > 1 else 0.0
        half = 1.959963984540054 * sd / math.sqrt(k)
        out.append(SummaryStats(n, c, alg, k, mean, sd, mean - half, mean + half,
                                float(np.mean([r.score for r in rs])),
                                float(np.mean([r.total for r in rs])),
                                float(np.mean(d == 0))))
    return out


class ExperimentResult(NamedTuple):
    records: list
    summary: list
    extra: dict


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Run every (n, x, algorithm) cell for ``cfg.trials`` trials.

    Records come back stably sorted by (n, x, algorithm, trial index); the result is
    a pure function of ``cfg`` whatever the degree of parallelism.
    """
    cfg.validate()
    if cfg.kind == "monotonicity":
        return _run_monotonicity(cfg)
    threads = thread_count() if threads is None else threads
    cells = [(n, float(x)) for n in cfg.n_values for x in cfg.x_values]
    if threads <= 1:
        records = [r for n, x in cells for r in _run_cell_trials(cfg, n, x, range(cfg.trials))]
    else:
        chunk = max(1, cfg.trials // (4 * threads))
        jobs = [(cfg.to_dict(), n, x, range(s, min(cfg.trials, s + chunk)))
                for n, x in cells for s in range(0, cfg.trials, chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = [r for part in pool.map(_worker, jobs) for r in part]
    records.sort(key=sort_key)
    result = ExperimentResult(records, summarize(records), {})
    if cfg.output:
        write_outputs(cfg, result)
    return result


def _run_monotonicity(cfg: ExperimentConfig) -> ExperimentResult:
    tables = {}
    for n in cfg.n_values:
        table = monotonicity_probe(n, cfg.m_max, cfg.trials, cfg.master_seed, k=cfg.k or 2)
        tables[str(n)] = [t._asdict() for t in table]
    result = ExperimentResult([], [], {"monotonicity": tables})
    if cfg.output:
        write_outputs(cfg, result)
    return result


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def read_records(path) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [TrialRecord(int(r["trial_index"]), int(r["n"]), float(r["c"]), r["algorithm"],
                        int(r["score"]), int(r["total"]), int(r["dissatisfied"]),
                        bool(int(r["exact_flag"])), int(r["seed"]), float(r["runtime_ms"]))
            for r in rows]


def content_hash(data: bytes) -> str:
    """Git blob hash of ``data``."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def summary_json(cfg: ExperimentConfig, result: ExperimentResult) -> str:
    config_bytes = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    doc = {
        "config": cfg.to_dict(),
        "config_hash": content_hash(config_bytes),
        "summary": [{k: (fmt_float(v) if isinstance(v, float) else v) for k, v in s._asdict().items()}
                    for s in result.summary],
    }
    doc.update(result.extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_outputs(cfg: ExperimentConfig, result: ExperimentResult) -> None:
    out = Path(cfg.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    if result.records:
        out.write_text(records_csv(result.records))
        out.with_suffix(".json").write_text(summary_json(cfg, result))
    else:
        out.write_text(summary_json(cfg, result))


# ----------------------------------------------------------------------------
# dedicated probes


class MonotonicityRow(NamedTuple):
    m: int
    mean_max: float
    ratio: float
    ratio_se: float


def monotonicity_probe(n: int, m_max: int, trials: int, seed: int, k: int = 2) -> list:
    """Exact mean of max F over ``m`` for ``m = 1..m_max`` and the ratios ``f(n, m) / m``.

    Each trial draws one formula of ``m_max`` clauses and scores all of its prefixes,
    so the ``m`` values are coupled; ``ratio_se`` is the standard error of the ratio.
    """
    if n > 24:
        raise ResourceLimitError("monotonicity probe needs n <= 24")
    if m_max < 1 or trials < 1:
        raise ValueError("m_max and trials must be positive")
    best = np.empty((trials, m_max + 1), dtype=np.int64)
    base = salt(seed, "monotonicity", n, k)
    for t in range(trials):
        F = gen_ksat(n, m_max, k, Seed(base, t))
        best[t] = exact.prefix_max_sat(F)
    ms = np.arange(1, m_max + 1)
    ratio = best[:, 1:] / ms
    mean = ratio.mean(axis=0)
    se = ratio.std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros(m_max)
    return [MonotonicityRow(int(m), float(best[:, m].mean()), float(mean[m - 1]), float(se[m - 1]))
            for m in ms]


def monotonicity_increments(n: int, m_max: int, trials: int, seed: int, k: int = 2):
    """Per-m paired differences of the ratio ``f/m`` with their standard errors."""
    base = salt(seed, "monotonicity", n, k)
    best = np.array([exact.prefix_max_sat(gen_ksat(n, m_max, k, Seed(base, t)))
                     for t in range(trials)])
    ms = np.arange(1, m_max + 1)
    ratio = best[:, 1:] / ms
    diff = ratio[:, 1:] - ratio[:, :-1]
    return diff.mean(axis=0), diff.std(axis=0, ddof=1) / math.sqrt(trials)


class SatPoint(NamedTuple):
    lam: float
    c: float
    m: int
    p_hat: float
    se: float


def satisfiability_curve(n: int, lambda_values, trials: int, seed: int) -> list:
    """Monte Carlo frequency of satisfiable random 2-SAT at ``c = 1 + lam n^(-1/3)``."""
    out = []
    for lam in lambda_values:
        c = 1 + lam * n ** (-1 / 3)
        m = int(round(c * n))
        base = salt(seed, "satcurve", n, float(lam))
        hits = sum(exact.two_sat_decide(gen_ksat(n, m, 2, Seed(base, t))) for t in range(trials))
        p = hits / trials
        out.append(SatPoint(float(lam), c, m, p, math.sqrt(p * (1 - p) / trials)))
    return out


def empirical_tails(values, lambdas) -> list:
    """Fraction of ``values`` deviating from their mean by more than each ``lambda``."""
    v = np.asarray(values, dtype=float)
    dev = np.abs(v - v.mean())
    return [float(np.mean(dev > lam)) for lam in lambdas]
