"""Command line interface: ``phaselab {gen,solve,heuristic,analyze,predict,run,report}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import analysis, exact, harness, heuristics, io, structures
from .core import ConstraintFn, Formula, Graph, count_satisfied
from .errors import ConfigError, PhaselabError, ResourceLimitError
from .generators import Seed, gen_csp, gen_gnm, gen_gnp, gen_ksat

EXIT_OK, EXIT_INVALID, EXIT_LIMIT = 0, 2, 3


def _seed(args) -> Seed:
    return Seed(args.seed, args.stream)


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _load_formula(args) -> Formula:
    if getattr(args, "input", None):
        return io.read_dimacs(args.input)
    if args.n is None or args.c is None:
        raise ValueError("give --in FILE or both --n and --c")
    return gen_ksat(args.n, int(round(args.c * args.n)), getattr(args, "k", 2) or 2, _seed(args))


def _load_graph(args) -> Graph:
    if getattr(args, "input", None):
        return io.read_edgelist(args.input)
    if args.n is None or args.c is None:
        raise ValueError("give --in FILE or both --n and --c")
    return gen_gnm(args.n, int(round(args.c * args.n)), _seed(args))


def cmd_gen(args):
    if args.what == "graph":
        if args.p is not None:
            G = gen_gnp(args.n, args.p, _seed(args))
        else:
            G = gen_gnm(args.n, args.m, _seed(args))
        _emit(io.format_edgelist(G), args.out)
    elif args.what == "ksat":
        F = gen_ksat(args.n, args.m, args.k, _seed(args))
        _emit(io.format_dimacs(F, f"random {args.k}-SAT seed={args.seed}:{args.stream}"), args.out)
    else:
        g = ConstraintFn.from_bits(args.g) if args.g else ConstraintFn.XOR(args.k)
        P = gen_csp(args.n, args.m, g, _seed(args))
        _emit(io.format_dimacs(P.formula, f"constraint {g.bits()}"), args.out)
    return EXIT_OK


def cmd_solve(args):
    if args.what == "maxcut":
        G = io.read_edgelist(args.input)
        best, P = exact.brute_max_cut(G)
        print(f"best {best} of {G.m}")
        if args.witness:
            print("sides " + "".join("1" if b else "0" for b in P))
        return EXIT_OK
    F = io.read_dimacs(args.input)
    if args.what == "2sat":
        print("SAT" if exact.two_sat_decide(F) else "UNSAT")
        return EXIT_OK
    best, A = exact.brute_max_sat(F)
    print(f"best {best} of {F.m}")
    if args.witness:
        print("assignment " + "".join("1" if b else "0" for b in A))
    return EXIT_OK


def _write_trace(trace, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(heuristics.TrajectoryPoint._fields)
        for s in trace.samples:
            w.writerow([harness.fmt_float(v) if isinstance(v, float) else v for v in s])


def cmd_heuristic(args):
    seed = _seed(args)
    what = args.what
    if what in ("cutgreedy", "cutunit"):
        G = _load_graph(args)
        if what == "cutgreedy":
            r = heuristics.majority_greedy_cut(G, seed=seed)
            _dump({"algorithm": what, "n": G.n, "m": G.m, "cut": r.cut, "uncut": G.m - r.cut})
        else:
            r = heuristics.unit_clause_cut(G, seed)
            if args.trace_out:
                _write_trace(r.trace, args.trace_out)
            _dump({"algorithm": what, "n": G.n, "m": G.m, "cut": G.m - r.uncut, "uncut": r.uncut,
                   "dissatisfied_unit": r.trace.dissatisfied_unit,
                   "dissatisfied_residual": r.trace.dissatisfied_residual})
        return EXIT_OK
    F = _load_formula(args)
    out = {"algorithm": what, "n": F.n, "m": F.m}
    if what == "potential":
        r = heuristics.potential_greedy(F)
        out["satisfied"] = r.satisfied
    elif what == "unitclause":
        r = heuristics.unit_clause_resolve(F, seed, args.seed_count)
        out["satisfied"] = count_satisfied(F, r.assignment)
        out["dissatisfied_unit"] = r.trace.dissatisfied_unit
        out["dissatisfied_residual"] = r.trace.dissatisfied_residual
        out["steps"] = r.trace.steps_phaseI_II
        if args.trace_out:
            _write_trace(r.trace, args.trace_out)
    elif what == "online":
        out["satisfied"] = heuristics.online_lazy(F).accepted
    else:
        out["satisfied"] = heuristics.ksat_sequential_greedy(F, args.ell, seed)
    out["dissatisfied"] = F.m - out["satisfied"]
    _dump(out)
    return EXIT_OK


def cmd_analyze(args):
    if args.what == "bicycles":
        F = io.read_dimacs(args.input)
        bs = structures.enumerate_bicycles(F, args.k_max)
        _dump({"count": len(bs), "bad": sum(structures.is_bad_bicycle(b, F) for b in bs),
               "bicycles": [{"clauses": list(b.clause_indices), "length": b.length, "i": b.i,
                             "j": b.j, "bad": structures.is_bad_bicycle(b, F)} for b in bs]})
        return EXIT_OK
    G = io.read_edgelist(args.input)
    if args.what == "core":
        vmask, emask = structures.two_core_mask(G)
        _dump({"vertices": int(vmask.sum()), "edges": int(emask.sum())})
    elif args.what == "kernel":
        K = structures.kernel(G)
        res = structures.kernel_cut_bound(K, _seed(args))
        _dump({"vertices": K.num_vertices, "edges": K.num_edges,
               "odd_edges": int(K.parities.sum()), "bare_cycles": len(K.bare_cycles),
               "odd_bare_cycles": K.odd_bare_cycles(), "violated": res.violated,
               "exact": res.exact})
    else:
        rep = structures.classify_components(G)
        _dump({"components": rep.count, "giant": rep.giant,
               "trees": int(np.sum(rep.classes == structures.TREE)),
               "unicyclic": rep.unicyclic_count, "complex": rep.complex_count,
               "odd_unicyclic": rep.odd_unicyclic})
    return EXIT_OK


def _predict_one(what, c, k):
    if what == "rejected":
        s = analysis.TrajectorySolution.solve(c)
        return {"c": c, "rho_star": s.rho_star, "rejected_density": s.rejected_density}
    if what == "online":
        return {"c": c, "accepted_per_n": analysis.online_fraction(c)}
    if what == "giantfree":
        r = analysis.giant_free_fraction(c)
        return {"c": c, "convention": "m = c n edges", "r": r, "edges_per_n": r * c}
    if what == "cycles":
        return {"c": c, "convention": "m = c n edges", "expected_cycles": analysis.expected_cycles_subcritical(c)}
    if what == "bounds":
        if k == "cut":
            b = analysis.highdensity_bounds_cut(c)
        else:
            b = analysis.highdensity_bounds_ksat(int(k), c)
        return {"c": c, "k": k, **b._asdict()}
    raise ValueError(what)


def cmd_predict(args):
    if args.what == "trajectory":
        rs = np.linspace(1, args.rho_min or 0.01, args.points)
        if args.rho_min is None and args.c > 1:
            rs = np.linspace(1, analysis.rho_star(args.c), args.points)
        rho1, rho2 = analysis.ode_trajectory(args.c, rs)
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["rho", "rho1", "rho2"])
        for row in zip(rs, rho1, rho2):
            w.writerow([harness.fmt_float(float(v)) for v in row])
        return EXIT_OK
    if args.grid:
        lo, hi, num = args.grid
        rows = [_predict_one(args.what, float(c), args.k) for c in np.linspace(float(lo), float(hi), int(num))]
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: harness.fmt_float(v) if isinstance(v, float) else v for k, v in r.items()})
        return EXIT_OK
    if args.c is None:
        raise ValueError("--c is required")
    _dump(_predict_one(args.what, args.c, args.k))
    return EXIT_OK


def cmd_run(args):
    cfg = harness.ExperimentConfig.load(args.config)
    if args.out:
        cfg.output = args.out
    res = harness.run_experiment(cfg, threads=args.threads)
    if not cfg.output:
        if res.records:
            sys.stdout.write(harness.records_csv(res.records))
        else:
            sys.stdout.write(harness.summary_json(cfg, res))
    for s in res.summary:
        print(f"n={s.n} x={harness.fmt_float(s.c)} {s.algorithm}: mean dissatisfied "
              f"{s.mean:.4f} [{s.ci_low:.4f}, {s.ci_high:.4f}] over {s.trials}", file=sys.stderr)
    return EXIT_OK


def cmd_report(args):
    recs = harness.read_records(args.results)
    rows = [{k: harness.fmt_float(v) if isinstance(v, float) else v for k, v in s._asdict().items()}
            for s in harness.summarize(recs)]
    _dump(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phaselab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--stream", type=int, default=0, help="stream (trial) index")

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("what", choices=["ksat", "graph", "csp"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p", type=float, help="edge probability (graph only; overrides --m)")
    p.add_argument("--g", help="constraint truth table as a bit string (csp; default XOR_k)")
    p.add_argument("--out")
    seeded(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="exact oracles")
    p.add_argument("what", choices=["maxsat", "maxcut", "2sat"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("heuristic", help="run a lower-bound heuristic")
    p.add_argument("what", choices=["potential", "unitclause", "online", "cutgreedy", "cutunit", "ksat"])
    p.add_argument("--in", dest="input")
    p.add_argument("--n", type=int)
    p.add_argument("--c", type=float, help="clauses (or edges) per variable (vertex)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--seed-count", type=int, default=None)
    p.add_argument("--trace-out")
    seeded(p)
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("analyze", help="structural reports as JSON")
    p.add_argument("what", choices=["bicycles", "core", "kernel", "components"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k-max", type=int, default=8)
    seeded(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("predict", help="closed-form predictions (graph densities use m = c n)")
    p.add_argument("what", choices=["rejected", "trajectory", "online", "giantfree", "bounds", "cycles"])
    p.add_argument("--c", type=float)
    p.add_argument("--k", default="2", help="arity for bounds, or 'cut'")
    p.add_argument("--grid", nargs=3, metavar=("LO", "HI", "NUM"), help="emit a CSV curve")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--rho-min", type=float)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="summarize a results CSV")
    p.add_argument("results")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"phaselab: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ConfigError as exc:
        print(f"phaselab: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"phaselab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
