"""``hodgerank`` command line.

Exit codes: 0 success, 1 input error, 2 numerical failure. Options can also
come from a ``key = value`` config file (``--config``); command-line flags
win over the file, the file wins over built-in defaults. ``HODGERANK_SEED``
replaces the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, topology
from .complex import build_clique_complex, edge_cochain, euler_characteristic, read_edge_list, write_edge_list
from .exceptions import (ConvergenceError, DecompositionQualityError, HodgeRankError,
                         NumericalBreakdown, StructuralInputError)
from .generators import gen_instance, rng_from
from .krylov import SolveOptions
from .ranking import METHODS, consistency_check, decompose, ordinal_ranking, solve_ranking

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

DEFAULTS = {
    "seed": 0,
    "tol": 1e-8,
    "method": "CG-NE",
    "trials": 5,
    "methods": ",".join(METHODS),
    "target": 1e-8,
    "reorder": "none",
    "rhos": "0.005,0.01,0.02,0.04,0.08,0.12,0.16,0.25,0.4,0.7",
    "sizes": "8,16,32",
    "family": "er",
    "n": 100,
    "p": 0.1,
    "k": 10,
    "m": 5,
    "p_rewire": 0.3,
}
SWEEP_TRIALS = 20


def load_config(path) -> dict:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StructuralInputError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _resolve(args, name, typ=str, default=None):
    """flag > config file > environment (seed only) > default."""
    value = getattr(args, name, None)
    if value is None:
        value = args.config_values.get(name)
    if value is None and name == "seed" and os.environ.get("HODGERANK_SEED"):
        value = os.environ["HODGERANK_SEED"]
    if value is None:
        value = default if default is not None else DEFAULTS.get(name)
    return typ(value) if value is not None else None


def _floats(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def _emit(obj, out):
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_weighted(path):
    g, w = read_edge_list(path, weighted=True)
    if g.n_edges == 0:
        raise StructuralInputError(f"{path}: no edges")
    c = build_clique_complex(g)
    return c, edge_cochain(c, g.edges, w)


def cmd_rank(args) -> int:
    c, omega = _load_weighted(args.input)
    opts = SolveOptions(tol=_resolve(args, "tol", float))
    alpha, rep = solve_ranking(c, omega, _resolve(args, "method"), opts)
    cons = consistency_check(c, omega)
    resid = float(np.linalg.norm(omega - c.boundary_1.T @ alpha))
    _emit({"alpha": alpha.tolist(), "ranking": ordinal_ranking(alpha), "residual_norm": resid,
           "consistent": bool(cons["consistent"]), "report": rep.to_dict()}, args.output)
    return EXIT_OK if rep.converged else EXIT_NUMERIC


def cmd_decompose(args) -> int:
    c, omega = _load_weighted(args.input)
    opts = SolveOptions(tol=_resolve(args, "tol", float))
    res = decompose(c, omega, _resolve(args, "method"), opts, curl_method=args.curl_method)
    _emit(res.to_dict(), args.output)
    ok = all(r.converged for r in res.reports.values())
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_betti(args) -> int:
    c = build_clique_complex(read_edge_list(args.input))
    b = topology.betti_numbers(c)
    out = {"counts": list(c.counts), "betti": list(b), "euler_characteristic": euler_characteristic(c)}
    if args.stacked:
        out["betti1_stacked"] = topology.betti(c, 1, method="stacked")
    _emit(out, args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    n = _resolve(args, "n", int)
    trials = _resolve(args, "trials", int, default=SWEEP_TRIALS)
    if trials < 1:
        raise StructuralInputError("trials must be at least 1")
    rows = topology.density_sweep(n, _floats(_resolve(args, "rhos")), trials,
                                  _resolve(args, "seed", int), family=args.graph)
    out = args.output or "sweep.csv"
    topology.write_sweep_csv(out, rows, n)
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    return EXIT_OK


def _family_params(args) -> dict:
    fam = _resolve(args, "family")
    p = {"n": _resolve(args, "n", int)}
    if fam == "er":
        p["p"] = _resolve(args, "p", float)
    elif fam == "ws":
        p["k"] = _resolve(args, "k", int)
        p["p_rewire"] = _resolve(args, "p_rewire", float)
    elif fam == "ba":
        p["m"] = _resolve(args, "m", int)
    return p


def cmd_bench(args) -> int:
    trials = _resolve(args, "trials", int)
    if trials < 1:
        raise StructuralInputError("trials must be at least 1")
    methods = [m.strip() for m in _resolve(args, "methods").split(",") if m.strip()]
    rows = bench.run_bench(_resolve(args, "family"), _family_params(args), methods, trials,
                           _resolve(args, "seed", int), _resolve(args, "tol", float))
    out = args.output or "bench.csv"
    bench.write_bench_csv(out, rows)
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    return EXIT_NUMERIC if any(r.error for r in rows) else EXIT_OK


def cmd_spectral(args) -> int:
    fam = _resolve(args, "family")
    params = _family_params(args)
    params.pop("n")
    rows = bench.run_spectral(fam, _ints(_resolve(args, "sizes")), _resolve(args, "target", float),
                              _resolve(args, "seed", int), params)
    out = args.output or "spectral.csv"
    bench.write_rows_csv(out, rows)
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_export(args) -> int:
    c = build_clique_complex(read_edge_list(args.input))
    stats = bench.export_matrices(c, args.what, args.outdir, _resolve(args, "reorder"))
    print(json.dumps(stats, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_gen(args) -> int:
    fam = _resolve(args, "family")
    seed = _resolve(args, "seed", int)
    g = bench.make_graph(fam, _family_params(args), rng_from(seed))
    out = args.output or "graph.txt"
    if args.instance:
        inst = gen_instance(build_clique_complex(g), np.random.SeedSequence([seed, 1]))
        inst.save(out)
    elif args.weighted:
        c = build_clique_complex(g)
        inst = gen_instance(c, np.random.SeedSequence([seed, 1]))
        write_edge_list(out, c.as_graph(), inst.omega)
    else:
        write_edge_list(out, g)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgerank", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("-o", "--output")
        return p

    def solver_flags(p):
        p.add_argument("--method", help=f"one of {', '.join(METHODS)}")
        p.add_argument("--tol", type=float)

    def family_flags(p):
        p.add_argument("--family", help="er, ws, ba, or path/cycle/star/wheel/complete")
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=float, help="ER edge probability")
        p.add_argument("--k", type=int, help="WS lattice degree")
        p.add_argument("--p-rewire", dest="p_rewire", type=float)
        p.add_argument("--m", type=int, help="BA edges per new vertex")
        p.add_argument("--seed", type=int)

    p = add("rank", cmd_rank, "rank vertices from a 'u v w' edge file")
    p.add_argument("input")
    solver_flags(p)

    p = add("decompose", cmd_decompose, "full Hodge decomposition of a 'u v w' edge file")
    p.add_argument("input")
    solver_flags(p)
    p.add_argument("--curl-method", dest="curl_method")

    p = add("betti", cmd_betti, "Betti numbers of the clique complex of a 'u v' edge file")
    p.add_argument("input")
    p.add_argument("--stacked", action="store_true", help="also compute betti_1 by the stacked matrix")

    p = add("sweep", cmd_sweep, "betti_1 and harmonic fraction over edge densities")
    p.add_argument("--n", type=int)
    p.add_argument("--rhos")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--graph", default="er", choices=["er", "ba"])

    p = add("bench", cmd_bench, "error/iteration/timing table for the Krylov methods")
    family_flags(p)
    p.add_argument("--methods")
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", type=float)

    p = add("spectral", cmd_spectral, "CG iteration bounds versus measured iterations")
    family_flags(p)
    p.add_argument("--sizes")
    p.add_argument("--target", type=float)

    p = add("export", cmd_export, "Matrix Market files and pattern statistics")
    p.add_argument("what", choices=["boundaries", "laplacians", "patterns"])
    p.add_argument("input")
    p.add_argument("--outdir", default=".")
    p.add_argument("--reorder", choices=["none", "degree", "rcm"])

    p = add("gen", cmd_gen, "write a random or special graph")
    family_flags(p)
    p.add_argument("--weighted", action="store_true", help="append a random instance as weights")
    p.add_argument("--instance", action="store_true", help="write a JSON instance bundle")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.config_values = load_config(args.config) if args.config else {}
        return args.func(args)
    except (StructuralInputError, FileNotFoundError, ValueError) as exc:
        print(f"hodgerank: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, NumericalBreakdown, DecompositionQualityError) as exc:
        print(f"hodgerank: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except HodgeRankError as exc:
        print(f"hodgerank: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
