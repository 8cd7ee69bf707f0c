"""Command-line front end: ``pktruss {gen,decompose,validate,ktruss,bench,stats}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .generators import RMAT_DEFAULT_EDGE_FACTOR, RMAT_DEFAULT_PROBS, erdos_renyi, rmat
from .graph_core import EdgeListError, GraphTooLarge, load_graph, stats, write_edge_list
from .parallel import ENV_THREADS, default_workers
from .report import (
    ALGORITHMS, REORDERS, bench, format_bench_table, format_histogram, format_json,
    format_tsv, run_decomposition,
)
from .triangle import ORACLE_MAX_N, OracleTooLarge
from .truss_serial import ktruss_subgraphs
from .validate import DEFAULT_WORKERS, default_engines, random_suite, validate

log = logging.getLogger("pktruss")


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_workers()


def _int_list(text: str):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("worker counts must be positive")
    return values


def cmd_gen(args) -> int:
    if args.model == "er":
        if args.n is None or args.p is None:
            raise ValueError("er needs --n and --p")
        edges = erdos_renyi(args.n, args.p, seed=args.seed)
        header = f"er n={args.n} p={args.p} seed={args.seed}"
    else:
        if args.scale is None:
            raise ValueError("rmat needs --scale")
        probs = (args.a, args.b, args.c, args.d)
        edges = rmat(args.scale, args.edge_factor, probs, seed=args.seed)
        header = (f"rmat scale={args.scale} edge_factor={args.edge_factor} "
                  f"a={args.a} b={args.b} c={args.c} d={args.d} seed={args.seed}")
    if args.output in (None, "-"):
        sys.stdout.write(f"# {header}\n")
        for u, v in edges.tolist():
            sys.stdout.write(f"{u} {v}\n")
    else:
        write_edge_list(args.output, edges, header=header)
    log.info("wrote %d raw edges", edges.shape[0])
    return 0


def cmd_decompose(args) -> int:
    g = load_graph(args.input)
    dec = run_decomposition(
        g, args.algorithm, workers=_threads(args), reorder=args.reorder, oracle_max_n=args.max_n
    )
    if args.format == "tsv":
        _emit(format_tsv(dec), args.output)
    elif args.format == "hist":
        _emit(format_histogram(dec.truss), args.output)
    else:
        _emit(format_json(dec) + "\n", args.output)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dec.report.to_json(indent=1) + "\n")
    r = dec.report
    log.info(
        "%s: n=%d m=%d t_max=%d c_max=%d triangles=%d wedges=%d time=%.4fs GWeps=%.4f",
        r.algorithm, r.n, r.m, r.t_max, r.c_max, r.triangle_count, r.wedge_count,
        r.decomposition_seconds, r.gweps,
    )
    return 0


def cmd_validate(args) -> int:
    workers = args.threads_list or list(DEFAULT_WORKERS)
    summary = validate(random_suite(args.seeds, args.max_n, seed=args.seed), default_engines(workers))
    print(summary.describe())
    return 0 if summary.ok else 1


def cmd_ktruss(args) -> int:
    if args.k < 2:
        raise ValueError(f"--k must be >= 2, got {args.k}")
    g = load_graph(args.input)
    dec = run_decomposition(g, "pkt", workers=_threads(args), reorder=args.reorder)
    if args.k > dec.truss.t_max:
        log.warning("k=%d exceeds t_max=%d: no %d-truss exists", args.k, dec.truss.t_max, args.k)
        _emit("", args.output)
        return 0
    parts = ktruss_subgraphs(dec.graph, dec.truss, args.k)
    out = []
    for i, part in enumerate(parts):
        out.append(f"# component {i}: {part.size} edges\n")
        for u, v in dec.edges[part].tolist():
            out.append(f"{u}\t{v}\n")
    _emit("".join(out), args.output)
    log.info("%d maximal %d-trusses", len(parts), args.k)
    return 0


def cmd_bench(args) -> int:
    g = load_graph(args.input)
    workers = args.threads_list or [1, _threads(args)]
    result = bench(g, workers, repeats=args.repeats, reorder=args.reorder)
    print(format_bench_table(result))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=1)
    return 0


def cmd_stats(args) -> int:
    g = load_graph(args.input)
    st = stats(g)
    print(json.dumps(st.__dict__, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pktruss", description="Parallel k-truss decomposition")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    threads_help = f"worker threads (default: ${ENV_THREADS} or CPU count)"

    g = sub.add_parser("gen", parents=[common], help="generate a synthetic edge list")
    g.add_argument("model", choices=("er", "rmat"))
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--scale", type=int)
    g.add_argument("--edge-factor", type=int, default=RMAT_DEFAULT_EDGE_FACTOR)
    for name, val in zip("abcd", RMAT_DEFAULT_PROBS):
        g.add_argument(f"--{name}", type=float, default=val)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", "-o")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("decompose", parents=[common], help="trussness of every edge")
    d.add_argument("--input", "-i", required=True)
    d.add_argument("--algorithm", choices=ALGORITHMS, default="pkt")
    d.add_argument("--threads", type=int, help=threads_help)
    d.add_argument("--reorder", choices=REORDERS, default="kcore")
    d.add_argument("--output", "-o")
    d.add_argument("--format", choices=("tsv", "json", "hist"), default="tsv")
    d.add_argument("--report", help="also write the JSON run report here")
    d.add_argument("--max-n", type=int, default=ORACLE_MAX_N, help="oracle size guard")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("validate", parents=[common], help="cross-check pkt, wc and the oracle on random graphs")
    v.add_argument("--seeds", type=int, default=200, help="number of suite graphs")
    v.add_argument("--seed", type=int, default=0, help="suite seed")
    v.add_argument("--max-n", type=int, default=256)
    v.add_argument("--threads", dest="threads_list", type=_int_list,
                   help="comma-separated pkt worker counts (default 1,2,4,8)")
    v.set_defaults(func=cmd_validate)

    k = sub.add_parser("ktruss", parents=[common], help="list the maximal k-trusses")
    k.add_argument("--input", "-i", required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--threads", type=int, help=threads_help)
    k.add_argument("--reorder", choices=REORDERS, default="kcore")
    k.add_argument("--output", "-o")
    k.set_defaults(func=cmd_ktruss)

    b = sub.add_parser("bench", parents=[common], help="per-phase timings across worker counts")
    b.add_argument("--input", "-i", required=True)
    b.add_argument("--threads", dest="threads_list", type=_int_list,
                   help="comma-separated worker counts (default: 1 and the default count)")
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--reorder", choices=REORDERS, default="kcore")
    b.add_argument("--output", "-o", help="write the JSON result here")
    b.set_defaults(func=cmd_bench, threads=None)

    s = sub.add_parser("stats", parents=[common], help="n, m, degrees and wedge count of an edge list")
    s.add_argument("--input", "-i", required=True)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (EdgeListError, GraphTooLarge, OracleTooLarge, ValueError, OSError) as exc:
        print(f"pktruss: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
