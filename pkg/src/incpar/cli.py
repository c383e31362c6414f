"""Command-line harness: generate inputs, run algorithms, validate, benchmark.

Exit codes: 0 success, 1 validation failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass

from . import bstsort, closestpair2d, delaunay2d, lelists, lp2d, scc, seb2d
from .drivers import ForkJoin, default_threads
from .geomkit import format_points, parse_points, random_points
from .graphcore import (Graph, canonical_labels, format_edge_list, gen_random_graph, oracle_scc,
                        parse_edge_list)
from .metrics import COUNTERS, MetricsReport, append_report
from .order import seeded_permutation

ALGOS = tuple(COUNTERS)
ORACLE_LIMIT = 2000


class InputError(Exception):
    pass


@dataclass
class Outcome:
    report: MetricsReport
    text: str
    ok: bool


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _points(args):
    if args.points:
        pts = parse_points(_read(args.points).splitlines())
        if len(pts) < 1:
            raise InputError(f"{args.points}: no points")
        return pts
    return random_points(_need_n(args), args.seed)


def _graph(args) -> Graph:
    if args.graph:
        return parse_edge_list(_read(args.graph))
    n = _need_n(args)
    m = args.m if args.m is not None else 4 * n
    return gen_random_graph(n, m, args.seed, args.weighted)


def _need_n(args) -> int:
    if args.n is None:
        raise InputError("either an input file or --n is required")
    if args.n < 0:
        raise InputError("--n must be non-negative")
    return args.n


def _keys(args) -> list:
    if args.keys:
        keys = []
        for lineno, raw in enumerate(_read(args.keys).splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                keys.append(int(line))
            except ValueError:
                try:
                    keys.append(float(line))
                except ValueError:
                    raise InputError(f"line {lineno}: bad key {line!r}") from None
        return keys
    return list(range(_need_n(args)))


def _constraints(args):
    if args.constraints:
        return lp2d.parse_constraints(_read(args.constraints).splitlines())
    return lp2d.tangent_instance(_need_n(args), args.seed, box=None)


def _objective(text: str):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"--objective expects 'a,b', got {text!r}") from None
    if a == 0.0 and b == 0.0:
        raise InputError("--objective must be non-zero")
    return (a, b)


def _run_sort(args, pool):
    keys = _keys(args)
    perm = seeded_permutation(len(keys), args.seed)
    order = [keys[e] for e in perm.order]
    bst = bstsort.sort_par(order) if args.mode == "par" else bstsort.sort_seq(order)
    ok = None
    if args.validate:
        other = bstsort.sort_seq(order) if args.mode == "par" else bstsort.sort_par(order)
        ok = bst.sorted_keys() == sorted(keys) and bst.shape() == other.shape()
    h = bst.height()
    text = "".join(f"{k!r}\n" for k in bst.sorted_keys())
    return len(keys), 0, bst.rounds, h, {"height": h}, text, ok


def _run_delaunay(args, pool):
    pts = _points(args)
    perm = seeded_permutation(len(pts), args.seed)
    if args.mode == "par":
        tri = delaunay2d.triangulate_par(pts, perm, pool=pool)
    else:
        tri = delaunay2d.triangulate_seq(pts, perm)
    ok = None
    if args.validate:
        ok = delaunay2d.validate_delaunay(tri)[0] and not tri.check_tiling()
    counters = {k: tri.metrics[k] for k in COUNTERS["delaunay"]}
    text = "".join(f"{a} {b} {c}\n" for a, b, c in tri.interior_triangles())
    depth = tri.metrics["rounds"] if args.mode == "par" else None
    return len(pts), 0, tri.metrics["rounds"], depth, counters, text, ok


def _run_lp(args, pool):
    cons = _constraints(args)
    obj = _objective(args.objective)
    perm = seeded_permutation(len(cons), args.seed)
    if args.mode == "par":
        res = lp2d.lp_par(cons, obj, perm, pool=pool)
    else:
        res = lp2d.lp_seq(cons, obj, perm)
    ok = None
    if args.validate:
        ok = _check_lp(cons, obj, res)
    lines = [res.status]
    if res.point is not None:
        lines.append(f"{res.point[0]!r} {res.point[1]!r}")
        lines.append(" ".join(map(str, res.tight)))
    return len(cons), 0, res.metrics["rounds"], None, \
        {"special_steps": res.metrics["special_steps"]}, "\n".join(lines) + "\n", ok


def _check_lp(cons, obj, res) -> bool:
    small = len(cons) <= 500
    if res.status == lp2d.INFEASIBLE:
        return lp2d.brute_force(cons, obj) is None if small else True
    x, y = res.point
    if any(h.a * x + h.b * y - h.c > 1e-9 for h in cons):
        return False
    if small:
        best = lp2d.brute_force(cons, obj)
        val = lp2d.objective_value(res.point, obj)
        return best is not None and abs(best[0] - val) <= 1e-9 * max(1.0, abs(val))
    return True


def _run_closest(args, pool):
    pts = _points(args)
    perm = seeded_permutation(len(pts), args.seed)
    if args.mode == "par":
        res = closestpair2d.closest_pair_par(pts, perm, pool=pool)
    else:
        res = closestpair2d.closest_pair_seq(pts, perm)
    ok = None
    if args.validate:
        d2, a, b = closestpair2d.brute_force(pts)
        ok = math.sqrt(d2) == res.distance and (d2 == 0.0 or (a, b) == res.pair)
    counters = {k: res.metrics[k] for k in COUNTERS["closest-pair"]}
    text = f"{res.pair[0]} {res.pair[1]} {res.distance!r}\n"
    return len(pts), 0, res.metrics["rounds"], None, counters, text, ok


def _run_seb(args, pool):
    pts = _points(args)
    perm = seeded_permutation(len(pts), args.seed)
    if args.mode == "par":
        res = seb2d.seb_par(pts, perm, pool=pool)
    else:
        res = seb2d.seb_seq(pts, perm)
    ok = None
    if args.validate:
        ref = seb2d.brute_force(pts)
        ok = abs(ref.radius - res.disk.radius) <= 1e-9 * max(1.0, ref.radius) \
            and seb2d.covers(res.disk, pts)
    counters = {k: res.metrics[k] for k in COUNTERS["seb"]}
    d = res.disk
    text = f"{d.cx!r} {d.cy!r} {d.radius!r}\n" + " ".join(map(str, res.support)) + "\n"
    return len(pts), 0, res.metrics["rounds"], None, counters, text, ok


def _run_le(args, pool):
    g = _graph(args)
    perm = seeded_permutation(g.n, args.seed)
    if args.mode == "par":
        res = lelists.le_lists_par(g, perm, pool=pool)
    else:
        res = lelists.le_lists_seq(g, perm)
    ok = None
    if args.validate:
        if g.n <= ORACLE_LIMIT:
            ok = res.lists == lelists.le_lists_oracle(g, perm)
        else:
            other = lelists.le_lists_seq(g, perm) if args.mode == "par" else lelists.le_lists_par(g, perm)
            ok = res.lists == other.lists
    counters = {"visits": res.metrics["visits"], "max_list_length": res.max_length()}
    return g.n, g.m, res.metrics["rounds"], None, counters, res.dump(), ok


def _run_scc(args, pool):
    g = _graph(args)
    perm = seeded_permutation(g.n, args.seed)
    if args.mode == "par":
        res = scc.scc_par(g, perm, pool=pool)
    else:
        res = scc.scc_seq(g, perm)
    ok = None
    if args.validate:
        ok = canonical_labels(res.labels) == canonical_labels(oracle_scc(g))
    counters = {k: res.metrics[k] for k in COUNTERS["scc"]}
    return g.n, g.m, res.metrics["rounds"], None, counters, res.dump(), ok


RUNNERS = {
    "sort": _run_sort,
    "delaunay": _run_delaunay,
    "lp": _run_lp,
    "closest-pair": _run_closest,
    "seb": _run_seb,
    "le-lists": _run_le,
    "scc": _run_scc,
}


def run_algo(algo: str, args) -> Outcome:
    pool = ForkJoin(args.threads)
    t0 = time.perf_counter()
    n, m, rounds, depth, counters, text, ok = RUNNERS[algo](args, pool)
    wall = (time.perf_counter() - t0) * 1000.0
    report = MetricsReport(algo=algo, n=n, m=m, seed=args.seed, mode=args.mode,
                           threads=pool.threads, rounds=rounds, depth=depth,
                           counters=counters, wall_ms=round(wall, 3), validated=ok)
    return Outcome(report, text, ok is not False)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_seeds(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"bad seed range {text!r}") from None
    if not seeds:
        raise InputError("empty seed range")
    return seeds


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 0:
        raise InputError("sizes must be a non-empty list of non-negative integers")
    return sizes


BASE_COLUMNS = ("algo", "n", "m", "seed", "mode", "threads", "rounds", "depth",
                "wall_ms", "validated")


def bench_sweep(algo: str, sizes, seeds, modes, base) -> list[dict]:
    """One row per ``(n, seed, mode)`` in that order; failures become flagged rows."""
    rows = []
    for n in sizes:
        for seed in seeds:
            for mode in modes:
                args = argparse.Namespace(**vars(base))
                args.n, args.seed, args.mode = n, seed, mode
                try:
                    out = run_algo(algo, args)
                    row = out.report.flat()
                    row.update(ok=out.ok, error="")
                except Exception as exc:  # a failed run is recorded, the sweep goes on
                    row = {"algo": algo, "n": n, "seed": seed, "mode": mode,
                           "threads": args.threads, "ok": False,
                           "error": f"{type(exc).__name__}: {exc}"}
                rows.append(row)
    return rows


def rows_to_csv(algo: str, rows) -> str:
    cols = list(BASE_COLUMNS) + list(COUNTERS[algo]) + ["ok", "error"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: ("" if r.get(c) is None else r.get(c)) for c in cols})
    return buf.getvalue()


def _common(bench: bool = False) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    modes = ("seq", "par", "both") if bench else ("seq", "par")
    p.add_argument("--mode", choices=modes, default="both" if bench else "seq")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: INCPAR_THREADS or 1)")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--metrics-out")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--m", type=int)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--objective", default="0,1")
    p.add_argument("--input", dest="input")
    p.add_argument("--points")
    p.add_argument("--graph")
    p.add_argument("--keys")
    p.add_argument("--constraints")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incpar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    for algo in ALGOS:
        sp = sub.add_parser(algo, parents=[common])
        sp.add_argument("--n", type=int)
    gen = sub.add_parser("gen", parents=[common])
    gen.add_argument("kind", choices=("points", "graph", "keys", "constraints"))
    gen.add_argument("--n", type=int, required=True)
    bench = sub.add_parser("bench", parents=[_common(bench=True)])
    bench.add_argument("--algo", choices=ALGOS, required=True)
    bench.add_argument("--n", required=True, help="comma-separated sizes")
    bench.add_argument("--seeds", default="1", help="'lo..hi' or comma list")
    return parser


def _route_input(args) -> None:
    """``--input`` fills whichever file flag the subcommand reads."""
    if not args.input:
        return
    slot = {"sort": "keys", "lp": "constraints", "le-lists": "graph", "scc": "graph"}
    name = slot.get(getattr(args, "algo", None) or args.command, "points")
    if getattr(args, name) is None:
        setattr(args, name, args.input)


def _gen(args) -> str:
    n = args.n
    if n < 0:
        raise InputError("--n must be non-negative")
    if args.kind == "points":
        return format_points(random_points(n, args.seed))
    if args.kind == "graph":
        m = args.m if args.m is not None else 4 * n
        return format_edge_list(gen_random_graph(n, m, args.seed, args.weighted))
    if args.kind == "keys":
        perm = seeded_permutation(n, args.seed)
        return "".join(f"{k}\n" for k in perm.order)
    return "".join(f"{h.a!r} {h.b!r} {h.c!r}\n" for h in lp2d.tangent_instance(n, args.seed, box=None))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    _route_input(args)
    try:
        if args.command == "gen":
            _write(args.out, _gen(args))
            return 0
        if args.command == "bench":
            modes = ("seq", "par") if args.mode == "both" else (args.mode,)
            rows = bench_sweep(args.algo, _parse_sizes(args.n), _parse_seeds(args.seeds),
                               modes, args)
            _write(args.out, rows_to_csv(args.algo, rows))
            return 0 if all(r["ok"] for r in rows) else 1
        out = run_algo(args.command, args)
    except (InputError, ValueError) as exc:
        print(f"incpar: error: {exc}", file=sys.stderr)
        return 2
    _write(args.out, out.text)
    if args.metrics_out:
        append_report(args.metrics_out, out.report)
    if not out.ok:
        print("incpar: validation failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
