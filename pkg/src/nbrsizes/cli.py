"""Command-line front end: single runs, benchmark sweeps, and CNF instance export."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import zlib
from dataclasses import dataclass
from statistics import median

from .errors import LimitExceeded, ParseError
from .graph import (Graph, SizesResult, bfs_sizes, closed_one, gnm, grid,
                    open_from_closed, parse_graph, split_graph, write_edge_list)
from .reduction import build_reduction, parse_dimacs, random_kcnf
from .treewidth import (DEFAULT_WIDTH_CAP, banded_td, cover_star_td,
                        greedy_td, parse_td, solve_tw)
from .vertexcover import find_vertex_cover, solve_vc

log = logging.getLogger("nbrsizes")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FILE = 3
EXIT_FORMAT = 4
EXIT_BACKEND = 5
EXIT_MISMATCH = 6

COVER_CAP = 40
WIDTH_CAP = DEFAULT_WIDTH_CAP


class ConfigError(ValueError):
    """Invalid option combination or malformed run configuration."""


class ChecksumMismatch(RuntimeError):
    """Two backends disagreed on a benchmark instance."""


@dataclass
class RunConfig:
    input: str
    fmt: str = "edge-list"
    r: int = 2
    mode: str = "closed"
    backend: str = "auto"
    cover: str | None = None
    td: str | None = None
    output: str = "json"
    seed: int = 0
    verbosity: int = 0
    timings: bool = False


def _read_cover_file(path: str) -> list[int]:
    cover = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                cover.append(int(line))
            except ValueError:
                raise ParseError(f"cover file line {lineno}: expected one vertex index") from None
    return cover


def _choose_backend(cfg: RunConfig, g: Graph, cover, td) -> tuple[str, list[int] | None]:
    """Resolve 'auto' and return (backend, cover_to_use)."""
    if cfg.backend != "auto":
        return cfg.backend, cover
    if cfg.r != 2:
        log.info("auto: r=%d rules out the r=2 backends, using bfs", cfg.r)
        return "bfs", cover
    if td is not None and td.width <= WIDTH_CAP:
        log.info("auto: decomposition of width %d supplied, using tw", td.width)
        return "tw", cover
    if cover is not None and len(cover) <= COVER_CAP:
        log.info("auto: cover of size %d supplied, using vc", len(cover))
        return "vc", cover
    try:
        found = find_vertex_cover(g)
    except LimitExceeded:
        log.info("auto: cover search budget exhausted, using bfs")
        return "bfs", None
    if len(found) <= COVER_CAP:
        log.info("auto: found a cover of size %d, using vc", len(found))
        return "vc", found
    log.info("auto: minimum cover has size %d > %d, using bfs", len(found), COVER_CAP)
    return "bfs", None


def execute(cfg: RunConfig) -> tuple[SizesResult, Graph]:
    """Compute one sizes result per the configuration; also returns the graph."""
    if cfg.r < 1:
        raise ConfigError(f"radius must be >= 1, got {cfg.r}")
    if cfg.mode not in ("closed", "open"):
        raise ConfigError(f"mode must be closed or open, got {cfg.mode!r}")
    if cfg.backend not in ("auto", "bfs", "vc", "tw"):
        raise ConfigError(f"unknown backend {cfg.backend!r}")
    if cfg.backend in ("vc", "tw") and cfg.r != 2:
        raise ConfigError(f"backend {cfg.backend} supports r=2 only, got r={cfg.r}")
    if cfg.output not in ("json", "csv"):
        raise ConfigError(f"output must be json or csv, got {cfg.output!r}")

    with open(cfg.input, encoding="utf-8") as fh:
        g = parse_graph(fh.read(), cfg.fmt)
    cover = _read_cover_file(cfg.cover) if cfg.cover else None
    td = None
    if cfg.td:
        with open(cfg.td, encoding="utf-8") as fh:
            td = parse_td(fh.read())

    backend, cover = _choose_backend(cfg, g, cover, td)
    if backend == "bfs":
        return bfs_sizes(g, cfg.r, cfg.mode), g
    if backend == "vc":
        if cover is None:
            cover = find_vertex_cover(g)
        if len(cover) > COVER_CAP:
            raise LimitExceeded(f"cover of size {len(cover)} exceeds the cap {COVER_CAP}")
        closed = solve_vc(g, hint=cover)
    else:
        closed = solve_tw(g, td)
    if cfg.mode == "closed":
        return closed, g
    return open_from_closed(closed, closed_one(g)), g


def run(cfg: RunConfig) -> str:
    """Execute one configuration and return the serialized result."""
    res, g = execute(cfg)
    log.info("backend=%s elapsed=%.3fs", res.backend, res.elapsed)
    return serialize_result(res, g.n, g.m, cfg.output, cfg.timings)


def serialize_result(res: SizesResult, g_n: int, g_m: int, output: str,
                     timings: bool = False) -> str:
    """Render a result; byte-deterministic unless timings are requested."""
    if output == "json":
        payload = {
            "backend": res.backend,
            "r": res.r,
            "mode": res.mode,
            "n": g_n,
            "m": g_m,
            "param": res.param,
            "sizes": res.sizes,
        }
        if timings:
            payload["elapsed_ms"] = round(res.elapsed * 1000.0, 3)
        return json.dumps(payload) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex", "size"])
    for v, s in enumerate(res.sizes):
        writer.writerow([v, s])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# benchmark harness

@dataclass
class BenchRow:
    instance: str
    backend: str
    n: int
    m: int
    param: int | None
    reps: int
    median_s: float
    tables: int | None
    checksum: str


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def to_json(self) -> str:
        return json.dumps([vars(r) for r in self.rows], indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["instance", "backend", "n", "m", "param", "reps",
                         "median_s", "tables", "checksum"])
        for r in self.rows:
            writer.writerow([r.instance, r.backend, r.n, r.m, r.param, r.reps,
                             f"{r.median_s:.6f}", r.tables, r.checksum])
        return buf.getvalue()


def sizes_checksum(sizes: list[int]) -> str:
    return f"{zlib.crc32(','.join(map(str, sizes)).encode()) & 0xFFFFFFFF:08x}"


def _build_instance(spec: dict):
    """Materialize one suite entry: (name, graph, cover hint, decomposition, seed)."""
    kind = spec.get("kind")
    seed = spec.get("seed", 0)
    if kind == "gnm":
        g = gnm(spec["n"], spec["m"], seed)
        name = spec.get("name", f"gnm-{spec['n']}-{spec['m']}-s{seed}")
        cover = None
        td = greedy_td(g) if spec.get("td") == "greedy" else None
    elif kind == "split":
        g = split_graph(spec["n"], spec["t"], spec["p"], seed)
        name = spec.get("name", f"split-{spec['n']}-t{spec['t']}-s{seed}")
        cover = list(range(spec["t"])) if spec.get("cover", "declared") == "declared" else None
        td = None
    elif kind == "grid":
        g = grid(spec["rows"], spec["cols"])
        name = spec.get("name", f"grid-{spec['rows']}x{spec['cols']}")
        cover = None
        how = spec.get("td", "interval")
        if how == "interval":
            td = banded_td(g.n, spec["cols"])
        elif how == "greedy":
            td = greedy_td(g)
        else:
            raise ConfigError(f"unknown grid decomposition source {how!r}")
    elif kind == "cnf":
        formula = random_kcnf(spec["vars"], spec["clauses"], spec.get("k", 3), seed)
        inst = build_reduction(formula)
        g = inst.graph
        name = spec.get("name", f"cnf-{spec['vars']}v-{spec['clauses']}c-s{seed}")
        cover = inst.cover_certificate()
        td = cover_star_td(g, cover)
    else:
        raise ConfigError(f"unknown instance kind {kind!r}")
    return name, g, cover, td, seed


def _bench_once(g: Graph, backend: str, cover, td) -> SizesResult:
    if backend == "bfs":
        return bfs_sizes(g, 2, "closed")
    if backend == "vc":
        return solve_vc(g, hint=cover)
    if backend == "tw":
        return solve_tw(g, td)
    raise ConfigError(f"unknown backend {backend!r}")


def bench(suite: list[dict], backends: list[str], reps: int = 3) -> BenchReport:
    """Run each suite instance under each backend; enforce checksum agreement.

    Wall times are the backend's own elapsed seconds, median over reps;
    instance generation is excluded.
    """
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    rows = []
    for spec in suite:
        name, g, cover, td, seed = _build_instance(spec)
        first_checksum = None
        for backend in backends:
            times = []
            res = None
            for _ in range(reps):
                res = _bench_once(g, backend, cover, td)
                times.append(res.elapsed)
            checksum = sizes_checksum(res.sizes)
            if first_checksum is None:
                first_checksum = checksum
            elif checksum != first_checksum:
                raise ChecksumMismatch(
                    f"instance {name} (seed {seed}): backend {backend} produced checksum "
                    f"{checksum}, expected {first_checksum}")
            rows.append(BenchRow(name, backend, g.n, g.m, res.param, reps,
                                 median(times), res.tables, checksum))
    return BenchReport(rows)


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbrsizes",
                                     description="Per-vertex neighbourhood sizes")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log selection and progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="compute sizes for one graph")
    p_run.add_argument("--input", required=True, help="graph file")
    p_run.add_argument("--format", default="edge-list", choices=["edge-list", "pace-gr"])
    p_run.add_argument("--r", type=int, default=2, help="radius (>= 1)")
    p_run.add_argument("--mode", default="closed", choices=["closed", "open"])
    p_run.add_argument("--backend", default="auto", choices=["auto", "bfs", "vc", "tw"])
    p_run.add_argument("--cover", help="vertex cover file, one index per line")
    p_run.add_argument("--td", help="tree decomposition file (.td format)")
    p_run.add_argument("--output", default="json", choices=["json", "csv"])
    p_run.add_argument("--out", help="write the result here instead of stdout")
    p_run.add_argument("--seed", type=int, default=0, help="recorded for reproducibility")
    p_run.add_argument("--timings", action="store_true",
                       help="include wall time in the payload (breaks byte determinism)")

    p_bench = sub.add_parser("bench", help="run a benchmark suite")
    p_bench.add_argument("--suite", required=True, help="JSON list of instance specs")
    p_bench.add_argument("--backends", required=True,
                         help="comma-separated subset of bfs,vc,tw")
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--out", help="report file (.json or .csv); default stdout JSON")

    p_red = sub.add_parser("reduce", help="export a CNF reduction instance")
    p_red.add_argument("--cnf", required=True, help="DIMACS cnf file")
    p_red.add_argument("--emit", required=True, help="output path prefix")
    p_red.add_argument("--var-cap", type=int, default=30)
    return parser


def _cmd_run(args) -> int:
    cfg = RunConfig(input=args.input, fmt=args.format, r=args.r, mode=args.mode,
                    backend=args.backend, cover=args.cover, td=args.td,
                    output=args.output, seed=args.seed, verbosity=args.verbose,
                    timings=args.timings)
    payload = run(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_bench(args) -> int:
    with open(args.suite, encoding="utf-8") as fh:
        suite = json.load(fh)
    if not isinstance(suite, list):
        raise ConfigError("suite file must hold a JSON list of instance specs")
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    for b in backends:
        if b not in ("bfs", "vc", "tw"):
            raise ConfigError(f"unknown backend {b!r}")
    report = bench(suite, backends, args.reps)
    if args.out:
        text = report.to_csv() if args.out.endswith(".csv") else report.to_json()
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK


def _cmd_reduce(args) -> int:
    with open(args.cnf, encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read())
    inst = build_reduction(formula, args.var_cap)
    prefix = args.emit
    with open(prefix + ".edgelist", "w", encoding="utf-8") as fh:
        fh.write(write_edge_list(inst.graph))
    with open(prefix + ".json", "w", encoding="utf-8") as fh:
        json.dump(inst.sidecar(), fh, indent=2)
        fh.write("\n")
    with open(prefix + ".cover", "w", encoding="utf-8") as fh:
        fh.write("\n".join(map(str, inst.cover_certificate())) + "\n")
    print(f"wrote {prefix}.edgelist, {prefix}.json, {prefix}.cover "
          f"(n={inst.graph.n}, m={inst.graph.m}, threshold={inst.threshold})")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(message)s")
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_reduce(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except ParseError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ChecksumMismatch as exc:
        print(f"checksum mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (LimitExceeded, ValueError) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
