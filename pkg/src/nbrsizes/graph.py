"""Undirected graph container, text formats, generators, and the BFS reference solver."""

from __future__ import annotations

import multiprocessing
import os
import random
import time
from dataclasses import dataclass

from .errors import ParseError

# Source-parallel BFS only pays off past this size when workers come from the
# environment; an explicit workers argument always wins.
_PARALLEL_MIN = 4096


class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.

    Instances are treated as immutable after construction and are safe to
    share between concurrent readers.
    """

    __slots__ = ("n", "m", "adj", "_adj_sets")

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range [0, {n})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].append(v)
            adj[v].append(u)
        total = 0
        for u, nbrs in enumerate(adj):
            nbrs.sort()
            for i in range(1, len(nbrs)):
                if nbrs[i] == nbrs[i - 1]:
                    raise ValueError(f"duplicate edge ({u}, {nbrs[i]})")
            total += len(nbrs)
        self.n = n
        self.m = total // 2
        self.adj = adj
        self._adj_sets = None

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def adj_sets(self) -> list[set[int]]:
        """Per-vertex neighbour sets, built lazily for membership tests."""
        if self._adj_sets is None:
            self._adj_sets = [set(nbrs) for nbrs in self.adj]
        return self._adj_sets

    def edges(self):
        """Yield each edge once as (u, v) with u < v."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class SizesResult:
    """Per-vertex neighbourhood sizes for one radius and mode.

    mode "closed" counts vertices at distance <= r including the vertex
    itself; mode "open" counts vertices at distance exactly r.
    """

    r: int
    mode: str
    sizes: list[int]
    backend: str
    elapsed: float = 0.0
    param: int | None = None   # cover size or decomposition width
    tables: int | None = None  # table entries built by parameterized backends


def _check_mode(mode: str) -> None:
    if mode not in ("closed", "open"):
        raise ValueError(f"mode must be 'closed' or 'open', got {mode!r}")


# ---------------------------------------------------------------------------
# parsing and writing

def parse_graph(text: str, fmt: str = "edge-list") -> Graph:
    """Parse graph text in 'edge-list' or 'pace-gr' format.

    edge-list: header line "n m", then m lines "u v" with 0-based indices;
    lines starting with '#' are comments.  pace-gr: header "p tw n m", then
    m lines of 1-based endpoints; lines starting with 'c' are comments.
    Self-loops and duplicate edges are rejected, not dropped.
    """
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "pace-gr":
        return _parse_pace_gr(text)
    raise ValueError(f"unknown graph format: {fmt!r}")


def _data_lines(text, comment_prefixes):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in comment_prefixes:
            continue
        yield lineno, line


def _parse_two_ints(line, lineno, what):
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(f"line {lineno}: expected two fields for {what}, got {len(parts)}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer value in {what}") from None


def _collect_edges(lines, n, m, shift, fmt_name):
    edges = []
    seen = set()
    for lineno, line in lines:
        if len(edges) == m:
            raise ParseError(f"line {lineno}: more than the declared {m} edges")
        u, v = _parse_two_ints(line, lineno, "edge")
        u -= shift
        v -= shift
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(
                f"line {lineno}: vertex out of declared range in {fmt_name} edge ({u + shift}, {v + shift})")
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at vertex {u + shift}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate edge ({u + shift}, {v + shift})")
        seen.add(key)
        edges.append(key)
    if len(edges) != m:
        raise ParseError(f"expected {m} edges, found {len(edges)}")
    return edges


def _parse_edge_list(text: str) -> Graph:
    lines = _data_lines(text, "#")
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input: missing 'n m' header") from None
    n, m = _parse_two_ints(header, lineno, "header")
    if n < 0 or m < 0:
        raise ParseError(f"line {lineno}: negative counts in header")
    return Graph(n, _collect_edges(lines, n, m, 0, "edge-list"))


def _parse_pace_gr(text: str) -> Graph:
    lines = _data_lines(text, "c")
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input: missing 'p tw n m' header") from None
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "tw":
        raise ParseError(f"line {lineno}: expected header 'p tw n m'")
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer value in header") from None
    if n < 0 or m < 0:
        raise ParseError(f"line {lineno}: negative counts in header")
    return Graph(n, _collect_edges(lines, n, m, 1, "pace-gr"))


def write_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format accepted by parse_graph."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# truncated BFS, the oracle of record for every other backend

def _bfs_range(g, r, mode, lo, hi):
    n = g.n
    adj = g.adj
    seen = [-1] * n
    dist = [0] * n
    queue = [0] * n
    out = []
    closed_mode = mode == "closed"
    for s in range(lo, hi):
        seen[s] = s
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        closed = 1
        exact = 0
        while head < tail:
            u = queue[head]
            head += 1
            dv = dist[u] + 1
            last = dv == r
            for v in adj[u]:
                if seen[v] != s:
                    seen[v] = s
                    closed += 1
                    if last:
                        exact += 1
                    else:
                        dist[v] = dv
                        queue[tail] = v
                        tail += 1
        out.append(closed if closed_mode else exact)
    return out


_POOL_ARGS = None


def _bfs_pool_init(g, r, mode):
    global _POOL_ARGS
    _POOL_ARGS = (g, r, mode)


def _bfs_pool_chunk(span):
    g, r, mode = _POOL_ARGS
    return _bfs_range(g, r, mode, span[0], span[1])


def env_workers() -> int:
    """Worker count from NBR_THREADS; 1 when unset or unparsable."""
    raw = os.environ.get("NBR_THREADS", "")
    try:
        k = int(raw)
    except ValueError:
        return 1
    return k if k > 1 else 1


def bfs_sizes(g: Graph, r: int, mode: str = "closed", workers: int | None = None) -> SizesResult:
    """Exact neighbourhood sizes by truncated breadth-first search per vertex.

    Runs in O(n(n+m)) total using per-source timestamps.  When workers > 1
    the sources are split over forked processes; results are identical to a
    serial run.
    """
    _check_mode(mode)
    if r < 1:
        raise ValueError(f"radius must be >= 1, got {r}")
    t0 = time.perf_counter()
    explicit = workers is not None
    if workers is None:
        workers = env_workers()
    if workers > 1 and (explicit or g.n >= _PARALLEL_MIN) and g.n > 1:
        sizes = _bfs_parallel(g, r, mode, workers)
    else:
        sizes = _bfs_range(g, r, mode, 0, g.n)
    return SizesResult(r, mode, sizes, "bfs", time.perf_counter() - t0)


def _bfs_parallel(g, r, mode, workers):
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        return _bfs_range(g, r, mode, 0, g.n)
    pieces = min(workers * 4, g.n)
    step = (g.n + pieces - 1) // pieces
    spans = [(lo, min(lo + step, g.n)) for lo in range(0, g.n, step)]
    with ctx.Pool(workers, _bfs_pool_init, (g, r, mode)) as pool:
        parts = pool.map(_bfs_pool_chunk, spans)
    return [x for part in parts for x in part]


def closed_zero(g: Graph) -> SizesResult:
    """Closed sizes at radius 0: every vertex sees only itself."""
    return SizesResult(0, "closed", [1] * g.n, "direct")


def closed_one(g: Graph) -> SizesResult:
    """Closed sizes at radius 1: degree plus one."""
    return SizesResult(1, "closed", [len(a) + 1 for a in g.adj], "direct")


def open_from_closed(closed_r: SizesResult, closed_rm1: SizesResult) -> SizesResult:
    """Open sizes at radius r from closed sizes at radii r and r-1."""
    if closed_r.mode != "closed" or closed_rm1.mode != "closed":
        raise ValueError("both inputs must be closed-mode results")
    if closed_rm1.r != closed_r.r - 1:
        raise ValueError(f"radii must differ by one, got {closed_r.r} and {closed_rm1.r}")
    if len(closed_r.sizes) != len(closed_rm1.sizes):
        raise ValueError("mismatched vertex counts")
    sizes = [a - b for a, b in zip(closed_r.sizes, closed_rm1.sizes)]
    return SizesResult(closed_r.r, "open", sizes, closed_r.backend,
                       closed_r.elapsed + closed_rm1.elapsed,
                       param=closed_r.param, tables=closed_r.tables)


# ---------------------------------------------------------------------------
# instance generators (deterministic for a fixed seed)

def gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform random graph with n vertices and exactly m edges."""
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the maximum {max_edges} for n={n}")
    rng = random.Random(seed)
    if n <= 1024:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return Graph(n, rng.sample(pairs, m))
    seen = set()
    edges = []
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def split_graph(n: int, t: int, p: float, seed: int = 0) -> Graph:
    """Graph with declared vertex cover 0..t-1 and independent set t..n-1.

    Each independent vertex is joined to each cover vertex with probability
    p; the cover itself carries no internal edges, so vertices 0..t-1 form a
    vertex cover of size t by construction.
    """
    if t > n:
        raise ValueError(f"cover size t={t} exceeds n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p={p} outside [0, 1]")
    rng = random.Random(seed)
    edges = []
    for v in range(t, n):
        for x in range(t):
            if rng.random() < p:
                edges.append((x, v))
    return Graph(n, edges)


def grid(rows: int, cols: int) -> Graph:
    """rows x cols grid graph in row-major vertex order."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)
