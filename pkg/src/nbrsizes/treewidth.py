"""Tree decompositions and the table-driven closed second-neighbourhood solver.

The solver works on a nice decomposition whose leaf and root bags are empty,
so every vertex has a unique topmost node: the child of the node that
forgets it.  A bottom-up pass over bag subsets Y computes N^P[Y], the number
of already-forgotten vertices adjacent to Y; a top-down pass computes N^F[Y]
for the not-yet-seen side.  Per-vertex bag state (neighbour masks, counts of
reachable past vertices, and which bag pairs share a past middle vertex)
closes the gap inside the bag.  Each vertex is emitted exactly once, at its
topmost node.
"""

from __future__ import annotations

import time
import warnings
from bisect import insort
from dataclasses import dataclass

import numpy as np

from .errors import LimitExceeded, ParseError
from .graph import Graph, SizesResult

DEFAULT_WIDTH_CAP = 25

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass
class TreeDecomposition:
    bags: list[tuple[int, ...]]
    tree: list[list[int]]  # adjacency between bag indices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.tree) // 2


@dataclass
class TdReport:
    ok: bool
    violations: list[str]


# ---------------------------------------------------------------------------
# PACE-style .td text format

def parse_td(text: str) -> TreeDecomposition:
    """Parse 's td <#bags> <width+1> <n>' headers, 'b' bag lines, and tree edges.

    Vertices and bag ids are 1-based in the file and 0-based in the result.
    A declared width that disagrees with the bags triggers a warning and the
    recomputed width is used.
    """
    num_bags = -1
    declared_width = 0
    n = 0
    bags: list[tuple[int, ...] | None] = []
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if num_bags >= 0:
                raise ParseError(f"line {lineno}: duplicate 's td' header")
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"line {lineno}: expected header 's td <#bags> <width+1> <n>'")
            try:
                num_bags, declared_width, n = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer value in header") from None
            if num_bags < 0 or n < 0:
                raise ParseError(f"line {lineno}: negative counts in header")
            bags = [None] * num_bags
        elif parts[0] == "b":
            if num_bags < 0:
                raise ParseError(f"line {lineno}: bag line before 's td' header")
            if len(parts) < 2:
                raise ParseError(f"line {lineno}: bag line without an id")
            try:
                bag_id = int(parts[1])
                verts = [int(x) for x in parts[2:]]
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer value in bag line") from None
            if not 1 <= bag_id <= num_bags:
                raise ParseError(f"line {lineno}: bag id {bag_id} out of range [1, {num_bags}]")
            if bags[bag_id - 1] is not None:
                raise ParseError(f"line {lineno}: duplicate bag id {bag_id}")
            for v in verts:
                if not 1 <= v <= n:
                    raise ParseError(f"line {lineno}: vertex {v} out of range [1, {n}]")
            bags[bag_id - 1] = tuple(sorted({v - 1 for v in verts}))
        else:
            if num_bags < 0:
                raise ParseError(f"line {lineno}: edge line before 's td' header")
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected two bag ids")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer bag id") from None
            if not (1 <= a <= num_bags and 1 <= b <= num_bags):
                raise ParseError(f"line {lineno}: bag id out of range [1, {num_bags}]")
            edges.append((a - 1, b - 1))
    if num_bags < 0:
        raise ParseError("missing 's td' header")
    for i, bag in enumerate(bags):
        if bag is None:
            bags[i] = ()
    tree: list[list[int]] = [[] for _ in range(num_bags)]
    for a, b in edges:
        tree[a].append(b)
        tree[b].append(a)
    td = TreeDecomposition(list(bags), tree)
    actual = td.width
    if num_bags and actual != declared_width - 1:
        warnings.warn(
            f"declared width {declared_width - 1} disagrees with bags (width {actual}); "
            f"using the recomputed value")
    return td


def validate_td(g: Graph, td: TreeDecomposition) -> TdReport:
    """Check tree shape, vertex coverage, edge coverage, and occurrence connectivity.

    Reports the first witness of each violated clause instead of raising.
    """
    violations = []
    k = len(td.bags)
    if k == 0:
        if g.n > 0:
            violations.append("decomposition has no bags but the graph has vertices")
        return TdReport(not violations, violations)
    if td.edge_count() != k - 1:
        violations.append(f"bag tree has {k} bags but {td.edge_count()} edges; not a tree")
    else:
        seen = [False] * k
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            b = stack.pop()
            for nb in td.tree[b]:
                if not seen[nb]:
                    seen[nb] = True
                    count += 1
                    stack.append(nb)
        if count != k:
            violations.append("bag tree is disconnected")

    bagsets = [set(b) for b in td.bags]
    occ: list[int] = [0] * g.n
    occ_lists: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                violations.append(f"bag {i} contains vertex {v} outside [0, {g.n})")
                return TdReport(False, violations)
            occ[v] += 1
            occ_lists[v].append(i)
    for v in range(g.n):
        if occ[v] == 0:
            violations.append(f"vertex {v} appears in no bag")
            break
    for u, v in g.edges():
        if not any(v in bagsets[b] for b in occ_lists[u]):
            violations.append(f"edge ({u}, {v}) is contained in no bag")
            break
    shared = [0] * g.n
    done = set()
    for a in range(k):
        for b in td.tree[a]:
            if a < b:
                key = (a, b)
                if key in done:
                    continue
                done.add(key)
                for v in bagsets[a] & bagsets[b]:
                    shared[v] += 1
    for v in range(g.n):
        if occ[v] and occ[v] - shared[v] != 1:
            violations.append(f"bags containing vertex {v} do not form a connected subtree")
            break
    return TdReport(not violations, violations)


# ---------------------------------------------------------------------------
# decomposition sources

def greedy_td(g: Graph, strategy: str = "min-degree") -> TreeDecomposition:
    """Elimination-ordering heuristic decomposition (min-degree or min-fill).

    Always valid; width carries no quality guarantee.  Quadratic-ish in n, so
    intended for small and medium graphs.
    """
    if strategy not in ("min-degree", "min-fill"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n = g.n
    if n == 0:
        return TreeDecomposition([()], [[]])
    nbrs = [set(a) for a in g.adj]
    alive = set(range(n))
    elim_order: list[int] = []
    elim_nbrs: list[list[int]] = []

    def fill_count(v: int) -> int:
        lst = list(nbrs[v])
        missing = 0
        for i, a in enumerate(lst):
            na = nbrs[a]
            for b in lst[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    for _ in range(n):
        if strategy == "min-degree":
            v = min(alive, key=lambda x: (len(nbrs[x]), x))
        else:
            v = min(alive, key=lambda x: (fill_count(x), len(nbrs[x]), x))
        around = sorted(nbrs[v])
        elim_order.append(v)
        elim_nbrs.append(around)
        for a in around:
            nbrs[a].discard(v)
        for i, a in enumerate(around):
            na = nbrs[a]
            for b in around[i + 1:]:
                if b not in na:
                    na.add(b)
                    nbrs[b].add(a)
        alive.remove(v)

    index = {v: i for i, v in enumerate(elim_order)}
    bags = [tuple(sorted([v, *around])) for v, around in zip(elim_order, elim_nbrs)]
    tree: list[list[int]] = [[] for _ in range(n)]
    roots = []
    for i, around in enumerate(elim_nbrs):
        if around:
            parent = min(index[u] for u in around)
            tree[i].append(parent)
            tree[parent].append(i)
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        tree[a].append(b)
        tree[b].append(a)
    return TreeDecomposition(bags, tree)


def banded_td(n: int, bandwidth: int) -> TreeDecomposition:
    """Sliding-window path decomposition for graphs whose edges satisfy |u-v| <= bandwidth."""
    if bandwidth < 0:
        raise ValueError("bandwidth must be non-negative")
    if n <= bandwidth + 1:
        return TreeDecomposition([tuple(range(n))], [[]])
    count = n - bandwidth
    bags = [tuple(range(k, k + bandwidth + 1)) for k in range(count)]
    tree: list[list[int]] = [[] for _ in range(count)]
    for i in range(count - 1):
        tree[i].append(i + 1)
        tree[i + 1].append(i)
    return TreeDecomposition(bags, tree)


def cover_star_td(g: Graph, cover) -> TreeDecomposition:
    """Path decomposition of width |cover| from a vertex cover: one bag per outside vertex."""
    x = tuple(sorted(set(cover)))
    rest = [v for v in range(g.n) if v not in set(x)]
    if not rest:
        return TreeDecomposition([x], [[]])
    bags = [tuple(sorted((*x, v))) for v in rest]
    tree: list[list[int]] = [[] for _ in bags]
    for i in range(len(bags) - 1):
        tree[i].append(i + 1)
        tree[i + 1].append(i)
    return TreeDecomposition(bags, tree)


# ---------------------------------------------------------------------------
# nice form

class NiceDecomposition:
    """Rooted decomposition whose nodes are leaf/introduce/forget/join.

    Leaf and root bags are empty; bags are sorted tuples and bag subsets are
    indexed by sorted position, so equal bags index identically and joins
    align elementwise.
    """

    def __init__(self):
        self.kind: list[str] = []
        self.vertex: list[int] = []  # introduced/forgotten vertex, -1 otherwise
        self.bags: list[tuple[int, ...]] = []
        self.children: list[list[int]] = []
        self.parent: list[int] = []
        self.root: int = -1

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def add(self, kind, bag, vertex=-1, children=()) -> int:
        idx = len(self.kind)
        self.kind.append(kind)
        self.bags.append(tuple(bag))
        self.vertex.append(vertex)
        self.children.append(list(children))
        self.parent.append(-1)
        for c in children:
            self.parent[c] = idx
        return idx

    def post_order(self) -> list[int]:
        out = []
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                out.append(node)
                continue
            stack.append((node, True))
            for c in self.children[node]:
                stack.append((c, False))
        return out

    def as_tree_decomposition(self) -> TreeDecomposition:
        tree: list[list[int]] = [[] for _ in range(len(self))]
        for node, par in enumerate(self.parent):
            if par >= 0:
                tree[node].append(par)
                tree[par].append(node)
        return TreeDecomposition(list(self.bags), tree)


def _append_chain(nd: NiceDecomposition, node: int, from_bag, to_bag) -> int:
    # forget the extras first, then introduce the missing vertices, so no
    # intermediate bag exceeds max(|from|, |to|)
    cur = list(from_bag)
    to_set = set(to_bag)
    for v in from_bag:
        if v not in to_set:
            cur.remove(v)
            node = nd.add(FORGET, cur, v, (node,))
    from_set = set(from_bag)
    for v in to_bag:
        if v not in from_set:
            insort(cur, v)
            node = nd.add(INTRODUCE, cur, v, (node,))
    return node


def make_nice(td: TreeDecomposition) -> NiceDecomposition:
    """Convert a valid decomposition to nice form of the same width.

    The tree is rooted at bag 0; each original edge becomes a forget/introduce
    chain, sibling subtrees are combined with binary joins, and a final forget
    chain empties the root bag.
    """
    nd = NiceDecomposition()
    if not td.bags:
        nd.root = nd.add(LEAF, ())
        return nd
    k = len(td.bags)
    parent = [-2] * k
    order = [0]
    parent[0] = -1
    for b in order:
        for nb in td.tree[b]:
            if parent[nb] == -2:
                parent[nb] = b
                order.append(nb)
    if len(order) != k:
        raise ValueError("decomposition tree is disconnected")
    sorted_bags = [tuple(sorted(set(b))) for b in td.bags]
    top = [-1] * k
    for b in reversed(order):
        bag = sorted_bags[b]
        tops = []
        for nb in td.tree[b]:
            if nb != parent[b]:
                tops.append(_append_chain(nd, top[nb], sorted_bags[nb], bag))
        if not tops:
            leaf = nd.add(LEAF, ())
            tops.append(_append_chain(nd, leaf, (), bag))
        while len(tops) > 1:
            left = tops.pop()
            right = tops.pop()
            tops.append(nd.add(JOIN, bag, children=(left, right)))
        top[b] = tops[0]
    nd.root = _append_chain(nd, top[0], sorted_bags[0], ())
    return nd


def validate_nice(nd: NiceDecomposition) -> list[str]:
    """Tag-rule violations of a nice decomposition; empty list when sound."""
    violations = []
    forgotten: dict[int, int] = {}
    appears: set[int] = set()
    for i in range(len(nd)):
        kind = nd.kind[i]
        bag = nd.bags[i]
        kids = nd.children[i]
        appears.update(bag)
        if kind == LEAF:
            if kids:
                violations.append(f"node {i}: leaf with children")
            if bag:
                violations.append(f"node {i}: leaf bag is not empty")
        elif kind == INTRODUCE:
            if len(kids) != 1:
                violations.append(f"node {i}: introduce without exactly one child")
                continue
            v = nd.vertex[i]
            cbag = nd.bags[kids[0]]
            if v in cbag or tuple(sorted((*cbag, v))) != bag:
                violations.append(f"node {i}: bag is not child bag plus {v}")
        elif kind == FORGET:
            if len(kids) != 1:
                violations.append(f"node {i}: forget without exactly one child")
                continue
            v = nd.vertex[i]
            cbag = nd.bags[kids[0]]
            if v not in cbag or tuple(x for x in cbag if x != v) != bag:
                violations.append(f"node {i}: bag is not child bag minus {v}")
            forgotten[v] = forgotten.get(v, 0) + 1
        elif kind == JOIN:
            if len(kids) != 2:
                violations.append(f"node {i}: join without exactly two children")
                continue
            if nd.bags[kids[0]] != bag or nd.bags[kids[1]] != bag:
                violations.append(f"node {i}: join children bags differ from the node bag")
        else:
            violations.append(f"node {i}: unknown tag {kind!r}")
    if nd.bags[nd.root]:
        violations.append("root bag is not empty")
    for v in appears:
        if forgotten.get(v, 0) != 1:
            violations.append(f"vertex {v} is forgotten {forgotten.get(v, 0)} times")
            break
    return violations


# ---------------------------------------------------------------------------
# subset-table index maps, cached per (bits, position)

_DROP: dict[tuple[int, int], np.ndarray] = {}
_INS0: dict[tuple[int, int], np.ndarray] = {}
_ARANGE: dict[int, np.ndarray] = {}


def _drop_map(bits: int, pos: int) -> np.ndarray:
    # length 2^bits; removes bit `pos`, compacting the higher bits down
    key = (bits, pos)
    arr = _DROP.get(key)
    if arr is None:
        ar = np.arange(1 << bits, dtype=np.int64)
        arr = ((ar >> (pos + 1)) << pos) | (ar & ((1 << pos) - 1))
        _DROP[key] = arr
    return arr


def _ins0_map(bits: int, pos: int) -> np.ndarray:
    # length 2^bits; inserts a zero bit at `pos`
    key = (bits, pos)
    arr = _INS0.get(key)
    if arr is None:
        ar = np.arange(1 << bits, dtype=np.int64)
        arr = ((ar >> pos) << (pos + 1)) | (ar & ((1 << pos) - 1))
        _INS0[key] = arr
    return arr


def _arange(bits: int) -> np.ndarray:
    arr = _ARANGE.get(bits)
    if arr is None:
        arr = np.arange(1 << bits, dtype=np.int64)
        _ARANGE[bits] = arr
    return arr


def _mask_in(adjset: set[int], bag) -> int:
    m = 0
    for j, u in enumerate(bag):
        if u in adjset:
            m |= 1 << j
    return m


# ---------------------------------------------------------------------------
# DP tables

def past_tables(g: Graph, nd: NiceDecomposition) -> list[np.ndarray]:
    """N^P per node: entry Y counts neighbours of Y among vertices forgotten below.

    Recurrences: leaf zero; introduce copies the child entry of Y minus the
    new vertex (an introduced vertex has no forgotten neighbours); forget adds
    one when the departing vertex is adjacent to Y; join adds elementwise.
    """
    adjsets = g.adj_sets
    out: list[np.ndarray | None] = [None] * len(nd)
    for i in nd.post_order():
        kind = nd.kind[i]
        if kind == LEAF:
            out[i] = np.zeros(1, dtype=np.int64)
        elif kind == INTRODUCE:
            c = nd.children[i][0]
            pos = nd.bags[i].index(nd.vertex[i])
            out[i] = out[c][_drop_map(len(nd.bags[i]), pos)]
        elif kind == FORGET:
            c = nd.children[i][0]
            v = nd.vertex[i]
            cbag = nd.bags[c]
            pos = cbag.index(v)
            emb = _ins0_map(len(nd.bags[i]), pos)
            adjmask = _mask_in(adjsets[v], cbag)
            out[i] = out[c][emb] + ((emb & adjmask) != 0)
        else:
            a, b = nd.children[i]
            out[i] = out[a] + out[b]
    return out


def future_tables(g: Graph, nd: NiceDecomposition, past: list[np.ndarray]) -> list[np.ndarray]:
    """N^F per node: entry Y counts neighbours of Y among vertices never seen below.

    Walking down from the root: below an introduce, the introduced vertex
    moves to the future, adding its adjacency indicator; below a forget,
    the child entry is the parent entry with the forgotten vertex removed
    from Y (it has no future neighbours there); below a join, the sibling's
    past joins the future.
    """
    adjsets = g.adj_sets
    out: list[np.ndarray | None] = [None] * len(nd)
    out[nd.root] = np.zeros(1, dtype=np.int64)
    stack = [nd.root]
    while stack:
        i = stack.pop()
        tab = out[i]
        kind = nd.kind[i]
        kids = nd.children[i]
        if kind == INTRODUCE:
            c = kids[0]
            v = nd.vertex[i]
            pos = nd.bags[i].index(v)
            cbag = nd.bags[c]
            bits = len(cbag)
            adjmask = _mask_in(adjsets[v], cbag)
            out[c] = tab[_ins0_map(bits, pos)] + ((_arange(bits) & adjmask) != 0)
        elif kind == FORGET:
            c = kids[0]
            cbag = nd.bags[c]
            pos = cbag.index(nd.vertex[i])
            out[c] = tab[_drop_map(len(cbag), pos)]
        elif kind == JOIN:
            a, b = kids
            out[a] = tab + past[b]
            out[b] = tab + past[a]
        stack.extend(kids)
    return out


class _BagState:
    """Per-vertex state carried along the bottom-up pass.

    adjx[u]: mask of N(u) inside the bag; cnt[u]: forgotten vertices within
    distance 2 of u; common[u]: mask of bag vertices sharing a forgotten
    middle vertex with u (kept symmetric, diagonal ignored).
    """

    __slots__ = ("adjx", "cnt", "common")

    def __init__(self):
        self.adjx: dict[int, int] = {}
        self.cnt: dict[int, int] = {}
        self.common: dict[int, int] = {}

    def introduce(self, bag, v: int, pos: int, vadj: set[int]) -> int:
        # reindex for the inserted position, wire up mutual adjacency bits;
        # the caller initialises cnt[v] from the past table
        vbit = 1 << pos
        low = vbit - 1
        adjx = self.adjx
        common = self.common
        vmask = 0
        for j, u in enumerate(bag):
            if u == v:
                continue
            m = adjx[u]
            m = ((m >> pos) << (pos + 1)) | (m & low)
            c = common[u]
            common[u] = ((c >> pos) << (pos + 1)) | (c & low)
            if u in vadj:
                m |= vbit
                vmask |= 1 << j
            adjx[u] = m
        adjx[v] = vmask
        common[v] = 0
        return vmask

    def emit(self, cbag, v: int) -> tuple[int, int]:
        # count of bag vertices within distance 2 of v plus v itself and its
        # past count; the future term is added by the caller
        adjx = self.adjx
        q = adjx[v]
        row = self.common[v]
        xcount = 0
        for j, x in enumerate(cbag):
            if x == v:
                continue
            if q >> j & 1 or row >> j & 1 or q & adjx[x]:
                xcount += 1
        return 1 + self.cnt[v] + xcount, q

    def forget(self, cbag, v: int, pos: int) -> None:
        adjx = self.adjx
        cnt = self.cnt
        common = self.common
        vq = adjx.pop(v)
        vrow = common.pop(v)
        cnt.pop(v)
        # v joins the past: bump counts of bag vertices within distance 2 of
        # it, using only pre-update state
        for j, u in enumerate(cbag):
            if u == v:
                continue
            if vq >> j & 1 or vrow >> j & 1 or adjx[u] & vq:
                cnt[u] += 1
        # v becomes a past middle for every pair of its bag neighbours
        rem = vq
        while rem:
            bit = rem & -rem
            rem ^= bit
            x = cbag[bit.bit_length() - 1]
            common[x] |= vq
        low = (1 << pos) - 1
        for u in adjx:
            m = adjx[u]
            adjx[u] = ((m >> (pos + 1)) << pos) | (m & low)
            c = common[u]
            common[u] = ((c >> (pos + 1)) << pos) | (c & low)

    def join_with(self, other: "_BagState") -> "_BagState":
        cnt = self.cnt
        ocnt = other.cnt
        for u in cnt:
            cnt[u] += ocnt[u]
        common = self.common
        ocommon = other.common
        for u in common:
            common[u] |= ocommon[u]
        return self


def second_pass(g: Graph, nd: NiceDecomposition, past: list[np.ndarray],
                future: list[np.ndarray]) -> SizesResult:
    """Assemble closed 2-neighbourhood sizes from precomputed N^P/N^F tables.

    Each vertex is emitted at its topmost node as 1 + past count + bag count
    + N^F at its bag-neighbourhood mask.
    """
    t0 = time.perf_counter()
    adjsets = g.adj_sets
    sizes = [0] * g.n
    states: dict[int, _BagState] = {}
    for i in nd.post_order():
        kind = nd.kind[i]
        if kind == LEAF:
            states[i] = _BagState()
        elif kind == INTRODUCE:
            c = nd.children[i][0]
            st = states.pop(c)
            v = nd.vertex[i]
            bag = nd.bags[i]
            vmask = st.introduce(bag, v, bag.index(v), adjsets[v])
            st.cnt[v] = int(past[i][vmask])
            states[i] = st
        elif kind == FORGET:
            c = nd.children[i][0]
            st = states.pop(c)
            v = nd.vertex[i]
            cbag = nd.bags[c]
            partial, q = st.emit(cbag, v)
            sizes[v] = partial + int(future[c][q])
            st.forget(cbag, v, cbag.index(v))
            states[i] = st
        else:
            a, b = nd.children[i]
            states[i] = states.pop(a).join_with(states.pop(b))
    return SizesResult(2, "closed", sizes, "tw", time.perf_counter() - t0,
                       param=nd.width)


def _solve_streaming(g: Graph, nd: NiceDecomposition) -> tuple[list[int], int]:
    # Fused version of past_tables/future_tables/second_pass that keeps only
    # a frontier of live tables: chains hold O(1) tables, and join children's
    # past tables are retained until the downward pass consumes them.
    adjsets = g.adj_sets
    kind = nd.kind
    bags = nd.bags
    children = nd.children
    vertex = nd.vertex
    sizes = [0] * g.n

    ptab: dict[int, np.ndarray] = {}
    states: dict[int, _BagState] = {}
    join_keep: dict[int, np.ndarray] = {}
    emissions: dict[int, tuple[int, int, int]] = {}
    live = 0
    peak = 0

    for i in nd.post_order():
        kd = kind[i]
        bag = bags[i]
        if kd == LEAF:
            tab = np.zeros(1, dtype=np.int64)
            st = _BagState()
        elif kd == INTRODUCE:
            c = children[i][0]
            ctab = ptab.pop(c)
            st = states.pop(c)
            live -= len(ctab)
            v = vertex[i]
            pos = bag.index(v)
            tab = ctab[_drop_map(len(bag), pos)]
            vmask = st.introduce(bag, v, pos, adjsets[v])
            st.cnt[v] = int(tab[vmask])
        elif kd == FORGET:
            c = children[i][0]
            ctab = ptab.pop(c)
            st = states.pop(c)
            live -= len(ctab)
            v = vertex[i]
            cbag = bags[c]
            pos = cbag.index(v)
            partial, q = st.emit(cbag, v)
            emissions[c] = (v, q, partial)
            st.forget(cbag, v, pos)
            emb = _ins0_map(len(bag), pos)
            tab = ctab[emb] + ((emb & _mask_in(adjsets[v], cbag)) != 0)
        else:
            a, b = children[i]
            ta = ptab.pop(a)
            tb = ptab.pop(b)
            st = states.pop(a).join_with(states.pop(b))
            tab = ta + tb
            join_keep[a] = ta  # still live; accounted below
            join_keep[b] = tb
        ptab[i] = tab
        states[i] = st
        live += len(tab)
        if live > peak:
            peak = live

    root = nd.root
    live -= len(ptab.pop(root))
    states.pop(root)

    ftab: dict[int, np.ndarray] = {root: np.zeros(1, dtype=np.int64)}
    live += 1
    stack = [root]
    while stack:
        i = stack.pop()
        tab = ftab.pop(i)
        em = emissions.get(i)
        if em is not None:
            v, q, partial = em
            sizes[v] = partial + int(tab[q])
        kd = kind[i]
        kids = children[i]
        if kd == INTRODUCE:
            c = kids[0]
            v = vertex[i]
            pos = bags[i].index(v)
            cbag = bags[c]
            bits = len(cbag)
            ftab[c] = tab[_ins0_map(bits, pos)] + ((_arange(bits) & _mask_in(adjsets[v], cbag)) != 0)
            live += len(ftab[c])
        elif kd == FORGET:
            c = kids[0]
            cbag = bags[c]
            pos = cbag.index(vertex[i])
            ftab[c] = tab[_drop_map(len(cbag), pos)]
            live += len(ftab[c])
        elif kd == JOIN:
            a, b = kids
            pa = join_keep.pop(a)
            pb = join_keep.pop(b)
            ftab[a] = tab + pb
            ftab[b] = tab + pa
            live += len(ftab[a]) + len(ftab[b]) - len(pa) - len(pb)
        live -= len(tab)
        if live > peak:
            peak = live
        stack.extend(kids)
    return sizes, peak


def solve_tw(g: Graph, td: TreeDecomposition | None = None, strategy: str = "min-degree",
             width_cap: int = DEFAULT_WIDTH_CAP) -> SizesResult:
    """Closed 2-neighbourhood sizes from a tree decomposition.

    Uses greedy_td when no decomposition is supplied; the input is validated,
    converted to nice form, and solved with streaming tables.  Widths above
    width_cap are refused since table memory grows as 2^width.
    """
    t0 = time.perf_counter()
    if td is None:
        td = greedy_td(g, strategy)
    report = validate_td(g, td)
    if not report.ok:
        raise ValueError(f"invalid tree decomposition: {report.violations[0]}")
    w = td.width
    if w > width_cap:
        raise LimitExceeded(
            f"decomposition width {w} exceeds the cap {width_cap}; supply a narrower "
            f"decomposition or raise width_cap")
    nd = make_nice(td)
    sizes, peak = _solve_streaming(g, nd)
    return SizesResult(2, "closed", sizes, "tw", time.perf_counter() - t0,
                       param=w, tables=peak)
