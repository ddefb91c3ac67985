"""Closed second-neighbourhood sizes driven by a vertex cover.

Given a cover X of size t, the complement I is independent, so every path of
length <= 2 between independent vertices runs through X.  Splitting I by
degree at t/2 keeps every set query exponential only in t/2: low-degree
neighbourhoods have at most t/2 bits, and high-degree vertices are queried
through their complement masks, which also have fewer than t/2 bits.  Any two
high-degree vertices share a cover neighbour, so the high part contributes a
constant |I_h| to each of its members.
"""

from __future__ import annotations

import heapq
import time
from collections import Counter
from dataclasses import dataclass

from .errors import LimitExceeded
from .graph import Graph, SizesResult
from .setfamily import (MAX_UNIVERSE, WeightedSetFamily, build_family,
                        intersect_weight, mobius_restrict, subset_weight,
                        superset_weight_table)

DEFAULT_BUDGET = 5_000_000  # approximate work units for the exact cover search


@dataclass
class VertexCoverPartition:
    cover: list[int]
    pos: dict[int, int]      # cover vertex -> bit position
    independent: list[int]
    low: list[int]           # independent vertices with 2*deg <= t
    high: list[int]          # the rest; any two of them are at distance two


@dataclass
class CoverFamilies:
    low: WeightedSetFamily   # neighbourhood masks of low vertices, with multiplicity
    high: WeightedSetFamily  # complement masks X \ N(u) of high vertices


def _uncovered_edge(g: Graph, members: set[int]):
    for u, nbrs in enumerate(g.adj):
        if u in members:
            continue
        for v in nbrs:
            if v not in members:
                return (u, v)
    return None


def greedy_cover(g: Graph) -> list[int]:
    """Max-degree greedy vertex cover; valid for any graph, no size guarantee."""
    deg = [len(a) for a in g.adj]
    heap = [(-d, v) for v, d in enumerate(deg) if d]
    heapq.heapify(heap)
    in_cover = [False] * g.n
    cover = []
    remaining = g.m
    while remaining:
        d, v = heapq.heappop(heap)
        if in_cover[v] or deg[v] != -d:
            continue
        in_cover[v] = True
        cover.append(v)
        for u in g.adj[v]:
            if not in_cover[u]:
                remaining -= 1
                deg[u] -= 1
                if deg[u]:
                    heapq.heappush(heap, (-deg[u], u))
    return cover


def find_vertex_cover(g: Graph, hint=None, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Return a vertex cover: the validated hint, or a minimum one by branching.

    Without a hint, branches on an uncovered edge (take either endpoint),
    pruned by a greedy upper bound.  Raises LimitExceeded once the search
    spends more than `budget` work units.
    """
    if hint is not None:
        cover = []
        seen = set()
        for v in hint:
            if not 0 <= v < g.n:
                raise ValueError(f"cover hint vertex {v} out of range [0, {g.n})")
            if v not in seen:
                seen.add(v)
                cover.append(v)
        bad = _uncovered_edge(g, seen)
        if bad is not None:
            raise ValueError(f"hint is not a vertex cover: edge {bad} is uncovered")
        return cover

    edges = list(g.edges())
    if not edges:
        return []
    best = greedy_cover(g)
    chosen: set[int] = set()
    work = 0

    def branch(start: int) -> None:
        nonlocal best, work
        if len(chosen) >= len(best):
            return
        idx = start
        while idx < len(edges):
            u, v = edges[idx]
            if u in chosen or v in chosen:
                idx += 1
                continue
            break
        work += idx - start + 1
        if work > budget:
            raise LimitExceeded(f"vertex cover search exceeded its budget of {budget}")
        if idx == len(edges):
            best = sorted(chosen)
            return
        u, v = edges[idx]
        for w in (u, v):
            chosen.add(w)
            branch(idx)
            chosen.remove(w)

    branch(0)
    return best


def partition(g: Graph, cover) -> VertexCoverPartition:
    """Split V into the cover and its independent complement, the latter by degree.

    The low/high threshold is degree <= t/2, evaluated as 2*deg <= t so odd t
    needs no floating point; high vertices then satisfy 2*deg > t, which is
    what forces any two of them to share a cover neighbour.
    """
    cover = list(cover)
    members = set(cover)
    if len(members) != len(cover):
        raise ValueError("cover contains duplicate vertices")
    for v in cover:
        if not 0 <= v < g.n:
            raise ValueError(f"cover vertex {v} out of range [0, {g.n})")
    bad = _uncovered_edge(g, members)
    if bad is not None:
        raise ValueError(f"not a vertex cover: edge {bad} is uncovered")
    t = len(cover)
    independent = [v for v in range(g.n) if v not in members]
    low = [v for v in independent if 2 * len(g.adj[v]) <= t]
    lowset = set(low)
    high = [v for v in independent if v not in lowset]
    pos = {x: i for i, x in enumerate(cover)}
    return VertexCoverPartition(cover, pos, independent, low, high)


def cover_sizes(g: Graph, part: VertexCoverPartition) -> list[int]:
    """|N^2[x]| for each cover vertex, by depth-2 BFS with timestamps.

    Returned in the order of part.cover.
    """
    adj = g.adj
    seen = [-1] * g.n
    out = []
    for i, x in enumerate(part.cover):
        seen[x] = i
        count = 1
        nbrs = adj[x]
        for y in nbrs:
            if seen[y] != i:
                seen[y] = i
                count += 1
        for y in nbrs:
            for z in adj[y]:
                if seen[z] != i:
                    seen[z] = i
                    count += 1
        out.append(count)
    return out


def _independent_masks(g: Graph, part: VertexCoverPartition) -> dict[int, int]:
    # N(v) as a cover bitmask; valid because every neighbour of an
    # independent vertex lies in the cover.
    pos = part.pos
    out = {}
    for v in part.independent:
        m = 0
        for u in g.adj[v]:
            m |= 1 << pos[u]
        out[v] = m
    return out


def cover_to_independent_counts(g: Graph, part: VertexCoverPartition) -> dict[int, int]:
    """For each independent v, the number of cover vertices within distance 2.

    Every distance-2 middle from v is one of v's neighbours, and those all
    lie in the cover, so a union of precomputed t-bit masks suffices.
    """
    pos = part.pos
    t = len(part.cover)
    xmask = [0] * t
    for x in part.cover:
        m = 0
        for u in g.adj[x]:
            p = pos.get(u)
            if p is not None:
                m |= 1 << p
        xmask[pos[x]] = m
    counts = {}
    for v in part.independent:
        acc = 0
        for y in g.adj[v]:
            py = pos[y]
            acc |= (1 << py) | xmask[py]
        counts[v] = acc.bit_count()
    return counts


def build_families(g: Graph, part: VertexCoverPartition, masks=None) -> CoverFamilies:
    """Weighted mask families for the low and high independent vertices.

    Low keys are neighbourhood masks (at most floor(t/2) bits); high keys are
    cover complements of neighbourhoods (fewer than t/2 bits).  Weights count
    vertices sharing a key.
    """
    t = len(part.cover)
    if t > MAX_UNIVERSE:
        raise LimitExceeded(f"cover of size {t} exceeds the {MAX_UNIVERSE}-bit mask universe")
    if masks is None:
        masks = _independent_masks(g, part)
    full = (1 << t) - 1
    low_counts = Counter(masks[v] for v in part.low)
    high_counts = Counter(full ^ masks[u] for u in part.high)
    return CoverFamilies(
        low=build_family(low_counts.items(), t),
        high=build_family(high_counts.items(), t),
    )


def solve_vc(g: Graph, hint=None, budget: int = DEFAULT_BUDGET) -> SizesResult:
    """Closed 2-neighbourhood sizes via a vertex cover; exact for any valid cover.

    Cover vertices are charged a depth-2 BFS each.  An independent vertex v
    gets: its cover targets (mask union), the low vertices whose
    neighbourhood meets N(v) (intersection query; this counts v itself when
    deg(v) >= 1), and the complement-style counts against the other side.
    Isolated vertices fall in the low class and contribute only themselves.
    """
    t0 = time.perf_counter()
    cover = find_vertex_cover(g, hint, budget)
    part = partition(g, cover)
    masks = _independent_masks(g, part)
    fams = build_families(g, part, masks)
    csizes = cover_sizes(g, part)
    ctic = cover_to_independent_counts(g, part)

    low_tab = superset_weight_table(fams.low)
    high_tab = superset_weight_table(fams.high)
    n_low = fams.low.total_weight
    n_high = fams.high.total_weight
    t = len(cover)
    full = (1 << t) - 1

    sizes = [0] * g.n
    for i, x in enumerate(part.cover):
        sizes[x] = csizes[i]

    low_meet_cache: dict[int, int] = {}
    for v in part.low:
        q = masks[v]
        meets = low_meet_cache.get(q)
        if meets is None:
            meets = intersect_weight(fams.low, q, mobius_restrict(fams.low, q, low_tab))
            low_meet_cache[q] = meets
        total = ctic[v] + meets + n_high - high_tab.get(q, 0)
        if not g.adj[v]:
            total += 1  # the query terms are all zero; count v itself
        sizes[v] = total

    low_inside_cache: dict[int, int] = {}
    for u in part.high:
        nb = full ^ masks[u]
        inside = low_inside_cache.get(nb)
        if inside is None:
            inside = subset_weight(fams.low, nb)
            low_inside_cache[nb] = inside
        sizes[u] = ctic[u] + n_high + n_low - inside

    return SizesResult(2, "closed", sizes, "vc", time.perf_counter() - t0,
                       param=t, tables=len(low_tab) + len(high_tab))
