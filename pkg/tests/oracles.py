"""Independent brute-force oracles used to pin expected values.

Everything here recomputes results from definitions, without touching the
code paths under test: Floyd-Warshall for distances, full subset enumeration
for covers and set queries, and literal past/future recomputation for
decomposition tables.
"""

import random

INF = float("inf")


def floyd_warshall_sizes(g, r, mode):
    """Per-vertex neighbourhood sizes from an all-pairs distance matrix."""
    n = g.n
    dist = [[INF] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = 0
    for u, v in g.edges():
        dist[u][v] = dist[v][u] = 1
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    if mode == "closed":
        return [sum(1 for j in range(n) if dist[i][j] <= r) for i in range(n)]
    return [sum(1 for j in range(n) if dist[i][j] == r) for i in range(n)]


def diameter(g):
    """Largest finite pairwise distance (0 for empty graphs)."""
    n = g.n
    if n == 0:
        return 0
    dist = [[INF] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = 0
    for u, v in g.edges():
        dist[u][v] = dist[v][u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                alt = dist[i][k] + dist[k][j]
                if alt < dist[i][j]:
                    dist[i][j] = alt
    finite = [d for row in dist for d in row if d < INF]
    return max(finite)


def is_connected(g):
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def exhaustive_min_cover_size(g):
    """Minimum vertex cover size by enumerating all vertex subsets."""
    edge_masks = [(1 << u) | (1 << v) for u, v in g.edges()]
    if not edge_masks:
        return 0
    best = g.n
    for mask in range(1 << g.n):
        if mask.bit_count() >= best:
            continue
        for em in edge_masks:
            if not mask & em:
                break
        else:
            best = mask.bit_count()
    return best


def brute_family_queries(entries, q):
    """(superset, subset, intersect) weights by scanning every member."""
    sup = sub = inter = 0
    for h, w in entries.items():
        if h & q == q:
            sup += w
        if h & q == h:
            sub += w
        if h & q:
            inter += w
    return sup, sub, inter


def definitional_node_tables(g, nd):
    """Exact N^P and N^F for every nice node, recomputed from the definitions.

    The past of a node is everything in bags strictly below it minus its own
    bag; the future is the rest of the graph.
    """
    n_nodes = len(nd)
    below = [None] * n_nodes
    for i in nd.post_order():
        acc = set(nd.bags[i])
        for c in nd.children[i]:
            acc |= below[c]
        below[i] = acc
    all_vertices = set(range(g.n))
    past_tabs = []
    future_tabs = []
    for i in range(n_nodes):
        bag = nd.bags[i]
        past = below[i] - set(bag)
        future = all_vertices - below[i]
        np_tab = []
        nf_tab = []
        for y in range(1 << len(bag)):
            nbrs = set()
            for j, v in enumerate(bag):
                if y >> j & 1:
                    nbrs.update(g.adj[v])
            np_tab.append(len(nbrs & past))
            nf_tab.append(len(nbrs & future))
        past_tabs.append(np_tab)
        future_tabs.append(nf_tab)
    return past_tabs, future_tabs


def check_nice_structure(nd):
    """Independent tag-rule check; returns a list of problems."""
    problems = []
    for i in range(len(nd)):
        kind = nd.kind[i]
        bag = set(nd.bags[i])
        kids = nd.children[i]
        if kind == "leaf":
            if kids or bag:
                problems.append(f"node {i}: bad leaf")
        elif kind == "introduce":
            cbag = set(nd.bags[kids[0]]) if len(kids) == 1 else None
            if cbag is None or nd.vertex[i] in cbag or bag != cbag | {nd.vertex[i]}:
                problems.append(f"node {i}: bad introduce")
        elif kind == "forget":
            cbag = set(nd.bags[kids[0]]) if len(kids) == 1 else None
            if cbag is None or nd.vertex[i] not in cbag or bag != cbag - {nd.vertex[i]}:
                problems.append(f"node {i}: bad forget")
        elif kind == "join":
            if len(kids) != 2 or any(set(nd.bags[c]) != bag for c in kids):
                problems.append(f"node {i}: bad join")
        else:
            problems.append(f"node {i}: unknown kind {kind}")
    if nd.bags[nd.root]:
        problems.append("root bag not empty")
    return problems


def mixed_corpus(count, seed, max_n=60):
    """Random graphs spanning tree-like to dense shapes, with feasible parameters.

    Includes disconnected graphs, isolated vertices, edgeless graphs, grids,
    and split graphs with small declared covers.  Dense shapes come as small
    dense blocks or as bounded-cover split graphs so the parameterized
    backends stay within their caps.
    """
    import nbrsizes as nb

    rng = random.Random(seed)
    out = []
    shape = 0
    while len(out) < count:
        kind = shape % 6
        shape += 1
        if kind == 0:  # sparse, often disconnected with isolated vertices
            n = rng.randrange(1, max_n + 1)
            m = rng.randrange(0, max(1, n // 2) + 1)
            g = nb.gnm(n, m, rng.randrange(1 << 30))
        elif kind == 1:  # around the tree threshold
            n = rng.randrange(4, max_n + 1)
            m = rng.randrange(n // 2, min(2 * n, n * (n - 1) // 2) + 1)
            g = nb.gnm(n, m, rng.randrange(1 << 30))
        elif kind == 2:  # small and dense
            n = rng.randrange(2, 15)
            mx = n * (n - 1) // 2
            m = rng.randrange(mx // 2, mx + 1)
            g = nb.gnm(n, m, rng.randrange(1 << 30))
        elif kind == 3:  # dense against a small cover
            n = rng.randrange(10, max_n + 1)
            t = rng.randrange(1, 9)
            g = nb.split_graph(n, min(t, n), 0.2 + 0.75 * rng.random(),
                               rng.randrange(1 << 30))
        elif kind == 4:  # grids
            rows = rng.randrange(1, 8)
            cols = rng.randrange(1, max(2, max_n // max(rows, 1)) + 1)
            g = nb.grid(rows, cols)
        else:  # moderate random
            n = rng.randrange(8, max_n + 1)
            m = rng.randrange(n, min(5 * n // 2, n * (n - 1) // 2) + 1)
            g = nb.gnm(n, m, rng.randrange(1 << 30))
        # keep the heuristic width and greedy cover inside the caps the
        # exponential backends are designed for
        if nb.greedy_td(g).width > 16 or len(nb.greedy_cover(g)) > 24:
            continue
        out.append(g)
    return out
