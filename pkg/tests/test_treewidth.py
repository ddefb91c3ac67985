import random

import pytest

import nbrsizes as nb
from oracles import check_nice_structure, definitional_node_tables

P3 = nb.Graph(3, [(0, 1), (1, 2)])
P3_TD_TEXT = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2"


def small_random(rng, max_n=30, max_extra=2.0):
    n = rng.randrange(1, max_n + 1)
    m = rng.randrange(0, min(int(max_extra * n), n * (n - 1) // 2) + 1)
    return nb.gnm(n, m, rng.randrange(1 << 30))


# ---------------------------------------------------------------------------
# parsing

def test_parse_td_example():
    td = nb.parse_td(P3_TD_TEXT)
    assert td.bags == [(0, 1), (1, 2)]
    assert td.tree == [[1], [0]]
    assert td.width == 1


def test_parse_td_missing_header():
    with pytest.raises(nb.ParseError, match="header"):
        nb.parse_td("b 1 1 2\n")


def test_parse_td_width_mismatch_warns_and_recomputes():
    with pytest.warns(UserWarning, match="recomputed"):
        td = nb.parse_td("s td 2 3 3\nb 1 1 2\nb 2 2 3\n1 2")
    assert td.width == 1


def test_parse_td_rejects_bad_indices():
    with pytest.raises(nb.ParseError, match="out of range"):
        nb.parse_td("s td 2 2 3\nb 1 1 9\nb 2 2 3\n1 2")
    with pytest.raises(nb.ParseError, match="out of range"):
        nb.parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 5")
    with pytest.raises(nb.ParseError, match="duplicate"):
        nb.parse_td("s td 2 2 3\nb 1 1 2\nb 1 2 3\n1 2")


def test_parse_td_allows_comments_and_empty_bags():
    td = nb.parse_td("c hello\ns td 2 3 3\nb 1 1 2 3\nb 2\n1 2")
    assert td.bags[1] == ()


# ---------------------------------------------------------------------------
# validation

def test_validate_td_accepts_p3_decomposition():
    td = nb.parse_td(P3_TD_TEXT)
    assert nb.validate_td(P3, td).ok


def test_validate_td_reports_uncovered_edge():
    td = nb.TreeDecomposition([(0, 1)], [[]])
    report = nb.validate_td(P3, td)
    assert not report.ok
    assert any("edge (1, 2)" in v for v in report.violations)


def test_validate_td_reports_missing_vertex():
    g = nb.Graph(3, [(0, 1)])
    td = nb.TreeDecomposition([(0, 1)], [[]])
    report = nb.validate_td(g, td)
    assert any("vertex 2" in v for v in report.violations)


def test_validate_td_reports_disconnected_occurrence():
    # vertex 0 sits in two bags joined only through a bag lacking it
    g = nb.Graph(3, [(0, 1), (1, 2)])
    td = nb.TreeDecomposition([(0, 1), (1,), (0, 1, 2)], [[1], [0, 2], [1]])
    report = nb.validate_td(g, td)
    assert any("connected subtree" in v for v in report.violations)


def test_validate_td_reports_non_tree():
    td = nb.TreeDecomposition([(0, 1), (1, 2)], [[], []])
    report = nb.validate_td(P3, td)
    assert any("tree" in v for v in report.violations)


# ---------------------------------------------------------------------------
# nice form

def test_make_nice_single_bag_chain():
    td = nb.TreeDecomposition([(0, 1, 2)], [[]])
    ndec = nb.make_nice(td)
    kinds = [ndec.kind[i] for i in ndec.post_order()]
    assert kinds == ["leaf"] + ["introduce"] * 3 + ["forget"] * 3
    assert ndec.bags[ndec.root] == ()
    assert not nb.validate_nice(ndec)


def test_make_nice_collapses_equal_bags():
    td = nb.TreeDecomposition([(0, 1), (0, 1)], [[1], [0]])
    ndec = nb.make_nice(td)
    assert all(k != "join" for k in ndec.kind)
    assert not nb.validate_nice(ndec)


def test_make_nice_duplicates_within_bag_are_dropped():
    td = nb.TreeDecomposition([(0, 0, 1)], [[]])
    ndec = nb.make_nice(td)
    assert not nb.validate_nice(ndec)


def test_make_nice_random_structural_rules():
    rng = random.Random(7)
    for _ in range(40):
        g = small_random(rng)
        td = nb.greedy_td(g, "min-degree" if rng.random() < 0.5 else "min-fill")
        ndec = nb.make_nice(td)
        assert not nb.validate_nice(ndec)
        assert not check_nice_structure(ndec)
        assert ndec.width == td.width
        flat = ndec.as_tree_decomposition()
        assert nb.validate_td(g, flat).ok


def test_validate_nice_flags_problems():
    ndec = nb.NiceDecomposition()
    leaf = ndec.add("leaf", (0,))
    ndec.root = leaf
    assert nb.validate_nice(ndec)


# ---------------------------------------------------------------------------
# decomposition sources

def test_greedy_td_tree_has_width_one():
    rng = random.Random(11)
    edges = [(0, 1)]
    for v in range(2, 40):
        edges.append((rng.randrange(v), v))
    g = nb.Graph(40, edges)
    td = nb.greedy_td(g)
    assert td.width == 1
    assert nb.validate_td(g, td).ok


def test_greedy_td_cycle_width_two():
    g = nb.Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    td = nb.greedy_td(g)
    assert td.width == 2
    assert nb.validate_td(g, td).ok


def test_greedy_td_grid_min_fill():
    g = nb.grid(3, 3)
    td = nb.greedy_td(g, "min-fill")
    assert td.width <= 4
    assert nb.validate_td(g, td).ok


def test_greedy_td_valid_on_disconnected_graphs():
    rng = random.Random(13)
    for _ in range(25):
        g = small_random(rng, max_extra=0.7)
        for strategy in ("min-degree", "min-fill"):
            assert nb.validate_td(g, nb.greedy_td(g, strategy)).ok


def test_banded_td_covers_grids():
    g = nb.grid(9, 4)
    td = nb.banded_td(g.n, 4)
    assert td.width == 4
    assert nb.validate_td(g, td).ok


def test_cover_star_td_valid_and_width_is_cover_size():
    g = nb.split_graph(15, 3, 0.6, seed=5)
    td = nb.cover_star_td(g, [0, 1, 2])
    assert td.width == 3
    assert nb.validate_td(g, td).ok


# ---------------------------------------------------------------------------
# tables

def p3_nice():
    return nb.make_nice(nb.parse_td(P3_TD_TEXT))


def test_past_table_hand_case_p3():
    ndec = p3_nice()
    tabs = nb.past_tables(P3, ndec)
    # bag {1} occurs twice on the spine: just after the first endpoint is
    # forgotten (one past neighbour of 1) and after both are (two)
    values = sorted(int(tabs[i][1]) for i in range(len(ndec))
                    if ndec.kind[i] == "forget" and ndec.bags[i] == (1,))
    assert values == [1, 2]


def test_tables_empty_subset_is_zero():
    rng = random.Random(17)
    for _ in range(10):
        g = small_random(rng, max_n=15)
        ndec = nb.make_nice(nb.greedy_td(g))
        past = nb.past_tables(g, ndec)
        future = nb.future_tables(g, ndec, past)
        assert future[ndec.root].tolist() == [0]
        for i in range(len(ndec)):
            assert past[i][0] == 0 and future[i][0] == 0
            assert len(past[i]) == 1 << len(ndec.bags[i])
            assert len(future[i]) == 1 << len(ndec.bags[i])


def test_tables_match_definitional_oracle():
    rng = random.Random(19)
    checked = 0
    while checked < 12:
        g = small_random(rng, max_n=30)
        td = nb.greedy_td(g)
        if td.width > 8:
            continue
        checked += 1
        ndec = nb.make_nice(td)
        past = nb.past_tables(g, ndec)
        future = nb.future_tables(g, ndec, past)
        want_past, want_future = definitional_node_tables(g, ndec)
        for i in range(len(ndec)):
            assert past[i].tolist() == want_past[i]
            assert future[i].tolist() == want_future[i]


def test_tables_monotone_in_subsets():
    g = nb.gnm(20, 35, seed=23)
    ndec = nb.make_nice(nb.greedy_td(g))
    past = nb.past_tables(g, ndec)
    for i in range(len(ndec)):
        tab = past[i]
        for y in range(len(tab)):
            for j in range(len(ndec.bags[i])):
                if not y >> j & 1:
                    assert tab[y] <= tab[y | (1 << j)]


# ---------------------------------------------------------------------------
# solving

def test_second_pass_p3_diameter_two():
    ndec = p3_nice()
    past = nb.past_tables(P3, ndec)
    future = nb.future_tables(P3, ndec, past)
    assert nb.second_pass(P3, ndec, past, future).sizes == [3, 3, 3]


def test_solve_tw_star_width_one():
    g = nb.Graph(5, [(0, i) for i in range(1, 5)])
    td = nb.greedy_td(g)
    assert td.width == 1
    assert nb.solve_tw(g, td).sizes == [5] * 5


def test_solve_tw_equals_bfs_on_random_graphs():
    rng = random.Random(29)
    for _ in range(60):
        g = small_random(rng, max_n=45)
        assert nb.solve_tw(g).sizes == nb.bfs_sizes(g, 2, "closed").sizes


def test_second_pass_agrees_with_streaming_solver():
    rng = random.Random(31)
    for _ in range(20):
        g = small_random(rng, max_n=25)
        td = nb.greedy_td(g)
        ndec = nb.make_nice(td)
        past = nb.past_tables(g, ndec)
        future = nb.future_tables(g, ndec, past)
        assert nb.second_pass(g, ndec, past, future).sizes == nb.solve_tw(g, td).sizes


def test_solve_tw_large_tree_width_one():
    rng = random.Random(37)
    edges = [(rng.randrange(v), v) for v in range(1, 1000)]
    g = nb.Graph(1000, edges)
    td = nb.greedy_td(g)
    assert td.width == 1
    res = nb.solve_tw(g, td)
    assert res.sizes == nb.bfs_sizes(g, 2, "closed").sizes
    assert res.tables is not None and res.tables <= 4 * len(nb.make_nice(td).bags)


def test_solve_tw_width_cap_refused_with_hint():
    g = nb.Graph(31, [(u, v) for u in range(31) for v in range(u + 1, 31)])
    td = nb.TreeDecomposition([tuple(range(31))], [[]])
    with pytest.raises(nb.LimitExceeded, match="width 30.*cap 25"):
        nb.solve_tw(g, td)


def test_solve_tw_rejects_invalid_decomposition():
    td = nb.TreeDecomposition([(0, 1)], [[]])
    with pytest.raises(ValueError, match="invalid tree decomposition"):
        nb.solve_tw(P3, td)


def test_solve_tw_degenerate_shapes():
    assert nb.solve_tw(nb.Graph(0, [])).sizes == []
    assert nb.solve_tw(nb.Graph(1, [])).sizes == [1]
    assert nb.solve_tw(nb.Graph(5, [])).sizes == [1] * 5
    g = nb.Graph(6, [(0, 1), (2, 3)])
    assert nb.solve_tw(g).sizes == [2, 2, 2, 2, 1, 1]


def test_solve_tw_with_banded_decomposition_on_grid():
    g = nb.grid(12, 5)
    res = nb.solve_tw(g, nb.banded_td(g.n, 5))
    assert res.sizes == nb.bfs_sizes(g, 2, "closed").sizes


def test_solve_tw_with_redundant_equal_bags():
    # duplicate every bag and splice the copies into the tree path
    rng = random.Random(41)
    for _ in range(10):
        g = small_random(rng, max_n=20)
        td = nb.greedy_td(g)
        k = len(td.bags)
        bags = list(td.bags) + list(td.bags)
        tree = [list(nbrs) for nbrs in td.tree] + [[] for _ in range(k)]
        for i in range(k):  # hang the copy off the original
            tree[i].append(k + i)
            tree[k + i].append(i)
        doubled = nb.TreeDecomposition(bags, tree)
        assert nb.validate_td(g, doubled).ok
        assert nb.solve_tw(g, doubled).sizes == nb.bfs_sizes(g, 2, "closed").sizes


def test_common_past_middle_state_is_sound():
    # whenever the bag state marks a pair as sharing a past middle vertex,
    # some already-forgotten vertex really is adjacent to both
    from nbrsizes.treewidth import _BagState

    rng = random.Random(43)
    for _ in range(10):
        g = small_random(rng, max_n=20)
        ndec = nb.make_nice(nb.greedy_td(g))
        past = nb.past_tables(g, ndec)
        below = {}
        adjsets = g.adj_sets
        states = {}
        for i in ndec.post_order():
            kind = ndec.kind[i]
            bag = ndec.bags[i]
            if kind == "leaf":
                states[i] = _BagState()
                below[i] = set()
            elif kind == "introduce":
                c = ndec.children[i][0]
                st = states.pop(c)
                v = ndec.vertex[i]
                vmask = st.introduce(bag, v, bag.index(v), adjsets[v])
                st.cnt[v] = int(past[i][vmask])
                states[i] = st
                below[i] = below[c] | {v}
            elif kind == "forget":
                c = ndec.children[i][0]
                st = states.pop(c)
                cbag = ndec.bags[c]
                v = ndec.vertex[i]
                st.emit(cbag, v)
                st.forget(cbag, v, cbag.index(v))
                states[i] = st
                below[i] = below[c]
            else:
                a, b = ndec.children[i]
                states[i] = states.pop(a).join_with(states.pop(b))
                below[i] = below[a] | below[b]
            st = states[i]
            past_set = below[i] - set(bag)
            for u in bag:
                row = st.common[u]
                for j, x in enumerate(bag):
                    if x == u:
                        continue
                    assert row >> j & 1 == (st.common[x] >> bag.index(u)) & 1
                    if row >> j & 1:
                        assert adjsets[u] & adjsets[x] & past_set
