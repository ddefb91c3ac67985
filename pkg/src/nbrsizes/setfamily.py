"""Weighted families of bitmask sets with batched subset/superset/intersection weight queries.

Sets over a universe of at most 64 elements are machine-word bitmasks with
element i at bit i.  Three queries are supported for a query mask Q:

  superset weight  -- total weight of members H with H >= Q,
  subset weight    -- total weight of members H with H <= Q,
  intersect weight -- total weight of members H with H & Q != 0.

Superset weights come from one table built by enumerating each member's
subsets; intersection weights go through the fast Moebius transform on the
sub-lattice of Q.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LimitExceeded

MAX_UNIVERSE = 64


@dataclass(frozen=True)
class WeightedSetFamily:
    universe_size: int
    entries: dict[int, int]  # bitmask -> positive integer weight
    total_weight: int
    max_card: int


@dataclass(frozen=True)
class QueryAnswer:
    superset_weight: int
    subset_weight: int
    intersect_weight: int


def _check_mask(mask: int, universe_size: int) -> None:
    if mask < 0 or mask >> universe_size:
        raise ValueError(f"mask {mask:#x} does not fit a universe of {universe_size} elements")


def build_family(pairs, universe_size: int) -> WeightedSetFamily:
    """Build a family from (bitmask, weight) pairs, merging duplicate masks.

    Weights must be non-negative integers; entries whose merged weight is
    zero are dropped.
    """
    if universe_size < 0 or universe_size > MAX_UNIVERSE:
        raise LimitExceeded(
            f"universe of {universe_size} elements exceeds the {MAX_UNIVERSE}-bit word limit")
    entries: dict[int, int] = {}
    for mask, weight in pairs:
        _check_mask(mask, universe_size)
        if weight < 0:
            raise ValueError(f"negative weight {weight} for mask {mask:#x}")
        if weight:
            entries[mask] = entries.get(mask, 0) + weight
    entries = {m: w for m, w in entries.items() if w}
    total = sum(entries.values())
    max_card = max((m.bit_count() for m in entries), default=0)
    return WeightedSetFamily(universe_size, entries, total, max_card)


def superset_weight_table(fam: WeightedSetFamily) -> dict[int, int]:
    """Map every subset S of some member to the total weight of members >= S.

    Built with sum over members of 2^|H| dictionary updates; masks absent
    from the table have superset weight zero.
    """
    table: dict[int, int] = {}
    for h, w in fam.entries.items():
        sub = h
        while True:
            table[sub] = table.get(sub, 0) + w
            if sub == 0:
                break
            sub = (sub - 1) & h
    return table


def subset_weight(fam: WeightedSetFamily, q: int) -> int:
    """Total weight of members contained in q, by enumerating q's subsets."""
    _check_mask(q, fam.universe_size)
    entries = fam.entries
    get = entries.get
    total = 0
    sub = q
    while True:
        total += get(sub, 0)
        if sub == 0:
            break
        sub = (sub - 1) & q
    return total


def bit_positions(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mobius_restrict(fam: WeightedSetFamily, q: int, table: dict[int, int]) -> list[int]:
    """Weights of members grouped by their exact intersection with q.

    Returns a dense array of length 2^|q| where position i holds the total
    weight of members H with H & q equal to the i-th subset of q; subsets of
    q are indexed by compacting q's bits (bit j of i stands for the j-th set
    bit of q).  Computed from the superset table by the in-place fast
    Moebius transform, one dimension at a time.
    """
    _check_mask(q, fam.universe_size)
    qbits = bit_positions(q)
    k = len(qbits)
    size = 1 << k
    get = table.get
    f = [0] * size
    f[0] = get(0, 0)
    expand = [0] * size
    for idx in range(1, size):
        low = idx & -idx
        expand[idx] = expand[idx ^ low] | (1 << qbits[low.bit_length() - 1])
        f[idx] = get(expand[idx], 0)
    for j in range(k):
        bit = 1 << j
        for idx in range(size):
            if not idx & bit:
                f[idx] -= f[idx | bit]
    return f


def intersect_weight(fam: WeightedSetFamily, q: int, wq: list[int]) -> int:
    """Total weight of members meeting q, given the mobius_restrict array for q.

    Members disjoint from q are exactly those whose intersection with q is
    empty, so the answer is total weight minus the empty-intersection cell.
    """
    return fam.total_weight - wq[0]


def batch_queries(fam: WeightedSetFamily, queries) -> list[QueryAnswer]:
    """Answer all three weight queries for each mask, sharing one superset table."""
    table = superset_weight_table(fam)
    out = []
    for q in queries:
        wq = mobius_restrict(fam, q, table)
        out.append(QueryAnswer(
            superset_weight=table.get(q, 0),
            subset_weight=subset_weight(fam, q),
            intersect_weight=fam.total_weight - wq[0],
        ))
    return out
