"""CNF parsing, the assignment-graph construction, and SAT via neighbourhood sizes.

The construction splits the variables into two halves and creates one vertex
per half-assignment (classes A and B, each of size N = 2^(half)), one vertex
per clause (class C), and two hubs va, vb.  A half-assignment is joined to
every clause it does not already satisfy; va is joined to vb, all of A, and
all of C; vb to all of B and all of C.  Two half-assignments are then within
distance two exactly when some clause is unsatisfied by both, so the formula
is satisfiable iff some A-vertex has closed 2-neighbourhood size strictly
below the vertex count 2N + m + 2.

Assignment indices are little-endian: bit j of an A-index is the value of
variable j+1, bit j of a B-index the value of variable half+j+1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import LimitExceeded, ParseError
from .graph import Graph, SizesResult, bfs_sizes
from .treewidth import cover_star_td, solve_tw
from .vertexcover import solve_vc

DEFAULT_VAR_CAP = 30  # the graph has 2^(vars/2 + 1) + m + 2 vertices


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[list[int]]  # non-zero signed literals, positive = true


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS cnf: 'p cnf <vars> <clauses>' then zero-terminated clauses.

    Duplicate literals inside a clause are dropped; a clause holding a
    literal and its negation is rejected with its index.
    """
    num_vars = -1
    clauses: list[list[int]] = []
    current: list[int] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars >= 0:
                raise ParseError(f"line {lineno}: duplicate 'p cnf' header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: expected header 'p cnf <vars> <clauses>'")
            try:
                num_vars = int(parts[2])
                declared = int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer value in header") from None
            if num_vars < 0 or declared < 0:
                raise ParseError(f"line {lineno}: negative counts in header")
            continue
        if num_vars < 0:
            raise ParseError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
                seen = set()
                continue
            if not 1 <= abs(lit) <= num_vars:
                raise ParseError(f"line {lineno}: literal {lit} out of range for {num_vars} variables")
            if -lit in seen:
                raise ParseError(f"clause {len(clauses) + 1} is tautological (contains {lit} and {-lit})")
            if lit not in seen:
                seen.add(lit)
                current.append(lit)
    if num_vars < 0:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("unterminated clause at end of input (missing trailing 0)")
    return CnfFormula(num_vars, clauses)


def random_kcnf(num_vars: int, num_clauses: int, k: int = 3, seed: int = 0) -> CnfFormula:
    """Random k-CNF over distinct variables per clause (so never tautological)."""
    if k > num_vars:
        raise ValueError(f"clause width {k} exceeds {num_vars} variables")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return CnfFormula(num_vars, clauses)


@dataclass
class ReductionInstance:
    graph: Graph
    a_range: tuple[int, int]
    b_range: tuple[int, int]
    c_range: tuple[int, int]
    va: int
    vb: int
    threshold: int  # 2N + m + 2, the full vertex count
    num_vars: int   # after padding to even

    def cover_certificate(self) -> list[int]:
        """C plus the two hubs: a vertex cover of size m + 2 by construction."""
        return [*range(self.c_range[0], self.c_range[1]), self.va, self.vb]

    def sidecar(self) -> dict:
        """JSON-ready description of the vertex classes and threshold."""
        return {
            "n": self.graph.n,
            "m": self.graph.m,
            "a_range": list(self.a_range),
            "b_range": list(self.b_range),
            "c_range": list(self.c_range),
            "va": self.va,
            "vb": self.vb,
            "threshold": self.threshold,
            "num_vars": self.num_vars,
            "num_clauses": self.c_range[1] - self.c_range[0],
            "assignment_encoding": "little-endian over each half's variables",
        }


def _half_masks(clause, lo: int, hi: int, offset: int) -> tuple[int, int]:
    pos = neg = 0
    for lit in clause:
        var = abs(lit)
        if lo <= var <= hi:
            bit = 1 << (var - offset)
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
    return pos, neg


def build_reduction(formula: CnfFormula, var_cap: int = DEFAULT_VAR_CAP) -> ReductionInstance:
    """Build the assignment graph for a formula; odd variable counts get one padding variable."""
    padded = formula.num_vars + (formula.num_vars & 1)
    if padded > var_cap:
        raise LimitExceeded(
            f"{padded} variables after padding exceeds the cap {var_cap} "
            f"(the graph would have 2^{padded // 2 + 1} assignment vertices)")
    half = padded // 2
    big_n = 1 << half
    full = big_n - 1
    m = len(formula.clauses)
    va = 2 * big_n + m
    vb = va + 1

    edges = []
    for ci, clause in enumerate(formula.clauses):
        cvert = 2 * big_n + ci
        lpos, lneg = _half_masks(clause, 1, half, 1)
        hpos, hneg = _half_masks(clause, half + 1, padded, half + 1)
        for a in range(big_n):
            # satisfied under the partial assignment: a positive variable set
            # true or a negative variable set false, within this half
            if not ((a & lpos) or (lneg & (full ^ a))):
                edges.append((a, cvert))
        for b in range(big_n):
            if not ((b & hpos) or (hneg & (full ^ b))):
                edges.append((big_n + b, cvert))
    edges.append((va, vb))
    for a in range(big_n):
        edges.append((va, a))
        edges.append((vb, big_n + a))
    for ci in range(m):
        edges.append((va, 2 * big_n + ci))
        edges.append((vb, 2 * big_n + ci))

    graph = Graph(2 * big_n + m + 2, edges)
    return ReductionInstance(
        graph=graph,
        a_range=(0, big_n),
        b_range=(big_n, 2 * big_n),
        c_range=(2 * big_n, 2 * big_n + m),
        va=va,
        vb=vb,
        threshold=2 * big_n + m + 2,
        num_vars=padded,
    )


def brute_sat(formula: CnfFormula, var_cap: int = DEFAULT_VAR_CAP) -> bool:
    """Exhaustive truth-table satisfiability check."""
    n = formula.num_vars
    if n > var_cap:
        raise LimitExceeded(f"{n} variables exceeds the brute-force cap {var_cap}")
    full = (1 << n) - 1
    specs = [_half_masks(clause, 1, n, 1) for clause in formula.clauses]
    for assignment in range(1 << n):
        for pos, neg in specs:
            if not ((assignment & pos) or (neg & (full ^ assignment))):
                break
        else:
            return True
    return False


@dataclass
class SatOutcome:
    satisfiable: bool
    witness: int | None  # index into A of an assignment extendable to a model
    instance: ReductionInstance
    sizes: SizesResult


def sat_via_sizes(formula: CnfFormula, backend: str = "bfs",
                  var_cap: int = DEFAULT_VAR_CAP) -> SatOutcome:
    """Decide satisfiability purely from a backend's closed 2-neighbourhood sizes.

    The formula is satisfiable iff some A-vertex scores below the threshold;
    the first such index (little-endian low-half assignment) is the witness.
    The vc backend runs with the clause-hub cover certificate; the tw backend
    with the width m+2 path decomposition derived from it.
    """
    inst = build_reduction(formula, var_cap)
    g = inst.graph
    if backend == "bfs":
        res = bfs_sizes(g, 2, "closed")
    elif backend == "vc":
        res = solve_vc(g, hint=inst.cover_certificate())
    elif backend == "tw":
        res = solve_tw(g, cover_star_td(g, inst.cover_certificate()))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    witness = None
    lo, hi = inst.a_range
    for idx in range(lo, hi):
        if res.sizes[idx] < inst.threshold:
            witness = idx - lo
            break
    return SatOutcome(witness is not None, witness, inst, res)
