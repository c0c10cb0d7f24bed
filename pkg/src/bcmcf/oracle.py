"""Brute-force ground truth for tiny instances, and a fuzz harness around it.

The feasible region ``{0 <= x <= u, conservation, b.x <= B}`` is a polytope,
so its minimum is attained at a vertex. Every vertex is either

* a vertex of the plain flow polytope (a spanning tree with all other edges
  at a bound) whose fee happens to be at most ``B``, or
* a point on the face ``b.x = B`` determined by a spanning tree, one extra
  edge and bounds on the rest.

Both families are enumerated and every basic solution is obtained from a
dense linear solve in exact arithmetic. Nothing here reuses the tree
machinery of the solver.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal, Sequence

from .errors import OracleRefusal
from .instance import Edge, Flow, Instance, is_weakly_connected, serialize_instance
from .preprocess import min_cost_circulation
from .solver import SolveOptions, SolveReport, check_report, solve

Path = Literal["BudgetGate", "Enumeration"]


@dataclass(frozen=True)
class OracleLimits:
    max_nodes: int = 5
    max_edges: int = 9


@dataclass(frozen=True)
class OracleResult:
    objective: Fraction
    witness: Flow
    bases_enumerated: int
    path: Path


def spanning_trees(n: int, edges: Sequence[Edge]) -> list[tuple[int, ...]]:
    """All spanning trees of the underlying undirected multigraph, as sorted edge ids."""
    out: list[tuple[int, ...]] = []

    def find(parent: list[int], v: int) -> int:
        while parent[v] != v:
            v = parent[v]
        return v

    def connectable(start: int, chosen: list[int]) -> bool:
        # prune: chosen edges plus all undecided edges must connect every node
        parent = list(range(n + 1))
        for i in chosen + list(range(start, len(edges))):
            a, b = find(parent, edges[i].tail), find(parent, edges[i].head)
            if a != b:
                parent[a] = b
        return len({find(parent, v) for v in range(1, n + 1)}) == 1

    def rec(i: int, chosen: list[int], parent: list[int]) -> None:
        if len(chosen) == n - 1:
            out.append(tuple(chosen))
            return
        if i == len(edges) or len(edges) - i < n - 1 - len(chosen):
            return
        a, b = find(parent, edges[i].tail), find(parent, edges[i].head)
        if a != b:
            p2 = list(parent)
            p2[a] = b
            rec(i + 1, chosen + [i], p2)
        if connectable(i + 1, chosen):
            rec(i + 1, chosen, parent)

    rec(0, [], list(range(n + 1)))
    return out


def _inverse(rows: list[list[int]]) -> tuple[list[list[int]], int] | None:
    """Exact inverse as ``(integer matrix, positive denominator)``; None if singular."""
    k = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(k)]
           for i, row in enumerate(rows)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv = [row[k:] for row in aug]
    den = math.lcm(*(v.denominator for row in inv for v in row))
    return [[int(v * den) for v in row] for row in inv], den


class _Enumerator:
    def __init__(self, inst: Instance) -> None:
        self.inst = inst
        self.n = inst.n
        self.m = inst.m
        # node-arc incidence with node 1's row dropped (it is implied by the others)
        self.col = [[0] * (self.n - 1) for _ in range(self.m)]
        for i, e in enumerate(inst.edges):
            if e.tail > 1:
                self.col[i][e.tail - 2] -= 1
            if e.head > 1:
                self.col[i][e.head - 2] += 1
        self.count = 0
        self.best: tuple[Fraction, list[Fraction]] | None = None
        self.classic: list[tuple[Fraction, Fraction, list[Fraction]]] = []

    def run_basis(self, basic: tuple[int, ...], with_budget: bool) -> None:
        inst = self.inst
        fees = [e.fee for e in inst.edges]
        rows = [[self.col[j][r] for j in basic] for r in range(self.n - 1)]
        if with_budget:
            rows.append([fees[j] for j in basic])
        inverse = _inverse(rows)
        if inverse is None:
            return
        inv, den = inverse
        nonbasic = [i for i in range(self.m) if i not in basic]
        caps = [e.capacity for e in inst.edges]
        for bits in itertools.product((0, 1), repeat=len(nonbasic)):
            self.count += 1
            rhs = [0] * len(rows)
            if with_budget:
                rhs[-1] = inst.budget
            for i, at_upper in zip(nonbasic, bits):
                if at_upper:
                    u = caps[i]
                    for r in range(self.n - 1):
                        rhs[r] -= self.col[i][r] * u
                    if with_budget:
                        rhs[-1] -= fees[i] * u
            # basic values as numerators over den; bounds checked in integers
            nums = [sum(a * b for a, b in zip(inv[k], rhs)) for k in range(len(basic))]
            if not all(0 <= v <= caps[j] * den for v, j in zip(nums, basic)):
                continue
            x = [Fraction(0)] * self.m
            for i, at_upper in zip(nonbasic, bits):
                if at_upper:
                    x[i] = Fraction(caps[i])
            for v, j in zip(nums, basic):
                x[j] = Fraction(v, den)
            cost = sum((e.cost * v for e, v in zip(inst.edges, x)), Fraction(0))
            fee = sum((e.fee * v for e, v in zip(inst.edges, x)), Fraction(0))
            if not with_budget:
                self.classic.append((cost, fee, x))
                if fee > inst.budget:
                    continue
            if self.best is None or cost < self.best[0]:
                self.best = (cost, x)


def enumerate_optimum(inst: Instance, limits: OracleLimits = OracleLimits()) -> OracleResult:
    """Exact optimum of the budget-constrained problem by vertex enumeration."""
    if inst.n > limits.max_nodes or inst.m > limits.max_edges:
        raise OracleRefusal(
            f"instance with n={inst.n}, m={inst.m} exceeds oracle limits "
            f"n<={limits.max_nodes}, m<={limits.max_edges}")
    if not is_weakly_connected(inst):
        raise OracleRefusal("oracle needs a weakly connected instance")
    en = _Enumerator(inst)
    trees = spanning_trees(inst.n, inst.edges)
    for tree in trees:
        en.run_basis(tree, with_budget=False)
    unconstrained = min(c for c, _, _ in en.classic)
    gate = next((x for c, f, x in en.classic if c == unconstrained and f <= inst.budget), None)
    if gate is not None:
        return OracleResult(unconstrained, Flow.of(inst, gate), en.count, "BudgetGate")
    # a set T + extra arises once per tree edge on its cycle; solve it once
    faces = sorted({tuple(sorted(tree + (extra,))) for tree in trees
                    for extra in range(inst.m) if extra not in tree})
    for basic in faces:
        en.run_basis(basic, with_budget=True)
    assert en.best is not None  # the zero flow is a feasible classic vertex
    cost, x = en.best
    return OracleResult(cost, Flow.of(inst, x), en.count, "Enumeration")


# --------------------------------------------------------------------- fuzzing


@dataclass(frozen=True)
class FuzzRanges:
    n_min: int = 2
    n_max: int = 5
    m_max: int = 9
    cost_max: int = 5
    cap_max: int = 5
    fee_max: int = 3
    fractions: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def random_tiny_instance(rng: random.Random, ranges: FuzzRanges = FuzzRanges()) -> Instance:
    """Spanning cycle plus random extra edges; capacities may be zero."""
    n = rng.randint(ranges.n_min, ranges.n_max)
    m = rng.randint(n, max(n, ranges.m_max))
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    while len(pairs) < m:
        t, h = rng.sample(range(1, n + 1), 2)
        pairs.append((t, h))
    edges = tuple(
        Edge(t, h, rng.randint(0, ranges.cap_max), rng.randint(-ranges.cost_max, ranges.cost_max),
             rng.randint(0, ranges.fee_max))
        for t, h in pairs
    )
    inst = Instance(n, edges, 0)
    fee = min_cost_circulation(inst).fee
    return inst.with_budget(int(rng.choice(ranges.fractions) * fee))


@dataclass
class FuzzCase:
    index: int
    instance: str
    problems: list[str]


@dataclass
class FuzzReport:
    trials: int = 0
    gate_cases: int = 0
    pivots: int = 0
    degenerate_pivots: int = 0
    failures: list[FuzzCase] = field(default_factory=list)
    checks: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def compare(inst: Instance, report: SolveReport, oracle: OracleResult) -> list[str]:
    """Mismatches between a solver report and the oracle on one instance."""
    problems = []
    if report.objective != oracle.objective:
        problems.append(f"objective {report.objective} differs from oracle {oracle.objective}")
    flow = report.flow
    if not flow.is_feasible(inst):
        problems.append("solver flow is infeasible")
    if flow.fee > inst.budget:
        problems.append(f"solver flow fee {flow.fee} exceeds budget {inst.budget}")
    problems += check_report(report, inst)
    return problems


def fuzz_equivalence(count: int, ranges: FuzzRanges = FuzzRanges(), seed: int = 0,
                     solver: Callable[[Instance, SolveOptions], SolveReport] = solve,
                     options: SolveOptions | None = None,
                     limits: OracleLimits = OracleLimits()) -> FuzzReport:
    """Run solver and oracle on ``count`` random tiny instances and compare."""
    options = options or SolveOptions(record_trace=False)
    rng = random.Random(seed)
    out = FuzzReport()
    for k in range(count):
        inst = random_tiny_instance(rng, ranges)
        out.trials += 1
        text = serialize_instance(inst, [f"fuzz seed {seed} case {k}"])
        oracle = enumerate_optimum(inst, limits)
        try:
            report = solver(inst, options)
        except Exception as exc:  # a crash is a failed trial, not an abort
            out.failures.append(FuzzCase(k, text, [f"{type(exc).__name__}: {exc}"]))
            continue
        if report.status == "OptimalViaBudgetGate":
            out.gate_cases += 1
        out.pivots += report.pivots_total
        out.degenerate_pivots += report.pivots_degenerate
        for key, v in report.checks.items():
            out.checks[key] = out.checks.get(key, 0) + v
        problems = compare(inst, report, oracle)
        if problems:
            out.failures.append(FuzzCase(k, text, problems))
    return out
