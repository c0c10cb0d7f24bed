"""Driver for the budget-constrained network simplex method.

Pipeline: validate, make strongly connected, solve the budget-free problem
and stop there if it already fits the budget. Otherwise raise the budget to
``B + 1/2`` (so the extra cycle always carries fractional flow), start from
the artificial strongly feasible basis, pivot to optimality, and shift the
extra cycle back to budget ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal

from .basis import (
    BasisStructure,
    Potentials,
    compute_potentials,
    cycle,
    reduced_cost_fee,
    reduced_costs,
    strong_feasibility_check,
)
from .errors import BasisCorruption, InvalidInstance, InvariantViolation
from .instance import Edge, Flow, Instance, augment_strong_connectivity, excess, validate
from .pivot import EdgeArrays, PivotRecord, Rule, apply_pivot, ratio_test, select_entering, select_leaving
from .preprocess import Done, budget_gate, find_negative_cycle, min_cost_circulation

Status = Literal["Optimal", "OptimalViaBudgetGate"]

# node ids of the artificial pair; the root is the tail of the first one
ARTIFICIAL_TAIL = 1
ARTIFICIAL_HEAD = 2


@dataclass
class SolveOptions:
    rule: Rule = "dantzig"
    check_invariants: bool = False
    record_trace: bool = True
    on_pivot: Callable[[int, PivotRecord, Fraction], None] | None = None
    # None selects 1 + n*C, which keeps the artificial pair out of every optimum
    artificial_cost: int | None = None
    max_pivots: int | None = None


@dataclass
class Certificate:
    basis: dict
    pi: tuple[int, ...]
    mu: tuple[int, ...]
    dhat: dict[int, Fraction]
    artificial_cost: int


@dataclass
class SolveReport:
    status: Status
    objective: Fraction
    flow: Flow
    budget_used: Fraction
    pivots_total: int = 0
    pivots_degenerate: int = 0
    pivots_nondegenerate: int = 0
    max_consecutive_degenerate: int = 0
    certificate: Certificate | None = None
    trace: list[PivotRecord] = field(default_factory=list)
    checks: dict[str, int] = field(default_factory=dict)

    @property
    def degenerate_share(self) -> float:
        return self.pivots_degenerate / self.pivots_total if self.pivots_total else 0.0


def transform_budget(budget: int) -> Fraction:
    return Fraction(2 * budget + 1, 2)


def default_artificial_cost(inst: Instance) -> int:
    real = [abs(e.cost) for i, e in enumerate(inst.edges) if i not in inst.artificial_edge_ids]
    return 1 + inst.n * max(real, default=0)


def work_instance(inst: Instance, budget: int, artificial_cost: int) -> Instance:
    """Append the artificial pair ``(v, w)`` with fee B and ``(w, v)`` with fee B+1."""
    v, w = ARTIFICIAL_TAIL, ARTIFICIAL_HEAD
    return inst.with_edges([
        Edge(v, w, 1, artificial_cost, budget),
        Edge(w, v, 1, artificial_cost, budget + 1),
    ])


def initial_basis(inst: Instance, budget: int,
                  artificial_cost: int | None = None) -> tuple[BasisStructure, list[Fraction], Instance]:
    """Strongly feasible starting basis rooted at the tail of the artificial pair.

    The tree is the edge ``(v, w)`` plus an in-tree towards ``w`` found by a
    reverse depth-first search that avoids ``v``; nodes that reach ``w`` only
    through ``v`` are hung below ``v`` by continuing the search from ``v``.
    """
    if artificial_cost is None:
        artificial_cost = default_artificial_cost(inst)
    work = work_instance(inst, budget, artificial_cost)
    e0, e0_rev = inst.m, inst.m + 1
    v, w = ARTIFICIAL_TAIL, ARTIFICIAL_HEAD
    into: list[list[int]] = [[] for _ in range(inst.n + 1)]
    for i, e in enumerate(inst.edges):
        if e.capacity > 0:
            into[e.head].append(i)
    seen = [False] * (inst.n + 1)
    seen[v] = seen[w] = True
    tree = {e0}
    for start in (w, v):
        stack = [start]
        while stack:
            y = stack.pop()
            for i in reversed(into[y]):
                z = inst.edges[i].tail
                if not seen[z]:
                    seen[z] = True
                    tree.add(i)
                    stack.append(z)
    if not all(seen[1:]):
        raise InvalidInstance("instance is not strongly connected")
    lower = set(range(work.m)) - tree - {e0_rev}
    basis = BasisStructure.build(work, lower, tree, set(), e0_rev, v)
    x = [Fraction(0)] * work.m
    x[e0] = x[e0_rev] = Fraction(1, 2)
    return basis, x, work


def restore_original(basis: BasisStructure, x: list[Fraction], budget: int,
                     inst: Instance) -> list[Fraction]:
    """Shift C(extra) so the fee drops from ``B + 1/2`` to ``B``."""
    cyc = cycle(basis.extra, basis, inst)
    shift = Fraction(-1, 2 * cyc.fee(inst))
    out = list(x)
    for i, s in cyc.edges:
        out[i] += s * shift
        if not 0 <= out[i] <= inst.edges[i].capacity:
            raise BasisCorruption(f"restoring the budget pushed edge {i} out of bounds: {out[i]}")
    return out


def _phi(pot: Potentials, ratio: Fraction, sign: int) -> Fraction:
    return sum(pot.pi) + sign * ratio * sum(pot.mu)


def _extra_ratio(basis: BasisStructure, pot: Potentials, inst: Instance) -> Fraction:
    chat_x, bhat_x = reduced_cost_fee(basis.extra, pot, inst)
    return Fraction(chat_x, bhat_x)


def solve(inst: Instance, options: SolveOptions | None = None) -> SolveReport:
    opts = options or SolveOptions()
    problems = validate(inst)
    if problems:
        raise InvalidInstance("; ".join(problems))
    aug = augment_strong_connectivity(inst)
    unconstrained = min_cost_circulation(aug)
    gate = budget_gate(unconstrained, aug.budget)
    if isinstance(gate, Done):
        flow = Flow.of(inst, unconstrained.values[: inst.m])
        return SolveReport("OptimalViaBudgetGate", flow.cost, flow, flow.fee)

    budget = aug.budget
    target = transform_budget(budget)
    artificial_cost = opts.artificial_cost
    if artificial_cost is None:
        artificial_cost = default_artificial_cost(aug)
    basis, x, work = initial_basis(aug, budget, artificial_cost)
    arrays = EdgeArrays(work)
    pot = compute_potentials(basis, work)
    report = SolveReport("Optimal", Fraction(0), Flow.zero(inst), Fraction(0))
    checker = _InvariantChecker(work, target) if opts.check_invariants else None
    objective = sum((e.cost * v for e, v in zip(work.edges, x)), Fraction(0))
    cap = opts.max_pivots
    if cap is None:
        cap = work.n ** 3 * max(1, work.max_abs_cost) * (budget + 1) * work.m
    run = 0
    if checker:
        checker.after_pivot(basis, x, pot, objective, None, None)

    while True:
        choice = select_entering(basis, pot, work, opts.rule, arrays)
        if choice is None:
            break
        if report.pivots_total >= cap:
            raise InvariantViolation(f"pivot cap {cap} exceeded")
        ratio = ratio_test(basis, x, choice, work)
        leaving = select_leaving(ratio)
        phi_ratio = _extra_ratio(basis, pot, work)
        old_pot = pot
        rec = apply_pivot(basis, x, choice, leaving, ratio, work)
        pot = compute_potentials(basis, work)
        if reduced_cost_fee(basis.extra, pot, work)[1] == 0:
            raise BasisCorruption("pivot produced an extra edge with zero cycle fee")
        objective += rec.objective_delta
        report.pivots_total += 1
        if rec.degenerate:
            report.pivots_degenerate += 1
            run += 1
            report.max_consecutive_degenerate = max(report.max_consecutive_degenerate, run)
            # sum of pi - (chat/bhat of extra) * mu falls by |dhat_e| per re-hung node
            if not _phi(pot, phi_ratio, -1) < _phi(old_pot, phi_ratio, -1):
                raise InvariantViolation(
                    f"potential function did not decrease on degenerate pivot {report.pivots_total}")
        else:
            report.pivots_nondegenerate += 1
            run = 0
        if opts.record_trace:
            report.trace.append(rec)
        if opts.on_pivot is not None:
            opts.on_pivot(report.pivots_total, rec, objective)
        if checker:
            checker.after_pivot(basis, x, pot, objective, rec, (old_pot, phi_ratio))

    if checker:
        checker.at_optimum(basis, pot)
        report.checks = checker.counts

    final = restore_original(basis, x, budget, work)
    used = [i for i in work.artificial_edge_ids if final[i] != 0]
    if used:
        raise InvariantViolation(f"artificial edges {sorted(used)} carry flow at the optimum")
    # zero-capacity edges sit at both bounds; file them where their dhat sign is satisfied
    for i in list(basis.lower | basis.upper):
        if work.edges[i].capacity == 0:
            d = reduced_costs(i, pot, basis, work).dhat
            basis.lower.discard(i)
            basis.upper.discard(i)
            (basis.upper if d < 0 else basis.lower).add(i)
    report.certificate = Certificate(
        basis.snapshot(), pot.pi, pot.mu,
        {i: reduced_costs(i, pot, basis, work).dhat for i in sorted(basis.lower | basis.upper)},
        artificial_cost,
    )
    flow = Flow.of(inst, final[: inst.m])
    report.flow = flow
    report.objective = flow.cost
    report.budget_used = flow.fee
    return report


class _InvariantChecker:
    """Per-pivot checks used by the test suite and ``verify``.

    Violations of proven properties raise. The potential function with the
    ``+`` sign is only tallied, since it is not monotone in general.
    """

    def __init__(self, work: Instance, target: Fraction) -> None:
        self.work = work
        self.target = target
        self.counts = {
            "pivots_checked": 0,
            "degenerate_checked": 0,
            "phi_plus_not_decreasing": 0,
            "phi_minus_not_decreasing": 0,
        }
        self.prev_objective: Fraction | None = None

    def fail(self, message: str) -> None:
        raise InvariantViolation(message)

    def after_pivot(self, basis: BasisStructure, x: list[Fraction], pot: Potentials,
                    objective: Fraction, rec: PivotRecord | None, phi_ctx) -> None:
        work = self.work
        n = work.n
        if basis.check_partition(work.m):
            self.fail("basis does not partition the edges")
        fee = sum((e.fee * v for e, v in zip(work.edges, x)), Fraction(0))
        if fee != self.target:
            self.fail(f"fee {fee} differs from transformed budget {self.target}")
        if any(v != 0 for v in excess(work, x)[1:]):
            self.fail("flow conservation violated")
        if not all(0 <= v <= e.capacity for e, v in zip(work.edges, x)):
            self.fail("capacity bounds violated")
        for i in basis.lower:
            if x[i] != 0:
                self.fail(f"L edge {i} carries flow {x[i]}")
        for i in basis.upper:
            if x[i] != work.edges[i].capacity:
                self.fail(f"U edge {i} is not saturated")
        cost = sum((e.cost * v for e, v in zip(work.edges, x)), Fraction(0))
        if cost != objective:
            self.fail("incremental objective drifted from the flow cost")
        cyc = cycle(basis.extra, basis, work)
        cycle_fee = cyc.fee(work)
        if cycle_fee == 0 or reduced_cost_fee(basis.extra, pot, work)[1] != cycle_fee:
            self.fail("extra cycle fee is zero or disagrees with its reduced fee")
        if not strong_feasibility_check(basis, x, work):
            self.fail("basis lost strong feasibility")
        on_cycle = cyc.signs
        for i, v in enumerate(x):
            if (i in on_cycle) == (v.denominator == 1):
                self.fail(f"edge {i}: flow {v} breaks the fractional-cycle pattern")
            if (v * 2 * cycle_fee).denominator != 1:
                self.fail(f"edge {i}: flow {v} is not a multiple of 1/(2*{cycle_fee})")
        for v in range(1, n + 1):
            if abs(pot.pi[v]) > n * work.max_abs_cost or abs(pot.mu[v]) > n * work.max_fee:
                self.fail(f"potential bound violated at node {v}")
        if rec is not None:
            if rec.objective_delta > 0 or (rec.objective_delta == 0) != rec.degenerate:
                self.fail("objective change inconsistent with degeneracy")
            if objective - self.prev_objective != rec.objective_delta:
                self.fail("objective change differs from delta * dhat")
            self.counts["pivots_checked"] += 1
            if rec.degenerate:
                old_pot, ratio = phi_ctx
                self.counts["degenerate_checked"] += 1
                if not _phi(pot, ratio, +1) < _phi(old_pot, ratio, +1):
                    self.counts["phi_plus_not_decreasing"] += 1
                if not _phi(pot, ratio, -1) < _phi(old_pot, ratio, -1):
                    self.counts["phi_minus_not_decreasing"] += 1
        self.prev_objective = objective

    def at_optimum(self, basis: BasisStructure, pot: Potentials) -> None:
        work = self.work
        floor = Fraction(1, work.n * max(1, work.max_fee))
        for i in basis.lower | basis.upper:
            d = reduced_costs(i, pot, basis, work).dhat
            if d != 0 and abs(d) < floor:
                self.fail(f"edge {i}: |dhat| = {abs(d)} below 1/(n*B)")


def check_report(report: SolveReport, inst: Instance) -> list[str]:
    """Independently re-verify a report; returns the violated conditions."""
    problems: list[str] = []
    flow = report.flow
    if len(flow) != inst.m:
        return ["flow length differs from edge count"]
    if not flow.within_bounds(inst):
        problems.append("flow violates capacity bounds")
    if not flow.conserves(inst):
        problems.append("flow violates conservation")
    if flow.cost != report.objective:
        problems.append("objective differs from flow cost")
    if flow.fee != report.budget_used:
        problems.append("budget_used differs from flow fee")
    if report.status == "OptimalViaBudgetGate":
        if flow.fee > inst.budget:
            problems.append("flow exceeds the budget")
        if not flow.is_integral():
            problems.append("budget-gate flow is not integral")
        elif find_negative_cycle(inst, flow) is not None:
            problems.append("residual graph has a negative cycle")
        return problems

    cert = report.certificate
    if cert is None:
        return problems + ["missing certificate"]
    if flow.fee != inst.budget:
        problems.append(f"fee {flow.fee} differs from budget {inst.budget}")
    aug = augment_strong_connectivity(inst)
    work = work_instance(aug, inst.budget, cert.artificial_cost)
    snap = cert.basis
    try:
        basis = BasisStructure.build(work, snap["L"], snap["T"], snap["U"], snap["extra"], snap["root"])
    except (BasisCorruption, IndexError) as exc:
        return problems + [f"snapshot is not a basis structure: {exc}"]
    problems += basis.check_partition(work.m)
    if problems:
        return problems
    pot = compute_potentials(basis, work)
    if pot.pi != tuple(cert.pi) or pot.mu != tuple(cert.mu):
        problems.append("potentials differ from the recomputed ones")
    chat_x, bhat_x = reduced_cost_fee(basis.extra, pot, work)
    if bhat_x == 0:
        return problems + ["extra edge closes a zero-fee cycle"]
    # the budget row is an inequality, so its multiplier -chat_x/bhat_x must be >= 0
    if chat_x * bhat_x > 0:
        problems.append("budget multiplier has the wrong sign")
    stray = set(cert.dhat) - basis.lower - basis.upper
    if stray:
        problems.append(f"dhat recorded for edges {sorted(stray)} outside L and U")
    x = list(flow.values) + [Fraction(0)] * (work.m - inst.m)
    for i in basis.lower:
        if x[i] != 0:
            problems.append(f"L edge {i} is not at its lower bound")
    for i in basis.upper:
        if x[i] != work.edges[i].capacity:
            problems.append(f"U edge {i} is not at its upper bound")
    for i in range(work.m):
        d = reduced_costs(i, pot, basis, work).dhat
        state = basis.state_of(i)
        if state in ("L", "U") and cert.dhat.get(i) != d:
            problems.append(f"edge {i}: recorded dhat {cert.dhat.get(i)} differs from {d}")
        if state == "L" and d < 0:
            problems.append(f"edge {i} in L has dhat {d} < 0")
        elif state == "U" and d > 0:
            problems.append(f"edge {i} in U has dhat {d} > 0")
        elif state in ("T", "extra") and d != 0:
            problems.append(f"edge {i} in {state} has nonzero dhat {d}")
    return problems


def certify(report: SolveReport, inst: Instance) -> bool:
    return not check_report(report, inst)
