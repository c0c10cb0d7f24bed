"""Budget-free minimum cost circulation and the budget gate.

The circulation is computed by negative-cycle canceling. Cycles are found
with synchronous Bellman-Ford rounds over the residual graph: any cycle in
the predecessor graph of a label-correcting run has negative cost, so each
round ends with a scan of the predecessor graph (nodes in increasing order)
and every node-disjoint cycle found is saturated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .instance import Flow, Instance

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class Done:
    flow: Flow


@dataclass(frozen=True)
class Proceed:
    flow: Flow


class _Residual:
    """Residual arcs ``2i`` (forward) and ``2i+1`` (backward) for edge ``i``."""

    def __init__(self, inst: Instance, values: Sequence[int]) -> None:
        m = inst.m
        self.n = inst.n
        tails = np.empty(2 * m, dtype=np.int64)
        heads = np.empty(2 * m, dtype=np.int64)
        costs = np.empty(2 * m, dtype=np.int64)
        for i, e in enumerate(inst.edges):
            tails[2 * i], heads[2 * i], costs[2 * i] = e.tail, e.head, e.cost
            tails[2 * i + 1], heads[2 * i + 1], costs[2 * i + 1] = e.head, e.tail, -e.cost
        self.tails, self.heads, self.costs = tails, heads, costs
        self.tail_list = tails.tolist()
        self.cap = np.array([e.capacity for e in inst.edges], dtype=object)
        self.x = list(values)
        self.res = np.zeros(2 * m, dtype=bool)
        for i in range(m):
            self._refresh(i)
        # arcs grouped by head for per-node minima
        self.by_head = np.argsort(heads, kind="stable")
        sorted_heads = heads[self.by_head]
        self.group_start = np.searchsorted(sorted_heads, np.arange(self.n + 1))
        self.group_nonempty = np.zeros(self.n + 1, dtype=bool)
        self.group_nonempty[np.unique(sorted_heads)] = True

    def _refresh(self, i: int) -> None:
        self.res[2 * i] = self.x[i] < self.cap[i]
        self.res[2 * i + 1] = self.x[i] > 0

    def residual(self, arc: int) -> int:
        i = arc >> 1
        return self.cap[i] - self.x[i] if arc & 1 == 0 else self.x[i]

    def push(self, arc: int, amount: int) -> None:
        i = arc >> 1
        self.x[i] += amount if arc & 1 == 0 else -amount
        self._refresh(i)

    def find_cycles(self) -> list[list[int]]:
        """Return node-disjoint negative residual cycles (arc lists), or []."""
        n = self.n
        if len(self.tails) == 0:
            return []
        big = n * int(np.abs(self.costs).max(initial=0)) + 1
        if big >= _INT64_SAFE:
            return self._find_cycles_exact()
        inf = np.int64(_INT64_SAFE)
        dist = np.zeros(n + 1, dtype=np.int64)
        pred = np.full(n + 1, -1, dtype=np.int64)
        arcs_sorted = self.by_head
        heads_sorted = self.heads[arcs_sorted]
        # strict decreases of bounded labels guarantee termination
        while True:
            cand = np.where(self.res, dist[self.tails] + self.costs, inf)[arcs_sorted]
            best = np.full(n + 1, inf, dtype=np.int64)
            starts = self.group_start[self.group_nonempty]
            best[self.group_nonempty] = np.minimum.reduceat(cand, starts)
            improved = best < dist
            if not improved.any():
                return []
            hit = improved[heads_sorted] & (cand == best[heads_sorted])
            idx = np.flatnonzero(hit)
            _, first = np.unique(heads_sorted[idx], return_index=True)
            chosen = arcs_sorted[idx[first]]
            pred[self.heads[chosen]] = chosen
            dist = np.minimum(dist, best)
            cycles = _predecessor_cycles(pred.tolist(), self.tail_list, n)
            if cycles:
                return cycles

    def _find_cycles_exact(self) -> list[list[int]]:
        # same rounds with unbounded Python integers
        n = self.n
        tails, heads, costs = self.tails.tolist(), self.heads.tolist(), self.costs.tolist()
        dist = [0] * (n + 1)
        pred = [-1] * (n + 1)
        while True:
            new = list(dist)
            newpred = list(pred)
            for a in range(len(tails)):
                if self.res[a]:
                    d = dist[tails[a]] + costs[a]
                    if d < new[heads[a]]:
                        new[heads[a]] = d
                        newpred[heads[a]] = a
            if new == dist:
                return []
            dist, pred = new, newpred
            cycles = _predecessor_cycles(pred, tails, n)
            if cycles:
                return cycles


def _predecessor_cycles(pred: list[int], tails: list[int], n: int) -> list[list[int]]:
    color = [0] * (n + 1)  # 0 unseen, 1 on current walk, 2 done
    cycles = []
    for start in range(1, n + 1):
        if color[start]:
            continue
        walk = []
        v = start
        while v >= 1 and color[v] == 0 and pred[v] >= 0:
            color[v] = 1
            walk.append(v)
            v = tails[pred[v]]
        if v >= 1 and color[v] == 1:
            cycle_nodes = walk[walk.index(v):]
            cycles.append([pred[u] for u in reversed(cycle_nodes)])
        for u in walk:
            color[u] = 2
    return cycles


def min_cost_circulation(inst: Instance) -> Flow:
    """Integral minimum cost circulation ignoring the budget."""
    res = _Residual(inst, [0] * inst.m)
    while True:
        cycles = res.find_cycles()
        if not cycles:
            break
        for cyc in cycles:
            amount = min(res.residual(a) for a in cyc)
            for a in cyc:
                res.push(a, amount)
    return Flow.of(inst, res.x)


def find_negative_cycle(inst: Instance, flow: Flow) -> list[int] | None:
    """Return a negative-cost residual cycle as residual arc ids, or None.

    Arc ``2i`` is edge ``i`` traversed forward, ``2i+1`` backward. The flow
    must be integral.
    """
    if not flow.is_integral():
        raise ValueError("residual check needs an integral flow")
    res = _Residual(inst, [int(x) for x in flow.values])
    cycles = res.find_cycles()
    return cycles[0] if cycles else None


def budget_gate(flow: Flow, budget: int) -> Done | Proceed:
    if not flow.is_integral():
        raise ValueError("budget gate needs an integral min-cost circulation")
    fee = flow.fee
    if fee <= budget:
        return Done(flow)
    # integral fees and flows leave no room between B and B+1
    assert fee >= budget + 1
    return Proceed(flow)
