"""Basis structures ``(L, T, U, extra)`` and everything derived from them.

A basis structure is a spanning tree ``T`` plus one extra edge closing a
cycle of nonzero fee; every other edge sits at its lower (``L``) or upper
(``U``) bound. The tree is indexed by parent edge and depth from a fixed
root, which is all that is needed to walk cycles and compute potentials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import BasisCorruption
from .instance import Flow, Instance, excess


@dataclass
class BasisStructure:
    lower: set[int]
    tree: set[int]
    upper: set[int]
    extra: int
    root: int
    parent: list[int] = field(default_factory=list, repr=False)
    parent_edge: list[int] = field(default_factory=list, repr=False)
    depth: list[int] = field(default_factory=list, repr=False)
    order: list[int] = field(default_factory=list, repr=False)

    @classmethod
    def build(cls, inst: Instance, lower, tree, upper, extra: int, root: int) -> "BasisStructure":
        basis = cls(set(lower), set(tree), set(upper), extra, root)
        basis.reindex(inst)
        return basis

    def reindex(self, inst: Instance) -> None:
        """Recompute parent, parent edge, depth and BFS order from the root."""
        n = inst.n
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        edges = inst.edges
        for i in self.tree:
            e = edges[i]
            adj[e.tail].append(i)
            adj[e.head].append(i)
        parent = [0] * (n + 1)
        parent_edge = [-1] * (n + 1)
        depth = [-1] * (n + 1)
        depth[self.root] = 0
        order = [self.root]
        for v in order:
            for i in adj[v]:
                if i == parent_edge[v]:
                    continue
                e = edges[i]
                w = e.head if e.tail == v else e.tail
                if depth[w] >= 0:
                    raise BasisCorruption(f"tree edges contain a cycle through node {w}")
                parent[w] = v
                parent_edge[w] = i
                depth[w] = depth[v] + 1
                order.append(w)
        if len(order) != n or len(self.tree) != n - 1:
            raise BasisCorruption("tree edges do not form a spanning tree")
        self.parent, self.parent_edge, self.depth, self.order = parent, parent_edge, depth, order

    def state_of(self, i: int) -> str:
        if i == self.extra:
            return "extra"
        if i in self.tree:
            return "T"
        if i in self.lower:
            return "L"
        if i in self.upper:
            return "U"
        raise KeyError(i)

    def check_partition(self, m: int) -> list[str]:
        problems = []
        sets = [self.lower, self.tree, self.upper, {self.extra}]
        if sum(len(s) for s in sets) != m or set().union(*sets) != set(range(m)):
            problems.append("L, T, U and the extra edge do not partition the edge set")
        if self.extra in self.tree or self.extra in self.lower or self.extra in self.upper:
            problems.append("extra edge also listed in L, T or U")
        return problems

    def snapshot(self) -> dict:
        return {
            "L": sorted(self.lower),
            "T": sorted(self.tree),
            "U": sorted(self.upper),
            "extra": self.extra,
            "root": self.root,
        }

    def copy(self) -> "BasisStructure":
        return BasisStructure(set(self.lower), set(self.tree), set(self.upper), self.extra,
                              self.root, list(self.parent), list(self.parent_edge),
                              list(self.depth), list(self.order))


@dataclass(frozen=True)
class Potentials:
    """Integral node potentials for costs (``pi``) and fees (``mu``); index 0 unused."""

    pi: tuple[int, ...]
    mu: tuple[int, ...]


def compute_potentials(basis: BasisStructure, inst: Instance) -> Potentials:
    n = inst.n
    pi = [0] * (n + 1)
    mu = [0] * (n + 1)
    edges = inst.edges
    for v in basis.order[1:]:
        e = edges[basis.parent_edge[v]]
        p = basis.parent[v]
        # zero reduced cost: c - pi[tail] + pi[head] = 0
        if e.tail == p:
            pi[v] = pi[p] - e.cost
            mu[v] = mu[p] - e.fee
        else:
            pi[v] = pi[p] + e.cost
            mu[v] = mu[p] + e.fee
    return Potentials(tuple(pi), tuple(mu))


class ReducedCosts(NamedTuple):
    chat: Fraction
    bhat: Fraction
    dhat: Fraction


def reduced_cost_fee(i: int, pot: Potentials, inst: Instance) -> tuple[int, int]:
    e = inst.edges[i]
    return (e.cost - pot.pi[e.tail] + pot.pi[e.head], e.fee - pot.mu[e.tail] + pot.mu[e.head])


def dhat_numerator(chat: int, bhat: int, chat_extra: int, bhat_extra: int) -> int:
    """Integer numerator of ``chat - chat_extra * bhat / bhat_extra`` over ``bhat_extra``."""
    return chat * bhat_extra - chat_extra * bhat


def reduced_costs(i: int, pot: Potentials, basis: BasisStructure, inst: Instance) -> ReducedCosts:
    chat, bhat = reduced_cost_fee(i, pot, inst)
    chat_x, bhat_x = reduced_cost_fee(basis.extra, pot, inst)
    if bhat_x == 0:
        raise BasisCorruption("extra edge closes a cycle of zero fee")
    dhat = Fraction(dhat_numerator(chat, bhat, chat_x, bhat_x), bhat_x)
    return ReducedCosts(Fraction(chat), Fraction(bhat), dhat)


@dataclass(frozen=True)
class OrientedCycle:
    """The cycle closed by a non-tree edge, listed from the apex in the edge's direction.

    ``edges`` holds ``(edge, +1 | -1)`` pairs: +1 when the edge points along
    the traversal. The generating edge is always +1.
    """

    edges: tuple[tuple[int, int], ...]
    apex: int
    generator: int

    @property
    def signs(self) -> dict[int, int]:
        return dict(self.edges)

    def cost(self, inst: Instance) -> int:
        return sum(s * inst.edges[i].cost for i, s in self.edges)

    def fee(self, inst: Instance) -> int:
        return sum(s * inst.edges[i].fee for i, s in self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def cycle(i: int, basis: BasisStructure, inst: Instance) -> OrientedCycle:
    if i in basis.tree:
        raise ValueError(f"edge {i} is a tree edge and closes no cycle")
    e = inst.edges[i]
    depth, parent, parent_edge = basis.depth, basis.parent, basis.parent_edge
    a, b = e.tail, e.head
    up_a: list[int] = []  # nodes walked from the tail upward
    up_b: list[int] = []
    while depth[a] > depth[b]:
        up_a.append(a)
        a = parent[a]
    while depth[b] > depth[a]:
        up_b.append(b)
        b = parent[b]
    while a != b:
        up_a.append(a)
        a = parent[a]
        up_b.append(b)
        b = parent[b]
    edges = inst.edges
    path: list[tuple[int, int]] = []
    # apex down to the tail: forward when the tree edge points to the child
    for v in reversed(up_a):
        pe = parent_edge[v]
        path.append((pe, 1 if edges[pe].head == v else -1))
    path.append((i, 1))
    # head up to the apex: forward when the tree edge points to the parent
    for v in up_b:
        pe = parent_edge[v]
        path.append((pe, 1 if edges[pe].tail == v else -1))
    return OrientedCycle(tuple(path), a, i)


class BasicSolution(NamedTuple):
    flow: Flow
    feasible: bool


def basic_solution(basis: BasisStructure, inst: Instance, budget: Fraction | int) -> BasicSolution:
    """Bounds on L/U, conservation on T, then a shift along C(extra) to hit ``budget``."""
    x = [Fraction(0)] * inst.m
    for i in basis.upper:
        x[i] = Fraction(inst.edges[i].capacity)
    imbalance = excess(inst, x)
    edges = inst.edges
    for v in reversed(basis.order[1:]):
        pe = basis.parent_edge[v]
        p = basis.parent[v]
        if edges[pe].tail == v:
            x[pe] = imbalance[v]
            imbalance[p] += x[pe]
        else:
            x[pe] = -imbalance[v]
            imbalance[p] -= x[pe]
        imbalance[v] = Fraction(0)
    cyc = cycle(basis.extra, basis, inst)
    cycle_fee = cyc.fee(inst)
    if cycle_fee == 0:
        raise BasisCorruption("extra edge closes a cycle of zero fee")
    fee = sum((e.fee * v for e, v in zip(edges, x)), Fraction(0))
    lam = (Fraction(budget) - fee) / cycle_fee
    for i, s in cyc.edges:
        x[i] += s * lam
    flow = Flow.of(inst, x)
    return BasicSolution(flow, flow.within_bounds(inst))


def decompose(flow: Flow | Sequence[Fraction], basis: BasisStructure,
              inst: Instance) -> tuple[Flow, Flow]:
    """Split a basic flow into an integral circulation and a multiple of chi(C(extra))."""
    values = flow.values if isinstance(flow, Flow) else tuple(flow)
    cyc = cycle(basis.extra, basis, inst)
    first_forward = next(i for i, s in cyc.edges if s == 1)
    lam = values[first_forward] - (values[first_forward].numerator // values[first_forward].denominator)
    chi = cyc.signs
    cyc_part = [lam * chi.get(i, 0) for i in range(inst.m)]
    integral = [v - c for v, c in zip(values, cyc_part)]
    bad = [i for i, v in enumerate(integral) if v.denominator != 1]
    if bad:
        raise BasisCorruption(f"fractional parts inconsistent with one cycle multiple on edges {bad}")
    return Flow.of(inst, integral), Flow.of(inst, cyc_part)


def strong_feasibility_check(basis: BasisStructure, flow: Flow | Sequence[Fraction],
                             inst: Instance) -> bool:
    """True iff every node can push a positive amount of flow to the root along T."""
    values = flow.values if isinstance(flow, Flow) else flow
    edges = inst.edges
    for v in basis.order[1:]:
        pe = basis.parent_edge[v]
        e = edges[pe]
        if e.tail == v:
            if not values[pe] < e.capacity:
                return False
        elif not values[pe] > 0:
            return False
    return True
