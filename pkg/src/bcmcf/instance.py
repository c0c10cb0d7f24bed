"""Instance data model, the extended-DIMACS file format, and validation.

File format (one record per line, single-space separated)::

    c <comment>
    p bcmcf <n> <m> <B>
    a <tail> <head> <capacity> <cost> <fee>

Nodes are 1-based. Edges are addressed by their 0-based position in the
file, and that order is preserved everywhere (solutions, traces, reports).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    capacity: int
    cost: int
    fee: int


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple[Edge, ...]
    budget: int
    artificial_edge_ids: frozenset[int] = field(default_factory=frozenset)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_abs_cost(self) -> int:
        return max((abs(e.cost) for e in self.edges), default=0)

    @property
    def max_capacity(self) -> int:
        return max((e.capacity for e in self.edges), default=0)

    @property
    def max_fee(self) -> int:
        return max((e.fee for e in self.edges), default=0)

    def with_budget(self, budget: int) -> "Instance":
        return Instance(self.n, self.edges, budget, self.artificial_edge_ids)

    def with_edges(self, extra: Iterable[Edge], *, artificial: bool = True) -> "Instance":
        extra = tuple(extra)
        ids = set(self.artificial_edge_ids)
        if artificial:
            ids.update(range(self.m, self.m + len(extra)))
        return Instance(self.n, self.edges + extra, self.budget, frozenset(ids))


@dataclass(frozen=True)
class Flow:
    """Per-edge flow values with cached cost and fee totals.

    Bounds are not enforced on construction: basic solutions may be
    infeasible and are reported as such by :meth:`is_feasible`.
    """

    values: tuple[Fraction, ...]
    cost: Fraction
    fee: Fraction

    @classmethod
    def of(cls, inst: Instance, values: Iterable[Fraction | int]) -> "Flow":
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != inst.m:
            raise ValueError(f"flow has {len(vals)} values for {inst.m} edges")
        cost = sum((e.cost * x for e, x in zip(inst.edges, vals)), Fraction(0))
        fee = sum((e.fee * x for e, x in zip(inst.edges, vals)), Fraction(0))
        return cls(vals, cost, fee)

    @classmethod
    def zero(cls, inst: Instance) -> "Flow":
        return cls.of(inst, [0] * inst.m)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.values)

    def within_bounds(self, inst: Instance) -> bool:
        return all(0 <= x <= e.capacity for e, x in zip(inst.edges, self.values))

    def conserves(self, inst: Instance) -> bool:
        return all(v == 0 for v in excess(inst, self.values))

    def is_feasible(self, inst: Instance) -> bool:
        return self.within_bounds(inst) and self.conserves(inst)


def excess(inst: Instance, values: Sequence[Fraction | int]) -> list[Fraction]:
    """Inflow minus outflow per node (index 0 unused)."""
    ex = [Fraction(0)] * (inst.n + 1)
    for e, x in zip(inst.edges, values):
        ex[e.head] += x
        ex[e.tail] -= x
    return ex


def parse_instance(text: str | bytes) -> Instance:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    header: tuple[int, int, int] | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "p":
            if header is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(tokens) != 5 or tokens[1] != "bcmcf":
                raise ParseError("expected 'p bcmcf <n> <m> <B>'", lineno)
            n, m, budget = (_int_token(t, lineno) for t in tokens[2:])
            if n < 2:
                raise ParseError("node count < 2", lineno)
            if m < 0:
                raise ParseError("negative edge count", lineno)
            if budget < 0:
                raise ParseError("negative budget", lineno)
            header = (n, m, budget)
        elif kind == "a":
            if header is None:
                raise ParseError("edge before problem line", lineno)
            if len(tokens) != 6:
                raise ParseError("expected 'a <tail> <head> <capacity> <cost> <fee>'", lineno)
            tail, head, cap, cost, fee = (_int_token(t, lineno) for t in tokens[1:])
            n = header[0]
            if not (1 <= tail <= n and 1 <= head <= n):
                raise ParseError(f"edge endpoint out of range 1..{n}", lineno)
            if tail == head:
                raise ParseError("self-loop", lineno)
            if cap < 0:
                raise ParseError("negative capacity", lineno)
            if fee < 0:
                raise ParseError("negative fee", lineno)
            edges.append(Edge(tail, head, cap, cost, fee))
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)
    if header is None:
        raise ParseError("missing problem line")
    n, m, budget = header
    if len(edges) != m:
        raise ParseError(f"problem line declares {m} edges, found {len(edges)}")
    return Instance(n, tuple(edges), budget)


def _int_token(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"non-integer token {token!r}", lineno) from None


def serialize_instance(inst: Instance, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p bcmcf {inst.n} {inst.m} {inst.budget}")
    lines.extend(f"a {e.tail} {e.head} {e.capacity} {e.cost} {e.fee}" for e in inst.edges)
    return "\n".join(lines) + "\n"


def validate(inst: Instance) -> list[str]:
    """Return the list of violated instance invariants (empty means ok)."""
    problems = []
    if inst.n < 2:
        problems.append("node count < 2")
    if inst.budget < 0:
        problems.append("negative budget")
    for i, e in enumerate(inst.edges):
        if not (1 <= e.tail <= inst.n and 1 <= e.head <= inst.n):
            problems.append(f"edge {i}: endpoint out of range")
        if e.tail == e.head:
            problems.append(f"edge {i}: self-loop")
        if e.capacity < 0:
            problems.append(f"edge {i}: negative capacity")
        if e.fee < 0:
            problems.append(f"edge {i}: negative fee")
    return problems


def _reachable(inst: Instance, source: int, *, reverse: bool = False) -> list[bool]:
    # only edges that can carry flow count for connectivity
    adj: list[list[int]] = [[] for _ in range(inst.n + 1)]
    for e in inst.edges:
        if e.capacity > 0:
            if reverse:
                adj[e.head].append(e.tail)
            else:
                adj[e.tail].append(e.head)
    seen = [False] * (inst.n + 1)
    seen[source] = True
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen


def is_strongly_connected(inst: Instance) -> bool:
    fwd = _reachable(inst, 1)
    bwd = _reachable(inst, 1, reverse=True)
    return all(fwd[1:]) and all(bwd[1:])


def is_weakly_connected(inst: Instance) -> bool:
    parent = list(range(inst.n + 1))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in inst.edges:
        parent[find(e.tail)] = find(e.head)
    return len({find(v) for v in range(1, inst.n + 1)}) == 1


def augment_strong_connectivity(inst: Instance) -> Instance:
    """Add capacity-1, fee-0 edges to and from node 1 until strongly connected.

    The added edges cost ``1 + n*C`` where ``C`` is the largest absolute edge
    cost, so every cycle through one of them has positive cost and no optimal
    flow uses them.
    """
    fwd = _reachable(inst, 1)
    bwd = _reachable(inst, 1, reverse=True)
    cost = 1 + inst.n * inst.max_abs_cost
    extra = [Edge(1, v, 1, cost, 0) for v in range(2, inst.n + 1) if not fwd[v]]
    extra += [Edge(v, 1, 1, cost, 0) for v in range(2, inst.n + 1) if not bwd[v]]
    if not extra:
        return inst
    return inst.with_edges(extra)
