"""Seeded random instance generator.

A simplified stand-in for NETGEN: a random Hamiltonian cycle guarantees
strong connectivity, and the remaining ``n*d - n`` edges join uniformly
random distinct node pairs. The budget is a fraction of the fee of the
unconstrained minimum cost circulation, so the budget usually binds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .instance import Edge, Instance
from .preprocess import min_cost_circulation


@dataclass(frozen=True)
class GenParams:
    n: int
    density: int
    cost_max: int = 100
    cap_max: int = 50
    fee_max: int = 10
    budget_fraction: Fraction = Fraction(1, 2)
    seed: int = 0

    def check(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.density < 1:
            raise ValueError("density must be at least 1")
        if min(self.cost_max, self.cap_max, self.fee_max) < 1:
            raise ValueError("cost_max, cap_max and fee_max must be positive")
        if not 0 < Fraction(self.budget_fraction) < 1:
            raise ValueError("budget fraction must lie strictly between 0 and 1")


def random_network(rng: random.Random, n: int, m: int, cost_max: int, cap_max: int,
                   fee_max: int) -> list[Edge]:
    """``m >= n`` edges on nodes 1..n: a random spanning cycle plus random extras."""
    if m < n:
        raise ValueError("need at least n edges for the spanning cycle")
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    for _ in range(m - n):
        tail = rng.randint(1, n)
        head = rng.randint(1, n - 1)
        if head >= tail:
            head += 1
        pairs.append((tail, head))
    return [
        Edge(t, h, rng.randint(1, cap_max), rng.randint(-cost_max, cost_max), rng.randint(0, fee_max))
        for t, h in pairs
    ]


def budget_from_fraction(inst: Instance, fraction: Fraction) -> int:
    fee = min_cost_circulation(inst).fee
    return math.floor(Fraction(fraction) * fee)


def generate(params: GenParams) -> Instance:
    params.check()
    rng = random.Random(params.seed)
    edges = random_network(rng, params.n, params.n * params.density,
                           params.cost_max, params.cap_max, params.fee_max)
    inst = Instance(params.n, tuple(edges), 0)
    return inst.with_budget(budget_from_fraction(inst, params.budget_fraction))
