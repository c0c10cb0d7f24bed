from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bcmcf.basis import BasisStructure, cycle
from bcmcf.instance import Edge, Instance, parse_instance
from bcmcf.oracle import spanning_trees
from bcmcf.preprocess import min_cost_circulation

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

MICRO1_TEXT = "p bcmcf 2 2 6\na 1 2 10 -2 1\na 2 1 10 0 1\n"


@pytest.fixture
def micro1() -> Instance:
    return parse_instance(MICRO1_TEXT)


@pytest.fixture
def micro2() -> Instance:
    return parse_instance(MICRO1_TEXT).with_budget(20)


@st.composite
def tiny_instances(draw, max_n: int = 5, max_m: int = 9, min_cap: int = 0, budget: str = "fraction"):
    """Spanning cycle plus extra edges, so always weakly connected.

    ``budget="fraction"`` picks a fraction of the unconstrained fee, ``"any"``
    an arbitrary small integer.
    """
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(n, max(n, max_m)))
    order = draw(st.permutations(range(1, n + 1)))
    pairs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    for _ in range(m - n):
        t = draw(st.integers(1, n))
        h = draw(st.integers(1, n).filter(lambda v: v != t))
        pairs.append((t, h))
    edges = tuple(
        Edge(t, h, draw(st.integers(min_cap, 5)), draw(st.integers(-5, 5)), draw(st.integers(0, 3)))
        for t, h in pairs
    )
    inst = Instance(n, edges, 0)
    if budget == "fraction":
        frac = draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
        b = int(frac * min_cost_circulation(inst).fee)
    else:
        b = draw(st.integers(0, 30))
    return inst.with_budget(b)


@st.composite
def random_bases(draw, max_n: int = 5, max_m: int = 9):
    """An instance with a random basis structure (extra cycle of nonzero fee)."""
    inst = draw(tiny_instances(max_n=max_n, max_m=max_m, budget="any"))
    trees = spanning_trees(inst.n, inst.edges)
    tree = draw(st.sampled_from(trees))
    root = draw(st.integers(1, inst.n))
    rest = [i for i in range(inst.m) if i not in tree]
    probe = BasisStructure.build(inst, set(), set(tree), set(), -1, root)
    extras = [i for i in rest if cycle(i, probe, inst).fee(inst) != 0]
    if not extras:
        from hypothesis import assume
        assume(False)
    extra = draw(st.sampled_from(extras))
    upper = {i for i in rest if i != extra and draw(st.booleans())}
    lower = set(rest) - upper - {extra}
    return inst, BasisStructure.build(inst, lower, set(tree), upper, extra, root)


