from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcmcf.basis import (
    BasisStructure,
    basic_solution,
    compute_potentials,
    cycle,
    decompose,
    dhat_numerator,
    reduced_cost_fee,
    reduced_costs,
    strong_feasibility_check,
)
from bcmcf.errors import BasisCorruption
from bcmcf.instance import Edge, Flow, Instance, excess

from conftest import random_bases


def micro1_basis(inst):
    # T = {e2 = (2,1)}, extra = e1 = (1,2), root 1
    return BasisStructure.build(inst, set(), {1}, set(), 0, 1)


def test_micro1_potentials(micro1):
    pot = compute_potentials(micro1_basis(micro1), micro1)
    assert pot.pi[1:] == (0, 0)
    assert pot.mu[1:] == (0, 1)
    # zero reduced fee on the tree edge: b - mu_2 + mu_1 = 1 - 1 + 0
    assert reduced_cost_fee(1, pot, micro1) == (0, 0)


def test_single_tree_edge_potentials():
    inst = Instance(2, (Edge(1, 2, 1, 5, 3), Edge(2, 1, 1, 0, 1)), 0)
    basis = BasisStructure.build(inst, set(), {0}, set(), 1, 1)
    pot = compute_potentials(basis, inst)
    # c - pi_tail + pi_head = 0 with pi_root = 0 forces pi_w = -c
    assert (pot.pi[2], pot.mu[2]) == (-5, -3)
    assert (pot.pi[1], pot.mu[1]) == (0, 0)


def test_reduced_costs_on_tree_and_extra(micro1):
    basis = micro1_basis(micro1)
    pot = compute_potentials(basis, micro1)
    assert reduced_costs(1, pot, basis, micro1) == (0, 0, 0)
    assert reduced_costs(0, pot, basis, micro1).dhat == 0


def test_dhat_arithmetic():
    # 3 - 4 * (1/2) = 1
    assert Fraction(dhat_numerator(3, 1, 4, 2), 2) == 1


def test_zero_fee_extra_is_corruption():
    inst = Instance(2, (Edge(1, 2, 1, 1, 0), Edge(2, 1, 1, 1, 0)), 0)
    basis = BasisStructure.build(inst, set(), {1}, set(), 0, 1)
    with pytest.raises(BasisCorruption):
        reduced_costs(0, compute_potentials(basis, inst), basis, inst)


def test_micro1_cycle(micro1):
    cyc = cycle(0, micro1_basis(micro1), micro1)
    assert cyc.edges == ((0, 1), (1, 1))
    assert cyc.apex == 1
    assert (cyc.cost(micro1), cyc.fee(micro1)) == (-2, 2)


def test_cycle_rejects_tree_edge(micro1):
    with pytest.raises(ValueError):
        cycle(1, micro1_basis(micro1), micro1)


def test_parallel_edges_share_cycle_nodes():
    inst = Instance(3, (Edge(1, 2, 1, 0, 1), Edge(2, 3, 1, 0, 1), Edge(3, 1, 1, 0, 1), Edge(3, 1, 2, 4, 2)), 0)
    basis = BasisStructure.build(inst, {3}, {0, 1}, set(), 2, 1)
    a, b = cycle(2, basis, inst), cycle(3, basis, inst)
    assert [i for i, _ in a.edges if i != 2] == [i for i, _ in b.edges if i != 3]
    assert a.apex == b.apex


def test_root_child_edge_gives_two_edge_cycle():
    inst = Instance(2, (Edge(1, 2, 1, 0, 1), Edge(1, 2, 1, 0, 2)), 0)
    basis = BasisStructure.build(inst, set(), {0}, set(), 1, 1)
    cyc = cycle(1, basis, inst)
    assert len(cyc) == 2 and cyc.edges == ((1, 1), (0, -1))


def test_micro1_basic_solution(micro1):
    basis = micro1_basis(micro1)
    sol = basic_solution(basis, micro1, Fraction(13, 2))
    assert sol.flow.values == (Fraction(13, 4), Fraction(13, 4)) and sol.feasible
    assert basic_solution(basis, micro1, 0).flow.values == (0, 0)


def test_infeasible_basic_solution_is_flagged():
    inst = Instance(2, (Edge(1, 2, 5, 0, 0), Edge(2, 1, 2, 0, 1), Edge(1, 2, 5, 0, 1)), 5)
    basis = BasisStructure.build(inst, set(), {1}, {0}, 2, 1)
    sol = basic_solution(basis, inst, 5)
    assert not sol.feasible
    assert sol.flow[1] == 5


def test_micro1_decompose(micro1):
    basis = micro1_basis(micro1)
    x_int, x_cyc = decompose(Flow.of(micro1, [Fraction(13, 4)] * 2), basis, micro1)
    assert x_int.values == (3, 3)
    assert x_cyc.values == (Fraction(1, 4), Fraction(1, 4))


def test_decompose_integral_flow(micro1):
    x_int, x_cyc = decompose(Flow.of(micro1, [2, 2]), micro1_basis(micro1), micro1)
    assert x_int.values == (2, 2) and x_cyc.values == (0, 0)


def test_decompose_inconsistent_fractions(micro1):
    with pytest.raises(BasisCorruption):
        decompose(Flow.of(micro1, [Fraction(7, 4), Fraction(9, 4)]), micro1_basis(micro1), micro1)


def test_strong_feasibility_examples(micro1):
    basis = micro1_basis(micro1)
    assert strong_feasibility_check(basis, [Fraction(13, 4)] * 2, micro1)
    away = Instance(2, (Edge(1, 2, 3, 0, 1), Edge(2, 1, 3, 0, 1)), 0)
    b_away = BasisStructure.build(away, set(), {0}, set(), 1, 1)
    assert not strong_feasibility_check(b_away, [0, 0], away)
    b_toward = BasisStructure.build(away, set(), {1}, set(), 0, 1)
    assert not strong_feasibility_check(b_toward, [0, 3], away)


def test_reindex_rejects_non_tree(micro1):
    with pytest.raises(BasisCorruption):
        BasisStructure.build(micro1, set(), {0, 1}, set(), 0, 1)


@given(random_bases())
def test_potentials_zero_on_tree_and_bounded(case):
    inst, basis = case
    pot = compute_potentials(basis, inst)
    assert pot.pi[basis.root] == 0 and pot.mu[basis.root] == 0
    for i in basis.tree:
        assert reduced_cost_fee(i, pot, inst) == (0, 0)
    c, b = inst.max_abs_cost, inst.max_fee
    assert all(abs(p) <= inst.n * c for p in pot.pi)
    assert all(abs(p) <= inst.n * b for p in pot.mu)


@given(random_bases())
def test_cycle_sums_equal_reduced_costs(case):
    inst, basis = case
    pot = compute_potentials(basis, inst)
    for i in basis.lower | basis.upper | {basis.extra}:
        cyc = cycle(i, basis, inst)
        assert (cyc.cost(inst), cyc.fee(inst)) == reduced_cost_fee(i, pot, inst)
        assert dict(cyc.edges)[i] == 1
        # walking up from both endpoints reaches the apex
        for v in (inst.edges[i].tail, inst.edges[i].head):
            while v != cyc.apex:
                assert v != basis.root
                v = basis.parent[v]


@given(random_bases(), st.integers(0, 40), st.booleans())
def test_basic_solution_conserves_and_hits_budget(case, budget, half):
    inst, basis = case
    target = budget + Fraction(1, 2) * half
    sol = basic_solution(basis, inst, target)
    x = sol.flow
    assert all(v == 0 for v in excess(inst, x.values))
    assert x.fee == target
    assert all(x[i] == 0 for i in basis.lower)
    assert all(x[i] == inst.edges[i].capacity for i in basis.upper)
    assert sol.feasible == x.within_bounds(inst)


@given(random_bases(), st.integers(0, 40))
def test_decompose_recomposes(case, budget):
    inst, basis = case
    x = basic_solution(basis, inst, Fraction(2 * budget + 1, 2)).flow
    x_int, x_cyc = decompose(x, basis, inst)
    assert tuple(a + b for a, b in zip(x_int.values, x_cyc.values)) == x.values
    assert x_int.is_integral() and x_int.conserves(inst)
    lam = next(v for v in x_cyc.values if v != 0) if any(x_cyc.values) else Fraction(0)
    assert 0 <= abs(lam) < 1
