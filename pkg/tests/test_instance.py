from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcmcf.generate import GenParams, generate
from bcmcf.instance import (
    Edge,
    Flow,
    Instance,
    ParseError,
    augment_strong_connectivity,
    is_strongly_connected,
    parse_instance,
    serialize_instance,
    validate,
)
from bcmcf.oracle import OracleLimits, enumerate_optimum
from bcmcf.preprocess import min_cost_circulation

from conftest import MICRO1_TEXT, tiny_instances


def test_parse_micro1(micro1):
    assert micro1.n == 2 and micro1.m == 2 and micro1.budget == 6
    assert micro1.edges == (Edge(1, 2, 10, -2, 1), Edge(2, 1, 10, 0, 1))
    assert micro1.artificial_edge_ids == frozenset()


def test_parse_skips_comments():
    inst = parse_instance("c hello\n" + MICRO1_TEXT + "c bye\n")
    assert inst.m == 2


@pytest.mark.parametrize("text, line, fragment", [
    ("p bcmcf 2 1 0\na 1 1 5 0 0\n", 2, "self-loop"),
    ("a 1 2 5 0 0\n", 1, "before problem line"),
    ("p bcmcf 2 1 0\np bcmcf 2 1 0\n", 2, "duplicate"),
    ("p bcmcf 2 1 0\na 1 3 5 0 0\n", 2, "out of range"),
    ("p bcmcf 2 1 0\na 1 2 -5 0 0\n", 2, "negative capacity"),
    ("p bcmcf 2 1 0\na 1 2 5 0 -1\n", 2, "negative fee"),
    ("p bcmcf 2 1 0\na 1 2 5 x 0\n", 2, "non-integer"),
])
def test_parse_errors_carry_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_parse_missing_problem_line():
    with pytest.raises(ParseError, match="missing problem line"):
        parse_instance("c nothing here\n")


def test_parse_edge_count_mismatch():
    with pytest.raises(ParseError, match="declares 3 edges"):
        parse_instance(MICRO1_TEXT.replace("2 2 6", "2 3 6"))


def test_validate_examples(micro1):
    assert validate(micro1) == []
    assert "node count < 2" in validate(Instance(1, (), 0))
    bad = Instance(2, (Edge(1, 2, 1, 0, -1),), 0)
    assert any("negative fee" in p for p in validate(bad))


@given(tiny_instances(budget="any"))
def test_parse_serialize_round_trip(inst):
    again = parse_instance(serialize_instance(inst, ["round trip"]))
    assert (again.n, again.edges, again.budget) == (inst.n, inst.edges, inst.budget)


def test_augment_leaves_strongly_connected_instance_alone(micro1):
    out = augment_strong_connectivity(micro1)
    assert out.edges == micro1.edges
    assert out.artificial_edge_ids == frozenset()


def test_augment_joins_two_isolated_two_cycles():
    inst = Instance(4, (Edge(1, 2, 3, -1, 1), Edge(2, 1, 3, -1, 1), Edge(3, 4, 3, -1, 1), Edge(4, 3, 3, -1, 1)), 2)
    out = augment_strong_connectivity(inst)
    assert not is_strongly_connected(inst)
    assert is_strongly_connected(out)
    assert out.m > inst.m and out.artificial_edge_ids == frozenset(range(inst.m, out.m))
    for i in out.artificial_edge_ids:
        e = out.edges[i]
        assert (e.capacity, e.fee, e.cost) == (1, 0, 1 + 4 * 1)


@given(tiny_instances(max_n=5, max_m=9))
def test_augment_output_is_strongly_connected(inst):
    assert is_strongly_connected(augment_strong_connectivity(inst))


@given(tiny_instances(max_n=4, max_m=5))
def test_augmentation_preserves_oracle_optimum(inst):
    aug = augment_strong_connectivity(inst)
    limits = OracleLimits(max_nodes=4, max_edges=aug.m)
    base = enumerate_optimum(inst, limits)
    extended = enumerate_optimum(aug, limits)
    assert extended.objective == base.objective
    # a cycle through an added edge has positive cost and nonnegative fee
    assert all(extended.witness[i] == 0 for i in aug.artificial_edge_ids)


def test_flow_contracts(micro1):
    f = Flow.of(micro1, [3, 3])
    assert f.cost == -6 and f.fee == 6 and f.is_feasible(micro1) and f.is_integral()
    assert not Flow.of(micro1, [3, 2]).conserves(micro1)
    assert not Flow.of(micro1, [11, 11]).within_bounds(micro1)
    assert not Flow.of(micro1, [Fraction(1, 2)] * 2).is_integral()


def test_generate_shape_and_determinism():
    params = GenParams(4, 2, seed=7)
    a, b = generate(params), generate(params)
    assert a.m == 8 and is_strongly_connected(a)
    assert serialize_instance(a) == serialize_instance(b)


@pytest.mark.parametrize("frac", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 2)])
def test_generate_rejects_fraction_outside_unit_interval(frac):
    with pytest.raises(ValueError):
        generate(GenParams(4, 2, budget_fraction=frac))


@pytest.mark.parametrize("seed", range(10))
def test_generated_budget_binds(seed):
    inst = generate(GenParams(8, 3, seed=seed))
    fee = min_cost_circulation(inst).fee
    assert inst.budget == int(Fraction(1, 2) * fee)
    if fee >= 2:
        assert fee > inst.budget


@pytest.mark.parametrize("seed", range(5))
def test_generated_edges_respect_ranges(seed):
    g = generate(GenParams(6, 3, cost_max=5, cap_max=4, fee_max=2, seed=seed))
    for e in g.edges:
        assert -5 <= e.cost <= 5 and 1 <= e.capacity <= 4 and 0 <= e.fee <= 2 and e.tail != e.head
