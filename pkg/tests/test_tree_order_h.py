import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folsing.definiteness import is_negative_definite
from folsing.divisor_graph import intersection_matrix
from folsing.generator import plain_tree_graph, random_weighted_tree
from folsing.tree_order_h import (
    DivisionByZeroH, NotATree, UnknownRoot, compute_h, root_order, verify_h_negative,
)
from helpers import chain_graph
from oracles import chain_cf, subtree_det_h
from folsing.divisor_graph import Component, CornerSingularity, DecoratedGraph


def star(center_w=-2, leaf_w=-2, leaves=2):
    comps = (Component("c", center_w),) + tuple(Component(f"l{i}", leaf_w) for i in range(leaves))
    corners = tuple(CornerSingularity(f"z{i}", "c", f"l{i}", -1, -1) for i in range(leaves))
    return DecoratedGraph(comps, corners)


def test_single_vertex():
    g = chain_graph([-3])
    order = root_order(g, "P1")
    assert order.size == 0 and order.predecessors["P1"] == () and order.minimal == ("P1",)
    assert compute_h(g, order) == {"P1": -3}


def test_chain_ordering():
    g = chain_graph([-2, -2, -2])
    order = root_order(g, "P3")
    assert order.depth == {"P3": 0, "P2": 1, "P1": 2}
    assert order.size == 2
    assert order.minimal == ("P1",)
    assert [order.level(v) for v in ("P1", "P2", "P3")] == [0, 1, 2]
    assert order.successor["P1"] == "P2" and order.successor["P3"] is None


def test_star_ordering():
    order = root_order(star(), "c")
    assert set(order.predecessors["c"]) == {"l0", "l1"}
    assert set(order.minimal) == {"l0", "l1"}


def test_h_examples():
    g = chain_graph([-2, -2])
    assert compute_h(g, root_order(g, "P2")) == {"P2": Fraction(-3, 2), "P1": -2}
    assert compute_h(star(), root_order(star(), "c"))["c"] == -1


@pytest.mark.parametrize("n", range(1, 11))
def test_minus_two_chain(n):
    g = chain_graph([-2] * n)
    h = compute_h(g, root_order(g, f"P{n}"))
    oracle = chain_cf(n)
    for k in range(1, n + 1):
        assert h[f"P{k}"] == Fraction(-(k + 1), k) == oracle[k - 1]


def test_verify_negative_examples():
    g = chain_graph([-2, -2])
    assert verify_h_negative(compute_h(g, root_order(g, "P2"))) == (True, [])
    null = chain_graph([-1, -1])
    h = compute_h(null, root_order(null, "P2"))
    assert h == {"P1": -1, "P2": 0}
    assert verify_h_negative(h) == (False, ["P2"])
    pos = chain_graph([1])
    assert verify_h_negative(compute_h(pos, root_order(pos, "P1"))) == (False, ["P1"])


def test_division_by_zero_names_vertex():
    g = chain_graph([-1, -1, -2])
    with pytest.raises(DivisionByZeroH) as info:
        compute_h(g, root_order(g, "P3"))
    assert info.value.vertex == "P2"


def test_errors():
    g = chain_graph([-2, -2])
    with pytest.raises(UnknownRoot):
        root_order(g, "nope")
    tri = DecoratedGraph(
        tuple(Component(f"P{i}", -3) for i in range(3)),
        tuple(CornerSingularity(f"z{i}", f"P{i}", f"P{(i + 1) % 3}", -1, -1) for i in range(3)),
    )
    with pytest.raises(NotATree):
        root_order(tri, "P0")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 100_000))
def test_h_matches_determinant_ratios(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    edges, weights = random_weighted_tree(rng, n, (-5, -1), negative_definite=False)
    g = plain_tree_graph(edges, weights)
    adj = g.adjacency()
    root = rng.choice(g.component_ids)
    expected = subtree_det_h(
        {c.id: c.weight for c in g.components}, {v: [u for u, _ in e] for v, e in adj.items()}, root
    )
    if any(v is None for v in expected.values()):
        return
    try:
        h = compute_h(g, root_order(g, root))
    except DivisionByZeroH:
        return
    assert h == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000))
def test_negative_for_every_root(seed):
    rng = random.Random(seed)
    edges, weights = random_weighted_tree(rng, rng.randint(1, 12), (-10, -1))
    g = plain_tree_graph(edges, weights)
    assert is_negative_definite(intersection_matrix(g))
    for root in g.component_ids:
        ok, bad = verify_h_negative(compute_h(g, root_order(g, root)))
        assert ok, (root, bad)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000))
def test_root_telescoping(seed):
    rng = random.Random(seed)
    edges, weights = random_weighted_tree(rng, rng.randint(2, 10), (-6, -2))
    g = plain_tree_graph(edges, weights)
    for root in g.component_ids:
        order = root_order(g, root)
        h = compute_h(g, order)
        w = g.component(root).weight
        assert w - h[root] == sum(1 / h[u] for u in order.predecessors[root])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_predecessor_order_irrelevant(seed):
    from folsing.tree_order_h import RootedOrder

    rng = random.Random(seed)
    edges, weights = random_weighted_tree(rng, rng.randint(2, 10), (-6, -2))
    g = plain_tree_graph(edges, weights)
    order = root_order(g, g.component_ids[0])
    shuffled = {}
    for v, p in order.predecessors.items():
        p = list(p)
        rng.shuffle(p)
        shuffled[v] = tuple(p)
    other = RootedOrder(order.root, order.successor, shuffled, order.depth, order.order)
    assert compute_h(g, other) == compute_h(g, order)
