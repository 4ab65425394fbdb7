from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mkvc import (
    BipartiteInstance, MkvcError, Side, VertexRef, covered_weight, residual,
    sorted_by_capacity, top_l_one_side,
)

L = lambda i: VertexRef(Side.LEFT, i)
R = lambda i: VertexRef(Side.RIGHT, i)


# -- construction -----------------------------------------------------------

def test_duplicate_edge_rejected():
    with pytest.raises(MkvcError, match="duplicate"):
        BipartiteInstance(2, 2, [(0, 0, 1), (0, 0, 2)], 1)


def test_budget_must_be_below_order():
    with pytest.raises(MkvcError, match="out of range"):
        BipartiteInstance(2, 2, [], 4)


def test_endpoint_range_checked():
    with pytest.raises(MkvcError, match="out of range"):
        BipartiteInstance(2, 2, [(2, 0, 1)], 1)


def test_weights_must_be_exact_and_nonnegative():
    with pytest.raises(MkvcError, match="negative"):
        BipartiteInstance(1, 1, [(0, 0, -1)], 1)
    with pytest.raises(MkvcError, match="exact"):
        BipartiteInstance(1, 1, [(0, 0, 0.5)], 1)
    inst = BipartiteInstance(1, 1, [(0, 0, Fraction(3, 4))], 1)
    assert inst.edges[0][2] == Fraction(3, 4)


def test_with_budget_shares_topology(k22):
    other = k22.with_budget(1)
    assert other.k == 1 and other.edges == k22.edges and k22.k == 2


# -- covered_weight ---------------------------------------------------------

def test_covered_weight_one_left_of_k22(k22):
    assert covered_weight(k22, {L(0)}) == 2


def test_covered_weight_empty_set(k22):
    assert covered_weight(k22, set()) == 0


def test_covered_weight_shared_right_vertex():
    inst = BipartiteInstance(2, 1, [(0, 0, 3), (1, 0, 5)], 1)
    assert covered_weight(inst, {R(0)}) == 8


def test_covered_weight_counts_each_edge_once(k22):
    assert covered_weight(k22, {L(0), R(0)}) == 3


def test_covered_weight_invalid_vertex(k22):
    with pytest.raises(MkvcError, match="vertex out of range"):
        covered_weight(k22, {L(5)})


# -- residual ---------------------------------------------------------------

def test_residual_deletes_vertex_and_edges(k22):
    res = residual(k22, {L(0)}, 1)
    sub = res.instance
    assert (sub.n_left, sub.n_right, sub.m, sub.k) == (1, 2, 2, 1)


def test_residual_empty_set_is_identity(k22):
    sub = residual(k22, set(), k22.k).instance
    assert sub.edges == k22.edges
    assert (sub.n_left, sub.n_right, sub.k) == (2, 2, 2)


def test_residual_removing_all_rights_leaves_edgeless():
    star = BipartiteInstance(1, 4, [(0, j, 1) for j in range(4)], 1)
    res = residual(star, {R(j) for j in range(4)}, 0)
    assert res.instance.m == 0 and res.instance.n_right == 0


def test_residual_budget_range_checked(k22):
    with pytest.raises(MkvcError, match="out of range"):
        residual(k22, {L(0)}, 3)


def test_residual_lift_and_project_roundtrip():
    inst = BipartiteInstance(3, 3, [(i, j, 1) for i in range(3) for j in range(3)], 2)
    res = residual(inst, {L(1), R(0)}, 2)
    assert res.lift({L(1), R(1)}) == {L(2), R(2)}
    assert res.project({L(2), R(2)}) == {L(1), R(1)}
    with pytest.raises(MkvcError, match="deleted"):
        res.project({L(1)})


# -- top_l_one_side / sorted_by_capacity ------------------------------------

def test_top_l_picks_largest_capacity():
    inst = BipartiteInstance(2, 2, [(0, 0, 3), (1, 0, 5), (1, 1, 1)], 1)
    assert top_l_one_side(inst, Side.LEFT, 1) == {L(1)}


def test_top_l_zero_is_empty(k22):
    assert top_l_one_side(k22, Side.LEFT, 0) == frozenset()


def test_top_l_whole_side(k22):
    got = top_l_one_side(k22, Side.LEFT, 2)
    assert got == {L(0), L(1)}
    assert covered_weight(k22, got) == 4


def test_top_l_clamps_oversized_request(k22):
    assert top_l_one_side(k22, Side.RIGHT, 7) == {R(0), R(1)}


def test_top_l_respects_already_covered():
    inst = BipartiteInstance(2, 2, [(0, 0, 3), (1, 0, 5), (1, 1, 1)], 1)
    covered = inst.cover_mask_of({R(0)})
    assert top_l_one_side(inst, Side.LEFT, 1, covered) == {L(1)}
    covered = inst.cover_mask_of({L(1)})
    assert top_l_one_side(inst, Side.LEFT, 1, covered) == {L(0)}


def test_top_l_negative_rejected(k22):
    with pytest.raises(MkvcError):
        top_l_one_side(k22, Side.LEFT, -1)


def test_sorted_by_capacity_orders_and_breaks_ties():
    inst = BipartiteInstance(2, 1, [(0, 0, 3), (1, 0, 5)], 1)
    assert sorted_by_capacity(inst, Side.LEFT) == [L(1), L(0)]


def test_sorted_by_capacity_tie_is_index_order(k22):
    assert sorted_by_capacity(k22, Side.LEFT) == [L(0), L(1)]


def test_sorted_by_capacity_empty_side():
    star = BipartiteInstance(1, 2, [(0, 0, 1), (0, 1, 1)], 1)
    res = residual(star, {L(0)}, 1)
    assert sorted_by_capacity(res.instance, Side.LEFT) == []


# -- properties -------------------------------------------------------------

@st.composite
def instances(draw, max_side=5, max_w=6):
    nl = draw(st.integers(1, max_side))
    nr = draw(st.integers(1, max_side))
    edges = []
    for i in range(nl):
        for j in range(nr):
            if draw(st.booleans()):
                edges.append((i, j, draw(st.integers(0, max_w))))
    k = draw(st.integers(1, nl + nr - 1))
    return BipartiteInstance(nl, nr, edges, k)


def subset_strategy(inst):
    return st.sets(st.sampled_from(inst.all_refs()))


@given(st.data())
@settings(max_examples=120)
def test_coverage_monotone(data):
    inst = data.draw(instances())
    small = data.draw(subset_strategy(inst))
    extra = data.draw(subset_strategy(inst))
    assert covered_weight(inst, small) <= covered_weight(inst, small | extra)


@given(st.data())
@settings(max_examples=120)
def test_coverage_submodular(data):
    inst = data.draw(instances())
    small = data.draw(subset_strategy(inst))
    big = small | data.draw(subset_strategy(inst))
    v = data.draw(st.sampled_from(inst.all_refs()))
    if v in big:
        return
    gain_small = covered_weight(inst, small | {v}) - covered_weight(inst, small)
    gain_big = covered_weight(inst, big | {v}) - covered_weight(inst, big)
    assert gain_small >= gain_big


@given(st.data())
@settings(max_examples=80)
def test_top_l_matches_brute_force(data):
    from itertools import combinations
    inst = data.draw(instances(max_side=4))
    side = data.draw(st.sampled_from([Side.LEFT, Side.RIGHT]))
    size = inst.side_size(side)
    l = data.draw(st.integers(0, size))
    refs = [r for r in inst.all_refs() if r.side == side]
    best = max(covered_weight(inst, c) for c in combinations(refs, l))
    assert covered_weight(inst, top_l_one_side(inst, side, l)) == best


@given(st.data())
@settings(max_examples=80)
def test_residual_coverage_additivity(data):
    inst = data.draw(instances())
    s = data.draw(st.sets(st.sampled_from(inst.all_refs()),
                          max_size=inst.n - 1))
    rest = [r for r in inst.all_refs() if r not in s]
    t = data.draw(st.sets(st.sampled_from(rest), max_size=max(0, len(rest) - 1))
                  if rest else st.just(set()))
    res = residual(inst, s, max(0, inst.n - len(s) - 1))
    assert covered_weight(inst, s | t) == (
        covered_weight(inst, s)
        + covered_weight(res.instance, res.project(t)))
