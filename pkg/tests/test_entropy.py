import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocode.entropy import (CutQuery, contiguous_intervals, cut_graph, min_cut, network_state,
                              network_state_entropy)
from holocode.network import black_hole, pentagon_network

from oracles import renyi_entropy, stabiliser_vector

NET1 = pentagon_network(1)
NET2 = pentagon_network(2)
STATE1_FIXED = network_state(NET1, "fixed_plus")
STATE2_FIXED = network_state(NET2, "fixed_plus")


def test_query_validation():
    with pytest.raises(ValueError):
        CutQuery((0,), "closed")
    with pytest.raises(IndexError):
        network_state_entropy(NET1, CutQuery((20,)))


def test_bulk_open_n0_whole_boundary_is_one_bell_pair():
    net = pentagon_network(0)
    q = CutQuery(tuple(range(5)), "open")
    assert network_state_entropy(net, q) == 1
    assert min_cut(net, q.region, count_bulk=True) == 1


def test_fixed_plus_n0_matches_dense_state():
    net = pentagon_network(0)
    state = network_state(net, "fixed_plus")
    assert state.n_qubits == 5
    psi = stabiliser_vector([str(g) for g in state.generators])
    for k in range(1, 5):
        for A in itertools.combinations(range(5), k):
            s = network_state_entropy(net, CutQuery(A), state=state)
            assert s == pytest.approx(renyi_entropy(psi, A, 5, 2.0), abs=1e-9)
            # a single perfect tensor: the cut is min(|A|, |A^c|) and is attained
            assert s == min_cut(net, A) == min(k, 5 - k)


def test_min_cut_examples():
    net = pentagon_network(0)
    assert min_cut(net, (0, 1)) == 2
    # one outer pentagon's four boundary legs at n=1 are cut off by its single contraction edge;
    # counting its own bulk leg as well raises the cut to 2
    assert min_cut(NET1, (0, 1, 2, 3)) == 1
    assert min_cut(NET1, (0, 1, 2, 3), count_bulk=True) == 2
    with pytest.raises(ValueError):
        min_cut(net, ())
    with pytest.raises(ValueError):
        min_cut(net, tuple(range(5)))


def test_cut_graph_capacities():
    G = cut_graph(NET2)
    assert G.number_of_nodes() == len(NET2.legos)
    assert sum(d["capacity"] for *_, d in G.edges(data=True)) == len(NET2.edges)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 19), min_size=1, max_size=19))
def test_cut_symmetry(region):
    comp = tuple(q for q in range(20) if q not in region)
    assert min_cut(NET1, tuple(region)) == min_cut(NET1, comp)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 19), min_size=1, max_size=19))
def test_rt_bound_on_arbitrary_regions_n1(region):
    A = tuple(sorted(region))
    assert network_state_entropy(NET1, CutQuery(A), state=STATE1_FIXED) <= min_cut(NET1, A)


@pytest.mark.parametrize("net,state", [(NET1, STATE1_FIXED), (NET2, STATE2_FIXED)], ids=["n1", "n2"])
def test_rt_bound_on_every_contiguous_interval(net, state):
    n = net.n_boundary
    for A in contiguous_intervals(n):
        assert network_state_entropy(net, CutQuery(A), state=state) <= min_cut(net, A)


def test_rt_equality_on_single_layer_intervals():
    # intervals that stay inside one outer pentagon, or take whole pentagons, are attained exactly
    for w in (1, 2, 3, 4, 8, 12, 16):
        for s in range(0, 20, 4):
            A = tuple((s + k) % 20 for k in range(w))
            assert network_state_entropy(NET1, CutQuery(A), state=STATE1_FIXED) == min_cut(NET1, A), A


def test_entropy_purity_symmetry_n2():
    rng = np.random.default_rng(0)
    for _ in range(20):
        mask = rng.random(55) < 0.5
        A = tuple(np.flatnonzero(mask))
        B = tuple(np.flatnonzero(~mask))
        if A and B:
            assert (network_state_entropy(NET2, CutQuery(A), state=STATE2_FIXED)
                    == network_state_entropy(NET2, CutQuery(B), state=STATE2_FIXED))


def test_alpha_independence():
    for A in [(0, 1, 2), tuple(range(10, 30))]:
        vals = {network_state_entropy(NET2, CutQuery(A), alpha=a, state=STATE2_FIXED) for a in (1.0, 2.0, 3.0)}
        assert len(vals) == 1


def test_bulk_open_excess_exists_at_n2():
    state = network_state(NET2, "open")
    excess = [A for A in contiguous_intervals(55, [4, 8, 12])
              if network_state_entropy(NET2, CutQuery(A, "open"), state=state) > min_cut(NET2, A)]
    assert excess


def test_black_hole_horizon_entropy():
    net = black_hole(2)
    horizon = tuple(net.horizon_labels)
    assert network_state_entropy(net, CutQuery(horizon, "open")) == 5
    assert min_cut(net, horizon) == 5


def test_contiguous_intervals_enumeration():
    got = list(contiguous_intervals(5, [2]))
    assert got[0] == (0, 1) and got[-1] == (4, 0) and len(got) == 5
    assert sum(1 for _ in contiguous_intervals(20)) == 20 * 19
