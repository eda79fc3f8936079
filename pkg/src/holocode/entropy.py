"""Entanglement entropy of network states and the discrete minimal cut."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .legos import lego_plus
from .network import LegoNetwork, _Tableau, contract_state
from .pauli import StabiliserState, region_entropy

TREATMENTS = ("open", "fixed_plus")


@dataclass(frozen=True)
class CutQuery:
    region: tuple  # boundary indices (ints) or leg labels (strings)
    bulk_treatment: str = "fixed_plus"

    def __post_init__(self):
        if self.bulk_treatment not in TREATMENTS:
            raise ValueError(f"bulk_treatment must be one of {TREATMENTS}")
        object.__setattr__(self, "region", tuple(self.region))


def network_state(network: LegoNetwork, bulk_treatment: str = "open") -> StabiliserState:
    """Contracted state with every open leg kept; bulk legs optionally fixed to |+>."""
    state, _ = contract_state(network)
    if bulk_treatment == "open":
        return state
    tab = _Tableau.from_state(state)
    for b in network.bulk_labels:
        tab.add(lego_plus().state(), [("plus", b)])
        tab.bell(b, ("plus", b), hadamard=False)
    keep = [lab for lab in state.leg_labels if lab not in set(network.bulk_labels)]
    return tab.to_state(keep)


def _region_labels(network: LegoNetwork, region) -> list[str]:
    labels = network.boundary_labels
    out = []
    for r in region:
        if isinstance(r, str):
            out.append(r)
        else:
            if not 0 <= int(r) < len(labels):
                raise IndexError(f"boundary index {r} out of range")
            out.append(labels[int(r)])
    return out


def network_state_entropy(network: LegoNetwork, query: CutQuery, alpha: float = 2.0,
                          state: StabiliserState | None = None) -> int:
    """Entropy in bits of a region of the network state.

    Stabiliser states have flat spectra, so every Renyi order gives the same
    value and ``alpha`` does not enter the computation.
    """
    if state is None:
        state = network_state(network, query.bulk_treatment)
    labels = _region_labels(network, query.region)
    idx = [state.leg_labels.index(lab) for lab in labels]
    return region_entropy(state, idx)


def cut_graph(network: LegoNetwork) -> nx.Graph:
    """Lego-adjacency graph with unit capacity per contraction edge."""
    G = nx.Graph()
    G.add_nodes_from(network.legos)
    for e in network.edges:
        if G.has_edge(e.a, e.b):
            G[e.a][e.b]["capacity"] += 1
        else:
            G.add_edge(e.a, e.b, capacity=1)
    return G


def min_cut(network: LegoNetwork, region, count_bulk: bool = False) -> int:
    """Fewest legs that separate the region's legs from all other open legs.

    Legos are nodes; a contraction edge costs 1, and every open leg is a unit
    edge from its lego to the source (region) or sink (complement). A lego whose
    legs are split by the cut therefore costs the number of legs on its cheaper
    side. Bulk legs join the sink only when ``count_bulk`` is set, otherwise they
    are ignored (the naive cut through network edges and boundary legs).
    """
    labels = set(_region_labels(network, region))
    candidates = network.boundary_labels + network.horizon_labels + (network.bulk_labels if count_bulk else [])
    others = [lab for lab in candidates if lab not in labels]
    if not labels or not others:
        raise ValueError("region must be a nonempty proper subset of the open legs")
    G = nx.DiGraph()
    base = cut_graph(network)
    for a, b, d in base.edges(data=True):
        G.add_edge(a, b, capacity=d["capacity"])
        G.add_edge(b, a, capacity=d["capacity"])
    S, T = "_source", "_sink"

    def attach(node, end):
        a, b = (end, node) if end == S else (node, end)
        cap = G[a][b]["capacity"] + 1 if G.has_edge(a, b) else 1
        G.add_edge(a, b, capacity=cap)

    legs = network.boundary_legs + network.horizon_legs + (network.bulk_legs if count_bulk else [])
    for leg in legs:
        lab = network.label(leg)
        attach(leg[0], S if lab in labels else T)
    G.add_node(S)
    G.add_node(T)
    value, _ = nx.maximum_flow(G, S, T)
    return int(value)


def contiguous_intervals(n: int, widths=None):
    """All cyclic intervals of the boundary, as index tuples."""
    widths = range(1, n) if widths is None else widths
    for w in widths:
        for s in range(n):
            yield tuple((s + k) % n for k in range(w))
