"""Phase-free/pi Clifford spider graphs and Pauli-web checking.

A Pauli web labels every edge and open leg with a Pauli. The label of an edge
is the Pauli seen from its first spider; across a Hadamard edge the far end
sees X and Z exchanged. A web is valid when, at every Z-spider, the
X-components of the incident labels are all equal and the Z-components have
even parity (dually for X-spiders).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .pauli import PauliString

_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTER = {v: k for k, v in _BITS.items()}


@dataclass
class SpiderGraph:
    spiders: list[tuple[str, int]] = field(default_factory=list)  # (kind, phase in units of pi)
    edges: list[tuple[int, int, bool]] = field(default_factory=list)  # (a, b, hadamard)
    open_legs: list[tuple[int, str]] = field(default_factory=list)  # (spider, label)

    def __post_init__(self):
        for kind, phase in self.spiders:
            if kind not in ("Z", "X"):
                raise ValueError(f"unknown spider kind {kind!r}")
            if phase not in (0, 1):
                raise ValueError("only phases 0 and pi are supported")
        labels = [lab for _, lab in self.open_legs]
        if len(set(labels)) != len(labels):
            raise ValueError("open-leg labels must be unique")

    def add_spider(self, kind: str, phase: int = 0) -> int:
        self.spiders.append((kind, phase))
        self.__post_init__()
        return len(self.spiders) - 1

    @property
    def open_labels(self) -> list[str]:
        return [lab for _, lab in self.open_legs]

    def _incidences(self):
        """Per spider: list of (variable index, swapped) for each incident leg end."""
        inc = [[] for _ in self.spiders]
        for e, (a, b, had) in enumerate(self.edges):
            inc[a].append((e, False))
            inc[b].append((e, had))
        base = len(self.edges)
        for k, (s, _) in enumerate(self.open_legs):
            inc[s].append((base + k, False))
        return inc


@dataclass
class PauliWeb:
    edge_labels: dict = field(default_factory=dict)  # edge index or open-leg label -> letter


def graph_state_diagram(adjacency, labels=None) -> SpiderGraph:
    """One Z-spider per vertex with an open leg; Hadamard edges for graph edges."""
    A = np.asarray(adjacency)
    n = A.shape[0]
    labels = labels or [str(v) for v in range(n)]
    g = SpiderGraph(spiders=[("Z", 0)] * n)
    g.edges = [(u, v, True) for u in range(n) for v in range(u + 1, n) if A[u, v]]
    g.open_legs = [(v, labels[v]) for v in range(n)]
    return g


def _label_bits(graph: SpiderGraph, web: PauliWeb) -> np.ndarray:
    n_var = len(graph.edges) + len(graph.open_legs)
    bits = np.zeros((n_var, 2), dtype=np.uint8)
    open_index = {lab: len(graph.edges) + k for k, (_, lab) in enumerate(graph.open_legs)}
    for key, letter in web.edge_labels.items():
        if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
            if not 0 <= key < len(graph.edges):
                raise KeyError(f"web labels unknown edge {key}")
            idx = int(key)
        elif key in open_index:
            idx = open_index[key]
        else:
            raise KeyError(f"web labels unknown leg {key!r}")
        bits[idx] = _BITS[letter.upper()]
    return bits


def verify_pauli_web(graph: SpiderGraph, web: PauliWeb) -> bool:
    bits = _label_bits(graph, web)
    for (kind, _), ends in zip(graph.spiders, graph._incidences()):
        if not ends:
            continue
        comps = np.array([bits[v][::-1] if swapped else bits[v] for v, swapped in ends])
        # Z-spider: X-parts all-or-none, Z-parts even; X-spider swaps the roles
        copy, parity = (comps[:, 0], comps[:, 1]) if kind == "Z" else (comps[:, 1], comps[:, 0])
        if copy.min() != copy.max() or parity.sum() % 2:
            return False
    return True


def web_sign(graph: SpiderGraph, web: PauliWeb) -> int:
    """Sign picked up from pi-phase spiders that the web highlights in the opposite colour."""
    bits = _label_bits(graph, web)
    flips = 0
    for (kind, phase), ends in zip(graph.spiders, graph._incidences()):
        if phase and ends:
            v, swapped = ends[0]
            comp = bits[v][::-1] if swapped else bits[v]
            flips += int(comp[0] if kind == "Z" else comp[1])
    return -1 if flips % 2 else 1


def web_constraints(graph: SpiderGraph) -> np.ndarray:
    """Linear constraints (rows) on the 2 bits per edge/open leg defining valid webs."""
    n_var = len(graph.edges) + len(graph.open_legs)
    rows = []

    def col(v, swapped, comp):
        # comp 0 = X part, 1 = Z part as seen at this end
        return 2 * v + (1 - comp if swapped else comp)

    for (kind, _), ends in zip(graph.spiders, graph._incidences()):
        if not ends:
            continue
        copy_c, par_c = (0, 1) if kind == "Z" else (1, 0)
        first = ends[0]
        for other in ends[1:]:
            r = np.zeros(2 * n_var, np.uint8)
            r[col(*first, copy_c)] ^= 1
            r[col(*other, copy_c)] ^= 1
            rows.append(r)
        r = np.zeros(2 * n_var, np.uint8)
        for end in ends:
            r[col(*end, par_c)] ^= 1
        rows.append(r)
    return np.array(rows, dtype=np.uint8).reshape(-1, 2 * n_var)


def web_space(graph: SpiderGraph) -> np.ndarray:
    """Basis of all valid webs as bit-vectors (x, z interleaved per edge, then per open leg)."""
    return gf2.nullspace(web_constraints(graph))


def open_leg_group(graph: SpiderGraph) -> np.ndarray:
    """Symplectic rows (x-block | z-block over open legs) spanned by valid webs."""
    W = web_space(graph)
    base = len(graph.edges)
    k = len(graph.open_legs)
    xs = W[:, [2 * (base + j) for j in range(k)]]
    zs = W[:, [2 * (base + j) + 1 for j in range(k)]]
    R, r, _ = gf2.rref(np.hstack([xs, zs]))
    return R[:r]


def has_extension(graph: SpiderGraph, open_pauli: PauliString) -> bool:
    """Whether some interior labelling completes the given open-leg labels to a valid web."""
    return extend_web(graph, open_pauli) is not None


def extend_web(graph: SpiderGraph, open_pauli: PauliString) -> PauliWeb | None:
    C = web_constraints(graph)
    base = len(graph.edges)
    k = len(graph.open_legs)
    fixed_cols = [2 * (base + j) + c for j in range(k) for c in (0, 1)]
    fixed_vals = np.array([b for j in range(k) for b in (open_pauli.x[j], open_pauli.z[j])], np.uint8)
    free_cols = [c for c in range(C.shape[1]) if c not in set(fixed_cols)]
    rhs = (C[:, fixed_cols].astype(np.int64) @ fixed_vals) % 2
    sol = gf2.solve(C[:, free_cols], rhs) if free_cols else (None if rhs.any() else np.zeros(0, np.uint8))
    if sol is None:
        return None
    full = np.zeros(C.shape[1], np.uint8)
    full[fixed_cols] = fixed_vals
    full[free_cols] = sol
    labels = {e: _LETTER[(int(full[2 * e]), int(full[2 * e + 1]))] for e in range(base)}
    for j, (_, lab) in enumerate(graph.open_legs):
        labels[lab] = _LETTER[(int(full[2 * (base + j)]), int(full[2 * (base + j) + 1]))]
    return PauliWeb(labels)
