"""Lego networks, their exact contraction, and the derived constructions.

Contraction works on the stabiliser group of the whole network state (every
open leg kept, bulk legs included). Contracting legs i and j projects them onto
a Bell pair and discards them: the surviving group consists of the elements
whose (i, j) part commutes with the Bell stabilisers, each multiplied by the
Bell expectation value of that part. For a Hadamard-twisted edge the Bell pair
is ``(I x H)|Phi+>`` with stabilisers ``X_i Z_j`` and ``Z_i X_j``.

The contracted state is the Choi state of the encoder ``V`` (inputs = bulk legs).
Splitting it with the input columns pivoted first yields the boundary checks and
one ``(X, Z)`` representative pair per input.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .legos import Lego, lego_pentagon, lego_plus, lego_r4, lego_zero
from .pauli import (
    CheckMatrix,
    Inconsistent,
    PauliString,
    StabiliserState,
    _mul_rows_into,
    rref_phased,
)
from .tessellation import Tiling, build_tiling

Leg = tuple[int, int]  # (node, slot)


@dataclass(frozen=True)
class NetEdge:
    a: int
    sa: int
    b: int
    sb: int
    hadamard: bool = False


@dataclass
class LegoNetwork:
    legos: dict[int, Lego]
    edges: list[NetEdge]
    bulk_legs: list[Leg]
    boundary_legs: list[Leg]
    horizon_legs: list[Leg] = field(default_factory=list)
    schlafli: tuple[int, int] | None = None
    n_layers: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            for leg in ((e.a, e.sa), (e.b, e.sb)):
                self._check_leg(leg, seen)
        for leg in self.bulk_legs + self.boundary_legs + self.horizon_legs:
            self._check_leg(leg, seen)
        total = sum(lego.n_legs for lego in self.legos.values())
        if len(seen) != total:
            raise ValueError(f"{total - len(seen)} lego legs are neither contracted nor open")

    def _check_leg(self, leg, seen):
        node, slot = leg
        if node not in self.legos or not 0 <= slot < self.legos[node].n_legs:
            raise ValueError(f"leg {leg} does not exist")
        if leg in seen:
            raise ValueError(f"leg {leg} used twice")
        seen.add(leg)

    @property
    def n_bulk(self) -> int:
        return len(self.bulk_legs)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_legs)

    @property
    def input_legs(self) -> list[Leg]:
        return self.bulk_legs + self.horizon_legs

    def label(self, leg: Leg) -> str:
        node, slot = leg
        if leg in self._roles()["bulk"]:
            return f"b{node}"
        if leg in self._roles()["horizon"]:
            return f"h{node}.{slot}"
        return f"{node}.{slot}"

    def _roles(self):
        if "_role_sets" not in self.__dict__:
            self.__dict__["_role_sets"] = {"bulk": set(self.bulk_legs), "horizon": set(self.horizon_legs)}
        return self.__dict__["_role_sets"]

    @property
    def bulk_labels(self) -> list[str]:
        return [self.label(leg) for leg in self.bulk_legs]

    @property
    def boundary_labels(self) -> list[str]:
        return [self.label(leg) for leg in self.boundary_legs]

    @property
    def horizon_labels(self) -> list[str]:
        return [self.label(leg) for leg in self.horizon_legs]


def assemble_network(tiling: Tiling, lego: Lego, hadamard_edges: bool) -> LegoNetwork:
    if lego.n_legs != tiling.p + 1 or lego.bulk_leg is None:
        raise ValueError(f"lego {lego.name} has {lego.n_legs} legs; tiling needs {tiling.p} + 1 bulk")
    if lego.bulk_leg != tiling.p:
        raise ValueError("bulk leg must be the last lego leg")
    legos = {f.face_id: lego for f in tiling.faces}
    edges = [NetEdge(a, sa, b, sb, hadamard_edges) for a, sa, b, sb in tiling.contraction_edges]
    return LegoNetwork(
        legos=legos,
        edges=edges,
        bulk_legs=[(f.face_id, lego.bulk_leg) for f in tiling.faces],
        boundary_legs=list(tiling.open_legs),
        schlafli=tiling.schlafli,
        n_layers=tiling.n_layers,
        meta={"hadamard_edges": hadamard_edges, "lego": lego.name},
    )


def pentagon_network(n: int) -> LegoNetwork:
    return assemble_network(build_tiling((5, 4), n), lego_pentagon(), hadamard_edges=False)


def r4_network(n: int) -> LegoNetwork:
    return assemble_network(build_tiling((4, 5), n), lego_r4(), hadamard_edges=True)


def network_for(schlafli, n: int) -> LegoNetwork:
    schlafli = tuple(schlafli)
    if schlafli == (5, 4):
        return pentagon_network(n)
    if schlafli == (4, 5):
        return r4_network(n)
    raise ValueError(f"unsupported tiling {schlafli}")


# ---------------------------------------------------------------------------
# contraction engine


class _Tableau:
    """Mutable generator list over a changing set of labelled legs."""

    def __init__(self):
        self.x = np.zeros((0, 0), np.uint8)
        self.z = np.zeros((0, 0), np.uint8)
        self.ph = np.zeros(0, np.int64)
        self.labels: list = []
        self.frame: list = []  # (label, letter) corrections applied

    @classmethod
    def from_state(cls, state: StabiliserState, labels=None):
        t = cls()
        t.x, t.z, t.ph = state.x.copy(), state.z.copy(), state.phase.copy()
        t.labels = list(labels if labels is not None else state.leg_labels)
        return t

    def add(self, state: StabiliserState, labels: Sequence):
        m, n = self.x.shape
        sm, sn = state.x.shape
        x = np.zeros((m + sm, n + sn), np.uint8)
        z = np.zeros_like(x)
        x[:m, :n], z[:m, :n] = self.x, self.z
        x[m:, n:], z[m:, n:] = state.x, state.z
        self.x, self.z = x, z
        self.ph = np.concatenate([self.ph, state.phase])
        self.labels.extend(labels)

    def bell(self, la, lb, hadamard: bool) -> None:
        i, j = self.labels.index(la), self.labels.index(lb)
        saved = (self.x.copy(), self.z.copy(), self.ph.copy())
        for letter in (None, "X", "Y", "Z"):
            if letter is not None:
                self.x, self.z, self.ph = (a.copy() for a in saved)
                # Pauli on leg j flips the sign of every generator it anticommutes with
                qx, qz = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}[letter]
                anti = (self.x[:, j] & qz) ^ (self.z[:, j] & qx)
                self.ph = (self.ph + 2 * anti) % 4
            try:
                self._bell_once(i, j, hadamard)
            except Inconsistent:
                continue
            if letter is not None:
                self.frame.append((lb, letter))
            return
        raise Inconsistent(f"cannot contract {la} with {lb}")  # pragma: no cover

    def _bell_once(self, i: int, j: int, hadamard: bool) -> None:
        x, z, ph = self.x, self.z, self.ph
        if hadamard:
            cons = [x[:, i] ^ z[:, j], z[:, i] ^ x[:, j]]
        else:
            cons = [x[:, i] ^ x[:, j], z[:, i] ^ z[:, j]]
        drop = []
        for t in range(2):
            c = cons[t].copy()
            c[drop] = 0
            hits = np.flatnonzero(c)
            if hits.size == 0:
                continue
            p = hits[0]
            rows = hits[1:]
            _mul_rows_into(x, z, ph, rows, x[p].copy(), z[p].copy(), ph[p])
            if t == 0:
                if hadamard:
                    cons[1] = z[:, i] ^ x[:, j]
                else:
                    cons[1] = z[:, i] ^ z[:, j]
            drop.append(p)
        keep = np.ones(len(ph), bool)
        keep[drop] = False
        if not hadamard:
            # <Phi+| Y Y |Phi+> = -1; the other allowed parts have expectation +1
            ph[:] = (ph + 2 * (x[:, i] & z[:, i])) % 4
        cols = np.ones(x.shape[1], bool)
        cols[[i, j]] = False
        x, z, ph = x[keep][:, cols], z[keep][:, cols], ph[keep]
        if x.shape[0] > x.shape[1]:
            x, z, ph, r, _ = rref_phased(x, z, ph)
            if (ph[r:] % 4).any():
                raise Inconsistent("zero overlap with the Bell pair")
            x, z, ph = x[:r], z[:r], ph[:r]
        self.x, self.z, self.ph = x, z, ph
        self.labels = [lab for k, lab in enumerate(self.labels) if k not in (i, j)]

    def to_state(self, order: Sequence) -> StabiliserState:
        idx = [self.labels.index(lab) for lab in order]
        return StabiliserState(self.x[:, idx], self.z[:, idx], self.ph, list(order))


def contract_state(network: LegoNetwork, order: Sequence[int] | None = None) -> tuple[StabiliserState, list]:
    """Contract every edge; returns the state on (inputs, boundary) legs and the frame log.

    ``order`` permutes the edge processing order (default: creation order).
    """
    tab = _Tableau()
    added = set()

    def ensure(node):
        if node not in added:
            lego = network.legos[node]
            tab.add(lego.state(), [(node, s) for s in range(lego.n_legs)])
            added.add(node)

    edge_ids = range(len(network.edges)) if order is None else order
    for k in edge_ids:
        e = network.edges[k]
        ensure(e.a)
        ensure(e.b)
        tab.bell((e.a, e.sa), (e.b, e.sb), e.hadamard)
    for node in network.legos:
        ensure(node)
    legs = network.input_legs + network.boundary_legs
    state = tab.to_state(legs)
    state.leg_labels = [network.label(leg) for leg in legs]
    return state, tab.frame


# ---------------------------------------------------------------------------
# codes


@dataclass
class LogicalRep:
    bulk: str
    X: PauliString
    Z: PauliString


@dataclass
class HolographicCode:
    boundary_labels: list[str]
    input_labels: list[str]
    checks: CheckMatrix
    logical_reps: list[LogicalRep]
    state: StabiliserState  # Choi state, columns = inputs then boundary
    meta: dict = field(default_factory=dict)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_labels)

    @property
    def horizon_labels(self) -> list[str]:
        return list(self.meta.get("horizon", []))

    @property
    def bulk_labels(self) -> list[str]:
        h = set(self.horizon_labels)
        return [b for b in self.input_labels if b not in h]

    @property
    def n_bulk(self) -> int:
        return len(self.bulk_labels)

    def logical(self, bulk: str | None = None) -> LogicalRep:
        bulk = bulk or self.central
        for rep in self.logical_reps:
            if rep.bulk == bulk:
                return rep
        raise KeyError(f"unknown bulk leg {bulk!r}")

    @property
    def central(self) -> str:
        return self.meta.get("central", self.input_labels[0])

    def to_state(self) -> StabiliserState:
        return self.state.copy()

    def check_invariants(self) -> None:
        """Raise AssertionError if commutation or rank relations fail."""
        H = self.checks
        assert not H.commutation_matrix().any(), "checks do not commute"
        reps = [p for rep in self.logical_reps for p in (rep.X, rep.Z)]
        if reps:
            L = CheckMatrix.from_paulis(reps)
            assert not H.commutation_matrix(L).any(), "logical rep anticommutes with a check"
            C = L.commutation_matrix()
            k = len(self.logical_reps)
            want = np.kron(np.eye(k, dtype=np.uint8), np.array([[0, 1], [1, 0]], np.uint8))
            assert np.array_equal(C, want), "logical reps do not form symplectic pairs"
        assert H.rank() == self.n_boundary - len(self.input_labels), "check rank mismatch"


def split_code(state: StabiliserState, n_inputs: int, meta: dict | None = None) -> HolographicCode:
    """Checks and canonical logical representatives of a Choi state (inputs first)."""
    n = state.n_qubits
    k = n_inputs
    in_cols = [c for q in range(k) for c in (q, n + q)]
    rest = [c for c in range(2 * n) if c not in set(in_cols)]
    x, z, ph, r, piv = rref_phased(state.x, state.z, state.phase, in_cols + rest)
    labels = state.leg_labels
    bx, bz = {}, {}
    check_rows = []
    for row, c in enumerate(piv):
        if c in set(in_cols):
            q, is_z = (c, False) if c < n else (c - n, True)
            p = PauliString(x[row, k:], z[row, k:], int(ph[row]))
            (bz if is_z else bx)[q] = p
        else:
            check_rows.append(row)
    if len(bx) != k or len(bz) != k:
        raise ValueError("network is not an isometric encoder of its inputs")
    if check_rows:
        rows = np.hstack([x[check_rows, k:], z[check_rows, k:]])
        checks = CheckMatrix(rows, ph[check_rows])
    else:
        checks = CheckMatrix(np.zeros((0, 2 * (n - k)), np.uint8))
    reps = [LogicalRep(labels[q], bx[q], bz[q]) for q in range(k)]
    return HolographicCode(list(labels[k:]), list(labels[:k]), checks, reps, state, dict(meta or {}))


def contract(network: LegoNetwork, order: Sequence[int] | None = None) -> HolographicCode:
    state, frame = contract_state(network, order)
    meta = {
        "schlafli": list(network.schlafli) if network.schlafli else None,
        "n": network.n_layers,
        "hadamard_edges": bool(network.meta.get("hadamard_edges", False)),
        "gauge": None,
        "frame": [[str(lab), letter] for lab, letter in frame],
        "horizon": network.horizon_labels,
    }
    if network.bulk_legs:
        meta["central"] = network.label(network.bulk_legs[0])
    for key in ("sides",):
        if key in network.meta:
            meta[key] = network.meta[key]
    return split_code(state, len(network.input_legs), meta)


def gauge_fix(code: HolographicCode, kept_bulk: str | Sequence[str] | None = None, basis: str = "X") -> HolographicCode:
    """Fix every bulk input except ``kept_bulk`` to |+> (basis X) or |0> (basis Z)."""
    basis = basis.upper()
    if basis not in ("X", "Z"):
        raise ValueError("basis must be X or Z")
    kept = [code.central] if kept_bulk is None else ([kept_bulk] if isinstance(kept_bulk, str) else list(kept_bulk))
    for b in kept:
        if b not in code.bulk_labels:
            raise KeyError(f"unknown bulk leg {b!r}")
    fixed = [b for b in code.bulk_labels if b not in kept]
    tab = _Tableau.from_state(code.state)
    anc = lego_plus() if basis == "X" else lego_zero()
    for b in fixed:
        tab.add(anc.state(), [("anc", b)])
        tab.bell(b, ("anc", b), hadamard=False)
    inputs = [b for b in code.input_labels if b not in fixed]
    state = tab.to_state(inputs + code.boundary_labels)
    meta = dict(code.meta)
    meta["gauge"] = basis if fixed else meta.get("gauge")
    meta["central"] = kept[0] if kept else None
    return split_code(state, len(inputs), meta)


def build_code(schlafli, n: int, gauge: str | None = None) -> HolographicCode:
    """Contract the pentagon ({5,4}) or r4 ({4,5}) network, optionally gauge-fixed around the centre."""
    code = contract(network_for(schlafli, n))
    if gauge:
        code = gauge_fix(code, code.central, gauge)
    return code


# ---------------------------------------------------------------------------
# black hole, wormhole, foliation


def black_hole(n: int, tiling: Tiling | None = None) -> LegoNetwork:
    """Pentagon network with the central lego removed; its partner legs become horizon legs."""
    if n < 1:
        raise ValueError("a black hole needs at least one layer around the centre")
    net = pentagon_network(n) if tiling is None else assemble_network(tiling, lego_pentagon(), False)
    horizon = []
    edges = []
    for e in net.edges:
        if e.a == 0:
            horizon.append((e.b, e.sb))
        elif e.b == 0:
            horizon.append((e.a, e.sa))
        else:
            edges.append(e)
    legos = {k: v for k, v in net.legos.items() if k != 0}
    return LegoNetwork(
        legos=legos,
        edges=edges,
        bulk_legs=[leg for leg in net.bulk_legs if leg[0] != 0],
        boundary_legs=net.boundary_legs,
        horizon_legs=horizon,
        schlafli=net.schlafli,
        n_layers=n,
        meta={"hadamard_edges": False, "lego": "pentagon"},
    )


def wormhole(n: int) -> LegoNetwork:
    """Two black-hole copies whose horizon legs are pairwise contracted."""
    left = black_hole(n)
    off = max(left.legos) + 1
    shift = lambda leg: (leg[0] + off, leg[1])  # noqa: E731
    legos = dict(left.legos)
    legos.update({k + off: v for k, v in left.legos.items()})
    edges = list(left.edges) + [NetEdge(e.a + off, e.sa, e.b + off, e.sb, e.hadamard) for e in left.edges]
    edges += [NetEdge(h[0], h[1], h[0] + off, h[1], False) for h in left.horizon_legs]
    net = LegoNetwork(
        legos=legos,
        edges=edges,
        bulk_legs=left.bulk_legs + [shift(leg) for leg in left.bulk_legs],
        boundary_legs=left.boundary_legs + [shift(leg) for leg in left.boundary_legs],
        schlafli=left.schlafli,
        n_layers=n,
        meta={"hadamard_edges": False, "lego": "pentagon"},
    )
    nb = left.n_boundary
    net.meta["sides"] = [list(range(nb)), list(range(nb, 2 * nb))]
    return net


@dataclass
class FoliatedCode:
    """Alternating encoder / un-encoder chain of a code.

    ``closed_webs`` are the composite checks: elements of the product of block
    states that act trivially on the open legs and are Bell-compatible on every
    contracted pair. They are listed on the internal (interface) legs.
    ``correlators`` pair an operator on one bottom input with its image on the top.
    """

    rounds: int
    bottom_labels: list[str]
    top_labels: list[str]
    internal_labels: list[str]
    closed_webs: list[PauliString]
    web_is_boundary_only: list[bool]
    correlators: list[LogicalRep]
    state: StabiliserState  # bottom legs then top legs

    def correlator(self, bulk: str) -> LogicalRep:
        for c in self.correlators:
            if c.bulk == bulk:
                return c
        raise KeyError(bulk)


def foliate(code: HolographicCode, rounds: int) -> FoliatedCode:
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    k, nb = len(code.input_labels), code.n_boundary
    n_blocks = 2 * rounds
    blocks = [code.state if t % 2 == 0 else code.state.conjugate() for t in range(n_blocks)]
    labels = [[(t, lab) for lab in code.state.leg_labels] for t in range(n_blocks)]
    pairs = []
    for t in range(n_blocks - 1):
        legs = code.boundary_labels if t % 2 == 0 else code.input_labels
        if len(legs) == 0:
            raise ValueError("arity mismatch between blocks")
        pairs += [((t, lab), (t + 1, lab), t % 2 == 0) for lab in legs]
    bottom = [(0, lab) for lab in code.input_labels]
    top = [(n_blocks - 1, lab) for lab in code.input_labels]

    # closed webs: left nullspace of the open-leg and pair constraints on the product group
    prod = StabiliserState.product(blocks)
    all_labels = [lab for ls in labels for lab in ls]
    col = {lab: q for q, lab in enumerate(all_labels)}
    cons = []
    for lab in bottom + top:
        q = col[lab]
        cons += [prod.x[:, q], prod.z[:, q]]
    for a, b, _ in pairs:
        i, j = col[a], col[b]
        cons += [prod.x[:, i] ^ prod.x[:, j], prod.z[:, i] ^ prod.z[:, j]]
    C = np.array(cons, np.uint8).T if cons else np.zeros((prod.n_generators, 0), np.uint8)
    N = gf2.left_nullspace(C)
    internal = [lab for a, b, _ in pairs for lab in (a, b)]
    int_cols = [col[lab] for lab in internal]
    webs, boundary_only = [], []
    for coeffs in N:
        g = prod.group_element(coeffs)
        webs.append(g.restrict(int_cols))
        on_bulk = any(g.x[col[a]] | g.z[col[a]] for a, b, is_bd in pairs if not is_bd)
        boundary_only.append(not on_bulk)

    # correlators from the contracted chain
    tab = _Tableau()
    for t, st in enumerate(blocks):
        tab.add(st, labels[t])
    for a, b, _ in pairs:
        tab.bell(a, b, hadamard=False)
    state = tab.to_state(bottom + top)
    state.leg_labels = [f"bottom:{lab}" for _, lab in bottom] + [f"top:{lab}" for _, lab in top]
    split = split_code(state, k)
    corr = []
    for q, rep in enumerate(split.logical_reps):
        ops = []
        for letter, half in (("X", rep.X), ("Z", rep.Z)):
            lead = PauliString.single(k, q, letter)
            ops.append(PauliString(np.concatenate([lead.x, half.x]), np.concatenate([lead.z, half.z]), half.phase))
        corr.append(LogicalRep(code.input_labels[q], *ops))
    return FoliatedCode(
        rounds=rounds,
        bottom_labels=[f"bottom:{lab}" for _, lab in bottom],
        top_labels=[f"top:{lab}" for _, lab in top],
        internal_labels=[f"{t}:{lab}" for t, lab in internal],
        closed_webs=webs,
        web_is_boundary_only=boundary_only,
        correlators=corr,
        state=state,
    )
