"""Stabiliser-state building blocks ("legos") for the holographic networks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, StabiliserState, paulis


@dataclass(frozen=True)
class Lego:
    name: str
    stabilisers: tuple
    bulk_leg: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "stabilisers", tuple(self.stabilisers))
        n = self.stabilisers[0].n_qubits
        if len(self.stabilisers) != n:
            raise ValueError(f"{self.name}: {len(self.stabilisers)} generators for {n} legs")
        self.state().check_valid()

    @property
    def n_legs(self) -> int:
        return self.stabilisers[0].n_qubits

    @property
    def contractible_legs(self) -> list[int]:
        return [k for k in range(self.n_legs) if k != self.bulk_leg]

    def state(self, labels=None) -> StabiliserState:
        return StabiliserState.from_paulis(list(self.stabilisers), labels)


PENTAGON_STABILISERS = ("XZZXII", "IXZZXI", "XIXZZI", "ZXIXZI", "XXXXXX", "ZZZZZZ")
R4_STABILISERS = ("ZZYYI", "XIXII", "IXIXI", "ZIZXZ", "IIXXX")
ENCODER_412_STABILISERS = ("ZZZZI", "XIXII", "IXIXI", "XXIIX", "ZIZIZ")


def lego_pentagon() -> Lego:
    """Six-leg perfect tensor: [[5,1,3]] code in a Bell pair with the bulk leg 5."""
    return Lego("pentagon", paulis(PENTAGON_STABILISERS), bulk_leg=5)


def lego_pentagon_graph() -> Lego:
    """Pentagon lego with a Hadamard on the bulk leg (graph-state form)."""
    gens = []
    for p in paulis(PENTAGON_STABILISERS):
        x, z = p.x.copy(), p.z.copy()
        x[5], z[5] = p.z[5], p.x[5]
        # H Y H = -Y
        sign = 2 if p.x[5] and p.z[5] else 0
        gens.append(PauliString(x, z, p.phase + sign))
    return Lego("pentagon-graph", gens, bulk_leg=5)


def lego_r4() -> Lego:
    """Five-leg lego of the {4,5} family: four corner legs and bulk leg 4."""
    return Lego("r4", paulis(R4_STABILISERS), bulk_leg=4)


def lego_412() -> Lego:
    """The [[4,1,2]] encoder used by earlier {4,5} constructions (comparison only)."""
    return Lego("412", paulis(ENCODER_412_STABILISERS), bulk_leg=4)


def lego_plus() -> Lego:
    return Lego("plus", paulis(["X"]))


def lego_zero() -> Lego:
    return Lego("zero", paulis(["Z"]))


LEGOS = {"pentagon": lego_pentagon, "r4": lego_r4, "412": lego_412}


def graph_state_stabilisers(adjacency) -> list[PauliString]:
    """Generators X_v prod_{u in N(v)} Z_u of the graph state."""
    A = np.asarray(adjacency)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(A, A.T) or np.any(np.diag(A)) or not np.isin(A, (0, 1)).all():
        raise ValueError("adjacency must be a symmetric 0/1 matrix with zero diagonal")
    n = A.shape[0]
    return [PauliString(np.eye(n, dtype=np.uint8)[v], A[v].astype(np.uint8)) for v in range(n)]


def wheel_adjacency(rim: int = 5) -> np.ndarray:
    """Cycle on ``rim`` vertices plus a hub joined to all of them (hub is last)."""
    n = rim + 1
    A = np.zeros((n, n), dtype=np.uint8)
    for v in range(rim):
        A[v, (v + 1) % rim] = A[(v + 1) % rim, v] = 1
        A[v, rim] = A[rim, v] = 1
    return A
