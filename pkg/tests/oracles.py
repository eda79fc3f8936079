"""Dense-matrix and brute-force reference implementations used only by the tests.

Qubit 0 is the most significant tensor factor throughout.
"""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
MATS = {"I": I2, "X": PX, "Y": PY, "Z": PZ}


def pauli_matrix(text: str) -> np.ndarray:
    """Dense matrix of a signed Pauli string such as ``-iXZY``."""
    s = text
    coeff = 1
    if s.startswith("-"):
        coeff, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if s.startswith("i"):
        coeff, s = coeff * 1j, s[1:]
    return coeff * reduce(np.kron, [MATS[c] for c in s], np.eye(1, dtype=complex))


def stabiliser_vector(gens: list[str], seed: int = 0) -> np.ndarray:
    """The unique +1 eigenvector of a full set of stabiliser generators."""
    n = len(gens[0].lstrip("+-i"))
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    for g in gens:
        v = 0.5 * (v + pauli_matrix(g) @ v)
    norm = np.linalg.norm(v)
    assert norm > 1e-6, "generators do not stabilise a common state"
    return v / norm


def reduced_density(psi: np.ndarray, region, n: int) -> np.ndarray:
    region = list(region)
    rest = [q for q in range(n) if q not in region]
    M = psi.reshape([2] * n).transpose(region + rest).reshape(2 ** len(region), -1)
    return M @ M.conj().T


def renyi_entropy(psi: np.ndarray, region, n: int, alpha: float = 2.0) -> float:
    if len(region) == 0 or len(region) == n:
        return 0.0
    ev = np.clip(np.linalg.eigvalsh(reduced_density(psi, region, n)), 0, None)
    ev = ev[ev > 1e-12]
    if alpha == 1:
        return float(-(ev * np.log2(ev)).sum())
    return float(np.log2((ev ** alpha).sum()) / (1 - alpha))


def choi_isometry(psi: np.ndarray, k: int, n: int) -> np.ndarray:
    """V with Choi vector psi (inputs first): V[b, i] = sqrt(2^k) psi[i, b]."""
    return np.sqrt(2 ** k) * psi.reshape(2 ** k, 2 ** (n - k)).T


def all_paulis(n: int, max_weight: int):
    for w in range(max_weight + 1):
        for qs in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                s = ["I"] * n
                for q, c in zip(qs, letters):
                    s[q] = c
                yield "".join(s)


def symp(a: str, b: str) -> int:
    """Commutation bit of two unsigned Pauli strings."""
    anti = sum(1 for p, q in zip(a, b) if p != "I" and q != "I" and p != q)
    return anti % 2


def brute_distance(checks: list[str], logicals: list[str], n: int, max_weight: int = 8) -> int:
    """Lowest weight of a Pauli commuting with every check but not with some logical."""
    for p in all_paulis(n, max_weight):
        if "".join(p) == "I" * n:
            continue
        if any(symp(p, c) for c in checks):
            continue
        if any(symp(p, lg) for lg in logicals):
            return sum(c != "I" for c in p)
    raise AssertionError("no logical found below max_weight")
