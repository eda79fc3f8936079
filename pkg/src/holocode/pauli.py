"""Binary-symplectic Pauli algebra and stabiliser tableaux.

A Pauli string on n qubits is stored as two bit-vectors ``x`` and ``z`` plus a
phase exponent ``phase`` so that the operator is ``i**phase`` times the tensor
product of single-qubit Paulis ``sigma(x_k, z_k)`` with ``sigma(1, 1) = Y``.
With this convention ``X * Z = -iY``.

Matrices of Paulis use block layout: x-block columns ``0..n-1`` followed by the
z-block ``n..2n-1``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import gf2

_CHARS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTERS = np.array(["I", "X", "Z", "Y"])  # index x + 2z

# i-exponent picked up by sigma(x1,z1) * sigma(x2,z2), indexed 8*x1 + 4*z1 + 2*x2 + z2
_G = np.zeros(16, dtype=np.int64)
for _x1 in (0, 1):
    for _z1 in (0, 1):
        for _x2 in (0, 1):
            for _z2 in (0, 1):
                if _x1 and _z1:
                    _g = _z2 - _x2
                elif _x1:
                    _g = _z2 * (2 * _x2 - 1)
                elif _z1:
                    _g = _x2 * (1 - 2 * _z2)
                else:
                    _g = 0
                _G[8 * _x1 + 4 * _z1 + 2 * _x2 + _z2] = _g


class Inconsistent(ValueError):
    """Requested measurement outcome has probability zero."""


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


def phase_exponent(x1, z1, x2, z2) -> np.ndarray:
    """Sum over the last axis of the i-exponents of the qubit-wise products."""
    idx = (8 * np.asarray(x1, dtype=np.int64) + 4 * np.asarray(z1, dtype=np.int64)
           + 2 * np.asarray(x2, dtype=np.int64) + np.asarray(z2, dtype=np.int64))
    return _G[idx].sum(axis=-1)


@dataclass(frozen=True, eq=False)
class PauliString:
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        x = np.array(self.x, dtype=np.uint8).reshape(-1) & 1
        z = np.array(self.z, dtype=np.uint8).reshape(-1) & 1
        if x.shape != z.shape:
            raise ValueError(f"x and z blocks differ in length: {x.size} != {z.size}")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        s = text.strip()
        phase = 0
        if s.startswith(("+", "-")):
            phase = 0 if s[0] == "+" else 2
            s = s[1:]
        if s.startswith("i"):
            phase += 1
            s = s[1:]
        try:
            bits = [_CHARS[c] for c in s.upper()]
        except KeyError as exc:
            raise ValueError(f"not a Pauli string: {text!r}") from exc
        x, z = zip(*bits) if bits else ((), ())
        return cls(np.array(x, dtype=np.uint8), np.array(z, dtype=np.uint8), phase)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        x[qubit], z[qubit] = _CHARS[letter]
        return cls(x, z)

    @classmethod
    def from_symplectic(cls, v, phase: int = 0) -> PauliString:
        v = np.asarray(v, dtype=np.uint8).reshape(-1)
        n = v.size // 2
        return cls(v[:n], v[n:], phase)

    @property
    def n_qubits(self) -> int:
        return self.x.size

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x | self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("non-Hermitian Pauli has no real sign")
        return 1 if self.phase == 0 else -1

    def symplectic(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    def letters(self) -> str:
        return "".join(_LETTERS[self.x + 2 * self.z])

    def __str__(self) -> str:
        prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[self.phase]
        return prefix + self.letters()

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.x, self.z, self.phase + 2)

    def equal_up_to_phase(self, other: PauliString) -> bool:
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def commutes_with(self, other: PauliString) -> bool:
        return symplectic_product(self, other) == 0

    def tensor(self, other: PauliString) -> PauliString:
        return PauliString(np.concatenate([self.x, other.x]), np.concatenate([self.z, other.z]),
                           self.phase + other.phase)

    def restrict(self, qubits: Sequence[int]) -> PauliString:
        q = list(qubits)
        return PauliString(self.x[q], self.z[q], self.phase)

    def conjugate(self) -> PauliString:
        """Complex conjugate: i -> -i and Y -> -Y."""
        n_y = int(np.count_nonzero(self.x & self.z))
        return PauliString(self.x, self.z, -self.phase + 2 * n_y)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix, qubit 0 most significant. Test-oracle sized only."""
        single = {
            (0, 0): np.eye(2, dtype=complex),
            (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
            (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
            (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
        }
        out = np.array([[1j ** self.phase]], dtype=complex)
        for xk, zk in zip(self.x, self.z):
            out = np.kron(out, single[(int(xk), int(zk))])
        return out


def paulis(texts: Iterable[str]) -> list[PauliString]:
    return [PauliString.from_str(t) for t in texts]


def symplectic_product(a: PauliString, b: PauliString) -> int:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits}")
    return int((np.dot(a.x, b.z) + np.dot(a.z, b.x)) % 2)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits}")
    ph = a.phase + b.phase + int(phase_exponent(a.x, a.z, b.x, b.z))
    return PauliString(a.x ^ b.x, a.z ^ b.z, ph)


def _mul_rows_into(x, z, ph, rows, rx, rz, rph) -> None:
    """In place: rows[k] <- rows[k] * r for every selected row index."""
    if len(rows) == 0:
        return
    ph[rows] = (ph[rows] + rph + phase_exponent(x[rows], z[rows], rx, rz)) % 4
    x[rows] ^= rx
    z[rows] ^= rz


# ---------------------------------------------------------------------------
# check matrices


@dataclass
class CheckMatrix:
    """m x 2n bit-matrix of stabiliser rows with optional per-row phases."""

    rows: np.ndarray
    phases: np.ndarray | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.uint8) & 1
        if self.rows.ndim != 2 or self.rows.shape[1] % 2:
            raise ValueError(f"check matrix must be m x 2n, got {self.rows.shape}")
        if self.phases is None:
            self.phases = np.zeros(self.rows.shape[0], dtype=np.int64)
        self.phases = np.asarray(self.phases, dtype=np.int64) % 4

    @classmethod
    def from_paulis(cls, ps: Sequence[PauliString], n_qubits: int | None = None) -> CheckMatrix:
        if not ps:
            if n_qubits is None:
                raise ValueError("empty check list needs n_qubits")
            return cls(np.zeros((0, 2 * n_qubits), np.uint8))
        return cls(np.array([p.symplectic() for p in ps]), np.array([p.phase for p in ps]))

    @classmethod
    def from_strings(cls, texts: Sequence[str], n_qubits: int | None = None) -> CheckMatrix:
        return cls.from_paulis(paulis(texts), n_qubits)

    @property
    def n_qubits(self) -> int:
        return self.rows.shape[1] // 2

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.rows[:, : self.n_qubits]

    @property
    def z(self) -> np.ndarray:
        return self.rows[:, self.n_qubits:]

    def paulis(self) -> list[PauliString]:
        return [PauliString.from_symplectic(r, p) for r, p in zip(self.rows, self.phases)]

    def weights(self) -> np.ndarray:
        return np.count_nonzero(self.x | self.z, axis=1)

    def rank(self) -> int:
        return gf2.rank(self.rows)

    def interleaved(self) -> np.ndarray:
        """Columns reordered as (x_1, z_1, ..., x_n, z_n)."""
        n = self.n_qubits
        out = np.empty_like(self.rows)
        out[:, 0::2] = self.rows[:, :n]
        out[:, 1::2] = self.rows[:, n:]
        return out

    def commutation_matrix(self, other: CheckMatrix | None = None) -> np.ndarray:
        o = self if other is None else other
        return (self.x.astype(np.int64) @ o.z.T + self.z.astype(np.int64) @ o.x.T) % 2

    def to_text(self) -> str:
        lines = [f"{self.n_rows} {self.n_qubits}"]
        lines += [" ".join(str(int(b)) for b in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CheckMatrix:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        m, n = int(lines[0][0]), int(lines[0][1])
        rows = np.array([[int(b) for b in ln] for ln in lines[1:]], dtype=np.uint8).reshape(m, 2 * n)
        if len(lines) - 1 != m:
            raise ValueError(f"header says {m} rows, found {len(lines) - 1}")
        return cls(rows)


def rref_rank(M: CheckMatrix | np.ndarray, columns: Sequence[int] | None = None):
    """GF(2) reduction of a check matrix (phases ignored): ``(reduced, rank, pivots)``."""
    rows = M.rows if isinstance(M, CheckMatrix) else M
    return gf2.rref(rows, columns)


# ---------------------------------------------------------------------------
# stabiliser states


@dataclass
class StabiliserState:
    """Generating set of a stabiliser group on labelled qubits (legs)."""

    x: np.ndarray
    z: np.ndarray
    phase: np.ndarray
    leg_labels: list = field(default_factory=list)

    def __post_init__(self):
        x = np.array(self.x, dtype=np.uint8)
        self.x = x if x.ndim == 2 else x.reshape(len(self.phase), -1)
        self.z = np.array(self.z, dtype=np.uint8).reshape(self.x.shape)
        self.phase = np.array(self.phase, dtype=np.int64) % 4
        if not self.leg_labels:
            self.leg_labels = list(range(self.x.shape[1]))
        if len(self.leg_labels) != self.x.shape[1]:
            raise ValueError("one label per qubit required")

    @classmethod
    def from_paulis(cls, gens: Sequence[PauliString], leg_labels=None) -> StabiliserState:
        n = gens[0].n_qubits
        x = np.array([g.x for g in gens], dtype=np.uint8).reshape(len(gens), n)
        z = np.array([g.z for g in gens], dtype=np.uint8).reshape(len(gens), n)
        return cls(x, z, np.array([g.phase for g in gens]), list(leg_labels or []))

    @classmethod
    def from_strings(cls, texts: Sequence[str], leg_labels=None) -> StabiliserState:
        return cls.from_paulis(paulis(texts), leg_labels)

    @classmethod
    def zeros(cls, n: int, leg_labels=None) -> StabiliserState:
        return cls(np.zeros((n, n), np.uint8), np.eye(n, dtype=np.uint8), np.zeros(n), list(leg_labels or []))

    @classmethod
    def product(cls, states: Sequence[StabiliserState]) -> StabiliserState:
        m = sum(s.n_generators for s in states)
        n = sum(s.n_qubits for s in states)
        x = np.zeros((m, n), np.uint8)
        z = np.zeros((m, n), np.uint8)
        r = c = 0
        for s in states:
            x[r:r + s.n_generators, c:c + s.n_qubits] = s.x
            z[r:r + s.n_generators, c:c + s.n_qubits] = s.z
            r += s.n_generators
            c += s.n_qubits
        labels = [lab for s in states for lab in s.leg_labels]
        return cls(x, z, np.concatenate([s.phase for s in states]), labels)

    @property
    def n_qubits(self) -> int:
        return self.x.shape[1]

    @property
    def n_generators(self) -> int:
        return self.x.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.n_generators == self.n_qubits

    @property
    def generators(self) -> list[PauliString]:
        return [PauliString(xr, zr, p) for xr, zr, p in zip(self.x, self.z, self.phase)]

    def matrix(self) -> np.ndarray:
        return np.hstack([self.x, self.z])

    def copy(self) -> StabiliserState:
        return StabiliserState(self.x.copy(), self.z.copy(), self.phase.copy(), list(self.leg_labels))

    def index(self, label) -> int:
        return self.leg_labels.index(label)

    def conjugate(self) -> StabiliserState:
        n_y = np.count_nonzero(self.x & self.z, axis=1)
        return StabiliserState(self.x.copy(), self.z.copy(), (-self.phase + 2 * n_y) % 4, list(self.leg_labels))

    def check_valid(self) -> None:
        """Raise if generators fail to commute or are dependent."""
        comm = (self.x.astype(np.int64) @ self.z.T + self.z.astype(np.int64) @ self.x.T) % 2
        if comm.any():
            raise ValueError("generators do not commute")
        if gf2.rank(self.matrix()) != self.n_generators:
            raise ValueError("generators are not independent")
        if (self.phase % 2).any():
            raise ValueError("generators must carry +-1 signs")

    def project_measure(self, observable: PauliString, desired_sign: int = 1) -> StabiliserState:
        return project_measure(self, observable, desired_sign)

    def entropy(self, region: Sequence[int]) -> int:
        return region_entropy(self, region)

    def group_element(self, coeffs) -> PauliString:
        """Ordered product of the generators selected by a 0/1 coefficient vector."""
        out = PauliString.identity(self.n_qubits)
        for k in np.flatnonzero(np.asarray(coeffs)):
            out = out * PauliString(self.x[k], self.z[k], self.phase[k])
        return out

    def decompose(self, p: PauliString) -> PauliString | None:
        """Express ``p`` in the group; returns the group element with its true phase, or None."""
        c = gf2.solve(self.matrix().T, p.symplectic())
        if c is None:
            return None
        return self.group_element(c)

    def drop_qubits(self, qubits: Sequence[int]) -> StabiliserState:
        keep = [q for q in range(self.n_qubits) if q not in set(qubits)]
        return StabiliserState(self.x[:, keep], self.z[:, keep], self.phase, [self.leg_labels[q] for q in keep])


def _project_inplace(x, z, ph, ox, oz, oph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    anti = np.flatnonzero((x.astype(np.int64) @ oz + z.astype(np.int64) @ ox) % 2)
    if anti.size:
        p = anti[0]
        _mul_rows_into(x, z, ph, anti[1:], x[p].copy(), z[p].copy(), ph[p])
        x[p], z[p], ph[p] = ox, oz, oph
        return x, z, ph
    return None


def project_measure(state: StabiliserState, observable: PauliString, desired_sign: int = 1) -> StabiliserState:
    """Post-select a Hermitian Pauli measurement on outcome ``desired_sign``.

    Raises Inconsistent when ``-desired_sign * observable`` already lies in the group.
    """
    if not observable.is_hermitian:
        raise ValueError("observable must be Hermitian")
    if observable.n_qubits != state.n_qubits:
        raise ValueError("observable size does not match state")
    if desired_sign not in (1, -1):
        raise ValueError("desired_sign must be +1 or -1")
    target = observable.phase + (0 if desired_sign == 1 else 2)
    out = state.copy()
    res = _project_inplace(out.x, out.z, out.phase, observable.x, observable.z, target % 4)
    if res is not None:
        return out
    elem = state.decompose(observable)
    if elem is None:
        # mixed state and the observable is outside the group: outcome is random
        out.x = np.vstack([out.x, observable.x])
        out.z = np.vstack([out.z, observable.z])
        out.phase = np.append(out.phase, target % 4)
        return out
    if elem.phase != target % 4:
        raise Inconsistent(f"{observable} has fixed sign opposite to the requested outcome")
    return out


def region_entropy(state: StabiliserState, region: Sequence[int]) -> int:
    """Entanglement entropy (bits) of a qubit subset: |A| - dim(S_A)."""
    A = sorted(set(int(a) for a in region))
    n = state.n_qubits
    if any(a < 0 or a >= n for a in A):
        raise IndexError(f"region {region} out of range for {n} qubits")
    comp = [q for q in range(n) if q not in set(A)]
    restricted = np.hstack([state.x[:, comp], state.z[:, comp]])
    dim_inside = state.n_generators - gf2.rank(restricted)
    return len(A) - dim_inside


def group_row_space_equal(a: Sequence[PauliString], b: Sequence[PauliString]) -> bool:
    return gf2.row_space_equal([p.symplectic() for p in a], [p.symplectic() for p in b])


def coset_min_weight(checks: CheckMatrix, logical: PauliString, budget: int = 2 ** 26) -> int:
    """Minimum weight over logical * S for S in the check group, by exhaustive enumeration."""
    n = checks.n_qubits if checks.n_rows else logical.n_qubits
    if logical.n_qubits != n:
        raise ValueError("logical and checks act on different qubit counts")
    R, r, _ = gf2.rref(checks.rows) if checks.n_rows else (np.zeros((0, 2 * n), np.uint8), 0, [])
    gens = R[:r]
    if 2 ** r > budget:
        raise BudgetExceeded(f"group of size 2^{r} exceeds budget {budget}")
    gx = gf2.pack_rows(gens[:, :n]) if r else np.zeros((0, (n + 63) // 64), np.uint64)
    gz = gf2.pack_rows(gens[:, n:]) if r else np.zeros((0, (n + 63) // 64), np.uint64)
    lx = gf2.pack_rows(logical.x)[0]
    lz = gf2.pack_rows(logical.z)[0]
    low = min(r, 14)
    # inner table over the low generators, built so row i is the subset with bitmask i
    tx = np.zeros((1, lx.size), np.uint64)
    tz = np.zeros((1, lz.size), np.uint64)
    for k in range(low):
        tx = np.vstack([tx, tx ^ gx[k]])
        tz = np.vstack([tz, tz ^ gz[k]])
    tx ^= lx
    tz ^= lz
    best = n
    cx = np.zeros_like(lx)
    cz = np.zeros_like(lz)
    high = r - low
    for step in range(2 ** high):
        if step:
            # Gray code: flip the generator indexed by the lowest set bit of step
            k = (step & -step).bit_length() - 1
            cx ^= gx[low + k]
            cz ^= gz[low + k]
        w = np.bitwise_count((tx ^ cx) | (tz ^ cz)).sum(axis=1).min()
        if w < best:
            best = int(w)
    return best


def code_distance(checks: CheckMatrix, logicals: Sequence[PauliString], budget: int = 2 ** 26) -> int:
    """Exact distance for one logical qubit given its (X, Z) pair."""
    lx, lz = logicals
    return min(coset_min_weight(checks, lx, budget), coset_min_weight(checks, lz, budget),
               coset_min_weight(checks, lx * lz, budget))


def rref_phased(x, z, ph, columns: Sequence[int] | None = None):
    """Row reduction of a Pauli tableau that keeps every row a true group element.

    Columns index the block layout (x-block then z-block). Rows are combined by
    right-multiplication, so phases stay exact. Returns ``(x, z, ph, rank, pivots)``
    with fresh arrays.
    """
    x = np.array(x, dtype=np.uint8)
    z = np.array(z, dtype=np.uint8)
    ph = np.array(ph, dtype=np.int64) % 4
    m, n = x.shape
    cols = range(2 * n) if columns is None else columns
    r = 0
    pivots: list[int] = []
    for c in cols:
        if r == m:
            break
        block, k = (x, c) if c < n else (z, c - n)
        hits = np.flatnonzero(block[r:, k]) + r
        if hits.size == 0:
            continue
        p = hits[0]
        if p != r:
            for arr in (x, z, ph):
                arr[[r, p]] = arr[[p, r]]
        others = np.flatnonzero(block[:, k])
        others = others[others != r]
        _mul_rows_into(x, z, ph, others, x[r].copy(), z[r].copy(), ph[r])
        pivots.append(int(c))
        r += 1
    return x, z, ph, r, pivots
