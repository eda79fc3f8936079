"""Erasure and Pauli-noise decoders on the binary symplectic picture.

An error ``e = (e_x | e_z)`` on n qubits has syndrome ``A e`` with
``A = [H_z | H_x]``, so every decoder here works with 2n binary variables:
variable ``q`` is the X-part of qubit q and variable ``n + q`` its Z-part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from . import gf2
from .pauli import CheckMatrix, PauliString

METHODS = ("peeling", "ml_erasure", "bp", "bp_osd")
P_FLOOR = 1e-3


@dataclass
class DecoderConfig:
    method: str = "bp_osd"
    bp_max_iter: int = 200
    osd_order: int = 0
    message_schedule: str = "parallel"
    p_floor: float = P_FLOOR

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown decoder {self.method!r}; choose from {METHODS}")
        if self.osd_order < 0:
            raise ValueError("osd_order must be non-negative")
        if self.bp_max_iter < 1:
            raise ValueError("bp_max_iter must be positive")
        if self.message_schedule != "parallel":
            raise ValueError("only the parallel schedule is implemented")

    @property
    def tag(self) -> str:
        if self.method == "bp_osd":
            return f"bp_osd{self.osd_order}"
        return self.method


@dataclass
class DecodeResult:
    correction: PauliString
    converged: bool
    logical_failure: dict = field(default_factory=dict)
    soft: np.ndarray | None = None
    iterations: int = 0


def parity_matrix(checks: CheckMatrix) -> np.ndarray:
    """Binary matrix A = [H_z | H_x] with A (e_x | e_z) = syndrome."""
    n = checks.n_qubits
    return np.ascontiguousarray(np.hstack([checks.rows[:, n:], checks.rows[:, :n]]))


def syndrome_of(checks: CheckMatrix, error: PauliString) -> np.ndarray:
    v = np.concatenate([error.x, error.z]).astype(np.int64)
    return (parity_matrix(checks).astype(np.int64) @ v % 2).astype(np.uint8)


def _to_pauli(v: np.ndarray) -> PauliString:
    n = v.size // 2
    return PauliString(v[:n].astype(np.uint8), v[n:].astype(np.uint8))


def logical_failure(code, tracked: str, error: PauliString, correction: PauliString) -> bool:
    """True iff the residual acts nontrivially on the tracked bulk qubit.

    A residual that still violates checks is counted as a failure.
    """
    residual = _to_pauli(np.concatenate([error.x ^ correction.x, error.z ^ correction.z]))
    if syndrome_of(code.checks, residual).any():
        return True
    rep = code.logical(tracked)
    return not (residual.commutes_with(rep.X) and residual.commutes_with(rep.Z))


# ---------------------------------------------------------------------------
# packed GF(2) elimination kernel


@nb.njit(cache=True)
def _eliminate(P, ncols):
    """In-place Gauss-Jordan on packed rows; pivots searched in column order 0..ncols-1."""
    m, W = P.shape
    pivots = np.empty(min(m, ncols), np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, m):
            if P[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(W):
                tmp = P[r, k]
                P[r, k] = P[p, k]
                P[p, k] = tmp
        for i in range(m):
            if i != r and (P[i, w] & bit):
                for k in range(W):
                    P[i, k] ^= P[r, k]
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _pack(M: np.ndarray) -> np.ndarray:
    return gf2.pack_rows(M)


def _bit(P, row, col) -> int:
    return int((P[row, col >> 6] >> np.uint64(col & 63)) & np.uint64(1))


# ---------------------------------------------------------------------------
# exact erasure oracle


def erasure_logical_rank(code, erased, tracked: str | None = None) -> int:
    """GF(2) rank (0, 1 or 2) of the tracked qubit's logical operators that fit inside the erasure.

    Stacks the checks and every logical representative, eliminates on the
    non-erased columns and inspects which combinations vanish outside the
    erasure. Logicals of other bulk qubits may be multiplied in freely, i.e.
    those qubits are treated as gauge.
    """
    tracked = tracked or code.central
    E = np.asarray(erased, dtype=bool)
    if E.size != code.n_boundary:
        raise ValueError("erasure pattern length must equal n_boundary")
    if not E.any():
        return 0
    reps = code.logical_reps
    t = [r.bulk for r in reps].index(tracked)
    M = np.vstack([code.checks.rows] + [np.vstack([r.X.symplectic(), r.Z.symplectic()]) for r in reps])
    tag = np.zeros((M.shape[0], 2), np.uint8)
    base = code.checks.n_rows
    tag[base + 2 * t, 0] = 1
    tag[base + 2 * t + 1, 1] = 1
    outside = np.flatnonzero(~np.tile(E, 2))
    P = _pack(np.hstack([M[:, outside], tag]))
    r, _ = _eliminate(P, outside.size)
    k = outside.size
    tags = [[_bit(P, row, k), _bit(P, row, k + 1)] for row in range(r, P.shape[0])]
    return gf2.rank(np.array(tags, np.uint8)) if tags else 0


def ml_erasure_decode(code, erased, tracked: str | None = None) -> bool:
    """Whether the tracked bulk qubit survives erasure of the given boundary qubits."""
    return erasure_logical_rank(code, erased, tracked) == 0


# ---------------------------------------------------------------------------
# peeling


def peel_erasure_decode(checks: CheckMatrix, erased, syndrome) -> DecodeResult:
    """Peeling over the 2n binary variables of the erased qubits.

    Success requires every erased variable to be fixed by some check that has
    exactly one unresolved erased variable left. A stall returns converged=False.
    """
    n = checks.n_qubits
    A = parity_matrix(checks)
    E = np.asarray(erased, dtype=bool)
    s = np.asarray(syndrome, dtype=np.uint8).copy()
    unresolved = np.tile(E, 2)
    value = np.zeros(2 * n, np.uint8)
    # residual syndrome after removing resolved variables; non-erased vars are 0
    sub = A[:, unresolved].astype(np.int64)
    cols = np.flatnonzero(unresolved)
    s_res = s.astype(np.int64)
    count = sub.sum(axis=1)
    active = np.ones(cols.size, bool)
    if cols.size == 0:
        if s.any():
            raise ValueError("nonzero syndrome with nothing erased")
        return DecodeResult(PauliString.identity(n), True)
    while active.any():
        ready = np.flatnonzero(count == 1)
        if ready.size == 0:
            break
        progressed = False
        for row in ready:
            if count[row] != 1:
                continue
            k = np.flatnonzero(sub[row] & active)[0]
            val = int(s_res[row] % 2)
            value[cols[k]] = val
            active[k] = False
            hit = sub[:, k].astype(bool)
            count[hit] -= 1
            if val:
                s_res[hit] ^= 1
            progressed = True
        if not progressed:
            break
    if active.any():
        return DecodeResult(_to_pauli(value), False)
    if (s_res % 2).any():
        raise ValueError("syndrome is inconsistent with the erased set")
    return DecodeResult(_to_pauli(value), True)


# ---------------------------------------------------------------------------
# belief propagation


@dataclass
class _Graph:
    n_checks: int
    n_vars: int
    chk_ptr: np.ndarray
    edge_var: np.ndarray
    var_ptr: np.ndarray
    var_edges: np.ndarray


def _tanner(A: np.ndarray) -> _Graph:
    rows, colsv = np.nonzero(A)
    chk_ptr = np.zeros(A.shape[0] + 1, np.int64)
    np.add.at(chk_ptr, rows + 1, 1)
    chk_ptr = np.cumsum(chk_ptr)
    order = np.argsort(colsv, kind="stable")
    var_ptr = np.zeros(A.shape[1] + 1, np.int64)
    np.add.at(var_ptr, colsv + 1, 1)
    var_ptr = np.cumsum(var_ptr)
    return _Graph(A.shape[0], A.shape[1], chk_ptr, colsv.astype(np.int64), var_ptr, order.astype(np.int64))


@nb.njit(cache=True)
def _bp_kernel(chk_ptr, edge_var, var_ptr, var_edges, llr0, syndrome, max_iter):
    n_chk = chk_ptr.size - 1
    n_var = llr0.size
    n_edge = edge_var.size
    v2c = np.empty(n_edge, np.float64)
    c2v = np.zeros(n_edge, np.float64)
    for e in range(n_edge):
        v2c[e] = llr0[edge_var[e]]
    post = llr0.copy()
    hard = np.zeros(n_var, np.uint8)
    for v in range(n_var):
        hard[v] = 1 if post[v] < 0 else 0
    width = 0
    for c in range(n_chk):
        width = max(width, chk_ptr[c + 1] - chk_ptr[c])
    pre = np.empty(width + 1, np.float64)
    it = 0
    converged = False
    # the prior hard decision may already match
    ok = True
    for c in range(n_chk):
        par = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            par ^= hard[edge_var[e]]
        if par != syndrome[c]:
            ok = False
            break
    if ok:
        return hard, post, True, 0
    th = np.empty(n_edge, np.float64)
    while it < max_iter:
        it += 1
        for e in range(n_edge):
            th[e] = math.tanh(0.5 * v2c[e])
        for c in range(n_chk):
            lo, hi = chk_ptr[c], chk_ptr[c + 1]
            d = hi - lo
            pre[0] = 1.0
            for k in range(d):
                pre[k + 1] = pre[k] * th[lo + k]
            suf = 1.0
            sign = -1.0 if syndrome[c] else 1.0
            for k in range(d - 1, -1, -1):
                prod = pre[k] * suf
                if prod > 0.999999999999:
                    prod = 0.999999999999
                elif prod < -0.999999999999:
                    prod = -0.999999999999
                c2v[lo + k] = sign * 2.0 * math.atanh(prod)
                suf *= th[lo + k]
        still = True
        for v in range(n_var):
            tot = llr0[v]
            for t in range(var_ptr[v], var_ptr[v + 1]):
                tot += c2v[var_edges[t]]
            post[v] = tot
            for t in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edges[t]
                new = tot - c2v[e]
                if new != v2c[e]:
                    still = False
                v2c[e] = new
            hard[v] = 1 if tot < 0 else 0
        ok = True
        for c in range(n_chk):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[edge_var[e]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            converged = True
            break
        if still:
            # exact fixed point: every further iteration would repeat this one
            break
    return hard, post, converged, it


def _llr(priors: np.ndarray) -> np.ndarray:
    p = np.clip(np.asarray(priors, dtype=np.float64), 1e-300, 1 - 1e-16)
    return np.log((1 - p) / p)


def bp_decode(checks: CheckMatrix | np.ndarray, priors, syndrome, config: DecoderConfig | None = None,
              graph: _Graph | None = None) -> DecodeResult:
    """Product-sum BP, parallel schedule. Ties (LLR exactly 0) keep the variable unflipped."""
    config = config or DecoderConfig(method="bp")
    A = parity_matrix(checks) if isinstance(checks, CheckMatrix) else np.asarray(checks, np.uint8)
    priors = np.asarray(priors, dtype=np.float64)
    s = np.asarray(syndrome, dtype=np.uint8)
    if priors.size != A.shape[1] or s.size != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, priors {priors.size}, syndrome {s.size}")
    if np.any((priors <= 0) | (priors >= 1)):
        raise ValueError("priors must lie strictly between 0 and 1")
    g = graph or _tanner(A)
    hard, post, conv, it = _bp_kernel(g.chk_ptr, g.edge_var, g.var_ptr, g.var_edges, _llr(priors), s,
                                      config.bp_max_iter)
    return DecodeResult(_to_pauli(hard), bool(conv), soft=post, iterations=int(it))


# ---------------------------------------------------------------------------
# ordered statistics


def osd_postprocess(checks: CheckMatrix | np.ndarray, soft_outputs, syndrome, order: int = 0,
                    priors=None, hard=None) -> DecodeResult:
    """OSD-0 / OSD-E on a reliability-sorted information set.

    Columns are ordered from least to most reliable (posterior LLR ascending,
    stable in the column index). The first independent columns form the pivot
    set; with ``order`` > 0 all assignments of the first ``order`` non-pivot
    columns are tried and the one with the highest channel likelihood wins.
    """
    A = parity_matrix(checks) if isinstance(checks, CheckMatrix) else np.asarray(checks, np.uint8)
    s = np.asarray(syndrome, dtype=np.uint8)
    N = A.shape[1]
    if hard is not None:
        hv = np.asarray(hard, np.int64)
        if np.array_equal((A.astype(np.int64) @ hv) % 2, s):
            return DecodeResult(_to_pauli(hv.astype(np.uint8)), True, soft=soft_outputs)
    soft = np.asarray(soft_outputs, dtype=np.float64)
    order_cols = np.argsort(soft, kind="stable")
    aug = np.hstack([A[:, order_cols], s[:, None]])
    P = _pack(aug)
    r, piv = _eliminate(P, N)
    for row in range(r, P.shape[0]):
        if _bit(P, row, N):
            raise ValueError("syndrome is not in the column space of the check matrix")
    sol = np.zeros(N, np.uint8)
    piv_vals = np.array([_bit(P, k, N) for k in range(r)], np.uint8)
    if order > 0:
        weights = _llr(priors) if priors is not None else np.abs(soft)
        w_sorted = weights[order_cols]
        piv_set = set(int(p) for p in piv)
        nonpiv = [c for c in range(N) if c not in piv_set][:order]
        if nonpiv:
            cols_bits = np.array([[_bit(P, k, c) for c in nonpiv] for k in range(r)], np.uint8).reshape(r, -1)
            w_piv = w_sorted[piv]
            w_np = w_sorted[nonpiv]
            best_cost, best = None, None
            for mask in range(1 << len(nonpiv)):
                sel = np.array([(mask >> b) & 1 for b in range(len(nonpiv))], np.uint8)
                pv = piv_vals ^ ((cols_bits.astype(np.int64) @ sel) % 2).astype(np.uint8)
                cost = float(w_piv @ pv + w_np @ sel)
                if best_cost is None or cost < best_cost - 1e-12:
                    best_cost, best = cost, (pv, sel)
            piv_vals, sel = best
            for c, b in zip(nonpiv, sel):
                sol[order_cols[c]] = b
    for k, c in enumerate(piv):
        sol[order_cols[c]] = piv_vals[k]
    return DecodeResult(_to_pauli(sol), True, soft=soft)


# ---------------------------------------------------------------------------
# decoder front end used by the simulations


class CodeDecoder:
    """Holds per-code precomputation; clone per worker (not thread-shareable)."""

    def __init__(self, code, config: DecoderConfig, checks: CheckMatrix | None = None):
        self.code = code
        self.config = config
        self.checks = checks if checks is not None else code.checks
        self.A = parity_matrix(self.checks)
        self.graph = _tanner(self.A)
        self.n = self.checks.n_qubits

    def priors(self, erased, p_r: float = 0.0) -> np.ndarray:
        base = max(2.0 * p_r / 3.0, self.config.p_floor)
        p = np.full(self.n, min(base, 0.5))
        p[np.asarray(erased, bool)] = 0.5
        return np.tile(p, 2)

    def decode(self, erased, syndrome, p_r: float = 0.0) -> DecodeResult:
        cfg = self.config
        if cfg.method == "peeling":
            return peel_erasure_decode(self.checks, erased, syndrome)
        if cfg.method == "ml_erasure":
            # exact oracle: any syndrome-consistent correction inside the erasure
            E = np.tile(np.asarray(erased, bool), 2)
            cols = np.flatnonzero(E)
            x = gf2.solve(self.A[:, cols], syndrome) if cols.size else None
            v = np.zeros(2 * self.n, np.uint8)
            if x is not None:
                v[cols] = x
            return DecodeResult(_to_pauli(v), x is not None or not np.any(syndrome))
        priors = self.priors(erased, p_r)
        res = bp_decode(self.A, priors, syndrome, cfg, self.graph)
        if cfg.method == "bp" or res.converged:
            return res
        hard = np.concatenate([res.correction.x, res.correction.z])
        osd = osd_postprocess(self.A, res.soft, syndrome, cfg.osd_order, priors=priors, hard=hard)
        osd.iterations = res.iterations
        osd.converged = False
        return osd


# ---------------------------------------------------------------------------
# generator smoothing


def smooth_generators(checks: CheckMatrix, max_iters: int = 8000, candidates_per_iter: int = 1200,
                      target_weight: int = 10, seed: int = 0, weight: str = "pauli") -> CheckMatrix:
    """Greedy row-combination that lowers the heaviest check weight.

    Each iteration picks the heaviest row i (lowest index on ties), samples up to
    ``candidates_per_iter`` other rows j and replaces row i by row i XOR row j for
    the sampled j giving the largest strict weight reduction. Row phases are
    updated so that every row stays an exact group element.
    """
    if weight not in ("pauli", "bit"):
        raise ValueError("weight must be 'pauli' or 'bit'")
    rows = checks.rows.copy()
    phases = checks.phases.copy()
    m, n2 = rows.shape
    n = n2 // 2
    if m == 0:
        return CheckMatrix(rows, phases)
    rng = np.random.default_rng(seed)
    X = gf2.pack_rows(rows[:, :n])
    Z = gf2.pack_rows(rows[:, n:])

    def wt(x, z):
        if weight == "pauli":
            return np.bitwise_count(x | z).sum(axis=-1)
        return np.bitwise_count(x).sum(axis=-1) + np.bitwise_count(z).sum(axis=-1)

    w = wt(X, Z).astype(np.int64)
    stuck = np.zeros(m, bool)
    for _ in range(max_iters):
        if w.max() <= target_weight:
            break
        cand_rows = np.flatnonzero(~stuck & (w > target_weight))
        if cand_rows.size == 0:
            break
        i = cand_rows[np.argmax(w[cand_rows])]
        others = np.delete(np.arange(m), i)
        if others.size > candidates_per_iter:
            others = rng.choice(others, candidates_per_iter, replace=False)
        new_w = wt(X[i] ^ X[others], Z[i] ^ Z[others])
        k = int(np.argmin(new_w))
        if new_w[k] < w[i]:
            j = int(others[k])
            ph = PauliString(rows[i, :n], rows[i, n:], int(phases[i])) * PauliString(rows[j, :n], rows[j, n:], int(phases[j]))
            rows[i] ^= rows[j]
            phases[i] = ph.phase
            X[i] ^= X[j]
            Z[i] ^= Z[j]
            w[i] = new_w[k]
            stuck[:] = False
        else:
            stuck[i] = True
    return CheckMatrix(rows, phases)
