import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocode import gf2
from holocode.decoders import (CodeDecoder, DecoderConfig, bp_decode, erasure_logical_rank, logical_failure,
                               ml_erasure_decode, osd_postprocess, parity_matrix, peel_erasure_decode,
                               smooth_generators, syndrome_of)
from holocode.network import build_code
from holocode.pauli import CheckMatrix, PauliString, coset_min_weight

PENTAGON0 = build_code((5, 4), 0)
CODE45_X0 = build_code((4, 5), 0, "X")


def random_error_on(erased, rng):
    n = erased.size
    x = (rng.integers(0, 2, n) & erased).astype(np.uint8)
    z = (rng.integers(0, 2, n) & erased).astype(np.uint8)
    return PauliString(x, z)


def recovers_by_brute_force(code, erased) -> bool:
    """No tracked logical (times checks and other logicals) fits inside the erasure."""
    n = code.n_boundary
    idx = np.flatnonzero(erased)
    rep = code.logical()
    for letters in itertools.product("IXYZ", repeat=idx.size):
        s = ["I"] * n
        for q, c in zip(idx, letters):
            s[q] = c
        p = PauliString.from_str("".join(s))
        if p.weight == 0:
            continue
        if syndrome_of(code.checks, p).any():
            continue
        if not (p.commutes_with(rep.X) and p.commutes_with(rep.Z)):
            return False
    return True


# ---------------------------------------------------------------------------
# ML erasure oracle


def test_ml_erasure_examples():
    n = PENTAGON0.n_boundary
    assert ml_erasure_decode(PENTAGON0, np.zeros(n, bool))
    assert not ml_erasure_decode(PENTAGON0, np.ones(n, bool))
    for q in range(n):
        e = np.zeros(n, bool)
        e[q] = True
        assert ml_erasure_decode(PENTAGON0, e)
    with pytest.raises(ValueError):
        ml_erasure_decode(PENTAGON0, np.zeros(n + 1, bool))


@pytest.mark.parametrize("code", [PENTAGON0, CODE45_X0], ids=["pentagon0", "45x0"])
def test_ml_erasure_matches_brute_force_on_all_patterns(code):
    n = code.n_boundary
    for bits in itertools.product([False, True], repeat=n):
        e = np.array(bits)
        assert ml_erasure_decode(code, e) == recovers_by_brute_force(code, e)


def test_pentagon_erasure_threshold_counts():
    # distance 3: every pair is still recoverable, and every triple loses the qubit
    n = 5
    for k, expect in ((2, True), (3, False)):
        for qs in itertools.combinations(range(n), k):
            e = np.zeros(n, bool)
            e[list(qs)] = True
            assert ml_erasure_decode(PENTAGON0, e) is expect
            assert erasure_logical_rank(PENTAGON0, e) == (0 if expect else 2)


# ---------------------------------------------------------------------------
# peeling


def test_peel_examples():
    n = PENTAGON0.n_boundary
    res = peel_erasure_decode(PENTAGON0.checks, np.zeros(n, bool), np.zeros(4, np.uint8))
    assert res.converged and res.correction.weight == 0
    e = np.zeros(n, bool)
    e[0] = True
    for letter in "XYZ":
        err = PauliString.single(n, 0, letter)
        res = peel_erasure_decode(PENTAGON0.checks, e, syndrome_of(PENTAGON0.checks, err))
        assert res.converged
        assert res.correction.letters() == err.letters()
    with pytest.raises(ValueError):
        peel_erasure_decode(PENTAGON0.checks, np.zeros(n, bool), np.array([1, 0, 0, 0], np.uint8))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.booleans(), min_size=20, max_size=20), st.integers(0, 2 ** 32 - 1))
def test_peel_success_implies_ml_success(bits, seed):
    code = build_code((4, 5), 1, "X")
    e = np.array(bits)
    err = random_error_on(e, np.random.default_rng(seed))
    res = peel_erasure_decode(code.checks, e, syndrome_of(code.checks, err))
    if res.converged:
        assert ml_erasure_decode(code, e)
        # the peeled correction is syndrome-consistent and supported inside the erasure
        assert not syndrome_of(code.checks, res.correction * err).any()
        assert not ((res.correction.x | res.correction.z) & ~e).any()


# ---------------------------------------------------------------------------
# belief propagation


def test_bp_zero_syndrome_is_identity():
    cfg = DecoderConfig(method="bp")
    res = bp_decode(PENTAGON0.checks, np.full(10, 0.01), np.zeros(4, np.uint8), cfg)
    assert res.converged and res.correction.weight == 0


def test_bp_two_variable_tie():
    # a single ZZ check, both x-variables at prior 0.1, z-variables essentially fixed
    checks = CheckMatrix.from_strings(["ZZ"])
    priors = np.array([0.1, 0.1, 1e-9, 1e-9])
    res = bp_decode(checks, priors, np.array([1], np.uint8), DecoderConfig(method="bp", bp_max_iter=50))
    # by symmetry both posteriors are exactly equal; ties keep variables unflipped
    assert res.soft[0] == res.soft[1]
    assert res.correction.weight == 0 and not res.converged
    osd = osd_postprocess(checks, res.soft, np.array([1], np.uint8), 0)
    assert osd.correction.letters() == "XI"


def test_bp_dimension_errors():
    with pytest.raises(ValueError):
        bp_decode(PENTAGON0.checks, np.full(9, 0.1), np.zeros(4, np.uint8))
    with pytest.raises(ValueError):
        bp_decode(PENTAGON0.checks, np.full(10, 0.1), np.zeros(3, np.uint8))
    with pytest.raises(ValueError):
        bp_decode(PENTAGON0.checks, np.full(10, 1.0), np.zeros(4, np.uint8))


def test_bp_osd_matches_ml_on_every_pentagon_pattern():
    """With erased priors 1/2 and intact priors at the floor, BP+OSD-0 is as good as ML at n=0."""
    dec = CodeDecoder(PENTAGON0, DecoderConfig(method="bp_osd"))
    rng = np.random.default_rng(7)
    for bits in itertools.product([False, True], repeat=5):
        e = np.array(bits)
        ml_ok = ml_erasure_decode(PENTAGON0, e)
        for _ in range(8):
            err = random_error_on(e, rng)
            syn = syndrome_of(PENTAGON0.checks, err)
            res = dec.decode(e, syn)
            assert not syndrome_of(PENTAGON0.checks, res.correction * err).any()
            if ml_ok:
                assert not logical_failure(PENTAGON0, PENTAGON0.central, err, res.correction)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_bp_is_deterministic(seed):
    rng = np.random.default_rng(seed)
    code = build_code((4, 5), 1, "X")
    priors = rng.uniform(0.01, 0.5, 2 * code.n_boundary)
    err = PauliString(rng.integers(0, 2, 20).astype(np.uint8), rng.integers(0, 2, 20).astype(np.uint8))
    syn = syndrome_of(code.checks, err)
    a = bp_decode(code.checks, priors, syn)
    b = bp_decode(code.checks, priors, syn)
    assert a.correction == b.correction and a.converged == b.converged
    assert np.array_equal(a.soft, b.soft)


# ---------------------------------------------------------------------------
# ordered statistics


def test_osd_keeps_a_valid_hard_decision():
    checks = CheckMatrix.from_strings(["ZZ"])
    hard = np.array([0, 1, 0, 0], np.uint8)
    res = osd_postprocess(checks, np.zeros(4), np.array([1], np.uint8), hard=hard)
    assert res.correction.letters() == "IX"


def test_osd_single_check_three_variables():
    # three variables on one check; a fourth, unchecked column pads the 2n layout
    A = np.array([[1, 1, 1, 0]], np.uint8)
    res = osd_postprocess(A, np.zeros(4), np.array([1], np.uint8), 0)
    v = np.concatenate([res.correction.x, res.correction.z])
    assert v.tolist() == [1, 0, 0, 0]


def test_osd_rejects_inconsistent_syndrome():
    A = np.array([[1, 0], [1, 0]], np.uint8)
    with pytest.raises(ValueError):
        osd_postprocess(A, np.zeros(2), np.array([1, 0], np.uint8))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 3))
def test_osd_always_satisfies_the_syndrome(seed, order):
    rng = np.random.default_rng(seed)
    code = build_code((4, 5), 1, "X")
    A = parity_matrix(code.checks)
    err = rng.integers(0, 2, A.shape[1]).astype(np.uint8)
    syn = (A.astype(np.int64) @ err % 2).astype(np.uint8)
    soft = rng.normal(size=A.shape[1])
    res = osd_postprocess(A, soft, syn, order, priors=rng.uniform(0.01, 0.49, A.shape[1]))
    v = np.concatenate([res.correction.x, res.correction.z])
    assert np.array_equal(A.astype(np.int64) @ v % 2, syn)


def test_osd_higher_order_never_worse_in_likelihood():
    rng = np.random.default_rng(3)
    code = build_code((4, 5), 1, "X")
    A = parity_matrix(code.checks)
    for _ in range(20):
        priors = rng.uniform(0.01, 0.3, A.shape[1])
        err = (rng.random(A.shape[1]) < priors).astype(np.uint8)
        syn = (A.astype(np.int64) @ err % 2).astype(np.uint8)
        soft = np.log((1 - priors) / priors)
        w = np.log((1 - priors) / priors)
        cost = []
        for order in (0, 4):
            res = osd_postprocess(A, soft, syn, order, priors=priors)
            v = np.concatenate([res.correction.x, res.correction.z])
            cost.append(float(w @ v))
        assert cost[1] <= cost[0] + 1e-9


def test_single_qubit_table_on_45_x_gauged_n0():
    """Every weight-1 Pauli error: BP+OSD-0 fails only where an ML decoder must also guess."""
    code = CODE45_X0
    n = code.n_boundary
    assert min(coset_min_weight(code.checks, p) for p in (code.logical().X, code.logical().Z)) == 2
    dec = CodeDecoder(code, DecoderConfig(method="bp_osd"))
    table = {}
    for q in range(n):
        for letter in "XYZ":
            err = PauliString.single(n, q, letter)
            syn = syndrome_of(code.checks, err)
            res = dec.decode(np.zeros(n, bool), syn, p_r=0.05)
            failed = logical_failure(code, code.central, err, res.correction)
            # an ML decoder fails on err iff some other weight-1 error with the
            # same syndrome differs from it by a logical; then the choice is a coin flip
            twins = []
            for q2 in range(n):
                for l2 in "XYZ":
                    other = PauliString.single(n, q2, l2)
                    if other != err and np.array_equal(syndrome_of(code.checks, other), syn):
                        twins.append(other)
            ambiguous = any(logical_failure(code, code.central, err, t) for t in twins)
            table[(q, letter)] = failed
            if not ambiguous:
                assert not failed, (q, letter)
            assert not syndrome_of(code.checks, res.correction * err).any()
    assert len(table) == 12


# ---------------------------------------------------------------------------
# smoothing


def test_smoothing_leaves_light_matrix_alone():
    H = CheckMatrix.from_strings(["XZZXI", "IXZZX"])
    out = smooth_generators(H, target_weight=10)
    assert np.array_equal(out.rows, H.rows) and np.array_equal(out.phases, H.phases)


def test_smoothing_hand_example():
    n = 8
    H = CheckMatrix.from_strings(["X" * n, "XX" + "I" * (n - 2)])
    out = smooth_generators(H, target_weight=2, max_iters=1)
    assert out.weights().tolist() == [n - 2, 2]
    assert gf2.row_space_equal(out.rows, H.rows)


def test_smoothing_bit_weight_flag():
    H = CheckMatrix.from_strings(["YYYY", "ZZII"])
    # Pauli weight of YYYY*ZZII = XXYY stays 4, bit weight drops from 8 to 6
    assert smooth_generators(H, target_weight=2, weight="pauli").weights().tolist() == [4, 2]
    bit = smooth_generators(H, target_weight=2, weight="bit")
    assert bit.paulis()[0].letters() == "XXYY"
    with pytest.raises(ValueError):
        smooth_generators(H, weight="other")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_smoothing_preserves_group_and_never_increases_max_weight(seed):
    code = build_code((4, 5), 2, "X")
    H = code.checks
    out = smooth_generators(H, max_iters=300, candidates_per_iter=50, seed=seed)
    assert gf2.row_space_equal(out.rows, H.rows)
    assert out.weights().max() <= H.weights().max()
    assert all(syndrome_of(H, p).sum() == 0 for p in out.paulis())
