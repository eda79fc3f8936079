"""Noise channels, Monte-Carlo logical error rates, fits and suppression maps."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .decoders import CodeDecoder, DecoderConfig, erasure_logical_rank, logical_failure, syndrome_of
from .pauli import PauliString

Z95 = 1.959963984540054


@dataclass(frozen=True)
class NoiseSpec:
    p_e: float = 0.0
    p_r: float = 0.0

    def __post_init__(self):
        for name in ("p_e", "p_r"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass
class CodeSpec:
    schlafli: tuple[int, int] = (4, 5)
    n: int = 1
    gauge: str | None = "X"
    smoothing: bool = False
    seed_smooth: int = 0


@dataclass
class ExperimentConfig:
    code: CodeSpec = field(default_factory=CodeSpec)
    grid: list[NoiseSpec] = field(default_factory=lambda: [NoiseSpec(0.1, 0.0)])
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    trials: int = 10_000
    seed: int = 0
    tracked: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["code"]["schlafli"] = list(self.code.schlafli)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        code = CodeSpec(**{**d.get("code", {})})
        code.schlafli = tuple(code.schlafli)
        grid = [NoiseSpec(**g) for g in d.get("grid", [{"p_e": 0.1, "p_r": 0.0}])]
        dec = DecoderConfig(**d.get("decoder", {}))
        rest = {k: d[k] for k in ("trials", "seed", "tracked", "threads") if k in d}
        return cls(code=code, grid=grid, decoder=dec, **rest)


@dataclass
class ResultRow:
    n: int
    p_e: float
    p_r: float
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float
    seed: int
    decoder: str


RESULT_COLUMNS = ["n", "p_e", "p_r", "trials", "failures", "rate", "ci_low", "ci_high", "seed", "decoder"]


def wilson(failures: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    p = failures / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial; no coordination between workers needed."""
    bitgen = np.random.Philox(key=np.array([seed, point], dtype=np.uint64), counter=[0, trial, 0, 0])
    return np.random.Generator(bitgen)


def sample_error(noise: NoiseSpec, n_boundary: int, rng: np.random.Generator) -> tuple[np.ndarray, PauliString]:
    """Erased qubits get a uniform Pauli (I included); others depolarise with probability p_r."""
    erased = rng.random(n_boundary) < noise.p_e
    u = rng.random(n_boundary)
    kind = rng.integers(1, 4, n_boundary)  # 1=X, 2=Z, 3=Y for the depolarising part
    erased_kind = rng.integers(0, 4, n_boundary)
    k = np.where(erased, erased_kind, np.where(u < noise.p_r, kind, 0))
    x = (k & 1).astype(np.uint8)
    z = ((k >> 1) & 1).astype(np.uint8)
    return erased, PauliString(x, z)


# ---------------------------------------------------------------------------
# Monte-Carlo engine


def _run_chunk(args):
    code, checks, dec_cfg, noise, seed, point, start, stop, tracked = args
    decoder = CodeDecoder(code, dec_cfg, checks)
    failures = 0
    for t in range(start, stop):
        rng = trial_rng(seed, point, t)
        erased, err = sample_error(noise, code.n_boundary, rng)
        s = syndrome_of(decoder.checks, err)
        try:
            res = decoder.decode(erased, s, noise.p_r)
            if dec_cfg.method in ("peeling", "bp") and not res.converged:
                failures += 1
                continue
            failures += logical_failure(code, tracked, err, res.correction)
        except Exception:
            failures += 1
    return failures


def count_failures(code, noise: NoiseSpec, decoder: DecoderConfig, trials: int, seed: int, point: int = 0,
                   tracked: str | None = None, threads: int = 1, checks=None) -> int:
    tracked = tracked or code.central
    if threads <= 1 or trials < 2 * threads:
        return _run_chunk((code, checks, decoder, noise, seed, point, 0, trials, tracked))
    bounds = np.linspace(0, trials, threads + 1).astype(int)
    jobs = [(code, checks, decoder, noise, seed, point, int(a), int(b), tracked) for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return int(sum(pool.map(_run_chunk, jobs)))


def build_experiment_code(spec: CodeSpec):
    from .decoders import smooth_generators
    from .network import build_code

    code = build_code(spec.schlafli, spec.n, spec.gauge)
    checks = smooth_generators(code.checks, seed=spec.seed_smooth) if spec.smoothing else None
    return code, checks


def estimate_logical_rate(config: ExperimentConfig, code=None, checks=None) -> list[ResultRow]:
    if code is None:
        code, checks = build_experiment_code(config.code)
    rows = []
    for point, noise in enumerate(config.grid):
        f = count_failures(code, noise, config.decoder, config.trials, config.seed, point,
                           config.tracked, config.threads, checks)
        lo, hi = wilson(f, config.trials)
        rows.append(ResultRow(config.code.n, noise.p_e, noise.p_r, config.trials, f, f / config.trials, lo, hi,
                              config.seed, config.decoder.tag))
    return rows


def shared_erasure_success(code, p_values, trials: int, seed: int, tracked: str | None = None):
    """ML-oracle and peeling success counts on identical erasure samples, per p."""
    from .decoders import ml_erasure_decode, peel_erasure_decode

    tracked = tracked or code.central
    out = []
    for point, p in enumerate(p_values):
        ml = peel = 0
        for t in range(trials):
            rng = trial_rng(seed, point, t)
            erased, err = sample_error(NoiseSpec(p, 0.0), code.n_boundary, rng)
            ok_ml = ml_erasure_decode(code, erased, tracked)
            res = peel_erasure_decode(code.checks, erased, syndrome_of(code.checks, err))
            ok_peel = res.converged and not logical_failure(code, tracked, err, res.correction)
            ml += ok_ml
            peel += ok_peel
        out.append((p, ml, peel, trials))
    return out


# ---------------------------------------------------------------------------
# exact oracle for small codes


def exact_erasure_curve(code, p_values, tracked: str | None = None) -> list[tuple[float, float]]:
    """Optimal-decoder failure rate under pure erasure, by enumerating all patterns.

    An erased qubit holds a uniform Pauli, so when the erasure supports a logical
    subgroup of size 2^r the optimal decoder still guesses right with chance 2^-r.
    """
    n = code.n_boundary
    if n > 22:
        raise ValueError("exhaustive enumeration limited to 22 boundary qubits")
    loss = np.zeros(n + 1)  # summed failure probability per erasure size
    for mask in range(1 << n):
        E = np.array([(mask >> q) & 1 for q in range(n)], bool)
        r = erasure_logical_rank(code, E, tracked)
        loss[E.sum()] += 1 - 2.0 ** (-r)
    out = []
    for p in p_values:
        k = np.arange(n + 1)
        out.append((float(p), float(np.sum(loss * p ** k * (1 - p) ** (n - k)))))
    return out


# ---------------------------------------------------------------------------
# fits and maps


def fit_distance(curve, trials: int | None = None, window: tuple[float, float] | None = None) -> tuple[float, float]:
    """Least-squares slope of log(rate) against log(p); returns (prefactor, d_eff).

    Only points inside the low-rate window are used: ``[10/trials, 0.1]`` when
    ``trials`` is known, otherwise ``(0, 0.1]``.
    """
    lo, hi = window if window else ((10.0 / trials) if trials else 0.0, 0.1)
    pts = [(p, r) for p, r in curve if r > 0 and lo <= r <= hi and p > 0]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points with rate in [{lo:g}, {hi:g}], got {len(pts)}")
    lp = np.log([p for p, _ in pts])
    lr = np.log([r for _, r in pts])
    slope, intercept = np.polyfit(lp, lr, 1)
    return float(math.exp(intercept)), float(slope)


def find_crossings(curve_a, curve_b) -> list[float]:
    """p values where two rate curves on the same p grid cross (log-linear interpolation)."""
    xs = []
    for (p0, a0), (p1, a1), (_, b0), (_, b1) in zip(curve_a, curve_a[1:], curve_b, curve_b[1:]):
        if min(a0, a1, b0, b1) <= 0:
            continue
        d0 = math.log(a0) - math.log(b0)
        d1 = math.log(a1) - math.log(b1)
        if d0 == 0:
            xs.append(p0)
        elif d0 * d1 < 0:
            t = d0 / (d0 - d1)
            xs.append(p0 + t * (p1 - p0))
    return xs


def suppression_status(small: ResultRow, large: ResultRow) -> str:
    if large.ci_high < small.ci_low:
        return "suppress"
    if large.ci_low > small.ci_high:
        return "no"
    return "unknown"


def crossing_and_region(rows_by_n: dict[int, list[ResultRow]]) -> list[tuple[float, float, str]]:
    """Suppression status per grid point, comparing the smallest and largest n."""
    ns = sorted(rows_by_n)
    if len(ns) < 2:
        raise ValueError("need at least two code sizes")
    small, large = rows_by_n[ns[0]], rows_by_n[ns[-1]]
    return [(a.p_e, a.p_r, suppression_status(a, b)) for a, b in zip(small, large)]


def monotone_violations(region: list[tuple[float, float, str]]) -> list[tuple[float, float]]:
    """Grid points marked suppressing while a point with smaller (p_e, p_r) is marked 'no'."""
    bad = []
    for pe, pr, st in region:
        if st != "suppress":
            continue
        for pe2, pr2, st2 in region:
            if pe2 <= pe and pr2 <= pr and st2 == "no":
                bad.append((pe, pr))
                break
    return bad


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in rows:
        w.writerow([r.n, repr(r.p_e), repr(r.p_r), r.trials, r.failures, repr(r.rate), repr(r.ci_low),
                    repr(r.ci_high), r.seed, r.decoder])
    return buf.getvalue()


def region_to_csv(region) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p_e", "p_r", "status"])
    for pe, pr, st in region:
        w.writerow([repr(pe), repr(pr), st])
    return buf.getvalue()
