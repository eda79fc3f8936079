"""Depolarising-noise logical error rates with raw and smoothed check generators.

    python scripts/smoothing_compare.py --n 3 --trials 2000 --out results/smoothing
"""

import argparse
from pathlib import Path

from holocode import gf2
from holocode.decoders import DecoderConfig, smooth_generators
from holocode.io import svg_line_plot
from holocode.network import build_code
from holocode.noise import CodeSpec, ExperimentConfig, NoiseSpec, estimate_logical_rate, rows_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--osd-order", type=int, default=0)
    ap.add_argument("--p-r", default="0.005,0.01,0.02,0.04,0.08")
    ap.add_argument("--out", type=Path, default=Path("results/smoothing"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    code = build_code((4, 5), args.n, "X")
    smooth = smooth_generators(code.checks, seed=0)
    assert gf2.row_space_equal(code.checks.rows, smooth.rows)
    print(f"max check weight {code.checks.weights().max()} -> {smooth.weights().max()}")
    grid = [NoiseSpec(0.0, float(p)) for p in args.p_r.split(",")]
    dec = DecoderConfig("bp_osd", osd_order=args.osd_order)
    cfg = ExperimentConfig(CodeSpec((4, 5), args.n, "X"), grid, dec, args.trials, args.seed)
    series, text = {}, ""
    for name, checks in (("raw", None), ("smoothed", smooth)):
        rows = estimate_logical_rate(cfg, code=code, checks=checks)
        for r in rows:
            r.decoder = f"{dec.tag}_{name}"
        series[name] = [(r.p_r, r.rate) for r in rows]
        chunk = rows_to_csv(rows)
        text += chunk if not text else chunk.split("\n", 1)[1]
        print(name, ", ".join(f"{p:g}:{v:.4g}" for p, v in series[name]))
    Path(f"{args.out}.csv").write_text(text)
    Path(f"{args.out}.svg").write_text(svg_line_plot(series, "depolarising rate p", "logical error rate"))


if __name__ == "__main__":
    main()
