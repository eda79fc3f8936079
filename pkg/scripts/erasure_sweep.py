"""Erasure sweep of the X-gauged {4,5} code with BP+OSD-0, plus power-law fits.

    python scripts/erasure_sweep.py --ns 0,1,2 --trials 10000 --out results/erasure

Writes <out>.csv (one row per (n, p_e)), <out>_fits.csv and an SVG plot.
"""

import argparse
from pathlib import Path

from holocode.decoders import DecoderConfig
from holocode.io import svg_line_plot
from holocode.network import build_code
from holocode.noise import CodeSpec, ExperimentConfig, NoiseSpec, estimate_logical_rate, exact_erasure_curve, fit_distance, rows_to_csv

GRID = [0.1, 0.125, 0.15, 0.175, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="0,1,2")
    ap.add_argument("--gauge", default="X")
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--osd-order", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/erasure"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    all_rows, series, fits = [], {}, []
    for n in (int(v) for v in args.ns.split(",")):
        cfg = ExperimentConfig(CodeSpec((4, 5), n, args.gauge), [NoiseSpec(p, 0.0) for p in GRID],
                               DecoderConfig("bp_osd", osd_order=args.osd_order), args.trials, args.seed,
                               threads=args.threads)
        rows = estimate_logical_rate(cfg)
        all_rows += rows
        curve = [(r.p_e, r.rate) for r in rows]
        series[f"n={n}"] = curve
        try:
            pref, d = fit_distance(curve, trials=args.trials)
            fits.append((n, "monte_carlo", pref, d))
        except ValueError as exc:
            print(f"n={n}: no fit ({exc})")
        code = build_code((4, 5), n, args.gauge)
        if code.n_boundary <= 20:
            pref, d = fit_distance(exact_erasure_curve(code, [1e-3 * 1.5 ** k for k in range(12)]), window=(0, 0.1))
            fits.append((n, "exact", pref, d))
        print(f"n={n}: " + ", ".join(f"{p:g}:{r:.4g}" for p, r in curve))

    Path(f"{args.out}.csv").write_text(rows_to_csv(all_rows))
    Path(f"{args.out}_fits.csv").write_text(
        "n,source,prefactor,d_eff\n" + "".join(f"{n},{src},{a:.6g},{d:.4f}\n" for n, src, a, d in fits))
    Path(f"{args.out}.svg").write_text(svg_line_plot(series, "erasure rate p_e", "logical error rate"))
    for n, src, a, d in fits:
        print(f"fit n={n} ({src}): p_L ~ {a:.3g} * p_e^{d:.2f}")


if __name__ == "__main__":
    main()
