"""Recovery probability of the central qubit of the pentagon code under erasure:
exact ML oracle against the peeling decoder on identical samples.

    python scripts/peeling_vs_ml.py --ns 0,1,2 --trials 4000 --out results/recovery
"""

import argparse
from pathlib import Path

from holocode.io import svg_line_plot
from holocode.network import build_code
from holocode.noise import shared_erasure_success, wilson


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="0,1,2")
    ap.add_argument("--trials", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--out", type=Path, default=Path("results/recovery"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    p_values = [round(0.05 * k, 2) for k in range(21)]

    lines = ["n,p,decoder,successes,trials,recovery,ci_low,ci_high"]
    series = {}
    for n in (int(v) for v in args.ns.split(",")):
        code = build_code((5, 4), n)
        for p, ml, peel, trials in shared_erasure_success(code, p_values, args.trials, args.seed):
            for name, k in (("ml", ml), ("peeling", peel)):
                lo, hi = wilson(k, trials)
                lines.append(f"{n},{p},{name},{k},{trials},{k / trials},{lo},{hi}")
                series.setdefault(f"n={n} {name}", []).append((p, k / trials))
        print(f"n={n} done")
    Path(f"{args.out}.csv").write_text("\n".join(lines) + "\n")
    Path(f"{args.out}.svg").write_text(svg_line_plot(series, "erasure probability p", "recovery probability",
                                                     logx=False, logy=False))


if __name__ == "__main__":
    main()
