"""Suppression region over a (p_e, p_r) grid for the X-gauged {4,5} code.

Thin wrapper around ``holocode region-map`` with a default grid.

    python scripts/region_map.py --trials 2000 --out results/region.csv
"""

import sys

from holocode.cli import main

DEFAULT = ["--p-e", "0,0.1,0.2,0.3,0.4,0.5", "--p-r", "0,0.01,0.02,0.05", "--ns", "1,2"]

if __name__ == "__main__":
    argv = sys.argv[1:]
    if "--p-e" not in argv:
        argv = DEFAULT + argv
    if "--out" not in argv:
        argv += ["--out", "results/region.csv"]
    sys.exit(main(["region-map", *argv]))
