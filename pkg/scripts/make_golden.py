"""Regenerate the golden code bundles and tilings used by the regression tests.

    python scripts/make_golden.py [--dir tests/golden]
"""

import argparse
import json
from pathlib import Path

from holocode.io import code_to_bundle, golden_dir
from holocode.network import build_code
from holocode.tessellation import build_tiling

CASES = [((5, 4), n, None) for n in range(3)] + [((4, 5), n, "X") for n in range(4)]


def golden_name(pq, n, gauge) -> str:
    return f"code_{pq[0]}{pq[1]}_n{n}_{(gauge or 'none').lower()}.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dir", type=Path, default=golden_dir())
    args = ap.parse_args()
    args.dir.mkdir(parents=True, exist_ok=True)
    for pq, n, gauge in CASES:
        path = args.dir / golden_name(pq, n, gauge)
        path.write_text(json.dumps(code_to_bundle(build_code(pq, n, gauge)), indent=1) + "\n")
        print("wrote", path)
    for pq in ((5, 4), (4, 5)):
        path = args.dir / f"tiling_{pq[0]}{pq[1]}_n3.json"
        path.write_text(build_tiling(pq, 3).to_json() + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
