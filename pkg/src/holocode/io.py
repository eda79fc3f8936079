"""Code bundles (JSON), golden-file helpers and small output writers."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .network import HolographicCode, LogicalRep, split_code
from .pauli import CheckMatrix, PauliString, StabiliserState

BUNDLE_KEYS = ("schlafli", "n", "hadamard_edges", "gauge", "checks", "logicals", "boundary_order")


def code_to_bundle(code: HolographicCode) -> dict:
    meta = code.meta
    return {
        "schlafli": list(meta["schlafli"]) if meta.get("schlafli") else None,
        "n": meta.get("n"),
        "hadamard_edges": bool(meta.get("hadamard_edges", False)),
        "gauge": meta.get("gauge"),
        "checks": [str(p) for p in code.checks.paulis()],
        "logicals": [{"bulk": rep.bulk, "X": str(rep.X), "Z": str(rep.Z)} for rep in code.logical_reps],
        "boundary_order": list(code.boundary_labels),
        "horizon": list(code.horizon_labels),
        "central": meta.get("central"),
    }


def code_from_bundle(bundle: dict) -> HolographicCode:
    """Rebuild a code, including its Choi state, from a bundle dictionary."""
    missing = [k for k in BUNDLE_KEYS if k not in bundle]
    if missing:
        raise ValueError(f"bundle lacks keys {missing}")
    boundary = list(bundle["boundary_order"])
    nb = len(boundary)
    checks = [PauliString.from_str(s) for s in bundle["checks"]]
    reps = [LogicalRep(d["bulk"], PauliString.from_str(d["X"]), PauliString.from_str(d["Z"])) for d in bundle["logicals"]]
    for p in checks + [q for r in reps for q in (r.X, r.Z)]:
        if p.n_qubits != nb:
            raise ValueError(f"Pauli {p} has {p.n_qubits} qubits, boundary has {nb}")
    k = len(reps)
    gens = []
    for q, rep in enumerate(reps):
        for letter, p in (("X", rep.X), ("Z", rep.Z)):
            head = PauliString.single(k, q, letter)
            gens.append(head.tensor(p))
    gens += [PauliString.identity(k).tensor(p) for p in checks]
    labels = [r.bulk for r in reps] + boundary
    state = StabiliserState.from_paulis(gens, labels)
    meta = {key: bundle.get(key) for key in ("schlafli", "n", "hadamard_edges", "gauge")}
    meta["horizon"] = list(bundle.get("horizon") or [])
    if bundle.get("central"):
        meta["central"] = bundle["central"]
    code = split_code(state, k, meta)
    # keep the stored generators verbatim rather than the re-reduced ones
    code.checks = CheckMatrix.from_paulis(checks, nb)
    code.logical_reps = reps
    return code


def save_bundle(code: HolographicCode, path) -> None:
    Path(path).write_text(json.dumps(code_to_bundle(code), indent=1) + "\n")


def load_bundle(path) -> HolographicCode:
    return code_from_bundle(json.loads(Path(path).read_text()))


def golden_dir() -> Path:
    env = os.environ.get("HOLOCODE_GOLDEN_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "tests" / "golden"


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=_jsonable).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def svg_line_plot(series: dict[str, list[tuple[float, float]]], xlabel: str, ylabel: str,
                  logx: bool = True, logy: bool = True, width: int = 560, height: int = 400) -> str:
    """Minimal standalone SVG line plot; raw data is embedded as a comment."""
    pts = [(x, y) for s in series.values() for x, y in s if (x > 0 or not logx) and (y > 0 or not logy)]
    if not pts:
        pts = [(1.0, 1.0)]
    fx = np.log10 if logx else (lambda v: v)
    fy = np.log10 if logy else (lambda v: v)
    xs = [float(fx(x)) for x, _ in pts]
    ys = [float(fy(y)) for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1
    m = 60

    def sx(v):
        return m + (float(fx(v)) - x0) / (x1 - x0) * (width - 2 * m)

    def sy(v):
        return height - m - (float(fy(v)) - y0) / (y1 - y0) * (height - 2 * m)

    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           "<!-- data: " + json.dumps(series) + " -->",
           f'<rect x="{m}" y="{m}" width="{width - 2 * m}" height="{height - 2 * m}" fill="none" stroke="black"/>',
           f'<text x="{width / 2}" y="{height - 15}" text-anchor="middle">{xlabel}</text>',
           f'<text x="15" y="{height / 2}" transform="rotate(-90 15 {height / 2})" text-anchor="middle">{ylabel}</text>',
           f'<text x="{m}" y="{height - m + 15}" font-size="10">{10 ** x0 if logx else x0:.3g}</text>',
           f'<text x="{width - m}" y="{height - m + 15}" font-size="10" text-anchor="end">{10 ** x1 if logx else x1:.3g}</text>',
           f'<text x="{m - 5}" y="{height - m}" font-size="10" text-anchor="end">{10 ** y0 if logy else y0:.3g}</text>',
           f'<text x="{m - 5}" y="{m + 8}" font-size="10" text-anchor="end">{10 ** y1 if logy else y1:.3g}</text>']
    for k, (name, s) in enumerate(series.items()):
        good = [(x, y) for x, y in s if (x > 0 or not logx) and (y > 0 or not logy)]
        c = colours[k % len(colours)]
        if good:
            path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in good)
            out.append(f'<polyline points="{path}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        out.append(f'<text x="{width - m - 5}" y="{m + 15 + 14 * k}" text-anchor="end" fill="{c}" font-size="11">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
