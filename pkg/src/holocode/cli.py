"""Command-line front end: ``holocode <command> ...``.

Every command writes its main artifact to ``--out`` plus ``<out>.manifest.json``
recording the command line, a config hash, the seed and output checksums.
Exit codes: 2 for I/O problems, 3 for bad configuration, 4 for internal errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .decoders import DecoderConfig, smooth_generators
from .entropy import CutQuery, contiguous_intervals, min_cut, network_state, network_state_entropy
from .io import code_from_bundle, code_to_bundle, config_hash, file_sha256, svg_line_plot
from .network import black_hole, build_code, contract, foliate, network_for, wormhole
from .noise import (CodeSpec, ExperimentConfig, NoiseSpec, crossing_and_region, estimate_logical_rate,
                    monotone_violations, region_to_csv, rows_to_csv)
from .pauli import region_entropy

EXIT_IO, EXIT_CONFIG, EXIT_INTERNAL = 2, 3, 4


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _schlafli(text: str) -> tuple[int, int]:
    try:
        p, q = (int(v) for v in text.replace("{", "").replace("}", "").split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected p,q such as 4,5; got {text!r}") from exc
    return p, q


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _gauge(text: str) -> str | None:
    t = text.strip().upper()
    if t in ("", "NONE"):
        return None
    if t not in ("X", "Z"):
        raise argparse.ArgumentTypeError("gauge must be x, z or none")
    return t


def parse_region(spec: str, n_boundary: int, horizon: list[str] | None = None) -> tuple:
    """``"0-3"``, ``"0,2,5-7"``, ``"horizon"`` or explicit leg labels."""
    out = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if item == "horizon":
            if not horizon:
                raise ConfigError("network has no horizon legs")
            out += list(horizon)
        elif "-" in item and item.replace("-", "").isdigit():
            a, b = (int(v) for v in item.split("-"))
            out += list(range(a, b + 1))
        elif item.isdigit():
            out.append(int(item))
        else:
            out.append(item)
    for r in out:
        if isinstance(r, int) and not 0 <= r < n_boundary:
            raise ConfigError(f"region index {r} outside 0..{n_boundary - 1}")
    if not out:
        raise ConfigError(f"empty region {spec!r}")
    return tuple(out)


def _common(p: argparse.ArgumentParser, seed=True, trials=False):
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=("csv", "svg", "json"), default=None)
    if seed:
        p.add_argument("--seed", type=int, default=None)
    if trials:
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)


def _code_args(p: argparse.ArgumentParser, gauge_default=None):
    p.add_argument("--bundle", help="code bundle JSON (overrides --schlafli/--n/--gauge)")
    p.add_argument("--schlafli", type=_schlafli, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gauge", type=_gauge, default=gauge_default)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="holocode", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="contract a code and write its bundle")
    p.add_argument("--schlafli", type=_schlafli, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gauge", type=_gauge, default=None)
    _common(p, seed=False)

    p = sub.add_parser("simulate", help="Monte-Carlo logical error rates")
    _code_args(p)
    p.add_argument("--config", help="ExperimentConfig JSON; flags take precedence")
    p.add_argument("--p-e", type=_floats, default=None)
    p.add_argument("--p-r", type=_floats, default=None)
    p.add_argument("--decoder", choices=("peeling", "ml_erasure", "bp", "bp_osd"), default=None)
    p.add_argument("--osd-order", type=int, default=None)
    p.add_argument("--bp-max-iter", type=int, default=None)
    p.add_argument("--smooth", action="store_true", default=None)
    _common(p, trials=True)

    p = sub.add_parser("entropy", help="boundary entropies next to min-cuts")
    p.add_argument("--schlafli", type=_schlafli, default=(5, 4))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--network", choices=("code", "blackhole", "wormhole"), default="code")
    p.add_argument("--region", action="append", default=[], help="region spec, repeatable")
    p.add_argument("--windows", type=int, action="append", default=[], help="all contiguous windows of this width")
    p.add_argument("--bulk", choices=("open", "fixed_plus"), default="fixed_plus")
    p.add_argument("--alpha", type=float, default=2.0)
    _common(p, seed=False)

    p = sub.add_parser("smooth", help="lower check weights by row combination")
    _code_args(p, gauge_default="X")
    p.add_argument("--max-iters", type=int, default=8000)
    p.add_argument("--candidates", type=int, default=1200)
    p.add_argument("--target", type=int, default=10)
    _common(p)

    for name, helptext in (("blackhole", "pentagon code with the central lego removed"),
                           ("wormhole", "two black holes glued along their horizons")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=int, required=True)
        _common(p, seed=False)

    p = sub.add_parser("foliate", help="alternating encoder/un-encoder chain")
    _code_args(p)
    p.add_argument("--rounds", type=int, default=1)
    _common(p, seed=False)

    p = sub.add_parser("region-map", help="suppression map over an (p_e, p_r) grid")
    p.add_argument("--schlafli", type=_schlafli, default=(4, 5))
    p.add_argument("--ns", type=lambda s: [int(v) for v in s.split(",")], default=[1, 2])
    p.add_argument("--gauge", type=_gauge, default="X")
    p.add_argument("--p-e", type=_floats, required=True)
    p.add_argument("--p-r", type=_floats, default=[0.0])
    p.add_argument("--decoder", choices=("bp", "bp_osd"), default="bp_osd")
    p.add_argument("--osd-order", type=int, default=0)
    _common(p, trials=True)
    return ap


# ---------------------------------------------------------------------------
# commands


def _load_code(args):
    if getattr(args, "bundle", None):
        return code_from_bundle(json.loads(Path(args.bundle).read_text()))
    if args.schlafli is None or args.n is None:
        raise ConfigError("give --bundle or both --schlafli and --n")
    return build_code(args.schlafli, args.n, args.gauge)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_build(args) -> tuple[dict, list[Path]]:
    code = build_code(args.schlafli, args.n, args.gauge)
    out = Path(args.out)
    _write(out, json.dumps(code_to_bundle(code), indent=1) + "\n")
    cfg = {"schlafli": list(args.schlafli), "n": args.n, "gauge": args.gauge}
    return cfg, [out]


def _experiment_config(args) -> ExperimentConfig:
    base = json.loads(Path(args.config).read_text()) if args.config else {}
    cfg = ExperimentConfig.from_dict(base) if base else ExperimentConfig()
    if args.schlafli is not None:
        cfg.code.schlafli = args.schlafli
    if args.n is not None:
        cfg.code.n = args.n
    if args.gauge is not None or (not base and not args.bundle):
        cfg.code.gauge = args.gauge
    if args.smooth:
        cfg.code.smoothing = True
    if args.p_e is not None or args.p_r is not None:
        pes = args.p_e if args.p_e is not None else sorted({g.p_e for g in cfg.grid})
        prs = args.p_r if args.p_r is not None else [0.0]
        cfg.grid = [NoiseSpec(pe, pr) for pe, pr in itertools.product(pes, prs)]
    dec = asdict(cfg.decoder)
    for flag, key in (("decoder", "method"), ("osd_order", "osd_order"), ("bp_max_iter", "bp_max_iter")):
        if getattr(args, flag) is not None:
            dec[key] = getattr(args, flag)
    cfg.decoder = DecoderConfig(**dec)
    for key in ("trials", "seed", "threads"):
        if getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    cfg.__post_init__()
    return cfg


def cmd_simulate(args):
    cfg = _experiment_config(args)
    checks = None
    if args.bundle:
        code = _load_code(args)
        cfg.code.schlafli = tuple(code.meta.get("schlafli") or cfg.code.schlafli)
        cfg.code.n = code.meta.get("n", cfg.code.n)
        cfg.code.gauge = code.meta.get("gauge")
        if cfg.code.smoothing:
            checks = smooth_generators(code.checks, seed=cfg.code.seed_smooth)
        rows = estimate_logical_rate(cfg, code, checks)
    else:
        rows = estimate_logical_rate(cfg)
    out = Path(args.out)
    paths = [out]
    fmt = args.format or "csv"
    text = rows_to_csv(rows)
    if fmt == "json":
        _write(out, json.dumps([asdict(r) for r in rows], indent=1) + "\n")
    else:
        _write(out if out.suffix != ".svg" else out.with_suffix(".csv"), text)
        paths = [out if out.suffix != ".svg" else out.with_suffix(".csv")]
    if fmt == "svg":
        series = {}
        for r in rows:
            series.setdefault(f"n={r.n} p_r={r.p_r:g}", []).append((r.p_e, r.rate))
        svg = out.with_suffix(".svg")
        _write(svg, svg_line_plot(series, "p_e", "logical error rate"))
        paths.append(svg)
    d = cfg.to_dict()
    d["bundle"] = args.bundle
    return d, paths


def _entropy_network(args):
    if args.network == "blackhole":
        return black_hole(args.n)
    if args.network == "wormhole":
        return wormhole(args.n)
    return network_for(args.schlafli, args.n)


def cmd_entropy(args):
    net = _entropy_network(args)
    nb = net.n_boundary
    regions = [(spec, parse_region(spec, nb, net.horizon_labels)) for spec in args.region]
    for w in args.windows:
        if not 1 <= w < nb:
            raise ConfigError(f"window width must lie in 1..{nb - 1}")
        regions += [(f"{A[0]}-{A[-1]}" if A[-1] >= A[0] else ",".join(map(str, A)), A)
                    for A in contiguous_intervals(nb, [w])]
    if not regions:
        raise ConfigError("give at least one --region or --windows")
    state = network_state(net, args.bulk)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["region_spec", "bulk_treatment", "alpha", "entropy", "min_cut"])
    for spec, A in regions:
        s = network_state_entropy(net, CutQuery(A, args.bulk), args.alpha, state=state)
        cut = min_cut(net, A, count_bulk=args.bulk == "open")
        w.writerow([spec, args.bulk, repr(args.alpha), s, cut])
    out = Path(args.out)
    _write(out, buf.getvalue())
    cfg = {"schlafli": list(args.schlafli), "n": args.n, "network": args.network, "bulk": args.bulk,
           "alpha": args.alpha, "regions": [s for s, _ in regions]}
    return cfg, [out]


def cmd_smooth(args):
    code = _load_code(args)
    seed = args.seed or 0
    before = code.checks
    after = smooth_generators(before, args.max_iters, args.candidates, args.target, seed=seed)
    code.checks = after
    bundle = code_to_bundle(code)
    bundle["smoothing"] = {"seed": seed, "max_iters": args.max_iters, "candidates": args.candidates,
                           "target": args.target, "max_weight_before": int(before.weights().max(initial=0)),
                           "max_weight_after": int(after.weights().max(initial=0))}
    out = Path(args.out)
    _write(out, json.dumps(bundle, indent=1) + "\n")
    return {"bundle": args.bundle, "schlafli": args.schlafli, "n": args.n, "gauge": args.gauge,
            **bundle["smoothing"]}, [out]


def _bh_like(args, net):
    code = contract(net)
    bundle = code_to_bundle(code)
    if code.horizon_labels:
        state = network_state(net, "fixed_plus")
        idx = [state.leg_labels.index(h) for h in code.horizon_labels]
        bundle["horizon_entropy"] = int(region_entropy(state, idx))
    if "sides" in code.meta:
        bundle["sides"] = code.meta["sides"]
        nb = len(code.meta["sides"][0])
        bundle["spanning_checks"] = int(sum(
            1 for p in code.checks.paulis() if (p.x | p.z)[:nb].any() and (p.x | p.z)[nb:].any()))
    out = Path(args.out)
    _write(out, json.dumps(bundle, indent=1) + "\n")
    return {"command": args.command, "n": args.n}, [out]


def cmd_blackhole(args):
    return _bh_like(args, black_hole(args.n))


def cmd_wormhole(args):
    return _bh_like(args, wormhole(args.n))


def cmd_foliate(args):
    code = _load_code(args)
    fol = foliate(code, args.rounds)
    doc = {
        "rounds": fol.rounds,
        "bottom": [str(v) for v in fol.bottom_labels],
        "top": [str(v) for v in fol.top_labels],
        "internal_legs": len(fol.internal_labels),
        "closed_webs": [str(p) for p in fol.closed_webs],
        "web_is_boundary_only": fol.web_is_boundary_only,
        "correlators": [{"bulk": c.bulk, "X": str(c.X), "Z": str(c.Z)} for c in fol.correlators],
    }
    out = Path(args.out)
    _write(out, json.dumps(doc, indent=1) + "\n")
    return {"bundle": args.bundle, "schlafli": args.schlafli, "n": args.n, "gauge": args.gauge,
            "rounds": args.rounds}, [out]


def cmd_region_map(args):
    trials = args.trials or 1000
    seed = args.seed or 0
    grid = [NoiseSpec(pe, pr) for pe, pr in itertools.product(args.p_e, args.p_r)]
    dec = DecoderConfig(method=args.decoder, osd_order=args.osd_order)
    rows_by_n = {}
    for n in args.ns:
        cfg = ExperimentConfig(CodeSpec(args.schlafli, n, args.gauge), grid, dec, trials, seed,
                               threads=args.threads or 1)
        rows_by_n[n] = estimate_logical_rate(cfg)
    region = crossing_and_region(rows_by_n)
    out = Path(args.out)
    _write(out, region_to_csv(region))
    rates = out.with_name(out.stem + "_rates.csv")
    _write(rates, "".join(rows_to_csv(rows_by_n[n]) if k == 0 else rows_to_csv(rows_by_n[n]).split("\n", 1)[1]
                          for k, n in enumerate(sorted(rows_by_n))))
    paths = [out, rates]
    bad = monotone_violations(region)
    if bad:
        print(f"warning: {len(bad)} grid points break monotonicity (flagged, not fatal)", file=sys.stderr)
    cfg = {"schlafli": list(args.schlafli), "ns": args.ns, "gauge": args.gauge, "p_e": args.p_e, "p_r": args.p_r,
           "decoder": dec.tag, "trials": trials, "seed": seed}
    return cfg, paths


COMMANDS = {
    "build": cmd_build, "simulate": cmd_simulate, "entropy": cmd_entropy, "smooth": cmd_smooth,
    "blackhole": cmd_blackhole, "wormhole": cmd_wormhole, "foliate": cmd_foliate, "region-map": cmd_region_map,
}


def write_manifest(argv: list[str], cfg: dict, seed, paths: list[Path]) -> Path:
    manifest = {
        "command_line": ["holocode", *argv],
        "config_hash": config_hash(cfg),
        "config": json.loads(json.dumps(cfg, default=list)),
        "seed": seed,
        "artifacts": {str(p): file_sha256(p) for p in paths},
        "version": __version__,
    }
    mpath = Path(str(paths[0]) + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return mpath


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        cfg, paths = COMMANDS[args.command](args)
        write_manifest(argv, cfg, getattr(args, "seed", None), paths)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"holocode: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError, KeyError, IndexError) as exc:
        print(f"holocode: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"holocode: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
