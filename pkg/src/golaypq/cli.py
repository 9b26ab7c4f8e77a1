"""Command-line front end: ``golaypq <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 infeasible search,
3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import ambiguity as amb
from . import checks
from . import io
from . import scene as sc
from .golay import generate_golay_pair
from .search import DEFAULT_BOUND, maxsnr_design
from .seqdesign import (
    InfeasibleSearchError,
    binomial_design,
    conventional_design,
    design_record,
    ptm_design,
)

EXIT_OK, EXIT_VERIFY, EXIT_INFEASIBLE, EXIT_CONFIG = 0, 1, 2, 3
KINDS = ("conventional", "ptm", "binomial", "maxsnr")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: configuration error: {message}\n")


def build_design(kind: str, n: int, m: int | None = None, bound: int = DEFAULT_BOUND, method: str = "exact"):
    if kind == "conventional":
        return conventional_design(n)
    if kind == "ptm":
        return ptm_design(n)
    if kind == "binomial":
        return binomial_design(n)
    if kind == "maxsnr":
        if m is None:
            raise ConfigError("--kind maxsnr needs --m (target null order)")
        return maxsnr_design(n, m, method=method, coeff_bound=bound)
    raise ConfigError(f"unknown design kind {kind!r}")


def _resolved(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _thetas(args) -> np.ndarray:
    if args.theta_points < 1:
        raise ConfigError("--theta-points must be >= 1")
    if args.theta_min > args.theta_max:
        raise ConfigError("--theta-min must not exceed --theta-max")
    return np.linspace(args.theta_min, args.theta_max, args.theta_points)


# -- commands ----------------------------------------------------------------


def cmd_golay(args) -> int:
    pair = generate_golay_pair(args.log2len)
    rows = io.pair_rows(pair)
    if args.out:
        io.write_csv(args.out, ("index", "x", "y"), rows)
    else:
        sys.stdout.write(io.csv_text(("index", "x", "y"), rows))
    return EXIT_OK


def cmd_design(args) -> int:
    design = build_design(args.kind, args.n, args.m, args.bound, args.method)
    rec = design_record(design, M=args.m if args.kind == "maxsnr" else None)
    if args.out:
        out = Path(args.out)
        if out.suffix == ".csv":
            io.write_csv(out, ("n", "p", "q"), io.design_rows(design))
        else:
            io.write_json(out, rec)
    _emit({"design": rec, "config": _resolved(args)})
    return EXIT_OK


def table_one(bound: int = DEFAULT_BOUND) -> tuple[list[dict], str]:
    """Rows of the reference comparison.  ``null_order`` is the design target
    (the max-SNR rows ask for M=8); ``achieved_order`` is certified exactly."""
    designs = [
        ("Conventional", conventional_design(16), None),
        ("PTM", ptm_design(16), None),
        ("Max-SNR with M=8", maxsnr_design(16, 8), 8),
        ("Binomial", binomial_design(16), None),
        (f"Max-SNR M=8, lattice bound {bound}", maxsnr_design(16, 8, "lattice", bound), 8),
    ]
    rows = []
    for name, d, target in designs:
        rep = d.report()
        rows.append(
            {
                "design": name,
                "null_order": rep.null_order if target is None else target,
                "achieved_order": rep.null_order,
                "snr_ratio": f"{rep.snr_ratio.numerator}/{rep.snr_ratio.denominator}",
                "snr": rep.snr_rounded,
            }
        )
    rows[-1]["meets_13_76"] = rows[-1]["snr"] >= 13.76
    width = max(len(r["design"]) for r in rows)
    lines = [f"{'design':<{width}}  null order  achieved  SNR ||q||_1^2/||q||_2^2"]
    for r in rows:
        lines.append(
            f"{r['design']:<{width}}  {r['null_order']:>10}  {r['achieved_order']:>8}  "
            f"{r['snr']:.2f} ({r['snr_ratio']})"
        )
    return rows, "\n".join(lines)


def cmd_table1(args) -> int:
    rows, text = table_one(args.bound)
    print(text)
    if args.out:
        io.write_json(args.out, {"rows": rows, "config": _resolved(args)})
    return EXIT_OK


def cmd_ambiguity(args) -> int:
    if not args.out:
        raise ConfigError("ambiguity needs --out <map.csv>")
    design = build_design(args.kind, args.n, args.m, args.bound, args.method)
    pt = amb.PulseTrainDesign(design, generate_golay_pair(args.log2len))
    thetas = _thetas(args)
    amap = amb.ambiguity_map(pt, thetas)
    out = Path(args.out)
    db_path = out.with_name(out.stem + "_db" + out.suffix)
    io.write_csv(out, ("k", "theta", "re", "im"), io.ambiguity_rows(amap))
    io.write_csv(db_path, ("k", "theta", "db"), io.db_rows(amap.delays, amap.dopplers, amap.db()))
    summary = {
        "design": design_record(design),
        "sidelobe_peak_db": amb.range_sidelobe_peak(amap, (args.theta_min, args.theta_max)),
        "files": [str(out), str(db_path)],
        "config": _resolved(args),
    }
    io.write_json(out.with_suffix(".json"), summary)
    _emit(summary)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if not args.out:
        raise ConfigError("simulate needs --out <directory>")
    scene = sc.load_scene(args.scene) if args.scene else sc.default_scene()
    if args.seed is not None:
        scene = sc.Scene(scene.targets, scene.noise_power, args.seed, scene.window)
    pair = generate_golay_pair(args.log2len)
    thetas = _thetas(args)
    kinds = args.kinds or list(KINDS)
    out_dir = Path(args.out)
    summary = {"scene": sc.scene_to_dict(scene), "config": _resolved(args), "maps": {}}
    for kind in kinds:
        design = build_design(kind, args.n, args.m, args.bound, args.method)
        pt = amb.PulseTrainDesign(design, pair)
        dmap = sc.delay_doppler_map(sc.simulate_returns(pt, scene), thetas)
        csv_path = out_dir / f"{kind}_map.csv"
        io.write_csv(csv_path, ("k", "theta", "db"), io.db_rows(dmap.delays, dmap.dopplers, dmap.db))
        side = dmap.sidecar()
        side["design"] = design_record(design)
        side["weak_targets"] = sc.weak_target_visibility(pt, scene) if scene.targets else []
        side["scene"] = summary["scene"]
        side["config"] = summary["config"]
        io.write_json(out_dir / f"{kind}_map.json", side)
        summary["maps"][kind] = {
            "csv": str(csv_path),
            "peak": side["peak"],
            "weak_excess_db": [w["excess_db"] for w in side["weak_targets"]],
        }
    _emit(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all(fault=args.inject_fault, acceptance=not args.quick)
    for r in results:
        print(r.line())
    doc = {
        "ok": all(r.ok for r in results),
        "passed": sum(r.ok for r in results),
        "failed": [r.name for r in results if not r.ok],
        "checks": [r.as_dict() for r in results],
    }
    if args.out:
        io.write_json(args.out, doc)
    print(json.dumps({"ok": doc["ok"], "passed": doc["passed"], "failed": doc["failed"]}))
    return EXIT_OK if doc["ok"] else EXIT_VERIFY


# -- parser ------------------------------------------------------------------


def _add_design_flags(p, kind_required=True):
    if kind_required:
        p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, default=16, help="pulse count N (default 16)")
    p.add_argument("--m", type=int, default=None, help="target null order for maxsnr")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="lattice coefficient bound")
    p.add_argument("--method", choices=("exact", "lattice"), default="exact",
                   help="max-SNR search: exact sign-pattern sweep or bounded lattice")


def _add_grid_flags(p, lo=-math.pi, hi=math.pi, points=1024):
    p.add_argument("--log2len", type=int, default=6, help="Golay length is 2**log2len (default 6)")
    p.add_argument("--theta-min", type=float, default=lo)
    p.add_argument("--theta-max", type=float, default=hi)
    p.add_argument("--theta-points", type=int, default=points)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="golaypq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("golay", help="export a Golay pair as CSV index,x,y")
    p.add_argument("--log2len", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_golay)

    p = sub.add_parser("design", help="build a (P, Q) design and report null order and SNR")
    _add_design_flags(p)
    p.add_argument("--out", help="write the design as .json record or .csv n,p,q")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("table1", help="null order and SNR of the four reference designs")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("ambiguity", help="export the closed-form cross-ambiguity map")
    _add_design_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", help="CSV path for k,theta,re,im; a _db sibling is also written")
    p.set_defaults(func=cmd_ambiguity)

    p = sub.add_parser("simulate", help="simulate a scene and write delay-Doppler maps")
    _add_design_flags(p, kind_required=False)
    p.add_argument("--kind", dest="kinds", action="append", choices=KINDS,
                   help="design to simulate (repeatable; default all four)")
    _add_grid_flags(p)
    p.add_argument("--scene", help="scene JSON; default is the built-in five-target scene")
    p.add_argument("--seed", type=int, default=None, help="override the scene seed")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_simulate, m=8)

    p = sub.add_parser("verify", help="run invariant and acceptance checks")
    p.add_argument("--quick", action="store_true", help="module invariants only")
    p.add_argument("--inject-fault", choices=("golay-sign-flip",), default=None)
    p.add_argument("--out", help="write the JSON summary here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleSearchError as exc:
        print(f"golaypq: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        print(f"golaypq: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
