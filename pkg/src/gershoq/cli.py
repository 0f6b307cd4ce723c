"""Batch command-line front end: build, verify, convergence.

Model mini-grammar: family:param,param -- e.g. uniform:0,1  gauss:0,1
laplace:0,1  exp:1  powertail:5,1  tabulated:density.csv

Exit codes: 0 ok, 1 usage/malformed input, 2 construction failure,
3 verification failure. Data files are byte-deterministic; timestamps
live only in the run manifest written next to each output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .asymptotics import (ConvergenceRow, diagnostics, write_convergence_csv,
                          write_diagnostics_csv, zador_constant)
from .config import SolverConfig, load_config_overrides
from .distribution import (Order, exponential, gaussian, laplace, power_tail,
                           tabulated_from_csv, uniform)
from .errors import GershoqError, InfiniteZadorConstant
from .gersho import (build_by_doubling, build_gersho, load_quantizer_json,
                     quantizer_to_json, verify_quantizer)
from .lloyd import run_lloyd

_FMT = "{:.17g}".format


def parse_model(spec: str):
    """family:params model spec; tabulated densities are referenced by path."""
    name, _, rest = spec.partition(":")
    key = name.strip().lower()
    if key == "tabulated":
        if not rest:
            raise ValueError("tabulated needs a CSV path: tabulated:density.csv")
        return tabulated_from_csv(rest)
    try:
        params = [float(tok) for tok in rest.split(",")] if rest else []
    except ValueError:
        raise ValueError(f"bad numeric parameters in model spec {spec!r}") from None
    families = {
        ("uniform",): (uniform, 2),
        ("gauss", "gaussian", "normal"): (gaussian, 2),
        ("laplace",): (laplace, 2),
        ("exp", "exponential"): (exponential, 1),
        ("powertail", "power_tail", "pareto"): (power_tail, 2),
    }
    for aliases, (ctor, nargs) in families.items():
        if key in aliases:
            if len(params) != nargs:
                raise ValueError(
                    f"{key} expects {nargs} parameter(s), got {len(params)}")
            return ctor(*params)
    raise ValueError(f"unknown model family {name!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _model_arg(spec):
    try:
        return spec, parse_model(spec)
    except (ValueError, GershoqError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _interval_arg(text):
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi -- got {text!r}")
    return lo, hi


def _load_cfg():
    path = os.environ.get("GQ_SEED_CONFIG", "").strip()
    if not path:
        return SolverConfig(), {}
    cfg = load_config_overrides(path)
    defaults = SolverConfig()
    overrides = {f.name: getattr(cfg, f.name)
                 for f in dataclasses.fields(SolverConfig)
                 if getattr(cfg, f.name) != getattr(defaults, f.name)}
    return cfg, overrides


def _write_manifest(out_path, command, dist, r, levels, overrides, outputs, wall):
    doc = {
        "command": command,
        "model": dist,
        "r": r,
        "levels": list(levels),
        "config_overrides": overrides,
        "outputs": list(outputs),
        "tool_version": __version__,
        "wall_clock_per_level": {str(k): v for k, v in wall.items()},
    }
    with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_build(args) -> int:
    dist, model = args.dist
    order = Order(args.r)
    cfg, overrides = _load_cfg()
    t0 = time.perf_counter()
    try:
        if args.method == "gersho":
            q, rep = build_gersho(model, args.n, order, cfg)
            tag, unique = "outer_bisection", rep.unique
        elif args.method == "doubling":
            k = max(args.n.bit_length() - 1, 0)
            if 2 ** k != args.n:
                print(f"build: error: --method doubling needs n a power of two, "
                      f"got {args.n}", file=sys.stderr)
                return 1
            q, rep = build_by_doubling(model, k, order, cfg)
            tag, unique = "doubling", rep.unique
        else:
            q, iters = run_lloyd(model, args.n, order, "quantile_grid", cfg)
            tag, unique = "lloyd", False
            if iters >= cfg.lloyd_max_iter:
                print("build: warning: Lloyd iteration cap reached without "
                      "convergence", file=sys.stderr)
    except GershoqError as exc:
        print(f"build: construction failed: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - t0
    text = quantizer_to_json(q, tag, unique)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.write("\n")
        _write_manifest(args.output, "build", dist, args.r, [args.n],
                        overrides, [args.output], {args.n: wall})
    else:
        print(text)
    return 0


def cmd_verify(args) -> int:
    try:
        q, _method, _unique = load_quantizer_json(args.quantizer)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"verify: cannot read quantizer: {exc}", file=sys.stderr)
        return 1
    _dist, model = args.dist
    cfg, _overrides = _load_cfg()
    rep = verify_quantizer(model, q, tol=args.tol, cfg=cfg)
    print(f"G1 level count           : {'PASS' if rep.g1 else 'FAIL'}")
    print(f"G2 interval cells        : {'PASS' if rep.g2 else 'FAIL'}")
    print(f"G3 codepoints 1-optimal  : {'PASS' if rep.g3 else 'FAIL'} "
          f"(max codepoint error {_FMT(rep.max_codepoint_error)})")
    print(f"G4 equal cell moments    : {'PASS' if rep.g4 else 'FAIL'} "
          f"(spread {_FMT(rep.per_cell_spread)})")
    print(f"voronoi midpoints        : {'yes' if rep.boundaries_are_midpoints else 'no'}")
    print(f"distortion               : {_FMT(rep.distortion)}")
    print("cell moments             : "
          + " ".join(_FMT(m) for m in rep.cell_moments))
    return 0 if rep.ok else 3


def _level_job(payload):
    spec, r, n, method, cfg_kwargs = payload
    model = parse_model(spec)
    order = Order(r)
    cfg = SolverConfig(**cfg_kwargs)
    t0 = time.perf_counter()
    try:
        if method == "gersho":
            q, rep = build_gersho(model, n, order, cfg)
            d = rep.distortion
        else:
            q, _iters = run_lloyd(model, n, order, "quantile_grid", cfg)
            d = sum(q.cell_moments)
        err = ""
    except GershoqError as exc:
        q, d, err = None, math.nan, str(exc)
    return n, d, err, q, time.perf_counter() - t0


def cmd_convergence(args) -> int:
    dist, model = args.dist
    order = Order(args.r)
    cfg, overrides = _load_cfg()
    if args.dyadic is not None:
        levels = [2 ** k for k in range(args.dyadic + 1)]
    else:
        levels = args.levels
    try:
        c0 = zador_constant(model, order, cfg)
        print(f"C0 = {_FMT(c0)}")
    except InfiniteZadorConstant:
        c0 = math.inf
        print("warning: C0 is infinite for this model; emitting scaled column "
              "only", file=sys.stderr)

    payloads = [(dist, args.r, n, args.method, dataclasses.asdict(cfg))
                for n in levels]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_level_job, payloads))
    else:
        results = [_level_job(p) for p in payloads]

    rows, quantizers, wall = [], {}, {}
    for n, d, err, q, secs in results:
        wall[n] = secs
        scaled = n ** args.r * d
        ratio = scaled / c0 if math.isfinite(c0) else math.nan
        rate = math.nan
        if args.rate and n >= 2 and math.isfinite(c0) and not err:
            rate = abs(c0 - scaled) * n / math.log(n)
        rows.append(ConvergenceRow(n, d, scaled, ratio, rate, error=err))
        quantizers[n] = q

    include_ratio = math.isfinite(c0)
    outputs = []
    if args.output:
        write_convergence_csv(rows, args.output, include_rate=args.rate,
                              include_ratio=include_ratio)
        outputs.append(args.output)
    else:
        cols = "n,distortion,scaled" + (",ratio" if include_ratio else "") \
            + (",rate" if args.rate else "")
        print(cols)
        for row in rows:
            vals = [str(row.n), _FMT(row.distortion), _FMT(row.scaled)]
            if include_ratio:
                vals.append(_FMT(row.ratio))
            if args.rate:
                vals.append(_FMT(row.rate))
            print(",".join(vals))

    if args.interval is not None:
        diag_rows = []
        for n in levels:
            q = quantizers[n]
            if q is None:
                continue
            diag_rows.append(diagnostics(model, q, order, args.interval, cfg,
                                         c0=c0))
        if args.output:
            diag_path = f"{args.output}.diagnostics.csv"
            write_diagnostics_csv(diag_rows, diag_path)
            outputs.append(diag_path)
        else:
            print("n,point_density,error_density,mass_deviation,g4_deviation")
            for row in diag_rows:
                print(",".join([str(row.n), _FMT(row.point_density),
                                _FMT(row.error_density),
                                _FMT(row.mass_deviation),
                                _FMT(row.g4_deviation)]))

    if args.output:
        _write_manifest(args.output, "convergence", dist, args.r, levels,
                        overrides, outputs, wall)
    return 0


def _build_parser():
    parser = _Parser(prog="gershoq",
                     description="equal-distortion scalar quantizers")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[], help="construct one quantizer")
    b.add_argument("--dist", required=True, type=_model_arg,
                   help="model spec, e.g. gauss:0,1")
    b.add_argument("--n", required=True, type=int, help="quantization level")
    b.add_argument("--r", type=float, default=2.0, help="norm exponent (> 1)")
    b.add_argument("--method", choices=["gersho", "doubling", "lloyd"],
                   default="gersho")
    b.add_argument("-o", "--output", default=None, help="output JSON path")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check the four defining properties")
    v.add_argument("quantizer", help="quantizer JSON file")
    v.add_argument("--dist", required=True, type=_model_arg)
    v.add_argument("--tol", type=float, default=1e-6,
                   help="relative tolerance for G3/G4")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("convergence", help="scaled-distortion table vs C0")
    c.add_argument("--dist", required=True, type=_model_arg)
    c.add_argument("--r", type=float, default=2.0)
    grp = c.add_mutually_exclusive_group(required=True)
    grp.add_argument("--levels", type=lambda s: [int(t) for t in s.split(",")],
                     help="comma-separated levels, e.g. 1,2,4,8")
    grp.add_argument("--dyadic", type=int, metavar="K",
                     help="levels 1,2,...,2^K")
    c.add_argument("--method", choices=["gersho", "lloyd"], default="gersho")
    c.add_argument("--interval", type=_interval_arg, default=None,
                   metavar="LO,HI", help="also emit interval diagnostics")
    c.add_argument("--rate", action="store_true",
                   help="emit the |C0 - scaled|*n/log(n) column")
    c.add_argument("--jobs", type=int, default=1,
                   help="parallel workers across levels")
    c.add_argument("-o", "--output", default=None, help="output CSV path")
    c.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except GershoqError as exc:
        print(f"gershoq: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
