"""Command-line interface.

Subcommands: modulus (evaluate/invert/check a modulus), eval (evaluate a
stored grid function), build (materialize the extremal map), certify
(lower-bound certificate at one budget), perturb (adversary
constructions), sweep (dyadic budget sweep to CSV).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .adversary import (
    find_separated_peaks,
    flatten_perturbation,
    improvement_envelope,
    iterate_improvement,
    refine_interpolant,
)
from .certifier import certify
from .chart import Chart, affine_chart, identity_chart, polar_demo_chart
from .errors import TranslabError
from .extremal import ExtremalFunction
from .funcrep import SampledFunction, count_zero_components
from .modulus import ModulusSpec, check_modulus_axioms
from .driver import parse_config, sweep, write_csv


def _modulus_from_args(args) -> ModulusSpec:
    if args.kind == "power":
        return ModulusSpec.power(args.lam, args.alpha)
    with open(args.file) as fh:
        pts = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            d, v = line.split()
            pts.append((float(d), float(v)))
    return ModulusSpec.table(pts)


def _extremal_from_args(args) -> ExtremalFunction:
    beta = ModulusSpec.power(args.lam, args.alpha)
    return ExtremalFunction(beta=beta, d=args.d, q=args.m - args.p, p=args.p)


def _chart_from_spec(spec: str, m: int, r0: float) -> Chart:
    if spec == "identity":
        return identity_chart(m, r0=r0)
    if spec == "polar-demo":
        return polar_demo_chart(r0=r0)
    if spec.startswith("affine:"):
        nums = [float(tok) for tok in spec[len("affine:"):].split(",")]
        if len(nums) != m * m + m:
            raise TranslabError(f"affine chart needs {m * m + m} numbers, got {len(nums)}")
        mat = np.array(nums[: m * m]).reshape(m, m)
        off = np.array(nums[m * m:])
        return affine_chart(mat, off, r0=r0)
    raise TranslabError(f"unknown chart spec {spec!r}")


def _cmd_modulus(args) -> int:
    beta = _modulus_from_args(args)
    if args.eval is not None:
        print(f"{beta(args.eval):.17g}")
    elif args.invert is not None:
        print(f"{beta.inverse(args.invert):.17g}")
    elif args.check is not None:
        grid = np.arange(0.0, 1.0 + args.check / 2.0, args.check)
        report = check_modulus_axioms(beta, grid)
        print(f"monotone={str(report.monotone).lower()}")
        print(f"subadditive={str(report.subadditive).lower()}")
        print(f"vanishes_at_zero={str(report.vanishes_at_zero).lower()}")
    else:
        raise TranslabError("one of --eval, --invert, --check is required")
    return 0


def _cmd_eval(args) -> int:
    h = SampledFunction.load(args.func)
    x = [float(tok) for tok in args.at.split(",")]
    value = h.evaluate(x)
    print(" ".join(f"{v:.17g}" for v in value))
    return 0


def _cmd_build(args) -> int:
    fn = _extremal_from_args(args)
    if args.sample is not None:
        if args.out is None:
            raise TranslabError("--sample needs --out")
        fn.sample(args.sample).save(args.out)
        print(f"wrote sampled function (d={fn.d}, m={fn.m}, step={args.sample}) to {args.out}")
    else:
        print(f"extremal map defined: d={fn.d} m={fn.m} p={fn.p} q={fn.q} "
              f"alpha={args.alpha} lambda={args.lam} (use --sample STEP --out PATH to materialize)")
    return 0


def _cmd_certify(args) -> int:
    fn = _extremal_from_args(args)
    h = SampledFunction.load(args.h) if args.h else None
    chart = _chart_from_spec(args.chart, args.m, args.r0) if args.chart else None
    cert = certify(fn, args.eps, h=h, chart=chart, z_grid=args.z_grid)
    print(f"eps={cert.eps:.17g}")
    print(f"n0={cert.n0}")
    for lc in cert.per_level_counts:
        print(f"level_{lc.n}={lc.verified}/{lc.total}")
    print(f"certified_count={cert.certified_count}")
    print(f"paper_bound={cert.paper_bound}")
    print(f"theory_bound={cert.theory_bound:.17g}")
    print(f"mode={cert.mode}")
    print(f"vacuous={str(cert.vacuous).lower()}")
    print(f"envelope_ok={str(cert.envelope_ok).lower()}")
    if args.csv:
        header_needed = not os.path.exists(args.csv)
        with open(args.csv, "a") as fh:
            if header_needed:
                fh.write("eps,n0,certified_count,paper_bound,theory_bound,mode\n")
            fh.write(
                f"{cert.eps:.17g},{cert.n0},{cert.certified_count},"
                f"{cert.paper_bound},{cert.theory_bound:.17g},{cert.mode}\n"
            )
    return 0


def _cmd_perturb(args) -> int:
    if args.func:
        sampled = SampledFunction.load(args.func)
        if sampled.d != 1 or sampled.m != 1:
            raise TranslabError("perturb needs a scalar function on [0,1]")
        f = lambda s: float(sampled(np.array([s]))[0])
    else:
        f = _extremal_from_args(args).as_scalar()
    if args.mode in ("flatten", "refine") and not args.out:
        raise TranslabError(f"--mode {args.mode} needs --out")
    if args.mode == "flatten":
        h = flatten_perturbation(f, args.eps, args.C)
    elif args.mode == "refine":
        h = refine_interpolant(f, args.eps, find_separated_peaks(f, args.eps, args.C))
    else:
        rows = iterate_improvement(f, args.eps, args.C, args.rounds)
        print("k eps zero_count envelope")
        for k, (eps_k, count) in enumerate(rows, start=1):
            print(f"{k} {eps_k:.17g} {count} {improvement_envelope(args.eps, args.C, k):.17g}")
        return 0
    h.save(args.out)
    summary = count_zero_components(h)
    print(f"wrote {args.mode} perturbation to {args.out}: "
          f"{summary.component_count} zero components, flat={str(summary.has_flat_zero_interval).lower()}")
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    chart = _chart_from_spec(args.chart, cfg.m, args.r0) if args.chart else None
    records = sweep(cfg, chart=chart)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="translab")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_power_args(p, d_default=1):
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--d", type=int, default=d_default)
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--p", type=int, default=0)

    p = sub.add_parser("modulus", help="evaluate, invert, or axiom-check a modulus")
    p.add_argument("--kind", choices=("power", "table"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--file", help="two-column table: delta value")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eval", type=float)
    group.add_argument("--invert", type=float)
    group.add_argument("--check", type=float, metavar="GRIDSTEP")
    p.set_defaults(handler=_cmd_modulus)

    p = sub.add_parser("eval", help="evaluate a stored grid function")
    p.add_argument("--func", required=True)
    p.add_argument("--at", required=True, help="comma-separated coordinates")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("build", help="define or materialize the extremal map")
    add_power_args(p)
    p.add_argument("--sample", type=float, help="uniform grid step")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("certify", help="lower-bound certificate at one budget")
    add_power_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--h", help="perturbation function file (empirical mode)")
    p.add_argument("--chart", help="identity | affine:a11,...,b1,... | polar-demo")
    p.add_argument("--r0", type=float, default=1.0)
    p.add_argument("--z-grid", type=int, default=1)
    p.add_argument("--csv", help="append a summary row to this CSV")
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("perturb", help="adversary constructions")
    p.add_argument("--mode", choices=("flatten", "refine", "iterate"), required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--func", help="scalar function file; omit to use the extremal map")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_perturb, d=1, m=1, p=0)

    p = sub.add_parser("sweep", help="dyadic budget sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--chart", help="identity | affine:a11,...,b1,... | polar-demo")
    p.add_argument("--r0", type=float, default=1.0)
    p.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (TranslabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
