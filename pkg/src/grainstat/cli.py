"""Command-line interface: ``grainstat <subcommand> ...``.

Exit codes: 0 success, 2 bad parameters, 3 unreadable image, 4 a ``verify``
check failed.
"""
from __future__ import annotations

import argparse
import logging
import sys

from grainstat import montecarlo as mc
from grainstat.animals import GROWTH_ASSUMED, K_CAP, build_table
from grainstat.exceptions import PNMParseError
from grainstat.grayfilter import denoise_gray, nesting_fraction
from grainstat.morpho import denoise_binary, denoise_binary_swapped
from grainstat.noise import corrupt_binary, corrupt_gray
from grainstat.pnm import read_image, write_image
from grainstat.probcalc import ThresholdQuery, appearance_probability, make_plan, size_threshold

EXIT_OK, EXIT_PARAM, EXIT_PARSE, EXIT_CHECK = 0, 2, 3, 4

log = logging.getLogger("grainstat")


def _table(args):
    return build_table(args.kmax, args.growth)


def cmd_animals(args):
    table = _table(args)
    print("k\ta_k\tprovenance")
    for k, value, exact in table.rows(max(args.extend, table.k_max_exact)):
        shown = str(value) if exact else f"{value:.6g}"
        print(f"{k}\t{shown}\t{'exact' if exact else 'extrap'}")
    return EXIT_OK


def cmd_threshold(args):
    table = _table(args)
    query = ThresholdQuery(args.width, args.height, args.p, args.eps)
    s = size_threshold(query, table, force=args.force)

    def pa(k):
        if k < 1:
            return "NA"
        return f"{appearance_probability(args.width, args.height, k, args.p, table):.6g}"

    print("s\tpa_prev\tpa_s")
    print(f"{s}\t{pa(s - 1)}\t{pa(s)}")
    return EXIT_OK


def cmd_add_noise(args):
    image = read_image(args.inp)
    if image.dtype == bool:
        out = corrupt_binary(image, args.p, args.q, seed=args.seed)
    else:
        if args.q:
            raise ValueError("--q only applies to binary (PBM) images")
        out = corrupt_gray(image, args.p, seed=args.seed)
    write_image(out, args.out)
    return EXIT_OK


def cmd_denoise_binary(args):
    image = read_image(args.inp)
    if image.dtype != bool:
        raise ValueError(f"{args.inp} is not a PBM image")
    h, w = image.shape
    plan = make_plan(w, h, args.p, args.q, args.eps, _table(args), force=args.force)
    log.info("thresholds: zeros %d, ones %d", plan.s_zeros, plan.s_ones)
    out = (denoise_binary_swapped if args.swapped else denoise_binary)(image, plan)
    write_image(out, args.out)
    return EXIT_OK


def cmd_denoise_gray(args):
    image = read_image(args.inp)
    if image.dtype == bool:
        raise ValueError(f"{args.inp} is not a PGM image")
    out, stack = denoise_gray(image, args.p, args.eps, _table(args), n_jobs=args.threads,
                              force=args.force, return_stack=True)
    write_image(out, args.out)
    if args.report_nesting:
        print(f"nesting_fraction\t{nesting_fraction(stack):.6f}")
    return EXIT_OK


def cmd_verify(args):
    exp = args.experiment
    reports = []
    if exp == "rejection":
        reports.append(mc.pure_noise_rejection(args.n, args.p, args.eps, args.trials, args.seed,
                                               _table(args), n_jobs=args.threads))
    elif exp == "scaling":
        rows = mc.scaling_sweep(args.property, trials=args.trials, seed=args.seed,
                                deltas=(-args.delta, args.delta), n_jobs=args.threads)
        print("n\tdelta\tp\testimate\thalf_width")
        for r in rows:
            print(f"{r.n}\t{r.delta:g}\t{r.p:.6g}\t{r.estimate:.6g}\t{r.half_width:.4g}")
        ok = all(mc.sweep_is_monotone(rows, d) for d in (-args.delta, args.delta))
        print(f"monotone\t{'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_CHECK
    else:
        spec = mc.ExperimentSpec(args.n, args.c, args.property, args.trials, args.seed)
        if exp == "theorem1":
            reports.append(mc.estimate_property_probability(spec, n_jobs=args.threads))
        else:
            reports.extend(mc.estimate_factorial_moments(spec, args.lmax, n_jobs=args.threads))
    print(reports[0].tsv_header())
    for rep in reports:
        print(rep.tsv_row())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads (-1: all cores)")
    common.add_argument("--kmax", type=int, default=K_CAP,
                        help=f"largest exactly enumerated animal size (default {K_CAP})")
    common.add_argument("--growth", type=float, default=GROWTH_ASSUMED,
                        help="growth constant for extrapolated animal counts")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="grainstat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("animals", parents=[common], help="print lattice-animal counts as TSV")
    p.add_argument("--extend", type=int, default=0, help="also list extrapolated rows up to this k")
    p.set_defaults(func=cmd_animals)

    p = sub.add_parser("threshold", parents=[common], help="area threshold for one density")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--force", action="store_true", help="allow p above p_max")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("add-noise", parents=[common], help="corrupt a PBM/PGM with impulse noise")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=0.0)
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("denoise-binary", parents=[common], help="filter a PBM image")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--p", type=float, required=True, help="P(1 -> 0)")
    p.add_argument("--q", type=float, required=True, help="P(0 -> 1)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--swapped", action="store_true", help="clean 1-components first")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_denoise_binary)

    p = sub.add_parser("denoise-gray", parents=[common], help="filter a PGM image")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--report-nesting", action="store_true")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_denoise_gray)

    p = sub.add_parser("verify", parents=[common], help="Monte Carlo checks, TSV report")
    p.add_argument("--experiment", required=True,
                   choices=["theorem1", "scaling", "moments", "rejection"])
    p.add_argument("--property", default="connected-pair")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--p", type=float, default=0.1, help="noise density (rejection only)")
    p.add_argument("--eps", type=float, default=1e-2, help="risk level (rejection only)")
    p.add_argument("--lmax", type=int, default=2, help="highest factorial moment (moments only)")
    p.add_argument("--delta", type=float, default=0.25, help="exponent offset (scaling only)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except PNMParseError as exc:
        print(f"grainstat: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, TypeError, OSError) as exc:
        print(f"grainstat: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
