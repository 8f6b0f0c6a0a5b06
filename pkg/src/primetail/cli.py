"""Command line front end.

Every run writes one JSON header line echoing the resolved configuration,
then one record per line: JSON objects, or tab-separated rows behind
'#'-prefixed header lines with --format tsv. Floats are printed to 12
significant digits through one code path, so identical invocations give
byte-identical output. Exit codes: 0 ok, 2 bad usage, 3 resource budget.
"""

import argparse
import json
import math
import sys

from .averages import DEFAULT_BUDGET, tkh_exact, tkh_monte_carlo, tkh_pair_fast
from .errors import ResourceError
from .hl import hl_error, hl_sweep
from .moments import moment_report, tail_report
from .primes import PrimalityTable, sieve_range, window_counts
from .selberg import gamma_cross_check, sieve_report
from .singular import Tuple, is_admissible, jensen_split_bound, singular_series


def _jdump(obj):
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_jdump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_jdump(v) for v in obj) + "]"
    if isinstance(obj, float):
        return format(obj, ".12g") if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g") if math.isfinite(v) else ""
    return str(v)


def _emit(fmt, config, columns, rows):
    out = sys.stdout
    if fmt == "json":
        out.write(_jdump(config) + "\n")
        for r in rows:
            out.write(_jdump(r) + "\n")
    else:
        out.write("# " + _jdump(config) + "\n")
        out.write("# " + "\t".join(columns) + "\n")
        for r in rows:
            out.write("\t".join(_cell(r.get(c)) for c in columns) + "\n")


def _load_table(args, hi):
    if getattr(args, "cache", None):
        table = PrimalityTable.load(args.cache)
        table.require_cover(0, hi)
        return table
    return sieve_range(0, hi)


def _resolve_h(args):
    if (args.h is None) == (args.lam is None):
        raise ValueError("give exactly one of --h and --lambda")
    if args.h is not None:
        return float(args.h)
    return args.lam * math.log(args.x)


# -- subcommands ---------------------------------------------------------


def _cmd_singular(args):
    H = Tuple.parse(args.tuple)
    sv = singular_series(H, target_error=args.error)
    rec = {
        "tuple": str(H),
        "k": H.k,
        "value": sv.value,
        "error_radius": sv.error_radius,
        "prime_limit": sv.prime_limit,
        "admissible": is_admissible(H),
    }
    if args.jensen:
        rec["jensen_bound"] = jensen_split_bound(H) if H.k >= 2 else 1.0
    config = {
        "subcommand": "singular",
        "format": args.format,
        "threads": args.threads,
        "tuple": str(H),
        "error": args.error,
    }
    _emit(args.format, config, list(rec), [rec])
    return 0


def _cmd_tkh(args):
    k, h = args.k, args.h
    if k < 1 or h < 1:
        raise ValueError("need k >= 1 and h >= 1")
    mode = args.mode
    if mode is None:
        fits = k <= h and math.comb(h, k) * math.factorial(k) <= DEFAULT_BUDGET
        mode = "exact" if fits else "mc"
    config = {
        "subcommand": "tkh",
        "format": args.format,
        "threads": args.threads,
        "k": k,
        "h": h,
        "mode": mode,
        "samples": args.samples if mode == "mc" else None,
        "seed": args.seed if mode == "mc" else None,
    }
    if mode == "exact":
        got = tkh_pair_fast(h) if k == 2 else tkh_exact(k, h)
        rec = {
            "k": k,
            "h": h,
            "mode": mode,
            "value_or_mean": got.value,
            "error": got.error,
            "samples": None,
            "seed": None,
            "normalized": got.value / float(h) ** k,
        }
    else:
        est = tkh_monte_carlo(k, h, args.samples, args.seed, workers=args.threads)
        # T_k(h) = k! C(h,k) * mean of S over uniform sorted k-subsets
        scale = math.factorial(k) * math.comb(h, k)
        rec = {
            "k": k,
            "h": h,
            "mode": mode,
            "value_or_mean": est.mean,
            "error": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
            "normalized": scale * est.mean / float(h) ** k,
            "tkh_estimate": scale * est.mean,
            "workers": est.workers,
        }
    _emit(args.format, config, list(rec), [rec])
    return 0


def _cmd_moments(args):
    h = _resolve_h(args)
    if args.r_max < 1:
        raise ValueError("need --r-max >= 1")
    table = _load_table(args, args.x + math.ceil(h))
    hist = window_counts(table, args.x, h)
    config = {
        "subcommand": "moments",
        "format": args.format,
        "threads": args.threads,
        "x": args.x,
        "h": h,
        "r_max": args.r_max,
    }
    rows = []
    for r in range(1, args.r_max + 1):
        m = moment_report(hist, r)
        rows.append(
            {
                "x": m.x,
                "h": m.h,
                "lambda": m.lam,
                "lambda_eff": m.lam_eff,
                "r": m.r,
                "empirical": m.empirical,
                "predicted": m.predicted,
                "ratio": m.ratio,
                "predicted_eff": m.predicted_eff,
                "ratio_eff": m.ratio_eff,
            }
        )
    _emit(args.format, config, list(rows[0]), rows)
    return 0


def _cmd_tail(args):
    h = _resolve_h(args)
    if args.k_max < 0:
        raise ValueError("need --k-max >= 0")
    table = _load_table(args, args.x + math.ceil(h))
    hist = window_counts(table, args.x, h)
    config = {
        "subcommand": "tail",
        "format": args.format,
        "threads": args.threads,
        "x": args.x,
        "h": h,
        "k_max": args.k_max,
    }
    rows = []
    for k in range(args.k_max + 1):
        t = tail_report(hist, k)
        rows.append(
            {
                "x": t.x,
                "h": t.h,
                "lambda": t.lam,
                "lambda_eff": t.lam_eff,
                "k": t.k,
                "I_count": t.I_count,
                "pi_k_count": t.pi_k_count,
                "poisson_tail": t.poisson_tail,
                "corollary_bound": t.corollary_bound,
                "poisson_tail_eff": t.poisson_tail_eff,
                "corollary_bound_eff": t.corollary_bound_eff,
            }
        )
    _emit(args.format, config, list(rows[0]), rows)
    return 0


def _hl_record(rep):
    return {
        "tuple": str(rep.H),
        "x": rep.x,
        "hits": rep.hits,
        "prediction": rep.prediction,
        "abs_error": rep.abs_error,
        "normalized": rep.normalized,
        "normalized_alt": rep.normalized_alt,
        "lambda_form_error": rep.lambda_form_error,
    }


def _cmd_hl(args):
    H = Tuple.parse(args.tuple)
    config = {
        "subcommand": "hl",
        "format": args.format,
        "threads": args.threads,
        "tuple": str(H),
        "x": args.x,
        "sweep": args.sweep,
    }
    top = args.x
    if args.sweep:
        a, b, s = (int(v) for v in args.sweep.split(":"))
        if s < 1 or b < a:
            raise ValueError("--sweep wants A:B:S with A <= B and S >= 1")
        top = max(top, b)
        xs = list(range(a, b + 1, s))
    table = _load_table(args, top + H.offsets[-1] + 1)
    if args.sweep:
        reports = hl_sweep(H, xs, table)
    else:
        reports = [hl_error(H, args.x, table)]
    rows = [_hl_record(r) for r in reports]
    columns = ["x", "hits", "prediction", "abs_error", "normalized", "normalized_alt"]
    _emit(args.format, config, columns, rows)
    return 0


def _cmd_selberg(args):
    H = Tuple.parse(args.tuple)
    if (args.z is None) == (args.epsilon is None):
        raise ValueError("give exactly one of --z and --epsilon")
    table = _load_table(args, args.x + H.offsets[-1] + 1)
    rep = sieve_report(H, args.x, z=args.z, epsilon=args.epsilon, table=table)
    config = {
        "subcommand": "selberg",
        "format": args.format,
        "threads": args.threads,
        "tuple": str(H),
        "x": args.x,
        "z": rep.z,
        "epsilon": args.epsilon,
    }
    rec = {
        "tuple": str(H),
        "x": rep.x,
        "z": rep.z,
        "G_z": rep.G_z,
        "W_z": rep.W_z,
        "raw_bound": rep.raw_bound,
        "theorem_bound": rep.theorem_bound,
        "actual": rep.actual,
        "ratio_actual_over_bound": rep.ratio_actual_over_bound,
        "alpha1": rep.alpha1,
        "L_estimate": rep.L_estimate,
        "correction_term": rep.correction_term,
    }
    rows = [rec]
    columns = list(rec)
    if args.gamma_table:
        columns = columns + ["gamma_ratio"]
        for z in (int(v) for v in args.gamma_table.split(",")):
            rows.append({"tuple": str(H), "z": z, "gamma_ratio": gamma_cross_check(H, z)})
    _emit(args.format, config, columns, rows)
    return 0


def _cmd_sieve_cache(args):
    if args.limit < 2:
        raise ValueError("need --limit >= 2")
    table = sieve_range(0, args.limit)
    table.save(args.out)
    config = {
        "subcommand": "sieve-cache",
        "format": args.format,
        "threads": args.threads,
        "limit": args.limit,
        "out": args.out,
    }
    rec = {"limit": args.limit, "out": args.out, "primes": table.count()}
    _emit(args.format, config, list(rec), [rec])
    return 0


# -- parser ----------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="deterministic shard count; results depend on it, timing may not",
    )

    parser = argparse.ArgumentParser(
        prog="primetail",
        description="Singular series, window count statistics, and sieve bounds",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("singular", parents=[common], help="singular series of a tuple")
    p.add_argument("--tuple", required=True, help='offsets, e.g. "0,2,6"')
    p.add_argument("--error", type=float, default=1e-9)
    p.add_argument("--jensen", action="store_true", help="include the split bound")
    p.set_defaults(func=_cmd_singular)

    p = sub.add_parser("tkh", parents=[common], help="average of S over k-subsets of [1,h]")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "mc"), default=None)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_tkh)

    p = sub.add_parser("moments", parents=[common], help="window count moments vs Poisson")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--cache", default=None, help="primality table file")
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("tail", parents=[common], help="window count tails vs Poisson")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--cache", default=None)
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("hl", parents=[common], help="hit counts vs the li_k prediction")
    p.add_argument("--tuple", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--sweep", default=None, help="A:B:S checkpoints")
    p.add_argument("--cache", default=None)
    p.set_defaults(func=_cmd_hl)

    p = sub.add_parser("selberg", parents=[common], help="sieve bounds vs actual hits")
    p.add_argument("--tuple", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--gamma-table", default=None, help="comma list of z for R(z) rows")
    p.add_argument("--cache", default=None)
    p.set_defaults(func=_cmd_selberg)

    p = sub.add_parser("sieve-cache", parents=[common], help="sieve and save a table")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sieve_cache)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
