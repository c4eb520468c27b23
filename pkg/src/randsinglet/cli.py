"""Command-line entry point.

Physics (``run``, ``survey``, ``oracle``) and post-processing (``hist``,
``fit``, ``compare``) are separate commands that talk through files, so
re-binning or refitting never recomputes determinants.

Exit codes: 0 success, 1 configuration error, 2 validation failure,
3 I/O or input-file error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import crosscheck, ensemble, oracle
from . import io as rio
from .disorder import BOUNDARIES, PERIODIC, ChainError, DisorderDistribution

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _alpha_tag(a: float) -> str:
    return f"{a:g}".replace(".", "p")


def _resolve(path, default_name: str) -> Path:
    if path:
        return Path(path)
    return rio.output_dir() / default_name


def _window(args, L):
    lo, hi = ensemble.default_window(L)
    lo = lo if args.window_min is None else args.window_min
    hi = hi if args.window_max is None else args.window_max
    if lo > hi:
        raise ConfigError(f"empty window [{lo}, {hi}]")
    return lo, hi


def _check_common(args):
    try:
        DisorderDistribution(args.alpha, args.omega0)
    except ChainError as exc:
        raise ConfigError(str(exc)) from None
    if args.length < 2 or args.length % 2:
        raise ConfigError(f"--length must be even and >= 2, got {args.length}")
    if args.seed < 0 or args.seed >= 2 ** 64:
        raise ConfigError("--seed must be a 64-bit unsigned integer")
    if args.workers is not None and args.workers < 1:
        raise ConfigError("--workers must be >= 1")


def cmd_run(args) -> int:
    _check_common(args)
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    window = _window(args, args.length)
    config = {"alpha": args.alpha, "omega0": args.omega0, "length": args.length,
              "boundary": args.boundary, "n_realizations": args.n, "seed": args.seed,
              "selector": args.selector}
    res = ensemble.run_ensemble(args.alpha, args.omega0, args.length, args.boundary,
                                args.n, args.seed, workers=args.workers or 1,
                                selector=args.selector)
    summ = ensemble.summary(res.records, window) if res.records else {"n": 0}
    summ.update(resampled=res.resampled, failed=len(res.failed))
    prov = rio.provenance("run", config)
    name = f"records_a{_alpha_tag(args.alpha)}_L{args.length}_s{args.seed}"
    if args.format == "csv":
        out = _resolve(args.output, name + ".csv")
        rio.write_records(out, res.records, prov)
    else:
        out = _resolve(args.output, name + ".json")
        rio.write_json(out, {"provenance": prov, "summary": summ,
                             "columns": list(ensemble.CSV_COLUMNS),
                             "records": [[getattr(r, c) for c in ensemble.CSV_COLUMNS]
                                         for r in res.records]})
    print(f"wrote {len(res.records)} records to {out}")
    for key in ("n", "window_fraction", "fraction_F_gt_half", "median_F", "resampled", "failed"):
        if key in summ:
            v = summ[key]
            print(f"{key:>20}: {v:.4f}" if isinstance(v, float) else f"{key:>20}: {v}")
    return EXIT_OK


def cmd_survey(args) -> int:
    _check_common(args)
    l_c = args.lc if args.lc is not None else args.length / 6.0
    if l_c < 1:
        raise ConfigError("--lc must be >= 1")
    n_chains = 1 if args.clean else args.chains
    if n_chains < 1:
        raise ConfigError("--chains must be >= 1")
    config = {"alpha": None if args.clean else args.alpha, "omega0": args.omega0,
              "length": args.length, "boundary": args.boundary, "clean": args.clean,
              "chains": n_chains, "l_c": l_c, "seed": args.seed,
              "max_pairs": args.max_pairs}
    survey = ensemble.run_survey(args.alpha, args.omega0, args.length, n_chains, l_c,
                                 args.seed, boundary=args.boundary, clean=args.clean,
                                 max_pairs=args.max_pairs, workers=args.workers or 1)
    tag = "clean" if args.clean else f"a{_alpha_tag(args.alpha)}"
    out = _resolve(args.output, f"survey_{tag}_L{args.length}_s{args.seed}.csv")
    rio.write_survey(out, survey, rio.provenance("survey", config))
    f = [p.F for _, pairs in survey for p in pairs]
    print(f"wrote {len(f)} pairs from {len(survey)} chains to {out}")
    if f:
        print(f"{'max_F':>20}: {max(f):.6f}")
        print(f"{'pairs_F_gt_half':>20}: {sum(x > 0.5 for x in f)}")
    return EXIT_OK


def _load_windowed_F(path, args):
    prov, header, rows, f = rio.read_fidelities(path)
    meta = {"source": str(path)}
    if prov:
        meta["provenance"] = prov
    if "d" in header and "realization" in header:
        _, records = rio.read_records(path)
        if not records:
            raise rio.ParseError(f"{path}: no records")
        window = _window(args, records[0].L)
        records = ensemble.windowed(records, window)
        f = [r.F for r in records]
        meta.update(alpha=records[0].alpha if records else None,
                    L=records[0].L if records else None, window=list(window))
    return f, meta


def cmd_hist(args) -> int:
    if args.bins < 2:
        raise ConfigError("--bins must be >= 2")
    f, meta = _load_windowed_F(args.input, args)
    if not f:
        raise rio.ParseError(f"{args.input}: no fidelities to histogram")
    h = ensemble.histogram(f, args.bins, (0.0, 1.0), meta)
    payload = h.to_dict()
    payload["provenance"] = rio.provenance("hist", {"input": str(args.input),
                                                    "bins": args.bins})
    out = _resolve(args.output, Path(args.input).stem + "_hist.json")
    rio.write_json(out, payload)
    print(f"wrote histogram ({h.meta['n']} values, {args.bins} bins) to {out}")
    return EXIT_OK


def cmd_fit(args) -> int:
    prov, records = rio.read_records(args.input)
    if not records:
        raise rio.ParseError(f"{args.input}: no records")
    fit = ensemble.fit_gamma(records, d_min=args.d_min, min_count=args.min_count)
    payload = fit.to_dict()
    payload["provenance"] = rio.provenance("fit", {"input": str(args.input),
                                                   "d_min": args.d_min,
                                                   "min_count": args.min_count})
    payload["source_provenance"] = prov
    out = _resolve(args.output, Path(args.input).stem + "_fit.json")
    rio.write_json(out, payload)
    print(f"gamma = {fit.gamma:.4f}  intercept = {fit.intercept:.4f}  "
          f"points = {fit.n_points}  rms residual = {fit.residual:.4f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    fa, meta_a = _load_windowed_F(args.input_a, args)
    fb, meta_b = _load_windowed_F(args.input_b, args)
    if not fa or not fb:
        raise rio.ParseError("compare needs non-empty fidelity samples")
    d = ensemble.ks_distance(fa, fb)
    payload = {"ks_D": d, "n_a": len(fa), "n_b": len(fb),
               "a": meta_a, "b": meta_b,
               "provenance": rio.provenance("compare", {"a": str(args.input_a),
                                                        "b": str(args.input_b)})}
    out = _resolve(args.output, "compare.json")
    rio.write_json(out, payload)
    print(f"KS D = {d:.4f}  (n_a = {len(fa)}, n_b = {len(fb)})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    lengths = args.lengths
    for L in lengths:
        if L < 2 or L % 2:
            raise ConfigError(f"oracle lengths must be even and >= 2, got {L}")
    report = crosscheck.sweep(lengths, args.boundaries, args.alphas, args.realizations,
                              args.seed, args.tol, fault=args.inject_fault)
    for line in report.lines():
        print(line)
    if report.ok:
        print(f"PASS: max error {report.max_error:.3e} < {args.tol:g}")
        return EXIT_OK
    name, w = report.offender()
    print(f"FAIL: worst {name} error {w.error:.3e} at (L, boundary, alpha, "
          f"realization[, i, j]) = {w.where}", file=sys.stderr)
    return EXIT_VALIDATION


def _add_chain_args(p, n_default=None):
    p.add_argument("--alpha", type=float, default=0.3, help="disorder exponent, < 1")
    p.add_argument("--omega0", type=float, default=1.0, help="coupling scale")
    p.add_argument("--length", "-L", type=int, default=100)
    p.add_argument("--boundary", choices=BOUNDARIES, default=PERIODIC)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: all cores)")
    p.add_argument("--output", "-o", default=None)


def _add_window_args(p):
    p.add_argument("--window-min", type=float, default=None, help="default L/6")
    p.add_argument("--window-max", type=float, default=None, help="default L/2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randsinglet",
        description="Entanglement of distant singlets in random XX chains.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="last-decimated-pair ensemble -> record file")
    _add_chain_args(p)
    _add_window_args(p)
    p.add_argument("--n", type=int, default=1000, help="realizations")
    p.add_argument("--selector", choices=ensemble.SELECTORS, default="last")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("survey", help="all-pairs fidelity survey")
    _add_chain_args(p)
    p.add_argument("--clean", action="store_true", help="uniform couplings J = omega0")
    p.add_argument("--chains", type=int, default=200)
    p.add_argument("--lc", type=float, default=None, help="cutoff, default L/6")
    p.add_argument("--max-pairs", type=int, default=None,
                   help="subsample at most this many pairs per chain")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("hist", help="fidelity histogram of a record or survey file")
    p.add_argument("input")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--output", "-o", default=None)
    _add_window_args(p)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("fit", help="fit the typical j_eff decay exponent gamma")
    p.add_argument("input")
    p.add_argument("--d-min", type=int, default=10)
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="two-sample KS distance of windowed fidelities")
    p.add_argument("input_a")
    p.add_argument("input_b")
    p.add_argument("--output", "-o", default=None)
    _add_window_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="fermion solver vs exact diagonalization")
    p.add_argument("--lengths", type=int, nargs="+", default=[4, 6, 8, 10, 12])
    p.add_argument("--boundaries", nargs="+", choices=BOUNDARIES, default=list(BOUNDARIES))
    p.add_argument("--alphas", type=float, nargs="+", default=[0.0, 0.6])
    p.add_argument("--realizations", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 1) is None:
        args.workers = ensemble.default_workers()
    try:
        return args.func(args)
    except (ConfigError, ChainError, oracle.TooLarge) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ensemble.EmptyInput, ensemble.EmptyWindow, ensemble.InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except rio.ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
