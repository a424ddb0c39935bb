"""Command-line interface: ``thinrig {generate,fit,census,simulate,region,describe,kappa}``.

Exit codes: 0 success, 2 argument/parameter error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import census, estimators, simulate, theory
from .generator import generate
from .graph import Graph, LoadStats, read_edge_list, write_edge_list
from .model import (
    BernoulliParams,
    Binomial,
    Dirac,
    Explicit,
    ModelParams,
    bernoulli_to_model,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3

logger = logging.getLogger("thinrig")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# -- argument helpers ----------------------------------------------------------


def parse_dist(text: str, n: int):
    """``dirac:<d>``, ``binomial:<p>`` or ``pmf:<path>``."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "dirac":
            return Dirac(int(arg))
        if kind == "binomial":
            return Binomial(n, float(arg))
        if kind == "pmf":
            return Explicit.from_file(arg)
    except (ValueError, OSError) as exc:
        raise UsageError(f"--dist {text!r}: {exc}") from None
    raise UsageError(f"--dist must be dirac:<d>, binomial:<p> or pmf:<path>, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _bernoulli(text: str) -> tuple[float, float, float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--bernoulli takes lambda,mu,q")
    return vals[0], vals[1], vals[2]


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def model_from_args(args) -> ModelParams:
    try:
        if args.bernoulli is not None:
            lam, mu, q = args.bernoulli
            return bernoulli_to_model(BernoulliParams(lam, mu, q, args.n))
        if args.m is None or args.dist is None or args.q is None:
            raise UsageError("give either --bernoulli lambda,mu,q or all of --m, --dist, --q")
        return ModelParams(args.n, args.m, parse_dist(args.dist, args.n), args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_graph(path: str, relabel: bool = False, n: Optional[int] = None) -> Graph:
    stats = LoadStats()
    try:
        g = read_edge_list(path, n=n, stats=stats, relabel=relabel)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from None
    if stats.self_loops:
        print(f"warning: dropped {stats.self_loops} self-loop(s)", file=sys.stderr)
    return g


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(text: str, path: Optional[str]) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")
    finally:
        if close:
            fh.close()


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else str(x)
    return str(x)


# -- subcommands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    params = model_from_args(args)
    g = generate(params, args.seed)
    header = [f"thinrig generate n={params.n} m={params.m} dist={params.dist} q={params.q} seed={args.seed}"]
    write_edge_list(g, args.output, header=header)
    summary = {
        "n": g.n,
        "m": params.m,
        "edges": g.num_edges,
        "mean_degree": 2.0 * g.num_edges / g.n,
    }
    print(json.dumps(summary), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def _observed(args, g: Graph) -> Graph:
    if args.n0 is None:
        return g
    if not 1 <= args.n0 <= g.n:
        raise DataError(f"--n0 {args.n0} outside [1, {g.n}] for this graph")
    return census.induce(g, args.n0, mode=args.sample_mode, seed=args.seed)


def cmd_census(args) -> int:
    g = load_graph(args.input, relabel=args.relabel, n=args.nodes)
    sub = _observed(args, g)
    counts = census.count_motifs(sub)
    out = counts.to_dict()
    if args.oracle:
        try:
            oracle = census.count_motifs_oracle(sub)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        out = {"optimized": counts.to_dict(), "oracle": oracle.to_dict(), "equal": oracle == counts}
    _emit(json.dumps(out), args.output)
    return EXIT_OK if not args.oracle or out["equal"] else EXIT_DATA


def _empty_estimates(g: Graph) -> estimators.Estimates:
    return estimators.Estimates(
        lambda_hat=0.0,
        tau_hat=None,
        q_hat=None,
        mu_hat=None,
        m_hat=None,
        sigma_hat=None,
        q_in_range=False,
        denominator_positive=False,
        counts=census.CensusCounts(g.n, 0, 0, 0),
        n=g.n,
    )


def cmd_fit(args) -> int:
    g = load_graph(args.input, relabel=args.relabel, n=args.nodes)
    n0 = g.n if args.n0 is None else args.n0
    if g.num_edges == 0 and n0 < 3:
        # nothing observed at all: report zero density with everything else undefined
        d = _empty_estimates(g).to_dict()
        d.update(n0=n0, mode=args.sample_mode, notes=["empty graph"])
        d["display"] = estimators.display_row(_empty_estimates(g))
    else:
        if not 3 <= n0 <= g.n:
            raise DataError(f"need 3 <= n0 <= n (n={g.n}), got n0={n0}")
        rep = estimators.fit_report(g, n0, mode=args.sample_mode, seed=args.seed)
        d = rep.to_dict()
    _emit(json.dumps(d, indent=2 if args.pretty else None), args.output)
    return EXIT_OK


SIM_HEADER = ["n", "rep", "lambda_hat", "mu_hat", "q_hat", "runtime_ms"]


def cmd_simulate(args) -> int:
    lam, mu, q = args.bernoulli
    try:
        rows = simulate.sweep(lam, mu, q, args.ns, args.reps, seed=args.seed, n0_exponent=args.n0_exponent)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SIM_HEADER)
    for r in rows:
        w.writerow([r.n, r.rep, _num(r.lambda_hat), _num(r.mu_hat), _num(r.q_hat),
                    f"{r.runtime_ms:.3f}" if args.timing else ""])
    if rows:
        for n, errs in simulate.median_errors(rows, lam, mu, q).items():
            w.writerow([n, "median_rel_err", *(_num(e) for e in errs), ""])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def region_rows(lams: Sequence[float], sigmas: Sequence[float], keep_invalid: bool = False):
    """``(lambda, sigma, tau_max)`` rows; points with ``sigma^2 <= lambda`` are skipped."""
    rows, skipped = [], 0
    for lam in lams:
        for s in sigmas:
            s2 = s * s
            if s2 <= lam:
                skipped += 1
                if keep_invalid:
                    rows.append((lam, s, None))
                continue
            rows.append((lam, s, theory.attainable_bound(lam, s2)))
    return rows, skipped


def cmd_region(args) -> int:
    if any(l <= 0 for l in args.lambdas):
        raise UsageError("lambda values must be positive")
    if args.sigma is not None:
        sigmas = args.sigma
    else:
        lo, hi, k = args.sigma_min, args.sigma_max, args.sigma_steps
        if not (0 < lo <= hi and k >= 1):
            raise UsageError("need 0 < --sigma-min <= --sigma-max and --sigma-steps >= 1")
        sigmas = [lo + (hi - lo) * i / max(k - 1, 1) for i in range(k)]
    rows, skipped = region_rows(args.lambdas, sigmas, keep_invalid=args.keep_invalid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "sigma", "tau_max"])
    for lam, s, t in rows:
        w.writerow([_num(float(lam)), _num(float(s)), _num(t)])
    _emit(buf.getvalue(), args.output)
    if skipped:
        print(f"skipped {skipped} grid point(s) with sigma^2 <= lambda", file=sys.stderr)
    return EXIT_OK


def cmd_describe(args) -> int:
    params = model_from_args(args)
    d = {"n": params.n, "m": params.m, "q": params.q, "dist": str(params.dist)}
    d.update(theory.describe(params).to_dict())
    _emit(json.dumps(d, indent=2 if args.pretty else None), args.output)
    return EXIT_OK


def cmd_kappa(args) -> int:
    try:
        value = census.kappa(args.edges)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(value)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="node count")
    p.add_argument("--m", type=int, help="community count")
    p.add_argument("--dist", help="dirac:<d> | binomial:<p> | pmf:<path>")
    p.add_argument("--q", type=float, help="per-community link probability")
    p.add_argument("--bernoulli", type=_bernoulli, metavar="LAMBDA,MU,Q",
                   help="Bernoulli parameterization (overrides --m/--dist/--q)")


def _graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="edge-list file")
    p.add_argument("--n0", type=int, help="observe the subgraph induced by n0 nodes")
    p.add_argument("--sample-mode", choices=["first", "random"], default="first")
    p.add_argument("--relabel", action="store_true",
                   help="compact node ids to 0..k-1 (for 1-based or sparse ids)")
    p.add_argument("--nodes", type=int, help="declared node count (isolated nodes included)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thinrig", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("-o", "--output", help="output path (default stdout)")

    p = sub.add_parser("generate", help="sample a graph and write its edge list")
    _model_flags(p)
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="fit (lambda, mu, q) to an edge list")
    _graph_flags(p)
    common(p)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("census", help="count links, 2-stars and triangles")
    _graph_flags(p)
    common(p)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force counter")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("simulate", help="consistency sweep over n")
    p.add_argument("--bernoulli", type=_bernoulli, required=True, metavar="LAMBDA,MU,Q")
    p.add_argument("--ns", type=_ints, required=True, help="comma-separated node counts")
    p.add_argument("--reps", type=_nonneg, default=20)
    p.add_argument("--n0-exponent", type=float, help="observe n0 = ceil(n^e) nodes")
    p.add_argument("--timing", action="store_true",
                   help="fill runtime_ms (output is then no longer byte-reproducible)")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("region", help="attainable transitivity bound over a (lambda, sigma) grid")
    p.add_argument("--lambdas", type=_floats, default=[1, 2, 4, 7, 11, 16])
    p.add_argument("--sigma", type=_floats, help="explicit comma-separated sigma values")
    p.add_argument("--sigma-min", type=float, default=0.5)
    p.add_argument("--sigma-max", type=float, default=40.0)
    p.add_argument("--sigma-steps", type=int, default=80)
    p.add_argument("--keep-invalid", action="store_true",
                   help="keep sigma^2 <= lambda points with an empty tau_max")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("describe", help="model characteristics for given parameters")
    _model_flags(p)
    p.add_argument("-o", "--output")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("kappa", help="edge-partition statistic of a small graph")
    p.add_argument("edges", help='inline edge list, e.g. "0-1,0-2"')
    p.set_defaults(func=cmd_kappa)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"thinrig {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"thinrig {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
