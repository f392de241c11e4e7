"""Command-line drivers.

Exit codes: 0 success, 1 infeasible / no solution, 2 input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import apa
from .aggregation import hare
from .birkhoff import decompose
from .core import marginals
from .errors import SparseChoiceError
from .generators import (
    ExpFamParams,
    MNLParams,
    condition_check,
    exact_distribution,
    random_sparse_model,
)
from .io import (
    format_cdf_csv,
    format_matrix,
    format_model,
    parse_expfam_params,
    parse_matrix,
    parse_mnl_params,
    parse_model,
)
from .recovery import greedy_fit, recover, recover_search, recover_without_signature
from .report import cdf_compare, plot_cdf
from .sparsify import sample_sparsify

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("sparse_choice")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _matrix(args):
    return parse_matrix(Path(args.matrix), percent=args.percent, balance=args.balance)


def _recovery_header(res) -> str:
    lines = [
        f"# method={res.method} k={res.k} epsilon={res.epsilon:g} iterations={res.iterations}",
        f"# achieved_linf={res.achieved_linf:.6g} unnormalized_linf={res.unnormalized_linf:.6g} "
        f"total_mass={res.total_mass:.6f} candidates_tried={res.candidates_tried}",
    ]
    if res.signature is not None:
        lines.append("# signature=" + ";".join(f"({i},{j})" for i, j in res.signature.cells))
    if res.probabilities is not None:
        lines.append("# probabilities=" + ",".join(f"{p:.6g}" for p in res.probabilities))
    return "\n".join(lines) + "\n"


def cmd_marginals(args):
    model = parse_model(Path(args.model)).normalized()
    _emit(format_matrix(marginals(model)), args.out)
    return EXIT_OK


def cmd_decompose(args):
    dec = decompose(_matrix(args), tol=args.tol)
    header = f"# terms={len(dec.terms)} residual={dec.residual_norm:.3g}\n"
    _emit(header + format_model(dec.as_model()), args.out)
    return EXIT_OK


def cmd_sparsify(args):
    model = sample_sparsify(_matrix(args), args.epsilon, args.seed)
    _emit(format_model(model), args.out)
    return EXIT_OK


def cmd_recover(args):
    d = _matrix(args)
    if args.search:
        eps0 = args.epsilon0 if args.epsilon0 is not None else args.epsilon
        if eps0 is None:
            raise ValueError("--search needs --epsilon0")
        res = recover_search(d, eps0, k_max=args.k)
    else:
        if args.k is None or args.epsilon is None:
            raise ValueError("recover needs --k and --epsilon (or --search)")
        if args.no_signature:
            res = recover_without_signature(d, args.k, args.epsilon)
        else:
            res = recover(d, args.k, args.epsilon, workers=args.workers)
    if res is None:
        print("# no model found", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(_recovery_header(res) + format_model(res.model), args.out)
    return EXIT_OK


def cmd_fit(args):
    res = greedy_fit(_matrix(args), args.epsilon)
    header = (
        f"# heuristic=greedy l2_error={res.l2_error:.6g} support={res.model.support_size} "
        f"signature={'true' if res.is_signature else 'false'}\n"
    )
    _emit(header + format_model(res.model), args.out)
    return EXIT_OK


def cmd_hare(args):
    trace = hare(parse_model(Path(args.model)).normalized())
    lines = [f"winner: {trace.winner}", f"ranking: {trace.ranking_string()}"]
    for number, rnd in enumerate(trace.rounds, start=1):
        tallies = " ".join(f"{c}={v:.6f}" for c, v in rnd.tallies.items())
        lines.append(f"round {number}: {tallies} eliminated={rnd.eliminated}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_gen(args):
    if args.family == "random":
        model = random_sparse_model(args.n, args.k or args.n, args.seed)
    elif args.family == "mnl":
        params = parse_mnl_params(Path(args.params)) if args.params else MNLParams((1.0,) * args.n)
        model = exact_distribution(params)
    else:
        params = parse_expfam_params(Path(args.params)) if args.params else ExpFamParams(np.zeros((args.n, args.n)))
        model = exact_distribution(params)
    _emit(format_model(model), args.out)
    return EXIT_OK


def cmd_check_condition(args):
    if args.family == "mnl":
        params = parse_mnl_params(Path(args.params))
    else:
        params = parse_expfam_params(Path(args.params))
    rep = condition_check(params, args.delta)
    print(f"holds: {'true' if rep.holds else 'false'}")
    print(f"ratio: {rep.ratio:.6g}")
    print(f"threshold: {rep.threshold:.6g}")
    print(f"detail: {rep.detail}")
    return EXIT_OK


def cmd_cdf_compare(args):
    a = parse_model(Path(args.model_a))
    b = parse_model(Path(args.model_b))
    rows = cdf_compare(a, b)
    Path(args.out).write_text(format_cdf_csv(rows))
    if args.plot:
        plot_cdf(rows, args.plot, label_a=Path(args.model_a).stem, label_b=Path(args.model_b).stem)
    return EXIT_OK


def cmd_apa(args):
    if args.what == "model":
        _emit(apa.MODEL_LISTING, args.out)
    else:
        m = apa.table1() if args.normalized else apa.table1_raw()
        _emit(format_matrix(m), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparse-choice", description="Sparse choice models from first-order marginals.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_opts(p):
        p.add_argument("--matrix", required=True, help="matrix file (rows = items, columns = ranks)")
        p.add_argument("--percent", action="store_true", help="entries are percentages; divide by 100 and balance")
        p.add_argument("--balance", action="store_true", help="Sinkhorn-balance rows/columns before use")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("marginals", help="first-order marginals of a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_marginals)

    p = sub.add_parser("decompose", help="Birkhoff-von Neumann decomposition")
    matrix_opts(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sparsify", help="sampling sparsifier with ceil(N/eps^2) draws")
    matrix_opts(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("recover", help="signature-family recovery by multiplicative weights")
    matrix_opts(p)
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--no-signature", action="store_true", help="search quantized probability vectors instead")
    p.add_argument("--search", action="store_true", help="grow K, then halve epsilon")
    p.add_argument("--epsilon0", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("fit", help="greedy heuristic fit (no guarantee)")
    matrix_opts(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("hare", help="Hare-system winner and aggregate ranking")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hare)

    p = sub.add_parser("gen", help="generate a model file")
    p.add_argument("--family", choices=("mnl", "expfam", "random"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="support size for --family random (default n)")
    p.add_argument("--params")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check-condition", help="regularity conditions for MNL / exponential family")
    p.add_argument("--family", choices=("mnl", "expfam"), required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.set_defaults(func=cmd_check_condition)

    p = sub.add_parser("cdf-compare", help="CDFs of two models in adjacent-transposition order")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--out", required=True, help="CSV output")
    p.add_argument("--plot", help="also render the staircase figure to this image file")
    p.set_defaults(func=cmd_cdf_compare)

    p = sub.add_parser("apa", help="embedded APA election fixture")
    p.add_argument("what", nargs="?", choices=("marginals", "model"), default="marginals")
    p.add_argument("--normalized", action="store_true", help="Sinkhorn-balance the percentages / 100")
    p.add_argument("--out")
    p.set_defaults(func=cmd_apa)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SparseChoiceError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
