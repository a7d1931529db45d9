"""Command-line front end.

Subcommands: entropy, gen, error-sweep, correlation, timing, calibrate,
jsdist. Global flags (--seed, --dense-limit, --threads, --output) are
accepted both before and after the subcommand. Exit codes: 0 success,
1 usage error, 2 data/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .approximations import (
    ALL_METHODS,
    EXACT,
    FINGER,
    MODIFIED_TAYLOR,
    QUADRATIC_METHODS,
    estimate_entropy,
)
from .calibration import (
    PRESETS,
    fit_affine4,
    fit_two_term,
    format_weights,
    load_samples,
    load_weights,
    mixture_methods,
    mixture_value,
    sample_from_graph,
    save_weights,
)
from .errors import NoConvergenceError, NumericalError, VnentropyError
from .generators import MODELS, WS, ModelSpec, generate, perturb_weights
from .graph import load_edge_list
from .harness import (
    DEFAULT_WS_REWIRE,
    _run_tasks,
    correlation_study,
    derive_seed,
    error_sweep,
    model_spec,
    render_csv,
    timing_study,
)
from .similarity import js_distance
from .spectral import DENSE_LIMIT_DEFAULT, entropy_from_spectrum, spectral_summary


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _method_list(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    if not methods:
        raise argparse.ArgumentTypeError("no methods given")
    for m in methods:
        if m not in ALL_METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}; choose from {', '.join(ALL_METHODS)}"
            )
    return methods


def _method_pair(text: str) -> tuple[str, str]:
    methods = _method_list(text)
    if len(methods) != 2 or EXACT in methods:
        raise argparse.ArgumentTypeError("expected two estimator names, comma-separated")
    return methods[0], methods[1]


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="base seed for all randomness (default 0)")
    p.add_argument("--dense-limit", type=int, default=argparse.SUPPRESS,
                   help=f"max n for the dense eigensolver (default {DENSE_LIMIT_DEFAULT})")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker threads for trial evaluation (default 1; output is identical)")
    p.add_argument("--output", default=argparse.SUPPRESS, metavar="PATH",
                   help="write output here instead of stdout")


def _common(args):
    return (
        getattr(args, "seed", 0),
        getattr(args, "dense_limit", DENSE_LIMIT_DEFAULT),
        getattr(args, "threads", 1),
        getattr(args, "output", None),
    )


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _warn(messages):
    for msg in messages:
        print(f"vnentropy: warning: {msg}", file=sys.stderr)


def _load_graph(args):
    return load_edge_list(
        args.graph_file,
        indexing=args.indexing,
        weighted=not args.unweighted,
        n=args.n_override,
    )


def _add_edge_list_flags(p):
    p.add_argument("--indexing", type=int, choices=(0, 1), default=0,
                   help="vertex ids in the file are 0- or 1-indexed")
    p.add_argument("--unweighted", action="store_true",
                   help="ignore any weight column; every edge gets weight 1")
    p.add_argument("--n", dest="n_override", type=int, default=None,
                   help="vertex count override (default: 1 + max id)")


def _cmd_entropy(args) -> int:
    _, dense_limit, _, output = _common(args)
    g = _load_graph(args)
    methods = list(args.methods)
    if args.exact and EXACT not in methods:
        methods.insert(0, EXACT)
    weights = load_weights(args.weights_file) if args.weights_file else None

    needed_by_mixture = mixture_methods(weights) if weights else ()
    need_lam = any(
        m in (FINGER, MODIFIED_TAYLOR) for m in list(methods) + list(needed_by_mixture)
    )
    want_spectrum = EXACT in methods and g.n <= dense_limit
    summary = spectral_summary(
        g, want_lambda_max=need_lam, want_spectrum=want_spectrum, dense_limit=dense_limit
    )

    exit_code = 0
    rows = []
    for m in methods:
        if m == EXACT:
            if g.n > dense_limit:
                _warn([f"exact entropy skipped: n={g.n} exceeds dense limit {dense_limit}"])
                exit_code = 2
                continue
            rows.append([EXACT, entropy_from_spectrum(summary.spectrum), g.n, None, None])
        else:
            est = estimate_entropy(g, m, summary=summary, dense_limit=dense_limit)
            rows.append([
                m,
                est.value,
                g.n,
                est.inputs_used.get("purity"),
                est.inputs_used.get("lambda_max"),
            ])
    if weights is not None:
        values = {
            m: estimate_entropy(g, m, summary=summary, dense_limit=dense_limit).value
            for m in needed_by_mixture
        }
        rows.append([
            f"mixture:{weights.kind}",
            mixture_value(weights, values),
            g.n,
            summary.purity,
            summary.lambda_max,
        ])

    text = render_csv(
        [f"entropy file={args.graph_file}"],
        ["method", "value", "n", "purity", "lambda_max"],
        rows,
    )
    _emit(text, output)
    return exit_code


def _cmd_gen(args) -> int:
    seed, _, _, output = _common(args)
    p_rewire = args.p_rewire
    if args.model == WS and p_rewire is None:
        p_rewire = DEFAULT_WS_REWIRE
    spec = ModelSpec(
        args.model,
        args.n,
        seed,
        p=args.p,
        m_attach=args.m_attach,
        k=args.k,
        p_rewire=p_rewire,
    )
    g = generate(spec)
    header = f"# vnentropy edge list model={spec.model} n={spec.n} seed={seed}"
    if args.perturb_weights:
        g = perturb_weights(g, derive_seed(seed, 1))
        header += " weights=uniform[0.5,1.5]"
    lines = [header]
    lines += [
        f"{u} {v} {w!r}"
        for u, v, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_w.tolist())
    ]
    _emit("\n".join(lines) + "\n", output)
    return 0


def _cmd_error_sweep(args) -> int:
    seed, dense_limit, threads, output = _common(args)
    text, warnings = error_sweep(
        args.model,
        vary=args.vary,
        values=args.values,
        n=args.n,
        degree=args.degree,
        trials=args.trials,
        seed=seed,
        threads=threads,
        dense_limit=dense_limit,
        p_rewire=args.p_rewire,
    )
    _warn(warnings)
    _emit(text, output)
    return 0


def _cmd_correlation(args) -> int:
    seed, dense_limit, threads, output = _common(args)
    text = correlation_study(
        args.model,
        n=args.n,
        count=args.count,
        seed=seed,
        threads=threads,
        dense_limit=dense_limit,
        degree_min=args.degree_min,
        degree_max=args.degree_max,
        p_rewire=args.p_rewire,
    )
    _emit(text, output)
    return 0


def _cmd_timing(args) -> int:
    seed, dense_limit, _, output = _common(args)
    text, warnings = timing_study(
        args.model,
        sizes=args.sizes,
        trials=args.trials,
        seed=seed,
        degree=args.degree,
        dense_limit=dense_limit,
        p_rewire=args.p_rewire,
    )
    _warn(warnings)
    _emit(text, output)
    return 0


def _cmd_calibrate(args) -> int:
    seed, dense_limit, threads, output = _common(args)

    if args.preset is not None:
        weights = PRESETS[args.preset]
        text = f"# preset={args.preset}\n" + format_weights(weights)
        _emit(text, output)
        if args.save_weights:
            save_weights(weights, args.save_weights)
        return 0

    if args.samples is not None:
        samples = load_samples(args.samples)
    else:
        if args.model is None:
            raise VnentropyError("calibrate needs --samples, --model, or --preset")

        def degree_at(i: int) -> float:
            if args.count == 1:
                return args.degree_min
            span = args.degree_max - args.degree_min
            return args.degree_min + i * span / (args.count - 1)

        def worker(i: int):
            spec = model_spec(
                args.model, args.n, degree_at(i), derive_seed(seed, 0, i), args.p_rewire
            )
            return sample_from_graph(generate(spec), dense_limit=dense_limit)

        samples = _run_tasks([(i,) for i in range(args.count)], worker, threads)

    fit_kwargs = dict(
        alpha=args.alpha,
        max_iter=args.max_iter,
        grad_tol=args.grad_tol,
        fast=args.fast,
    )
    if args.affine4:
        result = fit_affine4(samples, **fit_kwargs)
    else:
        result = fit_two_term(samples, args.pair, init_t=args.init_t, **fit_kwargs)

    comments = [
        f"# samples={len(samples)}",
        f"# iterations={result.iterations}",
        f"# converged={str(result.converged).lower()}",
        f"# grad_norm={result.grad_norm!r}",
        f"# mse={result.mse!r}",
    ]
    if result.degenerate:
        comments.append("# degenerate=true (estimators coincide on every sample)")
    text = "\n".join(comments) + "\n" + format_weights(result.weights)
    _emit(text, output)
    if args.save_weights:
        save_weights(result.weights, args.save_weights)
    return 0


def _cmd_jsdist(args) -> int:
    _, dense_limit, _, output = _common(args)
    a = load_edge_list(args.file_a, indexing=args.indexing,
                       weighted=not args.unweighted, n=args.n_override)
    b = load_edge_list(args.file_b, indexing=args.indexing,
                       weighted=not args.unweighted, n=args.n_override)
    if args.weights_file:
        backend = load_weights(args.weights_file)
    elif args.method in PRESETS:
        backend = PRESETS[args.method]
    else:
        backend = args.method
    res = js_distance(a, b, backend, dense_limit=dense_limit)
    rows = [
        ["jsdist", res.distance],
        ["radicand", res.radicand],
        ["clamped", "true" if res.clamped else "false"],
        ["method", res.method],
        ["entropy_a", res.entropy_a],
        ["entropy_b", res.entropy_b],
        ["entropy_average", res.entropy_average],
    ]
    text = render_csv(
        [f"jsdist file_a={args.file_a} file_b={args.file_b}"],
        ["field", "value"],
        rows,
    )
    _emit(text, output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vnentropy",
        description="Spectral graph entropy: exact oracle, linear-time estimators, experiment harness.",
    )
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("entropy", help="entropy report for one edge-list file")
    _add_common(p)
    _add_edge_list_flags(p)
    p.add_argument("graph_file")
    p.add_argument("--methods", type=_method_list, default=list(QUADRATIC_METHODS),
                   help="comma-separated method names (default: all four estimators)")
    p.add_argument("--exact", action="store_true", help="include the dense-oracle value")
    p.add_argument("--weights-file", default=None,
                   help="also evaluate the mixture stored in this key=value file")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("gen", help="generate a seeded random graph as an edge list")
    _add_common(p)
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=None, help="er: edge probability")
    p.add_argument("--m-attach", type=int, default=None, help="ba: edges per arriving vertex")
    p.add_argument("--k", type=int, default=None, help="ws: ring-lattice neighbors (even)")
    p.add_argument("--p-rewire", type=float, default=None,
                   help=f"ws: rewiring probability (default {DEFAULT_WS_REWIRE})")
    p.add_argument("--perturb-weights", action="store_true",
                   help="replace unit weights with seeded uniform [0.5, 1.5] draws")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("error-sweep", help="mean |exact - estimate| over seeded trials")
    _add_common(p)
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--vary", choices=("degree", "nodes"), default="degree")
    p.add_argument("--values", type=_int_list, default=None,
                   help="sweep points (default: degree 2..50 or nodes 100..1000)")
    p.add_argument("--n", type=int, default=500, help="vertex count for degree sweeps")
    p.add_argument("--degree", type=float, default=10.0, help="mean degree for node sweeps")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--p-rewire", type=float, default=DEFAULT_WS_REWIRE)
    p.set_defaults(func=_cmd_error_sweep)

    p = sub.add_parser("correlation", help="per-graph exact/estimate pairs plus Pearson r")
    _add_common(p)
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--degree-min", type=float, default=2.0)
    p.add_argument("--degree-max", type=float, default=50.0)
    p.add_argument("--p-rewire", type=float, default=DEFAULT_WS_REWIRE)
    p.set_defaults(func=_cmd_correlation)

    p = sub.add_parser("timing", help="median wall times per method across sizes")
    _add_common(p)
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--sizes", type=_int_list, default=[1000, 10000, 100000])
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--degree", type=float, default=10.0)
    p.add_argument("--p-rewire", type=float, default=DEFAULT_WS_REWIRE)
    p.set_defaults(func=_cmd_timing)

    p = sub.add_parser("calibrate", help="fit mixture weights or load a preset")
    _add_common(p)
    p.add_argument("--samples", default=None, help="training-sample CSV to fit on")
    p.add_argument("--model", choices=MODELS, default=None,
                   help="generate training samples from this model instead")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--degree-min", type=float, default=2.0)
    p.add_argument("--degree-max", type=float, default=50.0)
    p.add_argument("--p-rewire", type=float, default=DEFAULT_WS_REWIRE)
    p.add_argument("--pair", type=_method_pair, default=(FINGER, MODIFIED_TAYLOR),
                   help="two estimators for a weighted-mean fit (default finger,modified_taylor)")
    p.add_argument("--affine4", action="store_true",
                   help="fit the four-term simplex mixture with shift instead")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="emit published coefficients without fitting")
    p.add_argument("--alpha", type=float, default=1e-6)
    p.add_argument("--init-t", type=float, default=0.5)
    p.add_argument("--max-iter", type=int, default=10_000_000)
    p.add_argument("--grad-tol", type=float, default=1e-9)
    p.add_argument("--fast", action="store_true",
                   help="closed-form / active-set solution instead of gradient descent")
    p.add_argument("--save-weights", default=None, metavar="PATH")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("jsdist", help="Jensen-Shannon distance between two graph files")
    _add_common(p)
    _add_edge_list_flags(p)
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--method", default=EXACT, choices=list(ALL_METHODS) + sorted(PRESETS),
                   help="entropy backend: a method name or a preset name (default exact)")
    p.add_argument("--weights-file", default=None,
                   help="use the mixture stored in this key=value file as the backend")
    p.set_defaults(func=_cmd_jsdist)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
        return 0 if code is None else code
    except (NoConvergenceError, NumericalError) as exc:
        print(f"vnentropy: numerical failure: {exc}", file=sys.stderr)
        return 3
    except VnentropyError as exc:
        print(f"vnentropy: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"vnentropy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
