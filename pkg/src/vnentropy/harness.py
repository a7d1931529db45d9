"""Experiment harness: error sweeps, correlation studies, timing benchmarks.

Every study renders to CSV text ("# vnentropy-csv v1" schema). Seeded runs
are byte-identical across repeats and across worker-pool sizes: each trial
derives a self-contained PRNG stream from (base seed, sweep point, trial)
and results are collected in task order, never completion order.
"""

from __future__ import annotations

import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .approximations import QUADRATIC_METHODS, estimate_entropy, quadratic_estimates
from .errors import InvalidSpecError
from .generators import BA, ER, WS, ModelSpec, generate
from .graph import Graph
from .purity import purity
from .spectral import (
    DEFAULT_TOL,
    DENSE_LIMIT_DEFAULT,
    entropy_from_spectrum,
    exact_vnge,
    spectral_summary,
)

CSV_VERSION_LINE = "# vnentropy-csv v1"

DEFAULT_DEGREE_SWEEP = tuple(range(2, 51, 4))        # mean degree 2..50
DEFAULT_NODES_SWEEP = tuple(range(100, 1001, 100))   # n 100..1000
DEFAULT_WS_REWIRE = 0.1


@dataclass(frozen=True)
class ExperimentRecord:
    """One method evaluation on one generated trial graph."""

    model: str
    params: str
    trial: int
    method: str
    exact: float | None
    estimate: float | None
    abs_error: float | None
    wall_time_ns: int | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def render_csv(comments, columns, rows) -> str:
    lines = [CSV_VERSION_LINE]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    return "\n".join(lines) + "\n"


def derive_seed(base: int, *path: int) -> int:
    """Self-contained 64-bit stream key for one (sweep point, trial) slot."""
    return int(np.random.SeedSequence((base,) + path).generate_state(1, np.uint64)[0])


def model_spec(model: str, n: int, degree: float, seed: int, p_rewire: float = DEFAULT_WS_REWIRE) -> ModelSpec:
    """Map a target mean degree onto each model's native parameter."""
    if model == ER:
        return ModelSpec(ER, n, seed, p=min(degree / max(n - 1, 1), 1.0))
    if model == BA:
        m_attach = max(1, min(int(round(degree / 2.0)), n - 1))
        return ModelSpec(BA, n, seed, m_attach=m_attach)
    if model == WS:
        k = max(2, 2 * int(round(degree / 2.0)))
        if k >= n:
            k = (n - 1) if (n - 1) % 2 == 0 else (n - 2)
        return ModelSpec(WS, n, seed, k=k, p_rewire=p_rewire)
    raise InvalidSpecError(f"unknown model {model!r}")


def _run_tasks(tasks, worker, threads: int):
    if threads <= 1:
        return [worker(*t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: worker(*t), tasks))


def _evaluate(g: Graph, dense_limit: int, tol: float):
    """Exact entropy (when within the dense limit) plus all four estimates."""
    if g.n <= dense_limit:
        summary = spectral_summary(g, want_spectrum=True, dense_limit=dense_limit, tol=tol)
        exact = entropy_from_spectrum(summary.spectrum)
    else:
        summary = spectral_summary(g, dense_limit=dense_limit, tol=tol)
        exact = None
    estimates = {m: e.value for m, e in quadratic_estimates(summary).items()}
    return exact, estimates


def _params_text(spec: ModelSpec) -> str:
    parts = [f"n={spec.n}"]
    if spec.model == ER:
        parts.append(f"p={spec.p!r}")
    elif spec.model == BA:
        parts.append(f"m_attach={spec.m_attach}")
    else:
        parts.append(f"k={spec.k}")
        parts.append(f"p_rewire={spec.p_rewire!r}")
    return ";".join(parts)


def _record(model, params, trial, method, exact, estimate, wall_time_ns=None) -> ExperimentRecord:
    abs_error = None if (exact is None or estimate is None) else abs(exact - estimate)
    return ExperimentRecord(model, params, trial, method, exact, estimate, abs_error, wall_time_ns)


def error_sweep(
    model: str,
    vary: str = "degree",
    values=None,
    n: int = 500,
    degree: float = 10.0,
    trials: int = 50,
    seed: int = 0,
    threads: int = 1,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
    p_rewire: float = DEFAULT_WS_REWIRE,
):
    """Mean |exact - estimate| per method at each sweep point.

    vary="degree" sweeps mean degree at fixed n; vary="nodes" sweeps n at
    fixed mean degree. Returns (csv_text, warnings). Sweep points beyond
    the dense limit get empty error cells and a warning instead of
    failing the run.
    """
    if vary not in ("degree", "nodes"):
        raise InvalidSpecError(f"vary must be 'degree' or 'nodes', got {vary!r}")
    if values is None:
        values = DEFAULT_DEGREE_SWEEP if vary == "degree" else DEFAULT_NODES_SWEEP
    values = list(values)
    if trials < 1:
        raise InvalidSpecError(f"trials must be >= 1, got {trials}")

    def spec_at(point_idx: int, trial: int) -> ModelSpec:
        value = values[point_idx]
        trial_seed = derive_seed(seed, point_idx, trial)
        if vary == "degree":
            return model_spec(model, n, value, trial_seed, p_rewire)
        return model_spec(model, int(value), degree, trial_seed, p_rewire)

    def worker(point_idx: int, trial: int):
        spec = spec_at(point_idx, trial)
        g = generate(spec)
        exact, estimates = _evaluate(g, dense_limit, tol)
        params = _params_text(spec)
        return [
            _record(model, params, trial, m, exact, estimates[m])
            for m in QUADRATIC_METHODS
        ]

    tasks = [(pi, t) for pi in range(len(values)) for t in range(trials)]
    results = _run_tasks(tasks, worker, threads)

    by_point: dict[int, list[list[ExperimentRecord]]] = {}
    for (pi, _t), recs in zip(tasks, results):
        by_point.setdefault(pi, []).append(recs)

    warnings = []
    rows = []
    for pi, value in enumerate(values):
        trial_recs = by_point[pi]
        params = trial_recs[0][0].params
        for mi, method in enumerate(QUADRATIC_METHODS):
            errors = [recs[mi].abs_error for recs in trial_recs]
            if any(e is None for e in errors):
                mean_err = None
                if mi == 0:
                    warnings.append(
                        f"sweep point {vary}={value}: n exceeds dense limit, "
                        f"exact entropy skipped; error cells left empty"
                    )
            else:
                mean_err = float(np.mean(errors))
            rows.append([model, vary, value, params, method, trials, mean_err])

    comments = [f"error-sweep model={model} vary={vary} seed={seed} trials={trials}"]
    columns = ["model", "vary", "value", "params", "method", "trials", "mean_abs_error"]
    return render_csv(comments, columns, rows), warnings


def pearson_r(xs, ys) -> float:
    """Pearson correlation; NaN when either side has zero variance."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    sx = float(np.std(x))
    sy = float(np.std(y))
    if sx == 0.0 or sy == 0.0:
        return float("nan")
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def correlation_study(
    model: str,
    n: int = 500,
    count: int = 50,
    seed: int = 0,
    threads: int = 1,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
    degree_min: float = 2.0,
    degree_max: float = 50.0,
    p_rewire: float = DEFAULT_WS_REWIRE,
) -> str:
    """Per-graph (exact, estimate) pairs plus per-method Pearson r.

    The `count` graphs ladder their mean degree from degree_min to
    degree_max so the exact entropy actually varies across the sample;
    generating all graphs from one fixed parameter set would leave the
    correlation dominated by noise.
    """
    if count < 1:
        raise InvalidSpecError(f"count must be >= 1, got {count}")

    def degree_at(i: int) -> float:
        if count == 1:
            return degree_min
        return degree_min + i * (degree_max - degree_min) / (count - 1)

    def worker(i: int):
        spec = model_spec(model, n, degree_at(i), derive_seed(seed, 0, i), p_rewire)
        g = generate(spec)
        exact, estimates = _evaluate(g, dense_limit, tol)
        return exact, estimates

    results = _run_tasks([(i,) for i in range(count)], worker, threads)

    rows = []
    for i, (exact, estimates) in enumerate(results):
        for method in QUADRATIC_METHODS:
            rows.append(
                [model, n, "pair", i, degree_at(i), method, exact, estimates[method], None]
            )
    for method in QUADRATIC_METHODS:
        r = pearson_r(
            [exact for exact, _ in results],
            [est[method] for _, est in results],
        )
        rows.append([model, n, "summary", None, None, method, None, None, r])

    comments = [
        f"correlation model={model} n={n} count={count} seed={seed}",
        f"mean degree laddered over [{degree_min!r}, {degree_max!r}] across graphs",
        "any r threshold applied to this output is a qualitative, implementer-chosen check",
    ]
    columns = ["model", "n", "row", "graph", "degree", "method", "exact", "estimate", "pearson_r"]
    return render_csv(comments, columns, rows)


def linear_fit_r2(xs, ys) -> float:
    """R-squared of the least-squares line y = a + b*x."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    design = np.column_stack([np.ones(x.shape[0]), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return float("nan")
    return 1.0 - float(np.sum(residual**2)) / ss_tot


# Timed method names beyond the four estimators.
TIMING_PURITY = "purity"
TIMING_PURITY_LAMBDA = "purity_lambda_max"
TIMING_EXACT = "exact"


def timing_study(
    model: str,
    sizes,
    trials: int = 3,
    seed: int = 0,
    degree: float = 10.0,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
    p_rewire: float = DEFAULT_WS_REWIRE,
):
    """Median wall times per method across sizes; sequential on purpose.

    Measures: purity alone, purity + lambda_max, each estimator
    end-to-end (including its own spectral inputs), and the exact oracle
    when n is within the dense limit. Wall times are physical, so this
    is the one study whose output is not reproducible byte-for-byte.
    """
    sizes = list(sizes)
    warnings = []
    rows = []
    for si, size in enumerate(sizes):
        per_method: dict[str, list[int]] = {}
        m_edges = None
        for trial in range(trials):
            spec = model_spec(model, int(size), degree, derive_seed(seed, si, trial), p_rewire)
            g = generate(spec)
            m_edges = g.m

            start = time.perf_counter_ns()
            purity(g)
            per_method.setdefault(TIMING_PURITY, []).append(time.perf_counter_ns() - start)

            start = time.perf_counter_ns()
            spectral_summary(g, dense_limit=dense_limit, tol=tol)
            per_method.setdefault(TIMING_PURITY_LAMBDA, []).append(
                time.perf_counter_ns() - start
            )

            for method in QUADRATIC_METHODS:
                start = time.perf_counter_ns()
                estimate_entropy(g, method, dense_limit=dense_limit, tol=tol)
                per_method.setdefault(method, []).append(time.perf_counter_ns() - start)

            if g.n <= dense_limit:
                start = time.perf_counter_ns()
                exact_vnge(g, dense_limit)
                per_method.setdefault(TIMING_EXACT, []).append(
                    time.perf_counter_ns() - start
                )
            elif trial == 0:
                warnings.append(f"size {size}: exact oracle skipped (n exceeds dense limit)")

        for method, samples in per_method.items():
            rows.append(
                [model, int(size), m_edges, method, trials, float(statistics.median(samples))]
            )

    comments = [f"timing model={model} sizes={','.join(str(int(s)) for s in sizes)} trials={trials} seed={seed}"]
    purity_rows = [(r[1] + r[2], r[5]) for r in rows if r[3] == TIMING_PURITY]
    if len(purity_rows) >= 3:
        r2 = linear_fit_r2([pr[0] for pr in purity_rows], [pr[1] for pr in purity_rows])
        comments.append(f"purity linear fit vs (n+m): r2={r2!r}")
    columns = ["model", "n", "m", "method", "trials", "median_wall_ns"]
    return render_csv(comments, columns, rows), warnings
