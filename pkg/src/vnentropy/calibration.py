"""Calibrated mixtures of the quadratic estimators.

Two families, both fit by gradient descent on mean-squared error against
exact entropy over a training set:

  two_term  t*a + (1-t)*b, a weighted mean of two estimators with t in [0,1]
  affine4   omega . (finger, taylor, modified_taylor, radial_projection) + beta
            with omega on the probability simplex

Published coefficient sets ship as named presets loadable without any
training data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .approximations import (
    FINGER,
    MODIFIED_TAYLOR,
    QUADRATIC_METHODS,
    RADIAL_PROJECTION,
    TAYLOR,
    EntropyEstimate,
    quadratic_estimates,
)
from .errors import (
    DomainError,
    EmptyTrainingSetError,
    InvalidSpecError,
    MissingEstimatorError,
    ParseError,
)
from .graph import Graph
from .spectral import (
    DEFAULT_TOL,
    DENSE_LIMIT_DEFAULT,
    entropy_from_spectrum,
    spectral_summary,
)

TWO_TERM = "two_term"
AFFINE4 = "affine4"

DEFAULT_PAIR = (FINGER, MODIFIED_TAYLOR)

# Conservative descent defaults: tiny fixed step, start at the midpoint, iterate long.
DEFAULT_ALPHA = 1e-6
DEFAULT_INIT_T = 0.5
DEFAULT_MAX_ITER = 10_000_000
DEFAULT_GRAD_TOL = 1e-9

_SAMPLE_COLUMNS = (
    "n",
    "purity",
    "lambda_max",
    "H_exact",
    "finger",
    "taylor",
    "modified_taylor",
    "radial",
)
_CSV_METHOD_KEYS = {
    "finger": FINGER,
    "taylor": TAYLOR,
    "modified_taylor": MODIFIED_TAYLOR,
    "radial": RADIAL_PROJECTION,
}


@dataclass(frozen=True)
class MixtureWeights:
    """Coefficients of a fitted or preset estimator mixture."""

    kind: str
    pair: tuple[str, str] | None = None
    t: float | None = None
    omegas: tuple[float, float, float, float] | None = None
    beta: float = 0.0

    def __post_init__(self):
        if self.kind == TWO_TERM:
            if self.pair is None or len(self.pair) != 2 or self.t is None:
                raise InvalidSpecError("two_term mixture needs a pair and t")
            if not (-1e-12 <= self.t <= 1.0 + 1e-12):
                raise InvalidSpecError(f"t={self.t!r} outside [0, 1]")
        elif self.kind == AFFINE4:
            if self.omegas is None or len(self.omegas) != 4:
                raise InvalidSpecError("affine4 mixture needs four omegas")
            for w in self.omegas:
                if not (-1e-9 <= w <= 1.0 + 1e-9):
                    raise InvalidSpecError(f"omega={w!r} outside [0, 1]")
            if abs(sum(self.omegas) - 1.0) > 1e-9:
                raise InvalidSpecError(f"omegas {self.omegas!r} do not sum to 1")
        else:
            raise InvalidSpecError(f"unknown mixture kind {self.kind!r}")


@dataclass(frozen=True)
class TrainingSample:
    """Estimator values and the exact entropy for one graph."""

    n: int
    y: float
    estimates: dict
    purity: float | None = None
    lambda_max: float | None = None

    def __post_init__(self):
        if not (-1e-9 <= self.y <= math.log(self.n) + 1e-9):
            raise DomainError(f"exact entropy {self.y!r} outside [0, ln {self.n}]")


@dataclass(frozen=True)
class FitResult:
    """Fitted weights plus how the descent ended."""

    weights: MixtureWeights
    iterations: int
    converged: bool
    grad_norm: float
    mse: float
    degenerate: bool = False


def _estimate_of(sample: TrainingSample, method: str) -> float:
    try:
        return sample.estimates[method]
    except KeyError:
        raise MissingEstimatorError(method) from None


def mixture_methods(weights: MixtureWeights) -> tuple[str, ...]:
    """Names of the estimators a mixture consumes."""
    if weights.kind == TWO_TERM:
        return tuple(weights.pair)
    return QUADRATIC_METHODS


def mixture_value(weights: MixtureWeights, estimates: dict) -> float:
    """Evaluate a mixture on a dict of per-method estimator values."""
    if weights.kind == TWO_TERM:
        a, b = weights.pair
        for name in (a, b):
            if name not in estimates:
                raise MissingEstimatorError(name)
        return weights.t * estimates[a] + (1.0 - weights.t) * estimates[b]
    total = weights.beta
    for name, omega in zip(QUADRATIC_METHODS, weights.omegas):
        if name not in estimates:
            raise MissingEstimatorError(name)
        total += omega * estimates[name]
    return total


def _two_term_arrays(samples, pair):
    xa = np.array([_estimate_of(s, pair[0]) for s in samples])
    xb = np.array([_estimate_of(s, pair[1]) for s in samples])
    y = np.array([s.y for s in samples])
    return xa, xb, y


def fit_two_term(
    samples,
    pair=DEFAULT_PAIR,
    alpha: float = DEFAULT_ALPHA,
    init_t: float = DEFAULT_INIT_T,
    max_iter: int = DEFAULT_MAX_ITER,
    grad_tol: float = DEFAULT_GRAD_TOL,
    fast: bool = False,
) -> FitResult:
    """Fit t in [0, 1] minimizing mean((t*xa + (1-t)*xb - y)^2).

    Plain gradient descent with fixed step `alpha` from `init_t`,
    stopping when |J'(t)| < grad_tol or after max_iter updates; the
    final t is clipped to [0, 1]. With fast=True the closed-form
    least-squares solution is returned instead (exact for this convex
    quadratic). If both estimators coincide on every sample the
    gradient is identically zero: init_t is returned with the
    degenerate flag set.
    """
    samples = list(samples)
    if not samples:
        raise EmptyTrainingSetError()
    xa, xb, y = _two_term_arrays(samples, pair)

    # J'(t) = 2*(A*t - B) with the data folded into two scalars.
    d = xa - xb
    a_coef = float(np.mean(d * d))
    b_coef = float(np.mean(d * (y - xb)))

    def result(t, iterations, converged, degenerate=False):
        t = min(max(t, 0.0), 1.0)
        mse = float(np.mean((t * xa + (1.0 - t) * xb - y) ** 2))
        grad = 2.0 * (a_coef * t - b_coef)
        weights = MixtureWeights(kind=TWO_TERM, pair=tuple(pair), t=t)
        return FitResult(weights, iterations, converged, abs(grad), mse, degenerate)

    if a_coef == 0.0:
        return result(init_t, 0, True, degenerate=True)
    if fast:
        return result(b_coef / a_coef, 0, True)

    t = float(init_t)
    shrink = 1.0 - 2.0 * alpha * a_coef
    shift = 2.0 * alpha * b_coef
    iterations = 0
    converged = False
    while iterations < max_iter:
        if abs(2.0 * (a_coef * t - b_coef)) < grad_tol:
            converged = True
            break
        t = t * shrink + shift
        iterations += 1
    else:
        converged = abs(2.0 * (a_coef * t - b_coef)) < grad_tol
    return result(t, iterations, converged)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-and-threshold)."""
    v = np.asarray(v, dtype=np.float64)
    sorted_desc = np.sort(v)[::-1]
    css = np.cumsum(sorted_desc)
    ranks = np.arange(1, v.size + 1)
    feasible = sorted_desc + (1.0 - css) / ranks > 0.0
    rho = int(np.nonzero(feasible)[0][-1])
    tau = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + tau, 0.0)


def _affine4_arrays(samples):
    x = np.array([[_estimate_of(s, m) for m in QUADRATIC_METHODS] for s in samples])
    y = np.array([s.y for s in samples])
    return x, y


def _affine4_best_subset(x: np.ndarray, y: np.ndarray):
    # Exact minimizer of the simplex-constrained least squares by
    # enumerating active sets: on each support solve the
    # equality-constrained problem via its KKT system, keep the best
    # feasible candidate. 15 supports, each a <= 6x6 solve.
    n_samples = x.shape[0]
    best = None
    for mask in range(1, 16):
        support = [i for i in range(4) if mask >> i & 1]
        k = len(support)
        d = np.column_stack([x[:, support], np.ones(n_samples)])
        kkt = np.zeros((k + 2, k + 2))
        kkt[: k + 1, : k + 1] = 2.0 / n_samples * (d.T @ d)
        kkt[: k + 1, k + 1] = [1.0] * k + [0.0]
        kkt[k + 1, : k + 1] = [1.0] * k + [0.0]
        rhs = np.zeros(k + 2)
        rhs[: k + 1] = 2.0 / n_samples * (d.T @ y)
        rhs[k + 1] = 1.0
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError:
            continue
        omega_s, beta = sol[:k], sol[k]
        if np.any(omega_s < -1e-12):
            continue
        omega = np.zeros(4)
        omega[support] = np.maximum(omega_s, 0.0)
        omega /= omega.sum()
        mse = float(np.mean((x @ omega + beta - y) ** 2))
        if best is None or mse < best[2]:
            best = (omega, float(beta), mse)
    return best


def fit_affine4(
    samples,
    alpha: float = DEFAULT_ALPHA,
    init_omegas=(0.25, 0.25, 0.25, 0.25),
    init_beta: float = 0.0,
    max_iter: int = DEFAULT_MAX_ITER,
    grad_tol: float = DEFAULT_GRAD_TOL,
    fast: bool = False,
) -> FitResult:
    """Fit (omega, beta) minimizing MSE with omega on the probability simplex.

    Projected gradient descent: a fixed-step gradient move on both
    omega and beta, then Euclidean projection of omega back onto the
    simplex. Because the projection can make the raw gradient
    non-vanishing at the constrained optimum, convergence is declared
    on the projected-gradient mapping |x_k - x_{k+1}| / alpha instead.
    fast=True solves the constrained problem exactly by active-set
    enumeration.
    """
    samples = list(samples)
    if not samples:
        raise EmptyTrainingSetError()
    if len(samples) < 5:
        raise DomainError(f"affine4 fit needs at least 5 samples, got {len(samples)}")
    x, y = _affine4_arrays(samples)
    n_samples = x.shape[0]

    def result(omega, beta, iterations, converged, grad_norm):
        omega = np.maximum(omega, 0.0)
        omega = omega / omega.sum()
        mse = float(np.mean((x @ omega + beta - y) ** 2))
        weights = MixtureWeights(
            kind=AFFINE4, omegas=tuple(float(w) for w in omega), beta=float(beta)
        )
        return FitResult(weights, iterations, converged, grad_norm, mse)

    if fast:
        solved = _affine4_best_subset(x, y)
        if solved is not None:
            omega, beta, _ = solved
            return result(omega, beta, 0, True, 0.0)
        # Singular in every support (degenerate features): fall through
        # to descent, which handles it by simply not moving much.

    # Fold the data into fixed small matrices so each iteration is O(1).
    gram2 = 2.0 / n_samples * (x.T @ x)
    xty2 = 2.0 / n_samples * (x.T @ y)
    col_means = x.mean(axis=0)
    y_mean = float(y.mean())

    omega = project_simplex(np.asarray(init_omegas, dtype=np.float64))
    beta = float(init_beta)
    iterations = 0
    converged = False
    grad_norm = math.inf
    while iterations < max_iter:
        grad_omega = gram2 @ omega + 2.0 * beta * col_means - xty2
        grad_beta = 2.0 * (float(col_means @ omega) + beta - y_mean)
        new_omega = project_simplex(omega - alpha * grad_omega)
        new_beta = beta - alpha * grad_beta
        grad_norm = max(
            float(np.max(np.abs(omega - new_omega))) / alpha, abs(grad_beta)
        )
        omega, beta = new_omega, new_beta
        iterations += 1
        if grad_norm < grad_tol:
            converged = True
            break
    return result(omega, beta, iterations, converged, grad_norm)


def train_test_gap(train_samples, test_samples, pair=DEFAULT_PAIR, **fit_kwargs) -> float:
    """Mean |mixture(t_train) - mixture(t_test)| over the test samples.

    Fits the pair separately on each set and measures how much the two
    calibrations disagree on the test graphs; small values mean the fit
    transfers across same-distribution samples.
    """
    train_samples = list(train_samples)
    test_samples = list(test_samples)
    if not train_samples or not test_samples:
        raise EmptyTrainingSetError()
    t_train = fit_two_term(train_samples, pair, **fit_kwargs).weights.t
    t_test = fit_two_term(test_samples, pair, **fit_kwargs).weights.t
    xa, xb, _ = _two_term_arrays(test_samples, pair)
    mixed_train = t_train * xa + (1.0 - t_train) * xb
    mixed_test = t_test * xa + (1.0 - t_test) * xb
    return float(np.mean(np.abs(mixed_train - mixed_test)))


PRESETS = {
    "improved-modified-taylor": MixtureWeights(
        kind=TWO_TERM, pair=(FINGER, MODIFIED_TAYLOR), t=0.3824
    ),
    "improved-radial-projection": MixtureWeights(
        kind=TWO_TERM, pair=(FINGER, RADIAL_PROJECTION), t=0.2794
    ),
    "mixed-quadratic": MixtureWeights(
        kind=AFFINE4, omegas=(0.2299, 0.0, 0.3099, 0.4602), beta=-0.0073
    ),
}


def sample_from_graph(
    g: Graph,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
) -> TrainingSample:
    """Evaluate exact entropy and all four estimators on one graph."""
    summary = spectral_summary(g, want_spectrum=True, dense_limit=dense_limit, tol=tol)
    y = entropy_from_spectrum(summary.spectrum)
    estimates = {m: e.value for m, e in quadratic_estimates(summary).items()}
    return TrainingSample(
        n=g.n,
        y=y,
        estimates=estimates,
        purity=summary.purity,
        lambda_max=summary.lambda_max,
    )


def mixture_entropy(
    g: Graph,
    weights: MixtureWeights,
    name: str = "mixture",
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
) -> EntropyEstimate:
    """Evaluate a mixture on a graph via one spectral summary."""
    summary = spectral_summary(g, dense_limit=dense_limit, tol=tol)
    estimates = {m: e.value for m, e in quadratic_estimates(summary).items()}
    value = mixture_value(weights, estimates)
    return EntropyEstimate(
        name,
        value,
        {"n": summary.n, "purity": summary.purity, "lambda_max": summary.lambda_max},
    )


def save_samples(samples, path):
    """Write training samples as CSV (schema: n, purity, lambda_max, H_exact, estimators)."""
    lines = ["# vnentropy-csv v1", ",".join(_SAMPLE_COLUMNS)]
    for s in samples:
        row = [
            str(s.n),
            "" if s.purity is None else repr(s.purity),
            "" if s.lambda_max is None else repr(s.lambda_max),
            repr(s.y),
        ]
        row += [repr(_estimate_of(s, _CSV_METHOD_KEYS[c])) for c in _SAMPLE_COLUMNS[4:]]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_samples(path) -> list[TrainingSample]:
    """Read training samples written by save_samples."""
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        header = None
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            cells = [c.strip() for c in stripped.split(",")]
            if header is None:
                header = cells
                if tuple(header) != _SAMPLE_COLUMNS:
                    raise ParseError(line_no, f"unexpected columns {header!r}")
                continue
            if len(cells) != len(_SAMPLE_COLUMNS):
                raise ParseError(line_no, f"expected {len(_SAMPLE_COLUMNS)} cells")
            try:
                n = int(cells[0])
                pur = float(cells[1]) if cells[1] else None
                lam = float(cells[2]) if cells[2] else None
                y = float(cells[3])
                estimates = {
                    _CSV_METHOD_KEYS[c]: float(cells[i])
                    for i, c in enumerate(_SAMPLE_COLUMNS)
                    if i >= 4
                }
            except ValueError as exc:
                raise ParseError(line_no, str(exc)) from None
            samples.append(
                TrainingSample(n=n, y=y, estimates=estimates, purity=pur, lambda_max=lam)
            )
    if header is None:
        raise ParseError(0, "no header row found")
    return samples


def format_weights(weights: MixtureWeights) -> str:
    """Render mixture weights as key=value lines (the weights-file format)."""
    lines = [f"kind={weights.kind}"]
    if weights.kind == TWO_TERM:
        lines.append(f"pair={weights.pair[0]},{weights.pair[1]}")
        lines.append(f"t={weights.t!r}")
    else:
        for name, omega in zip(QUADRATIC_METHODS, weights.omegas):
            lines.append(f"omega_{name}={omega!r}")
        lines.append(f"beta={weights.beta!r}")
    return "\n".join(lines) + "\n"


def save_weights(weights: MixtureWeights, path):
    """Write mixture weights as key=value lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_weights(weights))


def load_weights(path) -> MixtureWeights:
    """Read mixture weights from key=value lines."""
    fields = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ParseError(line_no, f"expected key=value, got {stripped!r}")
            key, _, value = stripped.partition("=")
            fields[key.strip()] = value.strip()
    kind = fields.get("kind")
    try:
        if kind == TWO_TERM:
            a, _, b = fields["pair"].partition(",")
            return MixtureWeights(kind=TWO_TERM, pair=(a.strip(), b.strip()), t=float(fields["t"]))
        if kind == AFFINE4:
            omegas = tuple(float(fields[f"omega_{m}"]) for m in QUADRATIC_METHODS)
            return MixtureWeights(kind=AFFINE4, omegas=omegas, beta=float(fields.get("beta", "0.0")))
    except (KeyError, ValueError) as exc:
        raise ParseError(0, f"bad weights file: {exc}") from None
    raise ParseError(0, f"unknown mixture kind {kind!r}")
