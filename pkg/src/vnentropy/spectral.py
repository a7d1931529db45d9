"""Exact spectral reference computations for the density matrix rho = L / tr(L).

The dense eigensolver is the desk-scale oracle (O(n^3), capped by a
configurable size limit); power iteration provides the maximum eigenvalue
at sizes where a full eigensolve is off the table. Everything downstream
is validated against these two.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    EmptyGraphError,
    NoConvergenceError,
    NumericalError,
    TooLargeForDenseError,
)
from .graph import Graph, SpectralSummary, trace_laplacian
from .purity import purity

DENSE_LIMIT_DEFAULT = 5000
DEFAULT_TOL = 1e-10

# Slack for positive-semidefiniteness / unit-bound violations caused by
# rounding in the eigensolver; anything beyond it means a broken Laplacian.
_EIG_SLACK = 1e-10


def entropy_from_spectrum(values) -> float:
    """Shannon entropy -sum lam ln lam in nats, with 0 ln 0 := 0."""
    lam = np.asarray(values, dtype=np.float64)
    pos = lam[lam > 0.0]
    return float(-np.sum(pos * np.log(pos))) + 0.0


def exact_spectrum(g: Graph, dense_limit: int = DENSE_LIMIT_DEFAULT) -> np.ndarray:
    """Eigenvalues of rho_G from a dense symmetric eigensolve, sorted descending.

    Eigenvalues in [-1e-10, 0) are clamped to 0 and values in
    (1, 1 + 1e-10] to 1; violations beyond that slack raise
    NumericalError. Raises TooLargeForDenseError when n exceeds
    `dense_limit` and EmptyGraphError when the graph has no edges.
    """
    if g.n > dense_limit:
        raise TooLargeForDenseError(g.n, dense_limit)
    trl = trace_laplacian(g)
    if trl <= 0.0:
        raise EmptyGraphError()

    lap = np.zeros((g.n, g.n), dtype=np.float64)
    lap[g.edge_u, g.edge_v] = -g.edge_w
    lap[g.edge_v, g.edge_u] = -g.edge_w
    np.fill_diagonal(lap, g.degrees)

    lam = np.linalg.eigvalsh(lap) / trl
    if lam[0] < -_EIG_SLACK:
        raise NumericalError(f"eigenvalue {lam[0]!r} below PSD slack; Laplacian is broken")
    if lam[-1] > 1.0 + _EIG_SLACK:
        raise NumericalError(f"eigenvalue {lam[-1]!r} above 1; Laplacian is broken")
    np.clip(lam, 0.0, 1.0, out=lam)
    return lam[::-1]


def exact_vnge(g: Graph, dense_limit: int = DENSE_LIMIT_DEFAULT) -> float:
    """Exact von Neumann graph entropy -sum lam ln lam, in [0, ln n]."""
    return entropy_from_spectrum(exact_spectrum(g, dense_limit))


def _matvec(g: Graph, trl: float, x: np.ndarray) -> np.ndarray:
    # y = (S x - W x) / tr L, accumulated over the edge list only.
    y = g.degrees * x
    np.subtract(y, np.bincount(g.edge_u, weights=g.edge_w * x[g.edge_v], minlength=g.n), out=y)
    np.subtract(y, np.bincount(g.edge_v, weights=g.edge_w * x[g.edge_u], minlength=g.n), out=y)
    y /= trl
    return y


def lambda_max(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
    certify_tol: float = 1e-9,
) -> float:
    """Largest eigenvalue of rho_G by power iteration on the edge list.

    Starts from a deterministic vector: 1/sqrt(n) everywhere, a fixed
    bump on index 0, plus a small linear tilt. The flat part is always
    in the kernel of L, and a bump on index 0 alone can have zero
    overlap with eigenvectors supported away from vertex 0 (disconnected
    graphs), so the tilt is what guarantees overlap with the top
    eigenvector in practice.

    Success requires both stopping conditions: successive Rayleigh
    quotients differ by less than `tol`, and the eigen-residual
    ||rho x - theta x|| is below `certify_tol` (for symmetric matrices
    the residual bounds the distance from theta to the nearest
    eigenvalue, so a converged value is certified accurate; the Rayleigh
    plateau alone can stall early on near-degenerate spectra). Raises
    NoConvergenceError otherwise — callers within the dense limit may
    fall back to exact_spectrum. The result is clamped to [1/n, 1].
    """
    trl = trace_laplacian(g)
    if trl <= 0.0:
        raise EmptyGraphError()
    n = g.n
    if max_iter is None:
        max_iter = max(1000, 10 * n)

    root_n = np.sqrt(n)
    x = np.full(n, 1.0 / root_n)
    x[0] += 1.0 / root_n
    x += np.arange(1, n + 1, dtype=np.float64) / (n * root_n)
    x /= np.linalg.norm(x)

    rayleigh = None
    for _ in range(max_iter):
        y = _matvec(g, trl, x)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # The iterate collapsed into the kernel; no progress is
            # possible from this start vector.
            raise NoConvergenceError(max_iter)
        current = float(x @ y)
        residual = float(np.linalg.norm(y - current * x))
        x = y / norm
        if rayleigh is not None and abs(current - rayleigh) < tol and residual < certify_tol:
            return min(max(current, 1.0 / n), 1.0)
        rayleigh = current
    raise NoConvergenceError(max_iter)


def spectral_summary(
    g: Graph,
    want_lambda_max: bool = True,
    want_spectrum: bool = False,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> SpectralSummary:
    """Bundle tr(L), purity, and optionally lambda_max / the full spectrum.

    One summary feeds every estimator without recomputation. The full
    spectrum (dense solve) is only taken when requested; lambda_max
    comes from power iteration, falling back to the dense solver when
    iteration stalls and n is within the dense limit.
    """
    trl = trace_laplacian(g)
    if trl <= 0.0:
        raise EmptyGraphError()
    tr_rho_sq = purity(g)

    spectrum = exact_spectrum(g, dense_limit) if want_spectrum else None

    lam = None
    if want_lambda_max:
        if spectrum is not None:
            lam = float(spectrum[0])
        else:
            try:
                lam = lambda_max(g, tol=tol, max_iter=max_iter)
            except NoConvergenceError:
                if g.n > dense_limit:
                    raise
                lam = float(exact_spectrum(g, dense_limit)[0])
        lam = min(max(lam, 1.0 / g.n), 1.0)

    return SpectralSummary(n=g.n, trace_l=trl, purity=tr_rho_sq, lambda_max=lam, spectrum=spectrum)
