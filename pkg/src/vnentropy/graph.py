"""Immutable weighted undirected simple graphs stored as flat edge arrays.

Every algorithm downstream is a single pass over edges plus a pass over
vertex strengths, so edges live in three parallel numpy arrays (u, v, w)
canonicalized to u < v and sorted lexicographically. No adjacency
structure is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    DuplicateEdgeError,
    GraphError,
    NegativeWeightError,
    ParseError,
    SelfLoopError,
    VertexOutOfRangeError,
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with positive edge weights.

    Attributes:
        n: number of vertices (ids are 0..n-1; isolated vertices allowed).
        edge_u, edge_v: int64 endpoint arrays with edge_u < edge_v,
            sorted lexicographically by (u, v).
        edge_w: float64 weights, strictly positive.
        degrees: float64 vertex strengths s_i = sum of incident weights.
    """

    n: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    degrees: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        """Edge list as (u, v, w) tuples; intended for desk-scale use."""
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w)
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.edge_u, other.edge_u)
            and np.array_equal(self.edge_v, other.edge_v)
            and np.array_equal(self.edge_w, other.edge_w)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class SpectralSummary:
    """Scalar spectral quantities of a graph's density matrix.

    Feeds every quadratic estimator without recomputation: trace of the
    Laplacian, purity tr(rho^2), and optionally the maximum eigenvalue
    and the full eigenvalue vector.
    """

    n: int
    trace_l: float
    purity: float
    lambda_max: float | None = None
    spectrum: np.ndarray | None = None

    def __post_init__(self):
        slack = 1e-12
        lo = 1.0 / self.n
        if not (lo - slack <= self.purity <= 1.0 + slack):
            raise DomainError(f"purity {self.purity!r} outside [1/n, 1] for n={self.n}")
        if self.lambda_max is not None:
            lam = self.lambda_max
            if not (lo - slack <= lam <= 1.0 + slack):
                raise DomainError(f"lambda_max {lam!r} outside [1/n, 1] for n={self.n}")
            bound = lam * lam + (1.0 - lam) ** 2
            if self.purity > bound + 1e-10:
                raise DomainError(
                    f"purity {self.purity!r} exceeds lambda_max bound {bound!r}"
                )


def _degrees_from_edges(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.bincount(u, weights=w, minlength=n) + np.bincount(v, weights=w, minlength=n)


def _from_canonical(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> Graph:
    """Fast constructor for edges already canonical, sorted, and unique."""
    return Graph(n=n, edge_u=u, edge_v=v, edge_w=w, degrees=_degrees_from_edges(n, u, v, w))


def build_graph(n: int, raw_edges) -> Graph:
    """Validate and canonicalize an edge list into a Graph.

    Args:
        n: vertex count, at least 1. Vertex ids must lie in [0, n).
        raw_edges: iterable of (u, v, w) triples. Zero-weight edges are
            dropped silently; duplicates (in either orientation) are an
            error; self-loops and negative weights are errors.

    Returns:
        Graph with edges canonicalized to u < v and sorted, plus the
        strength vector recomputed from the kept edges.
    """
    if n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n}")

    arr = np.asarray(list(raw_edges) if not isinstance(raw_edges, np.ndarray) else raw_edges, dtype=np.float64)
    if arr.size == 0:
        empty_i = np.empty(0, dtype=np.int64)
        return _from_canonical(n, empty_i, empty_i.copy(), np.empty(0, dtype=np.float64))
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise GraphError("edges must be (u, v, w) triples")

    u_raw, v_raw, w = arr[:, 0], arr[:, 1], arr[:, 2].copy()
    u = u_raw.astype(np.int64)
    v = v_raw.astype(np.int64)
    if not (np.array_equal(u, u_raw) and np.array_equal(v, v_raw)):
        raise GraphError("vertex ids must be integers")

    loops = u == v
    if loops.any():
        raise SelfLoopError(int(u[np.argmax(loops)]))

    neg = w < 0.0
    if neg.any():
        i = int(np.argmax(neg))
        raise NegativeWeightError(int(u[i]), int(v[i]), float(w[i]))

    out = (u < 0) | (u >= n) | (v < 0) | (v >= n)
    if out.any():
        i = int(np.argmax(out))
        bad = int(u[i]) if (u[i] < 0 or u[i] >= n) else int(v[i])
        raise VertexOutOfRangeError(bad, n)

    keep = w > 0.0
    u, v, w = u[keep], v[keep], w[keep]

    uu = np.minimum(u, v)
    vv = np.maximum(u, v)
    order = np.lexsort((vv, uu))
    uu, vv, w = uu[order], vv[order], w[order]

    if uu.size > 1:
        dup = (uu[1:] == uu[:-1]) & (vv[1:] == vv[:-1])
        if dup.any():
            i = int(np.argmax(dup))
            raise DuplicateEdgeError(int(uu[i]), int(vv[i]))

    return _from_canonical(n, uu, vv, w)


def trace_laplacian(g: Graph) -> float:
    """Trace of the combinatorial Laplacian: sum of strengths = 2 * sum of weights."""
    return 2.0 * float(np.sum(g.edge_w))


def load_edge_list(path, indexing: int = 0, weighted: bool = True, n: int | None = None) -> Graph:
    """Read a whitespace-separated edge-list file into a Graph.

    Each non-comment line is "u v" or "u v w"; lines starting with '#'
    or '%' are comments. With `weighted=False` any third column is
    ignored and every weight is 1. The vertex count is inferred as
    1 + max id (after 1-indexed normalization) unless `n` is given.
    """
    if indexing not in (0, 1):
        raise GraphError(f"indexing must be 0 or 1, got {indexing}")
    edges = []
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped[0] in "#%":
                continue
            tokens = stripped.split()
            if len(tokens) not in (2, 3):
                raise ParseError(line_no, f"expected 2 or 3 columns, got {len(tokens)}")
            try:
                u = int(tokens[0]) - indexing
                v = int(tokens[1]) - indexing
                w = float(tokens[2]) if (weighted and len(tokens) == 3) else 1.0
            except ValueError as exc:
                raise ParseError(line_no, str(exc)) from None
            edges.append((u, v, w))
            max_id = max(max_id, u, v)
    if n is None:
        if max_id < 0:
            raise GraphError("cannot infer vertex count from an empty edge list; pass n")
        n = max_id + 1
    return build_graph(n, edges)
