"""Seeded random-graph models: G(n, p), preferential attachment, small-world.

All randomness comes from a counter-based PRNG (Philox) keyed by the spec's
seed, so an identical spec always yields an identical Graph and independent
specs can be generated concurrently without sharing stream state. All
generated weights are 1.0; perturb_weights exists to exercise weighted code
paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .graph import Graph, _from_canonical

ER = "er"
BA = "ba"
WS = "ws"
MODELS = (ER, BA, WS)


@dataclass(frozen=True)
class ModelSpec:
    """One generator invocation: model name, size, model parameters, seed."""

    model: str
    n: int
    seed: int = 0
    p: float | None = None
    m_attach: int | None = None
    k: int | None = None
    p_rewire: float | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidSpecError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 1:
            raise InvalidSpecError(f"n must be >= 1, got {self.n}")
        if self.seed < 0:
            raise InvalidSpecError(f"seed must be non-negative, got {self.seed}")
        if self.model == ER:
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise InvalidSpecError(f"er needs edge probability p in [0, 1], got {self.p!r}")
        elif self.model == BA:
            if self.m_attach is None or not (1 <= self.m_attach < self.n):
                raise InvalidSpecError(
                    f"ba needs attachment count m_attach in [1, n), got {self.m_attach!r}"
                )
        else:
            ok = (
                self.k is not None
                and self.k % 2 == 0
                and 0 < self.k < self.n
                and self.p_rewire is not None
                and 0.0 <= self.p_rewire <= 1.0
            )
            if not ok:
                raise InvalidSpecError(
                    f"ws needs even k in (0, n) and p_rewire in [0, 1], "
                    f"got k={self.k!r} p_rewire={self.p_rewire!r}"
                )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _pair_offsets(n: int, u: np.ndarray) -> np.ndarray:
    # Pairs (r, v) with r < u, listed row-major, come before row u:
    # offset(u) = u*n - u*(u+1)/2.
    return u * n - (u * (u + 1)) // 2


def _decode_pair_index(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map flat indices over the n*(n-1)/2 unordered pairs to (u, v), u < v."""
    # Invert the row-offset quadratic with a float sqrt, then repair the
    # off-by-one the rounding can introduce.
    u = np.floor((n - 0.5) - np.sqrt((n - 0.5) ** 2 - 2.0 * idx)).astype(np.int64)
    np.clip(u, 0, n - 2, out=u)
    for _ in range(2):
        u = np.where(_pair_offsets(n, u + 1) <= idx, u + 1, u)
        u = np.where(_pair_offsets(n, u) > idx, u - 1, u)
    v = idx - _pair_offsets(n, u) + u + 1
    return u, v


def _generate_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    empty = np.empty(0, dtype=np.int64)
    if n < 2 or p <= 0.0:
        return _from_canonical(n, empty, empty.copy(), np.empty(0, dtype=np.float64))
    total = n * (n - 1) // 2
    if p >= 1.0:
        idx = np.arange(total, dtype=np.int64)
    else:
        # Geometric skipping: the gaps between successive present pairs are
        # iid geometric(p), so only the ~p*total hits are ever drawn.
        chunk = int(total * p + 4.0 * np.sqrt(total * p) + 16.0)
        gaps = []
        covered = 0
        while covered <= total:
            block = rng.geometric(p, size=chunk)
            gaps.append(block)
            covered += int(block.sum())
        idx = np.cumsum(np.concatenate(gaps)) - 1
        idx = idx[idx < total]
    u, v = _decode_pair_index(n, idx)
    return _from_canonical(n, u, v, np.ones(idx.shape[0], dtype=np.float64))


def _generate_ba(n: int, m_attach: int, rng: np.random.Generator) -> Graph:
    us: list[int] = []
    vs: list[int] = []
    for a in range(m_attach):
        for b in range(a + 1, m_attach):
            us.append(a)
            vs.append(b)

    # Degree-proportional sampling via the repeated-endpoints pool: every
    # edge contributes both endpoints, so a uniform draw from the pool is
    # a draw proportional to current degree.
    total_edges = len(us) + m_attach * (n - m_attach)
    pool = np.empty(2 * total_edges, dtype=np.int64)
    pool_len = 0
    for a, b in zip(us, vs):
        pool[pool_len] = a
        pool[pool_len + 1] = b
        pool_len += 2

    for t in range(m_attach, n):
        chosen: list[int] = []
        while len(chosen) < m_attach:
            if pool_len == 0:
                # Isolated seed vertex (m_attach = 1 before any edges):
                # fall back to a uniform draw over existing vertices.
                cand = int(rng.integers(0, t))
            else:
                cand = int(pool[rng.integers(0, pool_len)])
            if cand not in chosen:
                chosen.append(cand)
        for cand in chosen:
            us.append(cand)
            vs.append(t)
            pool[pool_len] = cand
            pool[pool_len + 1] = t
            pool_len += 2

    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    uu = np.minimum(u, v)
    vv = np.maximum(u, v)
    order = np.lexsort((vv, uu))
    return _from_canonical(n, uu[order], vv[order], np.ones(u.shape[0], dtype=np.float64))


def _generate_ws(n: int, k: int, p_rewire: float, rng: np.random.Generator) -> Graph:
    half = k // 2
    i = np.arange(n, dtype=np.int64)
    u = np.repeat(i, half)
    v = (u + np.tile(np.arange(1, half + 1, dtype=np.int64), n)) % n

    if p_rewire > 0.0:
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in zip(u.tolist(), v.tolist()):
            adj[a].add(b)
            adj[b].add(a)
        # Visit lattice edges ring by ring, nearest neighbors first, as in
        # the original construction.
        for j in range(1, half + 1):
            for src in range(n):
                e = src * half + (j - 1)
                if rng.random() >= p_rewire:
                    continue
                old = int(v[e])
                # Try fresh targets; a dense ring can leave nothing free,
                # so give up after 100 rejections and keep the edge.
                for _ in range(100):
                    cand = int(rng.integers(0, n))
                    if cand == src or cand in adj[src]:
                        continue
                    adj[src].discard(old)
                    adj[old].discard(src)
                    adj[src].add(cand)
                    adj[cand].add(src)
                    v[e] = cand
                    break

    uu = np.minimum(u, v)
    vv = np.maximum(u, v)
    order = np.lexsort((vv, uu))
    return _from_canonical(n, uu[order], vv[order], np.ones(u.shape[0], dtype=np.float64))


def generate(spec: ModelSpec) -> Graph:
    """Generate the graph described by `spec`; identical spec, identical Graph."""
    rng = _rng(spec.seed)
    if spec.model == ER:
        return _generate_er(spec.n, spec.p, rng)
    if spec.model == BA:
        return _generate_ba(spec.n, spec.m_attach, rng)
    return _generate_ws(spec.n, spec.k, spec.p_rewire, rng)


def perturb_weights(g: Graph, seed: int) -> Graph:
    """Replace unit weights with seeded uniform draws from [0.5, 1.5].

    Keeps the topology; exists to exercise weighted code paths (the
    generator models themselves are unweighted).
    """
    rng = _rng(seed)
    w = rng.uniform(0.5, 1.5, g.m)
    return _from_canonical(g.n, g.edge_u.copy(), g.edge_v.copy(), w)
