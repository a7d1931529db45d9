"""Shared fixtures: small named graphs and the 300-graph random battery."""

import time
from types import SimpleNamespace

import pytest

from vnentropy import build_graph, exact_spectrum, entropy_from_spectrum, purity
from vnentropy.generators import ModelSpec, generate
from vnentropy.harness import derive_seed

BATTERY_BASE_SEED = 20250825


def battery_specs():
    """100 graphs per model, n spread over [10, 200], varied parameters."""
    specs = []
    for i in range(100):
        n = 10 + round(i * 190 / 99)
        p = 0.1 + 0.4 * (i % 10) / 9
        specs.append(ModelSpec("er", n, derive_seed(BATTERY_BASE_SEED, 0, i), p=p))
    for i in range(100):
        n = 10 + round(i * 190 / 99)
        m_attach = 1 + (i % 5)
        specs.append(ModelSpec("ba", n, derive_seed(BATTERY_BASE_SEED, 1, i), m_attach=m_attach))
    for i in range(100):
        n = 10 + round(i * 190 / 99)
        k = 2 + 2 * (i % 4)
        p_rewire = (i % 11) / 10
        specs.append(ModelSpec("ws", n, derive_seed(BATTERY_BASE_SEED, 2, i), k=k, p_rewire=p_rewire))
    return specs


@pytest.fixture(scope="session")
def battery():
    """Per-graph dense-oracle quantities for 300 seeded random graphs.

    lambda_max here comes from the dense spectrum: it is the reference
    value the iterative path is judged against elsewhere.
    """
    start = time.perf_counter()
    cases = []
    for spec in battery_specs():
        g = generate(spec)
        while g.m == 0:
            # A sparse draw can come out empty; reseed deterministically.
            spec = ModelSpec(spec.model, spec.n, spec.seed + 1000003, p=spec.p,
                             m_attach=spec.m_attach, k=spec.k, p_rewire=spec.p_rewire)
            g = generate(spec)
        spectrum = exact_spectrum(g)
        cases.append(
            SimpleNamespace(
                model=spec.model,
                graph=g,
                spectrum=spectrum,
                exact=entropy_from_spectrum(spectrum),
                purity=purity(g),
                lam=float(spectrum[0]),
            )
        )
    elapsed = time.perf_counter() - start
    return SimpleNamespace(cases=cases, elapsed=elapsed)


@pytest.fixture
def k3():
    return build_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def p3():
    return build_graph(3, [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def single_edge():
    return build_graph(2, [(0, 1, 1.0)])
