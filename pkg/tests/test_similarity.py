"""Jensen-Shannon distance and the averaged graph behind it."""

import math

import numpy as np
import pytest

from vnentropy import average_graph, build_graph, exact_vnge, js_distance
from vnentropy.approximations import MODIFIED_TAYLOR, RADIAL_PROJECTION
from vnentropy.calibration import PRESETS
from vnentropy.errors import SizeMismatchError
from vnentropy.generators import ModelSpec, generate, perturb_weights


def test_average_graph_union_of_edges(p3, k3):
    avg = average_graph(p3, k3)
    triples = sorted(
        zip(avg.edge_u.tolist(), avg.edge_v.tolist(), avg.edge_w.tolist())
    )
    # Shared edges average to 1, the edge only in K3 halves to 0.5.
    assert triples == [(0, 1, 1.0), (0, 2, 0.5), (1, 2, 1.0)]


def test_average_graph_disjoint_edges():
    a = build_graph(4, [(0, 1, 2.0)])
    b = build_graph(4, [(2, 3, 4.0)])
    avg = average_graph(a, b)
    triples = sorted(zip(avg.edge_u.tolist(), avg.edge_v.tolist(), avg.edge_w.tolist()))
    assert triples == [(0, 1, 1.0), (2, 3, 2.0)]


def test_average_graph_identity():
    g = build_graph(5, [(0, 1, 1.0), (2, 4, 3.0)])
    avg = average_graph(g, g)
    assert avg == g


def test_average_graph_entropy_value(p3, k3):
    avg = average_graph(p3, k3)
    assert math.isclose(exact_vnge(avg), 0.6730116670092565, abs_tol=1e-12)


def test_js_distance_known_value(p3, k3):
    r = js_distance(p3, k3)
    assert math.isclose(r.radicand, 0.04527050441987923, abs_tol=1e-12)
    assert math.isclose(r.distance, 0.2127686640929045, abs_tol=1e-12)
    assert not r.clamped
    assert r.method == "exact"
    assert math.isclose(r.entropy_a, 0.5623351446188087, abs_tol=1e-12)
    assert math.isclose(r.entropy_b, 0.6931471805599453, abs_tol=1e-12)
    assert math.isclose(r.entropy_average, 0.6730116670092565, abs_tol=1e-12)


def test_js_distance_identity(p3):
    r = js_distance(p3, p3)
    assert abs(r.distance) <= 1e-9
    assert abs(r.radicand) <= 1e-12


def test_js_distance_symmetry(p3, k3):
    ab = js_distance(p3, k3)
    ba = js_distance(k3, p3)
    assert ab.distance == ba.distance
    assert ab.radicand == ba.radicand


def test_js_distance_nonnegative_for_exact_backend():
    # Concavity of entropy makes the radicand nonnegative up to rounding.
    for seed in range(8):
        g = generate(ModelSpec("er", 40, seed=seed, p=0.2))
        h = perturb_weights(g, seed=seed + 100)
        r = js_distance(g, h)
        assert r.radicand >= -1e-12
        assert r.distance >= 0.0


def test_js_distance_grows_with_perturbation_count():
    base = generate(ModelSpec("ws", 60, seed=3, k=4, p_rewire=0.0))
    light = generate(ModelSpec("ws", 60, seed=3, k=4, p_rewire=0.2))
    heavy = generate(ModelSpec("ws", 60, seed=3, k=4, p_rewire=1.0))
    d_light = js_distance(base, light).distance
    d_heavy = js_distance(base, heavy).distance
    assert d_heavy > d_light > 0.0


def test_js_distance_size_mismatch():
    a = build_graph(3, [(0, 1, 1.0)])
    b = build_graph(4, [(0, 1, 1.0)])
    with pytest.raises(SizeMismatchError):
        js_distance(a, b)
    with pytest.raises(SizeMismatchError):
        average_graph(a, b)


def test_js_distance_estimator_backend(p3, k3):
    r = js_distance(p3, k3, backend=MODIFIED_TAYLOR)
    assert r.method == "modified_taylor"
    # Approximate backends may push the radicand negative; the distance
    # must still be a clamped, finite number.
    if r.radicand < 0:
        assert r.clamped and r.distance == 0.0
    else:
        assert math.isclose(r.distance, math.sqrt(r.radicand), abs_tol=1e-15)


def test_js_distance_clamp_flag():
    # Identical graphs under a radial backend: the radicand is a pure
    # rounding residue, so any negative value must be flagged and clamped.
    g = generate(ModelSpec("er", 30, seed=5, p=0.3))
    r = js_distance(g, g, backend=RADIAL_PROJECTION)
    assert r.distance == pytest.approx(0.0, abs=1e-6)
    assert r.clamped == (r.radicand < 0.0)
    assert r.distance >= 0.0


def test_js_distance_mixture_backend(p3, k3):
    w = PRESETS["improved-modified-taylor"]
    r = js_distance(p3, k3, backend=w)
    assert r.method == "mixture:two_term"
    assert np.isfinite(r.distance)


def test_js_distance_callable_backend(p3, k3):
    calls = []

    def fake_entropy(g):
        calls.append(g.n)
        return 0.5

    r = js_distance(p3, k3, backend=fake_entropy)
    assert r.method == "fake_entropy"
    assert r.radicand == 0.0
    assert len(calls) == 3  # a, b, and the average


def test_js_distance_bounded_by_sqrt_ln2():
    # With equal Laplacian traces the averaged graph's density matrix is an
    # even mixture, so the divergence obeys the classic ln 2 ceiling. Ring
    # rewires keep the edge count (and hence the trace) fixed.
    for seed in range(5):
        a = generate(ModelSpec("ws", 40, seed=seed, k=4, p_rewire=0.0))
        b = generate(ModelSpec("ws", 40, seed=seed + 9, k=4, p_rewire=1.0))
        r = js_distance(a, b)
        assert r.distance <= math.sqrt(math.log(2.0)) + 1e-9
