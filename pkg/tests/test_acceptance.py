"""Acceptance gate: one test per release criterion.

Run with `pytest -v tests/test_acceptance.py` to get one pass/fail line
per criterion. The shared 300-graph battery fixture (100 each of the
three random models, n in [10, 200]) lives in conftest.py; its
lambda_max values come from the dense eigensolver so every bound below
is checked against reference inputs.
"""

import math
import statistics
import time

import numpy as np
import pytest

from vnentropy import (
    build_graph,
    estimate_entropy,
    exact_vnge,
    js_distance,
    purity,
)
from vnentropy.approximations import (
    QUADRATIC_METHODS,
    RADIAL_PROJECTION,
    finger,
    modified_taylor,
    radial_projection,
    sigma_coefficient,
    taylor,
)
from vnentropy.calibration import (
    PRESETS,
    TrainingSample,
    fit_affine4,
    fit_two_term,
    train_test_gap,
)
from vnentropy.cli import main
from vnentropy.generators import ModelSpec, generate, perturb_weights
from vnentropy.harness import correlation_study, derive_seed, linear_fit_r2, model_spec


def _battery_samples(battery, model):
    """TrainingSamples for one model's slice of the battery."""
    samples = []
    for case in battery.cases:
        if case.model != model:
            continue
        n = case.graph.n
        samples.append(
            TrainingSample(
                n=n,
                y=case.exact,
                estimates={
                    m: est
                    for m, est in zip(
                        QUADRATIC_METHODS,
                        (
                            finger(n, case.purity, case.lam).value,
                            taylor(n, case.purity).value,
                            modified_taylor(n, case.purity, case.lam).value,
                            radial_projection(n, case.purity).value,
                        ),
                    )
                },
            )
        )
    return samples


def test_criterion_01_purity_matches_dense_oracle(battery):
    """Edge-list purity equals the spectral sum of squares to 1e-12."""
    start = time.perf_counter()
    worst = 0.0
    for case in battery.cases:
        worst = max(worst, abs(case.purity - float(np.sum(case.spectrum**2))))
    elapsed = battery.elapsed + (time.perf_counter() - start)
    assert len(battery.cases) == 300
    assert worst < 1e-12
    assert elapsed < 60.0
    print(f"criterion 01 PASS: worst |purity - sum(lam^2)| = {worst:.3e}, "
          f"runtime {elapsed:.2f}s over 300 graphs")


def test_criterion_02_finger_underestimates_with_gap_bound(battery):
    """finger <= exact, and the gap is at least lambda_max * exact."""
    for case in battery.cases:
        f = finger(case.graph.n, case.purity, case.lam).value
        assert f <= case.exact + 1e-9
        assert case.exact - f >= case.lam * case.exact - 1e-9
    print("criterion 02 PASS: 300/300 graphs satisfy both finger bounds")


def test_criterion_03_modified_taylor_overestimates_with_slope_bound(battery):
    """modified_taylor >= exact; -1/(2*sigma) lies in [1/n, lambda_max]."""
    checked = 0
    for case in battery.cases:
        n = case.graph.n
        assert modified_taylor(n, case.purity, case.lam).value >= case.exact - 1e-9
        if case.lam > 1.0 / n + 1e-9:
            pivot = -1.0 / (2.0 * sigma_coefficient(n, case.lam))
            assert 1.0 / n <= pivot <= case.lam + 1e-10
            checked += 1
    assert checked > 250  # the slope bound applied to nearly every graph
    print(f"criterion 03 PASS: over-estimation on 300/300, slope bound on {checked}")


def test_criterion_04_purity_range_and_entropy_bound(battery):
    """Purity bounds from lambda_max; collision-entropy Jensen bound."""
    for case in battery.cases:
        n, p, lam = case.graph.n, case.purity, case.lam
        assert 1.0 / n - 1e-12 <= p <= lam * lam + (1.0 - lam) ** 2 + 1e-10
        pos = case.spectrum[case.spectrum > 0.0]
        lhs = -float(np.sum(pos * pos * np.log(pos)))
        assert lhs <= -p * math.log(p) + 1e-10
    print("criterion 04 PASS: purity range and quadratic entropy bound on 300/300")


def test_criterion_05_closed_form_spectra():
    """Complete graphs, the single edge, and the radial fixed points."""
    for n in range(3, 11):
        g = build_graph(n, [(u, v, 1.0) for u in range(n) for v in range(u + 1, n)])
        assert abs(exact_vnge(g) - math.log(n - 1)) < 1e-9
    edge = build_graph(2, [(0, 1, 1.0)])
    assert abs(exact_vnge(edge)) < 1e-12
    for n in (2, 5, 40, 1000):
        assert abs(radial_projection(n, 1.0 / n).value - math.log(n)) < 1e-10
        assert abs(radial_projection(n, 1.0).value) < 1e-10
    print("criterion 05 PASS: K_n = ln(n-1) for n=3..10, edge = 0, radial fixed points")


def test_criterion_06_worked_constants(k3, p3):
    """Hand-derived four-estimator values on K3 and the exact P3 entropy."""
    assert abs(exact_vnge(p3) - 0.562335) < 1e-5
    p = purity(k3)
    lam = 0.5  # dense top eigenvalue of K3's density matrix
    assert abs(finger(3, p, lam).value - 0.346574) < 1e-5
    assert abs(taylor(3, p).value - (-0.151388)) < 1e-5
    assert abs(modified_taylor(3, p, lam).value - 0.882216) < 1e-5
    assert abs(radial_projection(3, p).value - 0.867563) < 1e-5
    print("criterion 06 PASS: K3 quadruple and P3 exact reproduced to 1e-5")


def test_criterion_07_calibration_fits(battery):
    """Descent matches the closed form; planted mixtures recovered; gap < 0.02."""
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(10):
        samples = []
        for _ in range(120):
            xa, xb = rng.uniform(0.5, 3.0, size=2)
            y = min(max(float(0.5 * xa + 0.5 * xb * rng.uniform(0.9, 1.1)), 0.0), 4.0)
            samples.append(
                TrainingSample(
                    n=100, y=y,
                    estimates={"finger": float(xa), "modified_taylor": float(xb)},
                )
            )
        slow = fit_two_term(samples, alpha=1e-2, max_iter=200_000)
        fast = fit_two_term(samples, fast=True)
        assert slow.converged
        worst = max(worst, abs(slow.weights.t - fast.weights.t))
    assert worst < 1e-3

    planted = []
    for _ in range(300):
        vals = rng.uniform(0.5, 4.0, size=4)
        planted.append(
            TrainingSample(
                n=100,
                y=float(0.25 * np.sum(vals) + 0.1),
                estimates=dict(zip(QUADRATIC_METHODS, vals)),
            )
        )
    fit = fit_affine4(planted, alpha=1e-2, max_iter=100_000, grad_tol=1e-7)
    assert max(abs(w - 0.25) for w in fit.weights.omegas) < 1e-3
    assert abs(fit.weights.beta - 0.1) < 1e-3

    er = _battery_samples(battery, "er")
    gap = train_test_gap(er[0::2], er[1::2], fast=True)
    assert gap < 0.02
    print(f"criterion 07 PASS: descent-vs-closed-form {worst:.2e}, planted affine4 "
          f"recovered, train/test gap {gap:.4f} < 0.02")


def test_criterion_08_preset_fidelity():
    """Published mixture coefficients load exactly."""
    assert PRESETS["improved-modified-taylor"].t == 0.3824
    assert PRESETS["improved-modified-taylor"].pair == ("finger", "modified_taylor")
    assert PRESETS["improved-radial-projection"].t == 0.2794
    assert PRESETS["improved-radial-projection"].pair == ("finger", "radial_projection")
    mq = PRESETS["mixed-quadratic"]
    assert mq.omegas == (0.2299, 0.0, 0.3099, 0.4602)
    assert mq.beta == -0.0073
    print("criterion 08 PASS: presets t=0.3824, t=0.2794, "
          "omegas (0.2299, 0, 0.3099, 0.4602), beta=-0.0073")


def test_criterion_09_js_distance_metric_properties():
    """Identity, symmetry, nonnegativity on 100 pairs; triangle on 100 triples."""
    def graph_at(i, j):
        base = generate(
            ModelSpec("er", 30, derive_seed(31, i, j), p=0.15 + 0.3 * ((i + j) % 5) / 4)
        )
        while base.m == 0:
            base = generate(ModelSpec("er", 30, derive_seed(31, i, j, 1), p=0.3))
        return perturb_weights(base, derive_seed(32, i, j))

    for i in range(100):
        a, b, c = graph_at(i, 0), graph_at(i, 1), graph_at(i, 2)
        same = js_distance(a, a)
        assert same.distance <= 1e-9 and same.radicand >= -1e-12
        ab, ba = js_distance(a, b), js_distance(b, a)
        assert ab.distance == ba.distance
        assert ab.radicand >= -1e-12 and ab.distance >= 0.0
        bc, ac = js_distance(b, c), js_distance(a, c)
        assert ac.distance <= ab.distance + bc.distance + 1e-9
    print("criterion 09 PASS: identity/symmetry/nonnegativity on 100 pairs, "
          "triangle inequality on 100 triples")


def test_criterion_10_linear_time_scaling():
    """Purity is linear in n+m; the dense oracle is decisively not."""
    points = []
    radial_seconds = None
    for si, n in enumerate((10_000, 100_000, 1_000_000)):
        g = generate(model_spec("er", n, 10.0, derive_seed(42, si)))
        times = []
        for _ in range(3):
            t0 = time.perf_counter_ns()
            purity(g)
            times.append(time.perf_counter_ns() - t0)
        points.append((n + g.m, min(times)))
        if n == 1_000_000:
            t0 = time.perf_counter()
            estimate_entropy(g, RADIAL_PROJECTION)
            radial_seconds = time.perf_counter() - t0
    r2 = linear_fit_r2([p[0] for p in points], [p[1] for p in points])
    assert r2 >= 0.95
    assert radial_seconds < 2.0

    medians = []
    for si, n in enumerate((200, 400, 800)):
        g = generate(model_spec("er", n, 10.0, derive_seed(43, si)))
        times = []
        for _ in range(5):
            t0 = time.perf_counter_ns()
            exact_vnge(g)
            times.append(time.perf_counter_ns() - t0)
        medians.append(statistics.median(times))
    ratios = [medians[i + 1] / medians[i] for i in range(2)]
    assert all(r > 4.0 for r in ratios)
    print(f"criterion 10 PASS: purity fit r2={r2:.4f}, radial@1e6 "
          f"{radial_seconds * 1e3:.0f}ms, exact growth ratios "
          f"{ratios[0]:.1f}/{ratios[1]:.1f}")


def test_criterion_11_correlation_protocol():
    """50 graphs per model at n=500; radial Pearson r at least 0.9.

    The 0.9 threshold is a qualitative, implementer-chosen cut (the CSV
    flags it as such); the harness emits r for every estimator.
    """
    rs = {}
    for model in ("er", "ba", "ws"):
        text = correlation_study(model, n=500, count=50, seed=20250825)
        assert "implementer-chosen" in text
        for line in text.splitlines():
            if line.startswith("#"):
                continue
            cells = line.split(",")
            if len(cells) > 2 and cells[2] == "summary" and cells[5] == RADIAL_PROJECTION:
                rs[model] = float(cells[8])
    assert set(rs) == {"er", "ba", "ws"}
    assert all(r >= 0.9 for r in rs.values())
    print(f"criterion 11 PASS: radial r = " +
          ", ".join(f"{m}:{r:.4f}" for m, r in rs.items()))


def test_criterion_12_byte_identical_outputs(tmp_path):
    """Seeded commands reproduce byte-for-byte, including across thread counts."""
    p3 = tmp_path / "p3.txt"
    p3.write_text("0 1 1.0\n1 2 1.0\n")
    k3 = tmp_path / "k3.txt"
    k3.write_text("0 1 1.0\n1 2 1.0\n0 2 1.0\n")
    commands = [
        ["gen", "--model", "ba", "--n", "60", "--m-attach", "2", "--seed", "5",
         "--perturb-weights"],
        ["entropy", str(p3), "--exact"],
        ["jsdist", str(p3), str(k3)],
        ["error-sweep", "--model", "er", "--values", "4,8", "--n", "30",
         "--trials", "5", "--seed", "5"],
        ["correlation", "--model", "ws", "--n", "30", "--count", "6", "--seed", "5"],
        ["calibrate", "--model", "er", "--n", "30", "--count", "8", "--fast",
         "--seed", "5"],
    ]
    for ci, argv in enumerate(commands):
        outputs = []
        for ri, threads in enumerate((1, 1, 8)):
            out = tmp_path / f"cmd{ci}_run{ri}.txt"
            code = main([*argv, "--threads", str(threads), "--output", str(out)])
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2], f"command {argv} not reproducible"
    print(f"criterion 12 PASS: {len(commands)} commands byte-identical across "
          "reruns and --threads 1 vs 8")
