"""Closed-form quadratic entropy estimators.

Each estimator is a scalar function of (n, purity) and, where required,
lambda_max — never of the full spectrum — so a single SpectralSummary
feeds all of them without recomputation:

  finger             -ln(lam_max) * (1 - purity)            under-estimates
  taylor             -(n/2) * purity + ln n - 1/2           may go negative
  modified_taylor    sigma * (purity - 1/n) + ln n          over-estimates
  radial_projection  entropy of the radial surrogate spectrum (no lam_max)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidSpecError
from .graph import Graph, SpectralSummary
from .spectral import DEFAULT_TOL, DENSE_LIMIT_DEFAULT, exact_vnge, spectral_summary

EXACT = "exact"
FINGER = "finger"
TAYLOR = "taylor"
MODIFIED_TAYLOR = "modified_taylor"
RADIAL_PROJECTION = "radial_projection"

# The four quadratic estimators, in canonical order.
QUADRATIC_METHODS = (FINGER, TAYLOR, MODIFIED_TAYLOR, RADIAL_PROJECTION)
ALL_METHODS = (EXACT,) + QUADRATIC_METHODS

_SLACK = 1e-12


@dataclass(frozen=True)
class EntropyEstimate:
    """One estimator evaluation: method name, value in nats, audit inputs."""

    method: str
    value: float
    inputs_used: dict


def _check_range(name: str, value: float, lo: float, hi: float):
    if not (lo - _SLACK <= value <= hi + _SLACK):
        raise DomainError(f"{name}={value!r} outside [{lo!r}, {hi!r}]")


def _xlnx(x: float) -> float:
    # 0 ln 0 := 0 by explicit branch, not by floating-point limits.
    return 0.0 if x == 0.0 else x * math.log(x)


def finger(n: int, purity: float, lam_max: float) -> EntropyEstimate:
    """Under-estimating approximation -ln(lam_max) * (1 - purity)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_range("purity", purity, 1.0 / n, 1.0)
    _check_range("lambda_max", lam_max, 1.0 / n, 1.0)
    value = -math.log(lam_max) * (1.0 - purity) + 0.0
    return EntropyEstimate(FINGER, value, {"n": n, "purity": purity, "lambda_max": lam_max})


def taylor(n: int, purity: float, clamped: bool = False) -> EntropyEstimate:
    """Second-order expansion -(n/2) * purity + ln n - 1/2.

    The raw value is reported even when negative (the error blows up as
    lambda_max approaches 1); pass clamped=True to clip into [0, ln n].
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_range("purity", purity, 1.0 / n, 1.0)
    ln_n = math.log(n)
    value = -(n / 2.0) * purity + ln_n - 0.5
    if clamped:
        value = min(max(value, 0.0), ln_n)
    return EntropyEstimate(TAYLOR, value, {"n": n, "purity": purity})


def sigma_coefficient(n: int, lam_max: float) -> float:
    """Slope sigma = (-n*lam*ln(n*lam) + n*lam - 1) / (n*(lam - 1/n)^2).

    Evaluated via e = n*lam - 1 and phi(e) = (1+e)*log1p(e) - e as
    sigma = -n*phi(e)/e^2, which stays accurate as lam approaches 1/n
    (the naive form loses all precision to cancellation there).
    """
    e = n * lam_max - 1.0
    phi = (1.0 + e) * math.log1p(e) - e
    return -n * phi / (e * e)


def modified_taylor(n: int, purity: float, lam_max: float) -> EntropyEstimate:
    """Over-estimating approximation sigma * (purity - 1/n) + ln n.

    At lam_max = 1/n (within 1e-12) sigma is 0/0 but the uniform
    spectrum forces the entropy to ln n exactly, so that value is
    returned by explicit special case.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_range("purity", purity, 1.0 / n, 1.0)
    _check_range("lambda_max", lam_max, 1.0 / n, 1.0)
    ln_n = math.log(n)
    inputs = {"n": n, "purity": purity, "lambda_max": lam_max, "sigma": None}
    if abs(lam_max - 1.0 / n) <= 1e-12:
        return EntropyEstimate(MODIFIED_TAYLOR, ln_n, inputs)
    sigma = sigma_coefficient(n, lam_max)
    inputs["sigma"] = sigma
    value = sigma * (purity - 1.0 / n) + ln_n
    return EntropyEstimate(MODIFIED_TAYLOR, value, inputs)


def radial_projection(n: int, purity: float) -> EntropyEstimate:
    """Entropy of the two-level surrogate spectrum (a, b, ..., b).

    The surrogate lies on the sphere of radius kappa = sqrt(purity - 1/n)
    around the uniform point, matching the input's distance from it, so
    no lambda_max is needed. Exact at purity = 1/n (gives ln n) and at
    purity = 1 (gives 0).
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    _check_range("purity", purity, 1.0 / n, 1.0)
    kappa = math.sqrt(max(purity - 1.0 / n, 0.0))
    a = math.sqrt((n - 1.0) / n) * kappa + 1.0 / n
    b = -kappa / math.sqrt((n - 1.0) * n) + 1.0 / n
    if b < 0.0:
        # purity <= 1 guarantees b >= 0 up to rounding; b = 0 exactly at purity = 1.
        if b < -_SLACK:
            raise DomainError(f"surrogate tail weight {b!r} negative beyond slack")
        b = 0.0
    value = -_xlnx(a) - (n - 1.0) * _xlnx(b) + 0.0
    return EntropyEstimate(
        RADIAL_PROJECTION, value, {"n": n, "purity": purity, "kappa": kappa}
    )


def quadratic_estimates(summary: SpectralSummary) -> dict[str, EntropyEstimate]:
    """Evaluate all four quadratic estimators from one summary."""
    n, p, lam = summary.n, summary.purity, summary.lambda_max
    if lam is None:
        raise DomainError("summary has no lambda_max; finger/modified_taylor need it")
    return {
        FINGER: finger(n, p, lam),
        TAYLOR: taylor(n, p),
        MODIFIED_TAYLOR: modified_taylor(n, p, lam),
        RADIAL_PROJECTION: radial_projection(n, p),
    }


def estimate_entropy(
    g: Graph,
    method: str,
    summary: SpectralSummary | None = None,
    dense_limit: int = DENSE_LIMIT_DEFAULT,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> EntropyEstimate:
    """Evaluate one entropy method on a graph.

    `method` is "exact" or one of the quadratic estimators; a
    precomputed summary is reused when it carries what the method needs.
    """
    if method == EXACT:
        return EntropyEstimate(EXACT, exact_vnge(g, dense_limit), {"n": g.n})
    if method not in QUADRATIC_METHODS:
        raise InvalidSpecError(f"unknown entropy method {method!r}")
    needs_lam = method in (FINGER, MODIFIED_TAYLOR)
    if summary is None or (needs_lam and summary.lambda_max is None):
        summary = spectral_summary(
            g,
            want_lambda_max=needs_lam,
            dense_limit=dense_limit,
            tol=tol,
            max_iter=max_iter,
        )
    n, p = summary.n, summary.purity
    if method == FINGER:
        return finger(n, p, summary.lambda_max)
    if method == TAYLOR:
        return taylor(n, p)
    if method == MODIFIED_TAYLOR:
        return modified_taylor(n, p, summary.lambda_max)
    return radial_projection(n, p)
