"""Statistical and numerical verification utilities.

Thin, deterministic wrappers around scipy's KS tests and adaptive
quadrature, returning a uniform ``TestReport`` record that the acceptance
suite and the CLI both consume. All tests are pure functions of their
inputs; randomness always enters through explicit seeds upstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats

P_VALUE_FLOOR = 0.01


@dataclass(frozen=True)
class TestReport:
    """Outcome of one verification check."""

    __test__ = False  # not a pytest collection target

    name: str
    statistic: float
    threshold: float
    passed: bool
    p_value: float | None = None
    sample_sizes: tuple[int, ...] = ()
    seeds: tuple[int, ...] = ()
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "passed": bool(self.passed),
            "p_value": self.p_value,
            "sample_sizes": list(self.sample_sizes),
            "seeds": list(self.seeds),
            "detail": self.detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def ks_two_sample(
    a: Sequence[float],
    b: Sequence[float],
    name: str = "ks_two_sample",
    p_floor: float = P_VALUE_FLOOR,
    seeds: tuple[int, ...] = (),
) -> TestReport:
    """Two-sample Kolmogorov-Smirnov test with asymptotic p-value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be nonempty")
    result = stats.ks_2samp(a, b, method="asymp")
    return TestReport(
        name=name,
        statistic=float(result.statistic),
        threshold=p_floor,
        passed=bool(result.pvalue > p_floor),
        p_value=float(result.pvalue),
        sample_sizes=(a.size, b.size),
        seeds=seeds,
        detail="pass iff p_value > threshold",
    )


def ks_one_sample(
    a: Sequence[float],
    cdf: Callable[[np.ndarray], np.ndarray],
    name: str = "ks_one_sample",
    statistic_threshold: float = 0.02,
    seeds: tuple[int, ...] = (),
) -> TestReport:
    """KS distance between a sample and a (monotone) model CDF."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise ValueError("sample must be nonempty")
    xs = np.sort(a)
    probe = cdf(xs)
    probe = np.asarray(probe, dtype=float)
    if np.any(np.diff(probe) < -1e-12):
        raise ValueError("cdf probe is not monotone on the sample range")
    n = a.size
    upper = np.arange(1, n + 1) / n - probe
    lower = probe - np.arange(0, n) / n
    statistic = float(max(upper.max(), lower.max()))
    p_value = float(stats.kstwo.sf(statistic, n))
    return TestReport(
        name=name,
        statistic=statistic,
        threshold=statistic_threshold,
        passed=bool(statistic < statistic_threshold),
        p_value=p_value,
        sample_sizes=(n,),
        seeds=seeds,
        detail="pass iff statistic < threshold",
    )


def quadrature_integrate(
    f: Callable[..., float],
    lo: float,
    hi: float,
    ndim: int,
    tol: float = 1e-8,
) -> float:
    """Integral of f over the ordered region lo <= y_1 < ... < y_ndim <= hi.

    f takes the coordinates as separate float arguments. Supported up to
    three dimensions (adaptive Gauss-Kronrod, nested for the ordering
    constraint); raises if the reported error estimate exceeds tol.
    """
    if ndim == 1:
        value, err = integrate.quad(f, lo, hi, epsabs=tol * 0.1, limit=200)
    elif ndim == 2:
        value, err = integrate.dblquad(
            lambda y2, y1: f(y1, y2),
            lo,
            hi,
            lambda y1: y1,
            hi,
            epsabs=tol * 0.1,
        )
    elif ndim == 3:
        value, err = integrate.tplquad(
            lambda y3, y2, y1: f(y1, y2, y3),
            lo,
            hi,
            lambda y1: y1,
            hi,
            lambda y1, y2: y2,
            hi,
            epsabs=tol * 0.1,
        )
    else:
        raise ValueError(f"quadrature supports 1 to 3 dimensions, got {ndim}")
    if not np.isfinite(value) or err > tol:
        raise RuntimeError(
            f"quadrature did not converge: estimate {value}, error {err} > {tol}"
        )
    return float(value)


def grid_cdf(
    density: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    n_points: int = 2001,
    normalize: bool = True,
) -> Callable[[np.ndarray], np.ndarray]:
    """Tabulate a 1-d density on a uniform grid and return its CDF.

    The density is integrated by the trapezoid rule; outside [lo, hi] the
    CDF saturates at 0 / 1.
    """
    xs = np.linspace(lo, hi, n_points)
    ys = np.asarray(density(xs), dtype=float)
    cum = integrate.cumulative_trapezoid(ys, xs, initial=0.0)
    if normalize:
        if cum[-1] <= 0:
            raise ValueError("density integrates to zero on the grid")
        cum = cum / cum[-1]

    def cdf(q: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(q, dtype=float), xs, cum, left=0.0, right=1.0)

    return cdf


def chi_square_counts(
    observed: Sequence[int],
    probabilities: Sequence[float],
    name: str = "chi_square",
    p_floor: float = P_VALUE_FLOOR,
    seeds: tuple[int, ...] = (),
) -> TestReport:
    """Pearson chi-square test of category counts against exact weights."""
    observed = np.asarray(observed, dtype=float)
    probabilities = np.asarray(probabilities, dtype=float)
    if observed.shape != probabilities.shape:
        raise ValueError("counts and probabilities must align")
    total = observed.sum()
    expected = probabilities * total
    keep = expected > 0
    if not np.all(keep) and np.any(observed[~keep] > 0):
        raise ValueError("observed mass on zero-probability category")
    statistic, p_value = stats.chisquare(observed[keep], expected[keep])
    return TestReport(
        name=name,
        statistic=float(statistic),
        threshold=p_floor,
        passed=bool(p_value > p_floor),
        p_value=float(p_value),
        sample_sizes=(int(total),),
        seeds=seeds,
        detail="pass iff p_value > threshold",
    )
