"""Hermitian matrix-valued Brownian motion and its eigenvalue process.

The matrix process has independent Brownian entries subject to the
Hermitian constraint: diagonal variance t, off-diagonal real and imaginary
parts each of variance t/2, so E|entry|^2 = t. Re-diagonalizing the exactly
sampled matrix on a time grid gives eigenvalue paths that are exact in
distribution; the pairwise-repulsion SDE structure of those paths (drift
slope 1, unit quadratic variation, unit carre-du-champ matrix) is verified
statistically rather than used as the generator, which keeps the matrix
route an independent oracle for the interacting-particle integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .diffusion import SamplePath, dyson_drift

DIAG_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class HermitianState:
    """A Hermitian matrix sampled at a fixed time."""

    matrix: np.ndarray
    time: float

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(m, m.conj().T, atol=1e-12):
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenFrame:
    """Ordered eigenvalues with a deterministically-phased eigenbasis."""

    eigenvalues: np.ndarray
    unitary: np.ndarray

    def __post_init__(self) -> None:
        lam = np.asarray(self.eigenvalues, dtype=float)
        u = np.asarray(self.unitary, dtype=complex)
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be in increasing order")
        n = lam.size
        if not np.allclose(u.conj().T @ u, np.eye(n), atol=DIAG_RESIDUAL_TOL):
            raise ValueError("basis is not unitary to tolerance")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "unitary", u)


def hermitian_increment_batch(
    n: int, dt: float, rng: np.random.Generator, size: int
) -> np.ndarray:
    """(size, n, n) independent Hermitian Brownian increments over dt."""
    out = np.zeros((size, n, n), dtype=complex)
    idx = np.arange(n)
    out[:, idx, idx] = math.sqrt(dt) * rng.standard_normal((size, n))
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        scale = math.sqrt(dt / 2.0)
        re = scale * rng.standard_normal((size, iu.size))
        im = scale * rng.standard_normal((size, iu.size))
        out[:, iu, ju] = re + 1j * im
        out[:, ju, iu] = re - 1j * im
    return out


def sample_hermitian_bm(
    n: int, t: float, rng: np.random.Generator
) -> HermitianState:
    """The matrix Brownian motion at a single time."""
    if n < 1:
        raise ValueError("dimension must be positive")
    if t <= 0:
        raise ValueError("time must be positive")
    return HermitianState(hermitian_increment_batch(n, t, rng, 1)[0], t)


def eigen_frame(matrix: np.ndarray) -> EigenFrame:
    """Diagonalize with eigenvalues ascending and a fixed phase convention:
    each eigenvector's largest-modulus component is made real positive."""
    m = np.asarray(matrix, dtype=complex)
    lam, u = np.linalg.eigh(m)
    for k in range(u.shape[1]):
        col = u[:, k]
        pivot = np.argmax(np.abs(col))
        phase = col[pivot] / abs(col[pivot])
        u[:, k] = col / phase
    residual = np.max(np.abs(u.conj().T @ m @ u - np.diag(lam)))
    if residual > DIAG_RESIDUAL_TOL:
        raise RuntimeError(f"diagonalization residual {residual} above tolerance")
    return EigenFrame(lam, u)


def _eigvalsh_batch(matrices: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues, closed form for 2x2 (hot path), LAPACK above."""
    n = matrices.shape[-1]
    if n == 1:
        return np.expand_dims(matrices[..., 0, 0].real, -1).copy()
    if n == 2:
        a = matrices[..., 0, 0].real
        d = matrices[..., 1, 1].real
        b = matrices[..., 0, 1]
        mid = 0.5 * (a + d)
        rad = np.sqrt(0.25 * (a - d) ** 2 + (b * b.conj()).real)
        return np.stack([mid - rad, mid + rad], axis=-1)
    return np.linalg.eigvalsh(matrices)


def eigen_path(
    n: int,
    t_end: float,
    n_steps: int,
    rng: np.random.Generator,
    seed_label: int | None = None,
) -> SamplePath:
    """Eigenvalue path of the matrix Brownian motion started from zero.

    States are recorded from the first grid time onward (at t = 0 all
    eigenvalues coincide); each grid state is exact in distribution.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    dt = t_end / n_steps
    xi = np.zeros((1, n, n), dtype=complex)
    times = np.empty(n_steps)
    states = np.empty((n_steps, n))
    for k in range(n_steps):
        xi += hermitian_increment_batch(n, dt, rng, 1)
        states[k] = _eigvalsh_batch(xi)[0]
        times[k] = (k + 1) * dt
    return SamplePath(
        times=times,
        states=states,
        seed=seed_label,
        step_size=dt,
        integrator="matrix-diagonalization",
    )


def eigen_terminal_batch(
    n: int, t: float, n_paths: int, rng: np.random.Generator
) -> np.ndarray:
    """Sorted eigenvalue samples of the matrix process at one time."""
    return _eigvalsh_batch(hermitian_increment_batch(n, t, rng, n_paths))


def eigen_trajectories(
    n: int,
    t_end: float,
    n_steps: int,
    n_paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """(n_paths, n_steps, n) eigenvalue trajectories of the matrix process
    on the grid dt, 2 dt, ..., t_end, exact in distribution at every time."""
    dt = t_end / n_steps
    xi = np.zeros((n_paths, n, n), dtype=complex)
    out = np.empty((n_paths, n_steps, n))
    for k in range(n_steps):
        xi += hermitian_increment_batch(n, dt, rng, n_paths)
        out[:, k, :] = _eigvalsh_batch(xi)
    return out


# ---------------------------------------------------------------------------
# SDE structure estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriftQVReport:
    """Regression and quadratic-variation summary of eigenvalue paths.

    The per-step eigenvalue change, scaled by 1/dt, is regressed against
    the pairwise repulsion sum; unit slope and zero intercept are the
    interacting-SDE prediction. ``qv_per_time`` is the realized quadratic
    variation per unit time (prediction: 1).
    """

    slope: float
    intercept: float
    slope_se: float
    intercept_se: float
    qv_per_time: float
    qv_se: float
    n_points: int
    dt: float
    gap_floor: float

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_ci95": [self.slope - 1.96 * self.slope_se,
                           self.slope + 1.96 * self.slope_se],
            "intercept_ci95": [self.intercept - 1.96 * self.intercept_se,
                               self.intercept + 1.96 * self.intercept_se],
            "qv_per_time": self.qv_per_time,
            "qv_ci95": [self.qv_per_time - 1.96 * self.qv_se,
                        self.qv_per_time + 1.96 * self.qv_se],
            "n_points": self.n_points,
            "dt": self.dt,
            "gap_floor": self.gap_floor,
        }


class _DriftQVAccumulator:
    """Streaming least squares + QV sums over masked path segments."""

    def __init__(self, dt: float, gap_floor: float):
        self.dt = dt
        self.gap_floor = gap_floor
        self.n = 0
        self.sp = 0.0
        self.sr = 0.0
        self.spp = 0.0
        self.spr = 0.0
        self.srr = 0.0
        self.qv_sum = 0.0
        self.qv_sumsq = 0.0

    def add(self, lam_prev: np.ndarray, lam_next: np.ndarray) -> None:
        """lam_prev, lam_next: (paths, N) consecutive grid states."""
        if lam_prev.shape[1] > 1:
            keep = np.min(np.diff(lam_prev, axis=1), axis=1) > self.gap_floor
        else:
            keep = np.ones(lam_prev.shape[0], dtype=bool)
        if not np.any(keep):
            return
        prev = lam_prev[keep]
        delta = lam_next[keep] - prev
        predictor = dyson_drift(prev).ravel()
        response = (delta / self.dt).ravel()
        self.n += predictor.size
        self.sp += float(predictor.sum())
        self.sr += float(response.sum())
        self.spp += float(predictor @ predictor)
        self.spr += float(predictor @ response)
        self.srr += float(response @ response)
        sq = (delta * delta).ravel()
        self.qv_sum += float(sq.sum())
        self.qv_sumsq += float(sq @ sq)

    def report(self) -> DriftQVReport:
        if self.n < 3:
            raise ValueError("insufficient filtered segments for the regression")
        n = float(self.n)
        denom = n * self.spp - self.sp**2
        if denom <= 0:
            # no predictor spread (single particle): intercept-only fit
            slope = 0.0
            intercept = self.sr / n
            rss = self.srr - n * intercept**2
            sigma2 = max(rss, 0.0) / (n - 1.0)
            qv_mean = self.qv_sum / n
            qv_var = max(self.qv_sumsq / n - qv_mean**2, 0.0)
            return DriftQVReport(
                slope=slope,
                intercept=intercept,
                slope_se=math.inf,
                intercept_se=math.sqrt(sigma2 / n),
                qv_per_time=qv_mean / self.dt,
                qv_se=math.sqrt(qv_var / n) / self.dt,
                n_points=self.n,
                dt=self.dt,
                gap_floor=self.gap_floor,
            )
        slope = (n * self.spr - self.sp * self.sr) / denom
        intercept = (self.sr - slope * self.sp) / n
        rss = (
            self.srr
            - 2.0 * slope * self.spr
            - 2.0 * intercept * self.sr
            + slope**2 * self.spp
            + 2.0 * slope * intercept * self.sp
            + n * intercept**2
        )
        sigma2 = max(rss, 0.0) / (n - 2.0)
        slope_se = math.sqrt(sigma2 * n / denom)
        intercept_se = math.sqrt(sigma2 * self.spp / denom)
        qv_mean = self.qv_sum / n
        qv_var = max(self.qv_sumsq / n - qv_mean**2, 0.0)
        return DriftQVReport(
            slope=slope,
            intercept=intercept,
            slope_se=slope_se,
            intercept_se=intercept_se,
            qv_per_time=qv_mean / self.dt,
            qv_se=math.sqrt(qv_var / n) / self.dt,
            n_points=self.n,
            dt=self.dt,
            gap_floor=self.gap_floor,
        )


def estimate_drift_qv(
    paths: Iterable[SamplePath],
    gap_factor: float = 10.0,
) -> DriftQVReport:
    """Drift regression and realized QV over a collection of grid paths.

    Paths must share their time grid. Segments whose starting minimal gap
    is below gap_factor * sqrt(dt) are excluded: the local-error scale of
    the repulsion drift explodes there.
    """
    acc: _DriftQVAccumulator | None = None
    grid: np.ndarray | None = None
    for path in paths:
        if acc is None:
            dt = float(path.times[1] - path.times[0])
            acc = _DriftQVAccumulator(dt, gap_factor * math.sqrt(dt))
            grid = path.times
        elif path.times.shape != grid.shape or not np.allclose(path.times, grid):
            raise ValueError("paths must share a common time grid")
        lam = path.states
        acc.add(lam[:-1], lam[1:])
    if acc is None:
        raise ValueError("no paths supplied")
    return acc.report()


def drift_qv_report(
    n: int,
    n_paths: int,
    n_steps: int,
    dt: float,
    rng: np.random.Generator,
    t_start: float = 0.25,
    gap_factor: float = 10.0,
    chunk: int = 4096,
) -> DriftQVReport:
    """Batched driver for the SDE-structure check.

    Spreads the spectrum by starting the matrix process at t_start, then
    evolves n_steps increments of size dt, streaming the regression sums
    chunk by chunk so memory stays flat.
    """
    acc = _DriftQVAccumulator(dt, gap_factor * math.sqrt(dt))
    done = 0
    while done < n_paths:
        size = min(chunk, n_paths - done)
        xi = hermitian_increment_batch(n, t_start, rng, size)
        lam_prev = _eigvalsh_batch(xi)
        for _ in range(n_steps):
            xi += hermitian_increment_batch(n, dt, rng, size)
            lam = _eigvalsh_batch(xi)
            acc.add(lam_prev, lam)
            lam_prev = lam
        done += size
    return acc.report()


def gamma_from_increments(
    start: np.ndarray, increments: np.ndarray, dt: float
) -> np.ndarray:
    """Mean of (U* dXi U)_ij (U* dXi U)_ji / dt along one matrix path.

    U is the phased eigenbasis of the state before each increment; for the
    Hermitian Brownian increments every entry has expectation 1.
    """
    n_steps = increments.shape[0]
    n = increments.shape[1]
    path = np.empty((n_steps, n, n), dtype=complex)
    acc = np.asarray(start, dtype=complex).copy()
    for k in range(n_steps):
        path[k] = acc
        acc += increments[k]
    _, u = np.linalg.eigh(path)
    rotated = np.einsum("kji,kjl,klm->kim", u.conj(), increments, u)
    return (rotated * np.swapaxes(rotated, 1, 2)).real.mean(axis=0) / dt


def estimate_gamma(
    n: int,
    n_steps: int,
    rng: np.random.Generator,
    dt: float = 1e-3,
    t_start: float = 1.0,
    conjugation: np.ndarray | None = None,
) -> np.ndarray:
    """Empirical carre-du-champ matrix of the eigenvalue process.

    ``conjugation``, if given, is a fixed unitary applied to every matrix
    increment before accumulation; by unitary invariance of the matrix
    process the estimates stay at 1.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    start = hermitian_increment_batch(n, t_start, rng, 1)[0]
    increments = hermitian_increment_batch(n, dt, rng, n_steps)
    if conjugation is not None:
        v = np.asarray(conjugation, dtype=complex)
        if not np.allclose(v.conj().T @ v, np.eye(n), atol=1e-10):
            raise ValueError("conjugation must be unitary")
        increments = np.einsum("ji,kjl,lm->kim", v.conj(), increments, v)
    return gamma_from_increments(start, increments, dt)
