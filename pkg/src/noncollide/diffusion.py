"""Noncolliding Brownian motions: densities, survival, and SDE integrators.

The transition density of Brownian motion absorbed on leaving the ordered
chamber y_1 < ... < y_N is the heat-kernel determinant

    f_N(t, y | x) = det[ (2 pi t)^(-1/2) exp(-(x_j - y_i)^2 / 2t) ],

and N_N(t, x) = integral of f_N over the chamber is the no-collision
probability. Conditioning N Brownian particles to avoid collision up to a
finite horizon gives a temporally inhomogeneous diffusion whose drift is
grad log N_N; letting the horizon go to infinity gives the Vandermonde
h-transform, whose drift is the pairwise repulsion sum 1/(y_i - y_j)
(Dyson's Brownian motion at beta = 2).

Densities are evaluated in log space and exponentiated at the API boundary;
the power t^(-N^2/2) and the squared Vandermonde factor underflow quickly
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import erf

from .verify import quadrature_integrate

ArrayLike = Sequence[float] | np.ndarray


@dataclass(frozen=True)
class ChamberConstants:
    """Normalization constants of the from-origin densities."""

    n: int
    c: float        # 2^(-N/2) / prod_{i<=N} Gamma(i/2)
    c_prime: float  # (2 pi)^(-N/2) / prod_{i<=N} Gamma(i)
    c_bar: float    # pi^(N/2) * prod_{i<=N} Gamma(i)/Gamma(i/2)


def chamber_constants(n: int) -> ChamberConstants:
    if n < 1:
        raise ValueError("dimension must be positive")
    g_half = math.prod(math.gamma(i / 2.0) for i in range(1, n + 1))
    g_int = math.prod(math.gamma(float(i)) for i in range(1, n + 1))
    return ChamberConstants(
        n=n,
        c=2.0 ** (-n / 2.0) / g_half,
        c_prime=(2.0 * math.pi) ** (-n / 2.0) / g_int,
        c_bar=math.pi ** (n / 2.0) * g_int / g_half,
    )


def _as_point(x: ArrayLike, strict: bool = True) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-d coordinate vector")
    if strict and np.any(np.diff(x) <= 0):
        raise ValueError(f"point {x.tolist()} is not strictly increasing")
    return x


def vandermonde_h(x: ArrayLike) -> float:
    """Product of pairwise differences prod_{i<j} (x_j - x_i)."""
    x = np.asarray(x, dtype=float)
    out = 1.0
    for i in range(x.size):
        for j in range(i + 1, x.size):
            out *= x[j] - x[i]
    return float(out)


def log_vandermonde_h(x: np.ndarray) -> float:
    out = 0.0
    for i in range(x.size):
        for j in range(i + 1, x.size):
            d = x[j] - x[i]
            if d <= 0:
                return -math.inf
            out += math.log(d)
    return out


def _log_km(t: float, x: np.ndarray, y: np.ndarray) -> float:
    """log of the heat-kernel determinant; -inf when it vanishes."""
    n = x.size
    a = (y[:, None] - x[None, :]) ** 2 / (2.0 * t)
    row_min = a.min(axis=1)
    det = float(np.linalg.det(np.exp(-(a - row_min[:, None]))))
    if det <= 0.0:
        return -math.inf
    return -0.5 * n * math.log(2.0 * math.pi * t) - float(row_min.sum()) + math.log(det)


def km_density(t: float, x: ArrayLike, y: ArrayLike) -> float:
    """Absorbing-chamber transition density (heat-kernel determinant)."""
    if t <= 0:
        raise ValueError("time must be positive")
    x = _as_point(x)
    y = _as_point(y)
    if x.size != y.size:
        raise ValueError("dimension mismatch")
    return math.exp(_log_km(t, x, y))


def survival(
    t: float,
    x: ArrayLike,
    method: str = "auto",
    rng: np.random.Generator | None = None,
    n_samples: int = 200_000,
    tol: float = 1e-7,
) -> float:
    """No-collision probability N_N(t, x) of the chamber Brownian motion.

    Methods: "quadrature" (N <= 3, adaptive, abs error below tol),
    "montecarlo" (any N, importance-corrected Gaussian sampling),
    "asymptotic" (small x/sqrt(t): h_N(x/sqrt(t)) / c_bar_N),
    "closed_form" (N <= 2), and "auto" which picks the cheapest exact
    route (closed form for N <= 2, quadrature for N = 3, Monte Carlo above).
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    x = _as_point(x)
    n = x.size
    if t == 0:
        return 1.0
    if method == "auto":
        if n <= 2:
            method = "closed_form"
        elif n == 3:
            method = "quadrature"
        else:
            method = "montecarlo"
    if method == "closed_form":
        if n == 1:
            return 1.0
        if n == 2:
            return float(erf((x[1] - x[0]) / (2.0 * math.sqrt(t))))
        raise ValueError("closed form available only for N <= 2")
    if method == "asymptotic":
        return vandermonde_h(x / math.sqrt(t)) / chamber_constants(n).c_bar
    if method == "quadrature":
        if n == 1:
            return 1.0
        if n > 3:
            raise ValueError("quadrature supported for N <= 3 only")
        width = 10.0 * math.sqrt(t)
        lo = float(x[0] - width)
        hi = float(x[-1] + width)
        return quadrature_integrate(
            lambda *ys: math.exp(_log_km(t, x, np.array(ys))), lo, hi, n, tol=tol
        )
    if method == "montecarlo":
        est, _ = survival_mc(t, x, rng, n_samples)
        return est
    raise ValueError(f"unknown survival method {method!r}")


def survival_mc(
    t: float,
    x: ArrayLike,
    rng: np.random.Generator | None,
    n_samples: int = 200_000,
) -> tuple[float, float]:
    """Monte Carlo survival estimate with its standard error.

    Proposes y_i = x_i + sqrt(t) xi_i independently; the indicator of
    ordered proposals times the determinant/product likelihood ratio is an
    unbiased estimator of the chamber integral.
    """
    if rng is None:
        raise ValueError("montecarlo survival needs an explicit generator")
    x = _as_point(x)
    n = x.size
    ys = x[None, :] + math.sqrt(t) * rng.standard_normal((n_samples, n))
    ordered = np.all(np.diff(ys, axis=1) > 0, axis=1)
    a = (ys[:, :, None] - x[None, None, :]) ** 2 / (2.0 * t)
    diag = np.diagonal(a, axis1=1, axis2=2)
    ratio = np.linalg.det(np.exp(-(a - diag[:, :, None])))
    vals = np.where(ordered, ratio, 0.0)
    est = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(n_samples))
    return est, stderr


def _survival_factor(tau: float, y: np.ndarray, method: str) -> float:
    """N_N(tau, y) with the tau = 0 limit handled."""
    if tau == 0:
        return 1.0
    return survival(tau, y, method=method)


def _is_origin(x: ArrayLike | None) -> bool:
    if x is None:
        return True
    x = np.asarray(x, dtype=float)
    return bool(np.all(x == 0.0))


def transition_inhomogeneous(
    s: float,
    x: ArrayLike | None,
    t: float,
    y: ArrayLike,
    horizon: float,
    survival_method: str = "auto",
) -> float:
    """Transition density of the walk conditioned to avoid collision up to
    the finite horizon T, in its diffusion limit.

    From the all-particles-at-origin state (s = 0 only):
        c_N T^(N(N-1)/4) t^(-N^2/2) exp(-|y|^2/2t) h_N(y) N_N(T-t, y);
    between chamber points:
        f_N(t-s, y|x) N_N(T-t, y) / N_N(T-s, x).
    """
    y = _as_point(y)
    n = y.size
    if not 0 <= s < t <= horizon:
        raise ValueError("need 0 <= s < t <= T")
    if _is_origin(x):
        if s != 0:
            raise ValueError("origin state allowed only at s = 0")
        cc = chamber_constants(n)
        log_g = (
            math.log(cc.c)
            + 0.25 * n * (n - 1) * math.log(horizon)
            - 0.5 * n * n * math.log(t)
            - float(y @ y) / (2.0 * t)
            + log_vandermonde_h(y)
        )
        surv = _survival_factor(horizon - t, y, survival_method)
        if surv <= 0:
            return 0.0
        return math.exp(log_g + math.log(surv))
    x = _as_point(x)
    if x.size != n:
        raise ValueError("dimension mismatch")
    num = _survival_factor(horizon - t, y, survival_method)
    den = _survival_factor(horizon - s, x, survival_method)
    if num <= 0:
        return 0.0
    return math.exp(
        _log_km(t - s, x, y) + math.log(num) - math.log(den)
    )


def transition_homogeneous(
    s: float,
    x: ArrayLike | None,
    t: float,
    y: ArrayLike,
) -> float:
    """Transition density of the infinite-horizon (h-transform) process.

    From the origin: c'_N t^(-N^2/2) exp(-|y|^2/2t) h_N(y)^2; between
    chamber points: f_N(t-s, y|x) h_N(y) / h_N(x).
    """
    y = _as_point(y)
    n = y.size
    if not 0 <= s < t:
        raise ValueError("need 0 <= s < t")
    if _is_origin(x):
        if s != 0:
            raise ValueError("origin state allowed only at s = 0")
        cc = chamber_constants(n)
        return math.exp(
            math.log(cc.c_prime)
            - 0.5 * n * n * math.log(t)
            - float(y @ y) / (2.0 * t)
            + 2.0 * log_vandermonde_h(y)
        )
    x = _as_point(x)
    if x.size != n:
        raise ValueError("dimension mismatch")
    return math.exp(
        _log_km(t - s, x, y) + log_vandermonde_h(y) - log_vandermonde_h(x)
    )


def drift_inhomogeneous(
    t: float,
    x: ArrayLike,
    horizon: float,
    survival_method: str = "auto",
) -> np.ndarray:
    """Drift of the finite-horizon process: grad_x log N_N(T - t, x),
    by central finite differences."""
    x = _as_point(x)
    if t >= horizon:
        raise ValueError("drift defined for t < T only")
    tau = horizon - t
    n = x.size
    if n == 1:
        return np.zeros(1)
    h = 1e-5 * max(1.0, float(np.linalg.norm(x)))
    out = np.empty(n)
    for i in range(n):
        up = x.copy()
        dn = x.copy()
        up[i] += h
        dn[i] -= h
        # nudged points may leave the chamber when gaps are ~h; the
        # determinant formula extends continuously so relax strictness
        s_up = _survival_signed(tau, up, survival_method)
        s_dn = _survival_signed(tau, dn, survival_method)
        if s_up <= 0 or s_dn <= 0:
            raise ValueError("survival vanished at finite-difference probe")
        out[i] = (math.log(s_up) - math.log(s_dn)) / (2.0 * h)
    return out


def _survival_signed(tau: float, x: np.ndarray, method: str) -> float:
    """Survival evaluated without the strict-ordering precondition."""
    if np.any(np.diff(x) <= 0):
        # antisymmetric continuation: vanishes on the boundary
        return 0.0
    if tau == 0:
        return 1.0
    return survival(tau, x, method=method)


def asymptotic_drift(x: ArrayLike) -> np.ndarray:
    """Long-horizon drift limit: sum_{j != i} 1 / (x_i - x_j)."""
    x = _as_point(x)
    n = x.size
    out = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if j != i:
                out[i] += 1.0 / (x[i] - x[j])
    return out


@dataclass(frozen=True)
class SamplePath:
    """A discretized trajectory with strictly ordered states."""

    times: np.ndarray
    states: np.ndarray
    seed: int | None
    step_size: float
    integrator: str

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if states.ndim != 2 or times.ndim != 1 or states.shape[0] != times.size:
            raise ValueError("states must be (len(times), N)")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if states.shape[1] > 1 and np.any(np.diff(states, axis=1) <= 0):
            raise ValueError("states must stay strictly ordered")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def n_particles(self) -> int:
        return self.states.shape[1]

    def terminal(self) -> np.ndarray:
        return self.states[-1]


# ---------------------------------------------------------------------------
# Euler-Maruyama with per-path dyadic step halving
# ---------------------------------------------------------------------------

MAX_HALVINGS = 40


def _advance_batch(
    states: np.ndarray,
    t0: float,
    dt: float,
    drift: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rng: np.random.Generator,
) -> None:
    """Advance every path by one grid step of size dt, in place.

    A proposed move that breaks the strict ordering is retried with half
    the step (fresh noise); sub-step bookkeeping is exact (integer dyadic
    units), so each path consumes exactly dt.
    """
    n_paths = states.shape[0]
    unit = dt / float(1 << MAX_HALVINGS)
    remaining = np.full(n_paths, 1 << MAX_HALVINGS, dtype=np.int64)
    h_units = np.full(n_paths, 1 << MAX_HALVINGS, dtype=np.int64)
    while True:
        active = np.nonzero(remaining > 0)[0]
        if active.size == 0:
            return
        h = h_units[active] * unit
        consumed = (np.int64(1 << MAX_HALVINGS) - remaining[active]) * unit
        x = states[active]
        b = drift(x, t0 + consumed)
        prop = (
            x
            + b * h[:, None]
            + np.sqrt(h)[:, None] * rng.standard_normal(x.shape)
        )
        ok = (
            np.all(np.diff(prop, axis=1) > 0, axis=1)
            if prop.shape[1] > 1
            else np.ones(active.size, dtype=bool)
        )
        good = active[ok]
        states[good] = prop[ok]
        remaining[good] -= h_units[good]
        h_units[good] = np.minimum(h_units[good], np.maximum(remaining[good], 1))
        bad = active[~ok]
        if bad.size:
            if np.any(h_units[bad] == 1):
                raise RuntimeError(
                    "step-size underflow: ordering could not be restored "
                    f"after {MAX_HALVINGS} halvings"
                )
            h_units[bad] //= 2


def dyson_drift(states: np.ndarray, _t: np.ndarray | None = None) -> np.ndarray:
    """Pairwise repulsion sum_{j != i} 1/(x_i - x_j), batched over rows."""
    diff = states[:, :, None] - states[:, None, :]
    with np.errstate(divide="ignore"):
        inv = np.where(diff != 0.0, 1.0 / diff, 0.0)
    return inv.sum(axis=2)


def _inhomogeneous_drift_batch(
    horizon: float, survival_method: str
) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Vectorized finite-difference drift for the finite-horizon process."""

    def drift(states: np.ndarray, t_local: np.ndarray) -> np.ndarray:
        n = states.shape[1]
        tau = np.maximum(horizon - t_local, 1e-300)
        if n == 1:
            return np.zeros_like(states)
        if n == 2:
            gap = states[:, 1] - states[:, 0]
            h = 1e-5 * np.maximum(1.0, np.linalg.norm(states, axis=1))
            h = np.minimum(h, 0.5 * gap)  # keep both probes inside the chamber
            scale = 2.0 * np.sqrt(tau)
            up = np.log(erf((gap + h) / scale))
            dn = np.log(erf((gap - h) / scale))
            g = (up - dn) / (2.0 * h)
            return np.stack([-g, g], axis=1)
        out = np.empty_like(states)
        for k in range(states.shape[0]):
            out[k] = drift_inhomogeneous(
                horizon - tau[k], states[k], horizon, survival_method
            )
        return out

    return drift


def sample_from_origin(
    n: int,
    t0: float,
    size: int,
    rng: np.random.Generator,
    h_power: int = 2,
    extra_weight: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Exact draws from the from-origin chamber density at a small time.

    Target (up to normalization): exp(-|y|^2/2 t0) * h_N(y)^h_power *
    extra_weight(y), with values of extra_weight in [0, 1]. Proposals are
    sorted iid N(0, 2 t0) vectors; inflating the proposal variance makes
    the acceptance ratio bounded:

        ratio = h^p * extra * exp(-|y|^2 / 4 t0)
             <= (2 r)^(p K) exp(-r^2 / 4 t0) =: f(r),   K = N(N-1)/2,

    maximized at r* = sqrt(2 p K t0).
    """
    if n < 1 or size < 1:
        raise ValueError("need n >= 1 and size >= 1")
    pk = h_power * n * (n - 1) // 2
    if pk == 0:
        bound = 1.0
    else:
        r_star = math.sqrt(2.0 * pk * t0)
        bound = (2.0 * r_star) ** pk * math.exp(-pk / 2.0)
    out = np.empty((size, n))
    filled = 0
    block = max(4 * size, 1024)
    while filled < size:
        prop = np.sort(
            math.sqrt(2.0 * t0) * rng.standard_normal((block, n)), axis=1
        )
        r2 = np.sum(prop * prop, axis=1)
        log_ratio = np.full(block, -r2 / (4.0 * t0))
        if n > 1:
            gaps_ok = np.all(np.diff(prop, axis=1) > 0, axis=1)
            hs = np.ones(block)
            for i in range(n):
                for j in range(i + 1, n):
                    hs *= prop[:, j] - prop[:, i]
            with np.errstate(divide="ignore", invalid="ignore"):
                log_ratio += h_power * np.where(gaps_ok, np.log(np.abs(hs)), -np.inf)
        accept = rng.random(block) < np.exp(log_ratio) / bound
        if extra_weight is not None and np.any(accept):
            idx = np.nonzero(accept)[0]
            weights = extra_weight(prop[idx])
            accept[idx] = rng.random(idx.size) < weights
        got = prop[accept]
        take = min(size - filled, got.shape[0])
        out[filled : filled + take] = got[:take]
        filled += take
    return out


def _grid(t_start: float, t_end: float, n_steps: int) -> np.ndarray:
    return np.linspace(t_start, t_end, n_steps + 1)


def simulate_dyson(
    x0: ArrayLike | None,
    t_end: float,
    n_steps: int,
    rng: np.random.Generator,
    n: int | None = None,
    seed_label: int | None = None,
) -> SamplePath:
    """Euler-Maruyama path of the pairwise-repulsion SDE
    dY_i = dB_i + sum_{j != i} dt / (Y_i - Y_j).

    With x0 None (all particles at the origin) the first grid state is
    drawn exactly from the from-origin density at t = dt, avoiding the
    singular drift at the start.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    dt = t_end / n_steps
    if _is_origin(x0):
        if n is None:
            if x0 is None:
                raise ValueError("dimension n required for an origin start")
            n = len(np.atleast_1d(np.asarray(x0)))
        state = sample_from_origin(n, dt, 1, rng, h_power=2)
        times = [dt]
        first_step = 1
    else:
        x0 = _as_point(x0)
        n = x0.size
        state = x0[None, :].copy()
        times = [0.0]
        first_step = 0
    states = [state[0].copy()]
    for k in range(first_step, n_steps):
        _advance_batch(state, k * dt, dt, dyson_drift, rng)
        states.append(state[0].copy())
        times.append((k + 1) * dt)
    return SamplePath(
        times=np.array(times),
        states=np.array(states),
        seed=seed_label,
        step_size=dt,
        integrator="euler-maruyama/dyson",
    )


def simulate_inhomogeneous(
    n: int,
    horizon: float,
    n_steps: int,
    rng: np.random.Generator,
    survival_method: str = "auto",
    seed_label: int | None = None,
) -> SamplePath:
    """Euler-Maruyama path of the finite-horizon conditioned process,
    started from the exact from-origin law at t = dt."""
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    dt = horizon / n_steps
    surv = _origin_survival_weight(horizon, dt, survival_method)
    state = sample_from_origin(n, dt, 1, rng, h_power=1, extra_weight=surv)
    drift = _inhomogeneous_drift_batch(horizon, survival_method)
    times = [dt]
    states = [state[0].copy()]
    for k in range(1, n_steps):
        _advance_batch(state, k * dt, dt, drift, rng)
        states.append(state[0].copy())
        times.append((k + 1) * dt)
    return SamplePath(
        times=np.array(times),
        states=np.array(states),
        seed=seed_label,
        step_size=dt,
        integrator="euler-maruyama/finite-horizon",
    )


def _origin_survival_weight(
    horizon: float, t0: float, survival_method: str
) -> Callable[[np.ndarray], np.ndarray]:
    def weight(points: np.ndarray) -> np.ndarray:
        tau = horizon - t0
        if tau <= 0:
            return np.ones(points.shape[0])
        if points.shape[1] == 2:
            return erf((points[:, 1] - points[:, 0]) / (2.0 * math.sqrt(tau)))
        return np.array(
            [_survival_factor(tau, p, survival_method) for p in points]
        )

    return weight


def dyson_terminal_batch(
    n: int,
    t_end: float,
    n_steps: int,
    n_paths: int,
    rng: np.random.Generator,
    x0: ArrayLike | None = None,
) -> np.ndarray:
    """Terminal states of many independent Dyson paths (vectorized)."""
    dt = t_end / n_steps
    if _is_origin(x0):
        states = sample_from_origin(n, dt, n_paths, rng, h_power=2)
        first_step = 1
    else:
        x0 = _as_point(x0)
        states = np.tile(x0, (n_paths, 1))
        first_step = 0
    for k in range(first_step, n_steps):
        _advance_batch(states, k * dt, dt, dyson_drift, rng)
    return states


def dyson_trajectories(
    n: int,
    t_end: float,
    n_steps: int,
    n_paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """(n_paths, n_steps, n) from-origin trajectories on the grid
    dt, 2 dt, ..., t_end."""
    dt = t_end / n_steps
    states = sample_from_origin(n, dt, n_paths, rng, h_power=2)
    out = np.empty((n_paths, n_steps, n))
    out[:, 0, :] = states
    for k in range(1, n_steps):
        _advance_batch(states, k * dt, dt, dyson_drift, rng)
        out[:, k, :] = states
    return out


def inhomogeneous_trajectories(
    n: int,
    horizon: float,
    t_end: float,
    n_steps: int,
    n_paths: int,
    rng: np.random.Generator,
    survival_method: str = "auto",
) -> np.ndarray:
    """(n_paths, n_steps, n) finite-horizon trajectories up to t_end <= T."""
    if not 0 < t_end <= horizon:
        raise ValueError("need 0 < t_end <= T")
    dt = t_end / n_steps
    weight = _origin_survival_weight(horizon, dt, survival_method)
    states = sample_from_origin(n, dt, n_paths, rng, h_power=1, extra_weight=weight)
    drift = _inhomogeneous_drift_batch(horizon, survival_method)
    out = np.empty((n_paths, n_steps, n))
    out[:, 0, :] = states
    for k in range(1, n_steps):
        _advance_batch(states, k * dt, dt, drift, rng)
        out[:, k, :] = states
    return out


def inhomogeneous_terminal_batch(
    n: int,
    horizon: float,
    t_end: float,
    n_steps: int,
    n_paths: int,
    rng: np.random.Generator,
    survival_method: str = "auto",
) -> np.ndarray:
    """Terminal states at t_end <= T of many finite-horizon paths."""
    if not 0 < t_end <= horizon:
        raise ValueError("need 0 < t_end <= T")
    dt = t_end / n_steps
    surv = _origin_survival_weight(horizon, dt, survival_method)
    states = sample_from_origin(n, dt, n_paths, rng, h_power=1, extra_weight=surv)
    drift = _inhomogeneous_drift_batch(horizon, survival_method)
    for k in range(1, n_steps):
        _advance_batch(states, k * dt, dt, drift, rng)
    return states


def marginal_cdf_from_origin(
    n: int,
    t: float,
    coord: int,
    kind: str = "homogeneous",
    horizon: float | None = None,
    lo: float | None = None,
    hi: float | None = None,
    grid_points: int = 1201,
    survival_method: str = "auto",
) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of one coordinate of the from-origin law at time t (N = 2 only).

    Integrates the joint density over the other coordinate on a grid, then
    accumulates. Used as the reference distribution in KS tests.
    """
    if n != 2:
        raise ValueError("marginals implemented for N = 2")
    if coord not in (0, 1):
        raise ValueError("coord must be 0 or 1")
    if kind == "homogeneous":
        base = lambda a, b: transition_homogeneous(0.0, None, t, np.array([a, b]))
    elif kind == "inhomogeneous":
        if horizon is None:
            raise ValueError("inhomogeneous marginal needs the horizon")
        base = lambda a, b: transition_inhomogeneous(
            0.0, None, t, np.array([a, b]), horizon, survival_method
        )
    else:
        raise ValueError(f"unknown kind {kind!r}")

    def joint(a: float, b: float) -> float:
        return base(a, b) if a < b else 0.0

    width = 6.0 * math.sqrt(t) * math.sqrt(n)
    lo = -width if lo is None else lo
    hi = width if hi is None else hi
    xs = np.linspace(lo, hi, grid_points)
    dens = np.empty(grid_points)
    for k, v in enumerate(xs):
        if coord == 0:
            val, _ = integrate.quad(
                lambda b: joint(v, b), v, hi + 2.0, epsabs=1e-10, limit=200
            )
        else:
            val, _ = integrate.quad(
                lambda a: joint(a, v), lo - 2.0, v, epsabs=1e-10, limit=200
            )
        dens[k] = val
    cum = integrate.cumulative_trapezoid(dens, xs, initial=0.0)
    total = cum[-1]
    if not 0.9 < total < 1.1:
        raise RuntimeError(f"marginal mass {total} far from 1; widen the grid")
    cum = cum / total

    def cdf(q: np.ndarray) -> np.ndarray:
        return np.interp(np.asarray(q, dtype=float), xs, cum, left=0.0, right=1.0)

    return cdf
