import math

import numpy as np
import pytest

from noncollide.diffusion import (
    ChamberConstants,
    SamplePath,
    asymptotic_drift,
    chamber_constants,
    drift_inhomogeneous,
    dyson_terminal_batch,
    dyson_trajectories,
    inhomogeneous_trajectories,
    km_density,
    log_vandermonde_h,
    marginal_cdf_from_origin,
    sample_from_origin,
    simulate_dyson,
    simulate_inhomogeneous,
    survival,
    survival_mc,
    transition_homogeneous,
    transition_inhomogeneous,
    vandermonde_h,
)


def test_chamber_constants():
    c2 = chamber_constants(2)
    assert c2.c == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-14)
    assert c2.c_prime == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)
    assert c2.c_bar == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    c1 = chamber_constants(1)
    assert c1.c == pytest.approx((2.0 * math.pi) ** -0.5, rel=1e-14)
    assert c1.c_prime == pytest.approx((2.0 * math.pi) ** -0.5, rel=1e-14)
    with pytest.raises(ValueError):
        chamber_constants(0)


def test_vandermonde_h():
    assert vandermonde_h([3.0]) == 1.0
    assert vandermonde_h([0.0, 2.0]) == 2.0
    assert vandermonde_h([0.0, 1.0, 3.0]) == 6.0
    assert log_vandermonde_h(np.array([1.0, 1.0])) == -math.inf
    # antisymmetry on raw vectors
    assert vandermonde_h([2.0, 0.0]) == -2.0


def test_vandermonde_harmonicity():
    # h is harmonic: the finite-difference Laplacian vanishes to O(step^2)
    rng = np.random.default_rng(2)
    step = 1e-4
    for n in (2, 3, 4):
        for _ in range(20):
            x = np.sort(rng.uniform(-2, 2, n))
            if np.min(np.diff(x)) < 0.1:
                continue
            lap = 0.0
            for i in range(n):
                up = x.copy()
                dn = x.copy()
                up[i] += step
                dn[i] -= step
                lap += vandermonde_h(up) + vandermonde_h(dn) - 2 * vandermonde_h(x)
            lap /= step * step
            assert abs(lap) < 1e-2 * max(1.0, abs(vandermonde_h(x)))


def test_km_density_examples():
    assert km_density(1.0, [0.0], [0.0]) == pytest.approx(
        (2 * math.pi) ** -0.5, rel=1e-12
    )
    assert km_density(1.0, [0.0, 2.0], [0.0, 2.0]) == pytest.approx(
        (1.0 - math.exp(-4.0)) / (2.0 * math.pi), rel=1e-12
    )
    with pytest.raises(ValueError):
        km_density(0.0, [0.0], [0.0])
    with pytest.raises(ValueError):
        km_density(1.0, [2.0, 0.0], [0.0, 1.0])


def test_km_density_symmetry_and_positivity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        t = float(rng.uniform(0.05, 3.0))
        x = np.sort(rng.uniform(-3, 3, n))
        y = np.sort(rng.uniform(-3, 3, n))
        if n > 1 and (np.min(np.diff(x)) <= 0 or np.min(np.diff(y)) <= 0):
            continue
        f_xy = km_density(t, x, y)
        f_yx = km_density(t, y, x)
        assert f_xy >= 0.0
        assert f_xy == pytest.approx(f_yx, rel=1e-9, abs=1e-300)


def test_survival_methods():
    assert survival(0.7, [1.0]) == 1.0
    exact = math.erf(1.0)
    assert survival(1.0, [0.0, 2.0], method="closed_form") == pytest.approx(exact)
    assert survival(1.0, [0.0, 2.0], method="quadrature") == pytest.approx(
        exact, abs=1e-7
    )
    approx = survival(1.0, [0.0, 0.1], method="asymptotic")
    assert approx == pytest.approx(0.1 / math.sqrt(math.pi), rel=1e-12)
    assert abs(approx / math.erf(0.05) - 1.0) < 1e-3
    est, err = survival_mc(1.0, np.array([0.0, 2.0]), np.random.default_rng(4), 200_000)
    assert abs(est - exact) < 4 * err
    with pytest.raises(ValueError):
        survival(1.0, [0.0, 1.0, 2.0, 3.0], method="quadrature")
    with pytest.raises(ValueError):
        survival(1.0, [0.0, 2.0], method="nope")


def test_survival_three_walkers_quadrature_vs_mc():
    x = [0.0, 1.0, 2.5]
    quad = survival(0.8, x, method="quadrature", tol=1e-6)
    est, err = survival_mc(0.8, np.array(x), np.random.default_rng(8), 400_000)
    assert abs(quad - est) < 4 * err


def test_survival_monotonicity():
    x = [0.0, 1.0]
    values = [survival(t, x) for t in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    # dilating the configuration raises survival
    for n, x in ((2, [0.0, 1.0]), (3, [0.0, 1.0, 2.2])):
        lo = survival(1.0, np.array(x))
        hi = survival(1.0, 1.5 * np.array(x))
        assert hi > lo


def test_transition_n1_reduces_to_gaussian():
    for s, x, t, y in ((0.0, None, 1.0, 0.3), (0.5, [0.2], 1.25, -0.4)):
        yv = np.array([y])
        kernel = math.exp(-((y - (0.0 if x is None else x[0])) ** 2) / (2 * (t - s)))
        kernel /= math.sqrt(2 * math.pi * (t - s))
        assert transition_inhomogeneous(s, x, t, yv, 10.0) == pytest.approx(
            kernel, rel=1e-9
        )
        assert transition_homogeneous(s, x, t, yv) == pytest.approx(kernel, rel=1e-12)


def test_transition_homogeneous_origin_log_path():
    # log-space evaluation agrees with the direct formula to full precision
    c2 = chamber_constants(2).c_prime
    for t, y in ((0.5, (-0.4, 0.9)), (2.0, (0.1, 0.2)), (1.0, (-3.0, 3.0))):
        yv = np.array(y)
        direct = (
            c2
            * t**-2.0
            * math.exp(-float(yv @ yv) / (2 * t))
            * vandermonde_h(yv) ** 2
        )
        assert transition_homogeneous(0.0, None, t, yv) == pytest.approx(
            direct, rel=1e-12
        )


def test_transition_validation():
    y = np.array([-0.5, 0.5])
    with pytest.raises(ValueError):
        transition_inhomogeneous(0.5, None, 1.0, y, 2.0)  # origin after s=0
    with pytest.raises(ValueError):
        transition_inhomogeneous(0.0, None, 3.0, y, 2.0)  # t beyond horizon
    with pytest.raises(ValueError):
        transition_homogeneous(1.0, [0.0, 1.0], 1.0, y)  # s == t


def test_long_horizon_transition_limit():
    y = np.array([-0.6, 1.1])
    x = np.array([0.0, 0.5])
    t = 0.8
    p = transition_homogeneous(0.0, x, t, y)
    g = transition_inhomogeneous(0.0, x, t, y, horizon=1e4 * t)
    assert abs(g / p - 1.0) < 0.01
    g_origin = transition_inhomogeneous(0.0, None, t, y, horizon=1e4 * t)
    p_origin = transition_homogeneous(0.0, None, t, y)
    assert abs(g_origin / p_origin - 1.0) < 0.01


def test_drift_inhomogeneous():
    assert drift_inhomogeneous(0.0, [0.7], 2.0).tolist() == [0.0]
    b = drift_inhomogeneous(0.0, [0.0, 2.0], 1e4)
    assert b[0] == pytest.approx(-0.5, rel=0.01)
    assert b[1] == pytest.approx(0.5, rel=0.01)
    near_end = drift_inhomogeneous(2.0 - 1e-4, [0.0, 2.0], 2.0)
    assert np.max(np.abs(near_end)) < 0.01
    with pytest.raises(ValueError):
        drift_inhomogeneous(3.0, [0.0, 2.0], 2.0)
    assert asymptotic_drift([0.0, 1.0, 3.0])[1] == pytest.approx(1.0 - 0.5)


def test_sample_path_validation():
    with pytest.raises(ValueError):
        SamplePath(np.array([0.0, 1.0]), np.array([[0.0, 1.0], [1.0, 0.5]]), 0, 0.5, "x")
    with pytest.raises(ValueError):
        SamplePath(np.array([1.0, 1.0]), np.array([[0.0, 1.0], [0.0, 1.0]]), 0, 0.0, "x")


def test_sample_from_origin_distribution():
    # N=1 from-origin law is exactly Gaussian with variance t0
    rng = np.random.default_rng(17)
    t0 = 0.3
    samples = sample_from_origin(1, t0, 20000, rng, h_power=2)[:, 0]
    assert abs(samples.mean()) < 3 * math.sqrt(t0 / 20000)
    assert abs(samples.var() / t0 - 1.0) < 0.05
    ordered = sample_from_origin(3, 0.1, 500, rng, h_power=2)
    assert np.all(np.diff(ordered, axis=1) > 0)


def test_simulate_dyson_single_paths():
    path = simulate_dyson(None, 1.0, 32, np.random.default_rng(5), n=2)
    assert path.states.shape == (32, 2)
    assert path.times[0] == pytest.approx(1.0 / 32)
    path2 = simulate_dyson([0.0, 2.0], 1.0, 32, np.random.default_rng(6))
    assert path2.states.shape == (33, 2)
    assert tuple(path2.states[0]) == (0.0, 2.0)
    with pytest.raises(ValueError):
        simulate_dyson(None, 1.0, 0, np.random.default_rng(0), n=2)


def test_dyson_sum_is_driftless():
    # pairwise repulsion cancels in the center of mass: Var(sum) = N t
    rng = np.random.default_rng(23)
    term = dyson_terminal_batch(2, 1.0, 256, 10_000, rng)
    total = term.sum(axis=1)
    var = total.var()
    # Var of the sample variance of N(0, 2): relative sd sqrt(2/n)
    assert abs(var / 2.0 - 1.0) < 4 * math.sqrt(2.0 / 10_000)


def test_dyson_single_walker_variance():
    rng = np.random.default_rng(27)
    term = dyson_terminal_batch(1, 1.5, 16, 10_000, rng, x0=[0.0])
    assert abs(term.var() / 1.5 - 1.0) < 4 * math.sqrt(2.0 / 10_000)


def test_dyson_terminal_ks_quick():
    rng = np.random.default_rng(31)
    term = dyson_terminal_batch(2, 1.0, 512, 2_000, rng)
    cdf = marginal_cdf_from_origin(2, 1.0, 0)
    from noncollide.verify import ks_one_sample

    report = ks_one_sample(term[:, 0], cdf, statistic_threshold=0.05)
    assert report.passed, report.detail


def test_inhomogeneous_end_of_horizon_is_noise():
    # the conditioning drains away at t -> T: last-step variance ~ dt
    rng = np.random.default_rng(37)
    n_steps = 200
    traj = inhomogeneous_trajectories(2, 1.0, 1.0, n_steps, 10_000, rng)
    dt = 1.0 / n_steps
    last = traj[:, -1, :] - traj[:, -2, :]
    ratio = last.var(axis=0) / dt
    assert np.all(np.abs(ratio - 1.0) < 0.05)


def test_inhomogeneous_terminal_ks_quick():
    rng = np.random.default_rng(53)
    traj = inhomogeneous_trajectories(2, 1.0, 1.0, 512, 2_000, rng)
    cdf = marginal_cdf_from_origin(2, 1.0, 1, kind="inhomogeneous", horizon=1.0)
    from noncollide.verify import ks_one_sample

    report = ks_one_sample(traj[:, -1, 1], cdf, statistic_threshold=0.05)
    assert report.passed, report.detail


def test_inhomogeneous_single_path():
    path = simulate_inhomogeneous(2, 1.0, 32, np.random.default_rng(41))
    assert path.states.shape == (32, 2)
    assert path.times[-1] == pytest.approx(1.0)
    assert np.all(np.diff(path.states, axis=1) > 0)


def test_trajectories_shapes():
    rng = np.random.default_rng(43)
    d = dyson_trajectories(2, 0.5, 16, 7, rng)
    assert d.shape == (7, 16, 2)
    i = inhomogeneous_trajectories(2, 1.0, 0.5, 16, 7, rng)
    assert i.shape == (7, 16, 2)
    assert np.all(np.diff(d, axis=2) > 0)
    assert np.all(np.diff(i, axis=2) > 0)
