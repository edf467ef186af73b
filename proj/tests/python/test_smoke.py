import json
import math

import numpy as np
import pytest

import cewpt


def random_channel(m=2, n=2, k=2, seed=0, power=1.0):
    rng = np.random.default_rng(seed)

    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)

    return cewpt.Channel(cn(k, m), cn(k, n), cn(n, m), np.ones(n), power)


def grid_optimum(ch, levels=64):
    # alpha_0 is pinned to 0: the objective ignores a common phase on x.
    phases = 2 * np.pi * np.arange(levels) / levels
    best = 0.0
    for a1 in phases:
        for t0 in phases:
            for t1 in phases:
                best = max(best, cewpt.sum_power(ch, np.array([0.0, a1]), np.array([t0, t1])))
    return best


def test_channel_roundtrip_and_composite():
    ch = random_channel(seed=3)
    assert (ch.antennas, ch.users, ch.elements) == (2, 2, 2)
    np.testing.assert_allclose(ch.g, ch.s)
    theta = np.array([0.3, -1.2])
    expected = ch.hr @ np.diag(np.exp(1j * theta)) @ ch.g + ch.hd
    np.testing.assert_allclose(ch.composite(theta), expected, atol=1e-14)
    again = cewpt.Channel.from_csv(ch.to_csv())
    np.testing.assert_array_equal(again.hr, ch.hr)


def test_sum_power_matches_numpy():
    ch = random_channel(seed=4, power=3.0)
    alpha, theta = np.array([0.1, 2.0]), np.array([-0.5, 1.0])
    x = math.sqrt(3.0 / 2) * np.exp(1j * alpha)
    expected = np.linalg.norm(ch.composite(theta) @ x) ** 2
    assert cewpt.sum_power(ch, alpha, theta) == pytest.approx(expected, rel=1e-12)


def test_solvers_reach_grid_optimum():
    ch = random_channel(seed=11)
    grid = grid_optimum(ch)
    sca = cewpt.solve_spm_sca(ch, restarts=5, seed=2)
    sdr = cewpt.solve_spm_sdr(ch, restarts=5, seed=2)
    assert sca.objective >= 0.99 * grid
    assert sdr.objective >= 0.98 * grid
    amp = math.sqrt(ch.power / ch.antennas)
    np.testing.assert_allclose(np.abs(sca.x), amp, rtol=1e-12)
    np.testing.assert_allclose(np.abs(sca.v), 1.0, rtol=1e-12)
    trace = np.array(sca.trace)
    assert np.all(np.diff(trace) >= -1e-9 * trace[-1])
    payload = json.loads(sca.to_json())
    assert payload["status"] == sca.status
    assert payload["objective"] == pytest.approx(sca.objective)


def test_spmc_meets_thresholds():
    ch = cewpt.make_scenario(elements=[4, 4], seed=5)
    qmm = cewpt.estimate_qmm(ch)
    assert qmm > 0
    p = np.full(ch.users, 0.5 * qmm * ch.efficiency)
    sol = cewpt.solve_spmc(ch, p)
    assert sol.status in ("Converged", "MaxIters")
    assert np.all(sol.user_powers >= p * (1 - 1e-3))


def test_sdp_and_projection():
    res = cewpt.solve_diag_sdp(np.diag([1.0, -2.0, 3.0]).astype(complex), diagonal=2.0)
    assert res["objective"] == pytest.approx(4.0, abs=1e-6)
    assert res["dual_bound"] >= res["objective"] - 1e-9
    h = np.array([1.0 + 0j, 1.0j])
    z = np.array([0.1 + 0j, 0.0j])
    e = cewpt.qos_halfspace_project(h, 4.0, z)
    assert abs(np.vdot(h, e)) ** 2 == pytest.approx(4.0)


def test_codebook_and_bound():
    q = cewpt.project_codebook(np.array([0.1, 3.0, -0.1]), 1)
    np.testing.assert_allclose(q, [np.pi / 2, np.pi / 2, 3 * np.pi / 2])
    assert cewpt.prop2_bound(1) == pytest.approx(4 / np.pi**2)
    with pytest.raises(cewpt.ConfigError):
        cewpt.prop2_bound(0)


def test_experiments_are_thread_independent():
    a = cewpt.quantization_sweep(elements=[16], trials=8, seed=7, threads=1)
    b = cewpt.quantization_sweep(elements=[16], trials=8, seed=7, threads=3)
    assert a == b
    stats = {r["statistic"] for r in a}
    assert {"delta", "prop2_bound"} <= stats
    w = cewpt.wishart_lambda_check(users=1, elements=200, trials=50, seed=1)
    assert w[0]["statistic"] == "lambda1_over_n"
    assert w[0]["value"] == pytest.approx(1.0, abs=0.1)


def test_bad_model_tag_raises():
    with pytest.raises(cewpt.ConfigError):
        cewpt.make_ideal(model="nope")
