import numpy as np
import pytest

from proxcert.schedules import (GladmmConfig, GladmmStepParams,
                                glalm_schedule, gladmm_schedule,
                                momentum_sequence, next_t, validate_gladmm)


def test_next_t_values():
    assert next_t(0.0) == 1.0
    assert next_t(1.0) == pytest.approx(1.6180339887498949, abs=1e-12)
    # third value computed at 40-digit precision from the recurrence
    t3 = next_t(next_t(1.0))
    assert t3 == pytest.approx(2.1935270853310539, abs=1e-12)
    t2 = next_t(1.0)
    assert abs(t2 * t2 - t3 * (t3 - 1.0)) <= 1e-9 * t3 * t3
    with pytest.raises(ValueError):
        next_t(-0.5)


def test_momentum_sequence_properties_10k():
    ts = np.array(momentum_sequence(10000))
    k = np.arange(1, 10001)
    assert np.all(ts >= (k + 1) / 2.0)
    t_prev = np.concatenate([[0.0], ts[:-1]])
    resid = np.abs(t_prev ** 2 - ts * (ts - 1.0))
    assert np.max(resid / ts ** 2) <= 1e-9


def test_glalm_schedule_examples():
    p = glalm_schedule(1, gamma=1.0, kappa=1.5, eta=2.0)
    assert (p.theta, p.gamma_k, p.kappa_k, p.p_k) == (1.0, 1.0, 0.75, 2.0)
    p = glalm_schedule(1, gamma=1.0, kappa=1.0, eta=2.0)
    assert p.kappa_k == 0.5  # reduction case: kappa_k = gamma/2
    p = glalm_schedule(9, gamma=2.0, kappa=1.5, eta=4.0)
    assert p.theta == pytest.approx(0.2)
    assert p.gamma_k == 18.0
    assert p.kappa_k == pytest.approx(13.5)
    assert p.p_k == pytest.approx(4.0 / 9.0)


def test_glalm_schedule_rejects_bad_kappa():
    for bad in (0.99, 2.0, 2.5):
        with pytest.raises(ValueError):
            glalm_schedule(1, gamma=1.0, kappa=bad, eta=1.0)


def test_glalm_reduction_parameter_set():
    # kappa=1 reproduces the non-extrapolated parameter family exactly
    for k in (1, 5, 40):
        p = glalm_schedule(k, gamma=3.0, kappa=1.0, eta=7.0)
        assert p.theta == 2.0 / (k + 1.0)
        assert p.gamma_k == 3.0 * k
        assert p.kappa_k == 3.0 * k / 2.0
        assert p.p_k == 7.0 / k


def test_gladmm_schedule_examples():
    cfg = GladmmConfig(N=4, L=1.0, alpha=0.5, kappa=1.5, gamma=1.0, xi=1.5)
    p = gladmm_schedule(4, cfg)
    assert p.gamma_k == pytest.approx((2.0 - 1.5) * 1.0 / 1.5)  # = 1/3 at k=N
    cfg1 = GladmmConfig(N=1, L=1.0, alpha=0.5, kappa=1.5, gamma=1.0, xi=1.5)
    p1 = gladmm_schedule(1, cfg1)
    assert p1.theta == 1.0 and p1.Gamma == 1.0
    cfg300 = GladmmConfig(N=300, L=1.0, alpha=0.5, kappa=1.5, gamma=1.0, xi=1.5)
    p300 = gladmm_schedule(1, cfg300)
    assert p300.lam == 300.0 and p300.tau == 300.0


def test_gladmm_schedule_rejects_past_horizon():
    cfg = GladmmConfig(N=5, L=1.0)
    with pytest.raises(ValueError):
        gladmm_schedule(6, cfg)


def test_gladmm_config_validation():
    with pytest.raises(ValueError):
        GladmmConfig(N=10, L=1.0, xi=1.4)
    with pytest.raises(ValueError):
        GladmmConfig(N=10, L=1.0, alpha=1.5)
    with pytest.raises(ValueError):
        GladmmConfig(N=10, L=1.0, kappa=0.9)
    cfg = GladmmConfig(N=10, L=1.0, xi=1.6)
    assert cfg.beta == pytest.approx(1.0 / 1.6)


def test_validate_gladmm_admissible_horizons():
    for N in (1, 10, 300, 1000):
        cfg = GladmmConfig(N=N, L=2.7, alpha=0.37, kappa=1.9, gamma=0.8, xi=1.5)
        assert validate_gladmm(cfg) == []


def test_validate_gladmm_beta_violation():
    cfg = GladmmConfig(N=5, L=1.0, xi=1.5)
    viols = validate_gladmm(cfg, beta=0.4)
    assert len(viols) == 5
    assert all(v.inequality == "1/xi_k <= beta" for v in viols)


def test_validate_gladmm_tampered_gamma():
    cfg = GladmmConfig(N=8, L=1.0, alpha=0.5, kappa=1.5, gamma=1.0, xi=1.5)

    def tampered(k):
        p = gladmm_schedule(k, cfg)
        return GladmmStepParams(k=p.k, theta=p.theta, Gamma=p.Gamma, lam=p.lam,
                                tau=p.tau, gamma_k=p.gamma_k * cfg.N ** 2,
                                eta_k=p.eta_k, xi_k=p.xi_k)

    viols = validate_gladmm(cfg, schedule=tampered)
    assert any(v.k == 1 and "kappa" in v.inequality for v in viols)
