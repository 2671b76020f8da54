import math

import numpy as np
import pytest

from bite.regret import (MisspecEnvSpec, compute_alpha, regret_bound, run_regret_experiment,
                         sweep_and_report)


def test_alpha_reference_value():
    assert compute_alpha(1, 1, 1, 2, 2, 100, 0.1, 0.0) == pytest.approx(5.8027, abs=1e-4)
    oracle = 1.0 * np.sqrt(4 * np.log(101.0) + 2 * np.log(10.0)) + 1.0
    assert compute_alpha(1, 1, 1, 2, 2, 100, 0.1, 0.0) == pytest.approx(float(oracle), abs=1e-12)


def test_alpha_vanishes():
    for T in (1, 10, 10_000):
        assert compute_alpha(0, 0, 1, 3, 5, T, 0.05, 0.0) == 0.0


def test_alpha_linear_in_zeta():
    base = dict(R=0.5, S=1.0, L=0.8, d=4, K=3, T=500, delta=0.1)
    a1 = compute_alpha(zeta=0.05, **base)
    a2 = compute_alpha(zeta=0.10, **base)
    step = math.sqrt(500) * 0.05 * math.sqrt(2 * 4 * 3 * math.log(1 + 500 * 0.64))
    assert a2 - a1 == pytest.approx(step, rel=1e-12)


@pytest.mark.parametrize("bad", [dict(delta=0.0), dict(delta=1.0), dict(L=1.5), dict(L=0.0), dict(R=-1.0),
                                 dict(zeta=-0.1), dict(d=0), dict(T=0)])
def test_alpha_domain_errors(bad):
    args = dict(R=1, S=1, L=1, d=2, K=2, T=10, delta=0.1, zeta=0.0)
    args.update(bad)
    with pytest.raises(ValueError):
        compute_alpha(**args)


def test_bound_formula():
    assert regret_bound(2.0, 4, 4, 100) == pytest.approx(4.0 * math.sqrt(32 * 100 * math.log(101)))


def test_env_contract():
    env = MisspecEnvSpec(d=5, K=3, S=0.8, L=0.6, zeta=0.2, seed=3)
    assert np.all(np.linalg.norm(env.thetas, axis=1) <= 0.8 + 1e-12)
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = env.sample_context(rng)
        assert np.linalg.norm(x) <= 0.6 + 1e-12
        assert np.all(np.abs(env.misspec(x)) <= 0.2 + 1e-12)
    with pytest.raises(ValueError):
        MisspecEnvSpec(K=2, d=2, true_thetas=np.ones((2, 2)))


def test_single_arm_has_no_regret():
    tr = run_regret_experiment(MisspecEnvSpec(K=1, T=200, zeta=0.1))
    assert tr.final == 0.0
    assert set(tr.chosen) == {0}


def test_trace_invariants():
    for zeta in (0.0, 0.1):
        tr = run_regret_experiment(MisspecEnvSpec(T=300, zeta=zeta, seed=2))
        assert np.all(tr.instantaneous >= 0)
        assert np.all(np.diff(tr.cumulative) >= 0)
        assert tr.misspec_rms <= zeta + 1e-9
        assert len(tr.chosen) == 300


def test_zeta_sweep_shares_environment():
    a = MisspecEnvSpec(zeta=0.0, seed=4)
    b = MisspecEnvSpec(zeta=0.1, seed=4)
    assert np.array_equal(a.thetas, b.thetas)
    assert np.array_equal(a.misspec_dirs, b.misspec_dirs)


def test_seeded_repeatability():
    a = run_regret_experiment(MisspecEnvSpec(T=100, seed=9))
    b = run_regret_experiment(MisspecEnvSpec(T=100, seed=9))
    assert np.array_equal(a.cumulative, b.cumulative)


def test_sweep_report_shape():
    grid = [MisspecEnvSpec(T=64, zeta=z) for z in (0.0, 0.05, 0.1)]
    rep = sweep_and_report(grid, range(20))
    assert len(rep.cells) == 3
    for cell in rep.cells:
        assert len(cell.traces) == 20
        assert cell.mean_curve().shape == (64,)
        for tr in cell.traces:
            assert np.all(np.diff(tr.cumulative) >= 0)
    t = rep.to_table(every=16)
    assert len(t.rows) == 3 * 4
    for cell in rep.cells:
        assert t.meta[f"alpha[{cell.label}]"] == repr(cell.alpha)
    s = rep.summary_table()
    assert s.column("alpha") == [c.alpha for c in rep.cells]


def test_bound_exceedance_rate():
    spec = MisspecEnvSpec(T=256, zeta=0.0)
    rep = sweep_and_report([spec], range(100))
    bound = regret_bound(spec.alpha(), spec.d, spec.K, spec.T, spec.L)
    exceed = np.mean([tr.final > bound for tr in rep.cells[0].traces])
    assert exceed <= spec.delta + 0.05
