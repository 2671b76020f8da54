import math

import numpy as np
import pytest

from bite.bandit import (ArmState, BanditConfig, BanditError, LinUCB, as_context, ci_width, init_arms,
                         select_arm, ucb_score, update_arm)


def arm(A, v, name="a"):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return ArmState(name, A, np.asarray(v, dtype=float).reshape(-1), 0)


def random_unit(rng, d):
    x = rng.normal(size=d)
    return x / np.linalg.norm(x)


def test_init_identity_and_zero():
    arms = init_arms(BanditConfig(["a", "b"], 2))
    for a in arms.values():
        assert np.array_equal(a.design_matrix, np.eye(2))
        assert np.array_equal(a.reward_vector, np.zeros(2))
        assert a.play_count == 0


def test_init_one_dimensional():
    a = init_arms(BanditConfig(["only"], 1))["only"]
    assert a.design_matrix.tolist() == [[1.0]]
    assert a.theta.tolist() == [0.0]


def test_arms_are_disjoint():
    arms = init_arms(BanditConfig([str(i) for i in range(8)], 3))
    before = {k: (v.design_matrix.copy(), v.reward_vector.copy()) for k, v in arms.items()}
    arms["3"] = update_arm(arms["3"], np.array([0.6, 0.0, 0.8]), 1.5)
    for k, v in arms.items():
        if k != "3":
            assert np.array_equal(v.design_matrix, before[k][0])
            assert np.array_equal(v.reward_vector, before[k][1])


@pytest.mark.parametrize("bad", [dict(arm_ids=[], d=2), dict(arm_ids=["a", "a"], d=2),
                                 dict(arm_ids=["a"], d=0), dict(arm_ids=["a"], d=2, alpha=-1.0)])
def test_config_validation(bad):
    with pytest.raises(BanditError):
        BanditConfig(**bad)


def test_ucb_fresh_unit_vector():
    a = init_arms(BanditConfig(["a"], 3))["a"]
    assert ucb_score(a, np.array([0.0, 1.0, 0.0]), 1.0) == pytest.approx(1.0)


def test_ucb_one_dimensional_examples():
    a = arm([[2.0]], [1.0])
    assert ucb_score(a, np.array([1.0]), 0.0) == pytest.approx(0.5)
    assert ucb_score(a, np.array([1.0]), 1.0) == pytest.approx(0.5 + math.sqrt(0.5))
    assert ucb_score(a, np.array([1.0]), 1.0) == pytest.approx(1.2071, abs=1e-4)


def test_select_tie_goes_to_first_arm():
    cfg = BanditConfig(["z", "y", "x"], 4)
    assert select_arm(init_arms(cfg), np.array([0.5, 0.5, 0.5, 0.5]), 1.0) == "z"
    assert LinUCB(cfg).select(np.array([0.5, 0.5, 0.5, 0.5])) == "z"


def test_select_depends_on_alpha():
    arms = {"a": arm([[2.0]], [2.0], "a"), "b": arm([[1.0]], [0.0], "b")}
    assert select_arm(arms, np.array([1.0]), 0.0) == "a"
    assert select_arm(arms, np.array([1.0]), 10.0) == "b"


def test_select_empty_raises():
    with pytest.raises(BanditError):
        select_arm({}, np.array([1.0]), 1.0)


def test_update_two_by_two():
    a = init_arms(BanditConfig(["a"], 2))["a"]
    a = update_arm(a, np.array([1.0, 0.0]), 2.0)
    assert a.design_matrix.tolist() == [[2.0, 0.0], [0.0, 1.0]]
    assert a.reward_vector.tolist() == [2.0, 0.0]
    assert np.allclose(a.theta, [1.0, 0.0])
    assert a.play_count == 1


def test_zero_update_only_counts():
    a = init_arms(BanditConfig(["a"], 3))["a"]
    b = update_arm(a, np.zeros(3), 0.0)
    assert np.array_equal(b.design_matrix, a.design_matrix)
    assert np.array_equal(b.reward_vector, a.reward_vector)
    assert b.play_count == 1


def test_update_order_commutes():
    rng = np.random.default_rng(1)
    x1, x2 = random_unit(rng, 4), random_unit(rng, 4)
    a = init_arms(BanditConfig(["a"], 4))["a"]
    p = update_arm(update_arm(a, x1, 0.3), x2, -1.2)
    q = update_arm(update_arm(a, x2, -1.2), x1, 0.3)
    assert np.allclose(p.theta, q.theta, atol=1e-14)


@pytest.mark.parametrize("r", [math.nan, math.inf, -math.inf])
def test_update_rejects_non_finite_reward(r):
    b = LinUCB(BanditConfig(["a"], 2))
    with pytest.raises(BanditError):
        b.update("a", np.array([1.0, 0.0]), r)
    assert b.play_counts() == {"a": 0}


def test_context_validation():
    with pytest.raises(BanditError):
        as_context([2.0, 0.0])
    with pytest.raises(BanditError):
        as_context([math.nan, 0.0])
    with pytest.raises(BanditError):
        as_context([1.0, 0.0], d=3)
    assert np.linalg.norm(as_context([3.0, 4.0], normalize=True)) == pytest.approx(1.0)


def test_ci_width_examples():
    a = init_arms(BanditConfig(["a"], 2))["a"]
    x = np.array([1.0, 0.0])
    assert ci_width(a, x, 2.0) == pytest.approx(2.0)
    assert ci_width(update_arm(a, x, 7.0), x, 1.0) == pytest.approx(math.sqrt(0.5))
    assert ci_width(a, x, 0.0) == 0.0


def test_class_and_functional_api_agree():
    rng = np.random.default_rng(5)
    cfg = BanditConfig(["a", "b", "c"], 5, alpha=0.7)
    b = LinUCB(cfg)
    arms = init_arms(cfg)
    for _ in range(40):
        x = random_unit(rng, 5)
        chosen = b.select(x)
        assert chosen == select_arm(arms, x, cfg.alpha)
        assert b.ci_width(chosen, x) == pytest.approx(ci_width(arms[chosen], x, cfg.alpha), rel=1e-12)
        r = float(rng.normal())
        b.update(chosen, x, r)
        arms[chosen] = update_arm(arms[chosen], x, r)
    for k in cfg.arm_ids:
        assert np.allclose(b.arm_state(k).theta, arms[k].theta, atol=1e-12)


def test_min_eigenvalue_at_least_one():
    rng = np.random.default_rng(9)
    b = LinUCB(BanditConfig(["a", "b"], 6))
    for _ in range(200):
        b.update("a" if rng.random() < 0.5 else "b", random_unit(rng, 6) * rng.random(), float(rng.normal()))
    for s in b.arm_states().values():
        assert np.min(np.linalg.eigvalsh(s.design_matrix)) >= 1.0 - 1e-12
        assert np.allclose(s.design_matrix, s.design_matrix.T)


def test_reward_scaling_scales_theta_and_keeps_greedy_choice():
    rng = np.random.default_rng(2)
    xs = [random_unit(rng, 3) for _ in range(15)]
    arms_ = [["a", "b", "c"][i % 3] for i in range(15)]
    rs = rng.normal(size=15)
    b1, b2 = LinUCB(BanditConfig(["a", "b", "c"], 3, 0.0)), LinUCB(BanditConfig(["a", "b", "c"], 3, 0.0))
    for x, a, r in zip(xs, arms_, rs):
        b1.update(a, x, float(r))
        b2.update(a, x, float(3.5 * r))
    assert np.allclose(b2.thetas(), 3.5 * b1.thetas(), atol=1e-12)
    for _ in range(20):
        x = random_unit(rng, 3)
        assert b1.select(x) == b2.select(x)


def test_snapshot_roundtrip_and_hash():
    b = LinUCB(BanditConfig(["a", "b"], 3))
    b.update("b", np.array([0.0, 0.6, 0.8]), 1.25)
    snap = b.snapshot()
    restored = [ArmState.from_record(r) for r in snap]
    assert restored[1].play_count == 1
    assert np.array_equal(restored[1].design_matrix, b.arm_state("b").design_matrix)
    fresh = LinUCB(BanditConfig(["a", "b"], 3))
    assert fresh.snapshot_hash() != b.snapshot_hash()
    fresh.update("b", np.array([0.0, 0.6, 0.8]), 1.25)
    assert fresh.snapshot_hash() == b.snapshot_hash()
