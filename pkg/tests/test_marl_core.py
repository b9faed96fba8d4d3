import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rampdistill.marl import (
    AnnealSchedule,
    ExpertBuffer,
    MlpParams,
    Transition,
    actor_loss_and_grads,
    advantage,
    critic_loss_and_grads,
    discounted_returns,
    forward_actor,
    forward_critic,
    init_mlp,
    kl_divergence,
    mlp_backward,
    mlp_forward,
    softmax,
    teacher_distribution,
)


def finite_difference_grads(params: MlpParams, loss_fn, eps: float = 1e-6) -> np.ndarray:
    """Central finite differences over the flattened parameter vector."""
    flat = params.flat()
    grads = np.empty_like(flat)
    for i in range(flat.size):
        bumped = flat.copy()
        bumped[i] += eps
        params.set_flat(bumped)
        up = loss_fn()
        bumped[i] -= 2 * eps
        params.set_flat(bumped)
        down = loss_fn()
        grads[i] = (up - down) / (2 * eps)
    params.set_flat(flat)
    return grads


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    denom = np.linalg.norm(a) + np.linalg.norm(b)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(a - b) / denom)


class TestForward:
    def test_zero_params_give_uniform_policy(self):
        rng = np.random.default_rng(0)
        params = init_mlp((8, 16, 5), rng)
        for w in params.weights:
            w[...] = 0.0
        probs = forward_actor(params, np.ones(8))
        np.testing.assert_allclose(probs, np.full(5, 0.2), atol=1e-15)

    def test_zero_critic_maps_to_zero(self):
        rng = np.random.default_rng(0)
        params = init_mlp((8, 16, 1), rng)
        for w in params.weights:
            w[...] = 0.0
        assert forward_critic(params, np.ones(8)) == 0.0

    def test_forward_is_pure(self):
        rng = np.random.default_rng(3)
        params = init_mlp((6, 12, 4), rng)
        x = rng.normal(size=6)
        a, _ = mlp_forward(params, x)
        b, _ = mlp_forward(params, x)
        np.testing.assert_array_equal(a, b)

    @given(st.lists(st.floats(-30, 30), min_size=5, max_size=5))
    @settings(max_examples=200, deadline=None)
    def test_softmax_sums_to_one(self, logits):
        probs = softmax(np.array(logits))
        assert abs(probs.sum() - 1.0) < 1e-9
        assert np.all(probs >= 0)


class TestBackward:
    def test_constant_loss_gives_zero_grads(self):
        rng = np.random.default_rng(1)
        params = init_mlp((4, 8, 3), rng)
        _, cache = mlp_forward(params, rng.normal(size=(5, 4)))
        grads = mlp_backward(params, cache, np.zeros((5, 3)))
        assert np.all(grads.flat() == 0.0)

    def test_single_linear_layer_matches_closed_form(self):
        # loss = sum((x @ W + b - y)^2): dW = 2 x^T (pred - y), db = 2 sum(pred - y)
        rng = np.random.default_rng(2)
        params = MlpParams(weights=[rng.normal(size=(3, 2))], biases=[rng.normal(size=2)])
        x = rng.normal(size=(4, 3))
        y = rng.normal(size=(4, 2))
        pred, cache = mlp_forward(params, x)
        grads = mlp_backward(params, cache, 2.0 * (pred - y))
        np.testing.assert_allclose(grads.weights[0], 2.0 * x.T @ (pred - y), atol=1e-12)
        np.testing.assert_allclose(grads.biases[0], 2.0 * (pred - y).sum(axis=0), atol=1e-12)

    def test_two_layer_net_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        params = init_mlp((5, 8, 3), rng)
        x = rng.normal(size=(6, 5))
        y = rng.normal(size=(6, 3))

        def loss_fn():
            pred, _ = mlp_forward(params, x)
            return float(((pred - y) ** 2).mean())

        pred, cache = mlp_forward(params, x)
        grads = mlp_backward(params, cache, 2.0 * (pred - y) / pred.size)
        fd = finite_difference_grads(params, loss_fn)
        assert relative_error(grads.flat(), fd) <= 1e-7


class TestAdvantage:
    def test_direct_arithmetic(self):
        assert advantage(1.0, 2.5, 2.0, 0.99, False) == pytest.approx(0.48)

    def test_terminal_masks_bootstrap(self):
        assert advantage(3.0, 1.5, 99.0, 0.99, True) == pytest.approx(1.5)

    def test_fixed_point(self):
        assert advantage(0.0, 2.0, 2.0, 1.0, False) == 0.0


class TestTeacherDistribution:
    def test_zero_smoothing_is_one_hot(self):
        np.testing.assert_array_equal(
            teacher_distribution(2, 0.0), np.array([0.0, 0.0, 1.0, 0.0, 0.0])
        )

    def test_default_smoothing_values(self):
        np.testing.assert_allclose(
            teacher_distribution(1, 0.05),
            np.array([0.0125, 0.95, 0.0125, 0.0125, 0.0125]),
            atol=1e-15,
        )

    @given(st.integers(0, 4), st.floats(0.0, 0.49))
    @settings(max_examples=100, deadline=None)
    def test_sums_to_one(self, action, eps):
        assert teacher_distribution(action, eps).sum() == pytest.approx(1.0, abs=1e-12)


class TestKl:
    def test_identical_distributions_give_zero(self):
        p = np.array([0.1, 0.2, 0.3, 0.25, 0.15])
        assert kl_divergence(p, p) == pytest.approx(0.0, abs=1e-15)

    def test_hand_evaluated_value(self):
        t = teacher_distribution(1, 0.05)
        uniform = np.full(5, 0.2)
        assert kl_divergence(t, uniform) == pytest.approx(1.341607951032233, abs=1e-12)

    @given(
        st.lists(st.floats(0.01, 10.0), min_size=5, max_size=5),
        st.lists(st.floats(0.01, 10.0), min_size=5, max_size=5),
    )
    @settings(max_examples=200, deadline=None)
    def test_nonnegative(self, raw_t, raw_s):
        t = np.array(raw_t) / np.sum(raw_t)
        s = np.array(raw_s) / np.sum(raw_s)
        assert kl_divergence(t, s) >= -1e-12


class TestActorLoss:
    def make_batch(self, rng, batch=8, dim=6):
        params = init_mlp((dim, 8, 5), rng)
        obs = rng.normal(size=(batch, dim))
        actions = rng.integers(0, 5, size=batch)
        adv = rng.normal(size=batch)
        teacher = np.stack([teacher_distribution(int(a), 0.05) for a in actions])
        return params, obs, actions, adv, teacher

    def test_lambda_zero_equals_plain_policy_gradient(self):
        rng = np.random.default_rng(11)
        params, obs, actions, adv, teacher = self.make_batch(rng)
        loss_with, grads_with = actor_loss_and_grads(params, obs, actions, adv, teacher, 0.0)
        loss_plain, grads_plain = actor_loss_and_grads(params, obs, actions, adv, None, 0.0)
        assert loss_with == loss_plain
        np.testing.assert_array_equal(grads_with.flat(), grads_plain.flat())

    def test_zero_advantage_zero_lambda_gives_zero_grads(self):
        rng = np.random.default_rng(12)
        params, obs, actions, _, _ = self.make_batch(rng)
        _, grads = actor_loss_and_grads(params, obs, actions, np.zeros(len(actions)), None, 0.0)
        assert np.all(grads.flat() == 0.0)

    def test_large_lambda_overfits_argmax_to_teacher(self):
        # frozen batch, KL-dominated updates: argmax converges to the labels
        rng = np.random.default_rng(13)
        params, obs, actions, adv, teacher = self.make_batch(rng, batch=16)
        for _ in range(400):
            _, grads = actor_loss_and_grads(params, obs, actions, adv, teacher, lam=50.0)
            for w, g in zip(params.weights + params.biases, grads.weights + grads.biases):
                w -= 0.05 * g / 50.0
        probs = softmax(mlp_forward(params, obs)[0])
        assert np.mean(np.argmax(probs, axis=1) == actions) == 1.0

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(14)
        params, obs, actions, adv, teacher = self.make_batch(rng)

        def loss_fn():
            loss, _ = actor_loss_and_grads(params, obs, actions, adv, teacher, 0.7)
            return loss

        _, grads = actor_loss_and_grads(params, obs, actions, adv, teacher, 0.7)
        fd = finite_difference_grads(params, loss_fn)
        assert relative_error(grads.flat(), fd) <= 1e-7


class TestCriticLoss:
    def test_perfect_fit_is_zero(self):
        rng = np.random.default_rng(15)
        params = init_mlp((4, 8, 1), rng)
        obs = rng.normal(size=(6, 4))
        targets, _ = mlp_forward(params, obs)
        loss, _ = critic_loss_and_grads(params, obs, targets[:, 0])
        assert loss == pytest.approx(0.0, abs=1e-20)

    def test_unit_residual_gives_unit_loss(self):
        rng = np.random.default_rng(16)
        params = init_mlp((4, 8, 1), rng)
        obs = rng.normal(size=(6, 4))
        values, _ = mlp_forward(params, obs)
        loss, _ = critic_loss_and_grads(params, obs, values[:, 0] + 1.0)
        assert loss == pytest.approx(1.0, abs=1e-12)

    def test_matches_independent_mean_square(self):
        rng = np.random.default_rng(17)
        params = init_mlp((4, 8, 1), rng)
        obs = rng.normal(size=(10, 4))
        returns = rng.normal(size=10)
        values, _ = mlp_forward(params, obs)
        loss, _ = critic_loss_and_grads(params, obs, returns)
        assert loss == pytest.approx(float(np.mean((values[:, 0] - returns) ** 2)), abs=1e-15)

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(18)
        params = init_mlp((5, 6, 1), rng)
        obs = rng.normal(size=(7, 5))
        returns = rng.normal(size=7)

        def loss_fn():
            loss, _ = critic_loss_and_grads(params, obs, returns)
            return loss

        _, grads = critic_loss_and_grads(params, obs, returns)
        fd = finite_difference_grads(params, loss_fn)
        assert relative_error(grads.flat(), fd) <= 1e-7


class TestDiscountedReturns:
    def test_matches_manual_backward_sum(self):
        rewards = np.array([1.0, 2.0, 3.0])
        gamma = 0.5
        expected = np.array([1.0 + 0.5 * (2.0 + 0.5 * 3.0), 2.0 + 0.5 * 3.0, 3.0])
        np.testing.assert_allclose(discounted_returns(rewards, gamma), expected)


class TestAnnealSchedule:
    def test_endpoints_and_linearity(self):
        sched = AnnealSchedule(lambda0=1.0, teaching_episodes=100)
        assert sched.value(0) == 1.0
        assert sched.value(100) == 0.0
        assert sched.value(50) == pytest.approx(0.5)
        assert sched.value(150) == 0.0

    @given(st.integers(0, 500), st.integers(1, 500))
    @settings(max_examples=100, deadline=None)
    def test_nonincreasing(self, e, e_te):
        sched = AnnealSchedule(lambda0=2.0, teaching_episodes=e_te)
        assert sched.value(e) >= sched.value(e + 1) - 1e-12


class TestExpertBuffer:
    def make_transition(self, i):
        z = np.zeros(2)
        return Transition(obs=z, action=i % 5, reward=0.0, next_obs=z, done=False,
                          joint_obs=z, next_joint_obs=z)

    def test_fifo_eviction_preserves_order(self):
        buf = ExpertBuffer(capacity=10)
        for i in range(13):
            buf.append(self.make_transition(i))
        assert len(buf) == 10
        assert [t.action for t in buf] == [i % 5 for i in range(3, 13)]

    def test_rejects_nonpositive_capacity(self):
        with pytest.raises(ValueError):
            ExpertBuffer(capacity=0)

    def test_holdout_partition(self):
        buf = ExpertBuffer(capacity=10)
        z = np.zeros(2)
        buf.append(Transition(obs=z, action=0, reward=0.0, next_obs=z, done=False,
                              joint_obs=z, next_joint_obs=z, holdout=True))
        buf.append(Transition(obs=z, action=1, reward=0.0, next_obs=z, done=False,
                              joint_obs=z, next_joint_obs=z))
        assert len(buf.holdout_items()) == 1
        assert len(buf.training_items()) == 1
        rng = np.random.default_rng(0)
        assert all(not t.holdout for t in buf.sample(rng, 5))
