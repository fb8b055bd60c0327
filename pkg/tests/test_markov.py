import numpy as np
import pytest

import swldpc as sw
from swldpc.errors import DecodingFailureError, UnsupportedModelError
from swldpc.markov import stationary_distribution

from oracles import noise_posterior


def random_model(n_states: int, rng: np.random.Generator, deterministic_b: bool = False):
    a = rng.random((n_states, n_states)) + 0.05
    a /= a.sum(axis=1, keepdims=True)
    if deterministic_b:
        b = np.zeros((n_states, 2))
        b[np.arange(n_states), rng.integers(0, 2, n_states)] = 1.0
    else:
        b = rng.random((n_states, 2)) + 0.05
        b /= b.sum(axis=1, keepdims=True)
    pi = rng.random(n_states) + 0.05
    pi /= pi.sum()
    return sw.MarkovNoiseModel(a, b, pi)


class TestValidate:
    def test_two_state_model_ok(self):
        assert sw.validate(sw.two_state_model(0.1)) == []

    def test_bad_transition_row_named(self):
        model = sw.two_state_model(0.1)
        model.a = np.array([[0.6, 0.3], [0.1, 0.9]])
        violations = sw.validate(model)
        assert any("A row 0" in v for v in violations)

    def test_negative_pi(self):
        model = sw.two_state_model(0.1)
        model.pi = np.array([1.2, -0.2])
        violations = sw.validate(model)
        assert any("pi" in v for v in violations)


class TestSampleNoise:
    def test_absorbing_zero_state(self):
        model = sw.MarkovNoiseModel(np.array([[1.0, 0.0], [0.0, 1.0]]),
                                    np.array([[1.0, 0.0], [0.0, 1.0]]),
                                    np.array([1.0, 0.0]))
        bits = sw.sample_noise(model, 50, np.random.default_rng(0))
        assert not bits.any()

    def test_forced_alternation(self):
        model = sw.MarkovNoiseModel(np.array([[0.0, 1.0], [1.0, 0.0]]),
                                    np.array([[1.0, 0.0], [0.0, 1.0]]),
                                    np.array([1.0, 0.0]))
        bits = sw.sample_noise(model, 10, np.random.default_rng(0))
        # start state emits 0, so the first transition lands on the 1-emitter
        assert np.array_equal(bits, np.tile([1, 0], 5))
        model.pi = np.array([0.0, 1.0])
        bits = sw.sample_noise(model, 10, np.random.default_rng(0))
        assert np.array_equal(bits, np.tile([0, 1], 5))

    def test_transition_frequency(self):
        n = 100_000
        bits = sw.sample_noise(sw.two_state_model(0.1), n, np.random.default_rng(3))
        flips = np.count_nonzero(np.diff(bits))
        sigma = np.sqrt(0.1 * 0.9 / (n - 1))
        assert abs(flips / (n - 1) - 0.1) < 3 * sigma

    def test_reproducible(self):
        model = sw.two_state_model(0.3)
        a = sw.sample_noise(model, 200, np.random.default_rng(9))
        b = sw.sample_noise(model, 200, np.random.default_rng(9))
        assert np.array_equal(a, b)


class TestEntropyRate:
    def test_symmetric_two_state(self):
        assert sw.entropy_rate(sw.two_state_model(0.11)) == pytest.approx(0.4999, abs=1e-3)
        for p in (0.02, 0.2, 0.4):
            assert sw.entropy_rate(sw.two_state_model(p)) == pytest.approx(
                sw.binary_entropy(p), abs=1e-12)

    def test_deterministic_chain(self):
        assert sw.entropy_rate(sw.two_state_model(0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_iid_uniform(self):
        assert sw.entropy_rate(sw.two_state_model(0.5)) == pytest.approx(1.0, abs=1e-12)

    def test_stochastic_emissions_unsupported(self):
        rng = np.random.default_rng(1)
        with pytest.raises(UnsupportedModelError):
            sw.entropy_rate(random_model(2, rng, deterministic_b=False))

    def test_stationary_distribution(self):
        model = sw.MarkovNoiseModel(np.array([[0.9, 0.1], [0.4, 0.6]]),
                                    np.array([[1.0, 0.0], [0.0, 1.0]]),
                                    np.array([0.5, 0.5]))
        mu = stationary_distribution(model)
        assert np.allclose(mu @ model.a, mu, atol=1e-12)
        assert mu.sum() == pytest.approx(1.0, abs=1e-12)


class TestBuildTrellis:
    def test_single_state(self):
        model = sw.MarkovNoiseModel(np.array([[1.0]]), np.array([[0.7, 0.3]]), np.array([1.0]))
        trellis = sw.build_trellis(model, 5)
        assert trellis.prior.size == 2
        assert sorted(trellis.prior.tolist()) == pytest.approx([0.3, 0.7])

    def test_deterministic_emissions_prune_parallel_branches(self):
        trellis = sw.build_trellis(sw.two_state_model(0.2), 4)
        # 4 state pairs, one surviving branch each
        assert trellis.prior.size == 4

    def test_out_edges_are_stochastic(self):
        rng = np.random.default_rng(5)
        for n_states in (2, 3):
            model = random_model(n_states, rng)
            trellis = sw.build_trellis(model, 3)
            sums = np.bincount(trellis.src, weights=trellis.prior, minlength=n_states)
            assert np.allclose(sums, 1.0, atol=1e-9)


class TestForwardBackward:
    def test_single_state_uniform_evidence(self):
        model = sw.MarkovNoiseModel(np.array([[1.0]]), np.array([[0.7, 0.3]]), np.array([1.0]))
        trellis = sw.build_trellis(model, 6)
        t = sw.forward_backward(trellis, np.full((6, 2), 0.5))
        assert np.allclose(t, [0.7, 0.3], atol=1e-12)

    def test_certain_evidence_passes_through(self):
        trellis = sw.build_trellis(sw.two_state_model(0.3), 8)
        g = np.zeros((8, 2))
        g[:, 0] = 1.0
        t = sw.forward_backward(trellis, g)
        assert np.allclose(t[:, 0], 1.0, atol=1e-12)

    def test_matches_enumeration(self):
        rng = np.random.default_rng(12)
        for n_states in (2, 3):
            for length in (1, 2, 5, 9, 12):
                model = random_model(n_states, rng)
                trellis = sw.build_trellis(model, length)
                g = rng.random((length, 2)) + 0.01
                got = sw.forward_backward(trellis, g)
                want = noise_posterior(model.a, model.b, model.pi, g)
                assert np.abs(got - want).max() <= 1e-9

    def test_rescaling_evidence_is_invariant(self):
        rng = np.random.default_rng(3)
        model = random_model(2, rng)
        trellis = sw.build_trellis(model, 20)
        g = rng.random((20, 2)) + 0.01
        t1 = sw.forward_backward(trellis, g)
        scales = rng.uniform(0.5, 20.0, size=(20, 1))
        t2 = sw.forward_backward(trellis, g * scales)
        assert np.abs(t1 - t2).max() <= 1e-12

    def test_single_state_positions_decouple(self):
        model = sw.MarkovNoiseModel(np.array([[1.0]]), np.array([[0.6, 0.4]]), np.array([1.0]))
        trellis = sw.build_trellis(model, 4)
        rng = np.random.default_rng(8)
        g = rng.random((4, 2)) + 0.05
        t = sw.forward_backward(trellis, g)
        want = g * [0.6, 0.4]
        want /= want.sum(axis=1, keepdims=True)
        assert np.abs(t - want).max() <= 1e-12

    def test_renormalization_does_not_change_result(self):
        rng = np.random.default_rng(21)
        model = random_model(3, rng)
        trellis = sw.build_trellis(model, 10)
        g = rng.random((10, 2)) + 0.05
        t_norm = sw.forward_backward(trellis, g, renormalize=True)
        t_raw = sw.forward_backward(trellis, g, renormalize=False)
        assert np.abs(t_norm - t_raw).max() <= 1e-12

    def test_long_sequences_stay_finite(self):
        trellis = sw.build_trellis(sw.two_state_model(0.08), 6250)
        rng = np.random.default_rng(2)
        g = rng.random((6250, 2)) + 0.01
        t = sw.forward_backward(trellis, g)
        assert np.isfinite(t).all()
        assert np.allclose(t.sum(axis=1), 1.0, atol=1e-9)

    def test_inconsistent_evidence_signals_failure(self):
        # all-one evidence against a chain that can never emit a one
        model = sw.MarkovNoiseModel(np.array([[1.0]]), np.array([[1.0, 0.0]]), np.array([1.0]))
        trellis = sw.build_trellis(model, 4)
        g = np.zeros((4, 2))
        g[:, 1] = 1.0
        with pytest.raises(DecodingFailureError):
            sw.forward_backward(trellis, g)

    def test_extrinsic_matches_posterior_at_uninformative_positions(self):
        rng = np.random.default_rng(31)
        model = random_model(2, rng)
        trellis = sw.build_trellis(model, 12)
        g = rng.random((12, 2)) + 0.05
        g[[3, 7]] = 0.5
        post = sw.forward_backward(trellis, g)
        ext = sw.forward_backward_extrinsic(trellis, g)
        assert np.abs(post[[3, 7]] - ext[[3, 7]]).max() <= 1e-12

    def test_extrinsic_excludes_own_evidence(self):
        # chain-only belief at position i must not react to g_i
        rng = np.random.default_rng(32)
        model = random_model(2, rng)
        trellis = sw.build_trellis(model, 9)
        g = rng.random((9, 2)) + 0.05
        ext1 = sw.forward_backward_extrinsic(trellis, g)
        g2 = g.copy()
        g2[4] = [0.99, 0.01]
        ext2 = sw.forward_backward_extrinsic(trellis, g2)
        assert np.abs(ext1[4] - ext2[4]).max() <= 1e-12


class TestModelFile:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(6)
        model = random_model(3, rng)
        path = tmp_path / "model.txt"
        sw.save_markov_model(model, path)
        back = sw.load_markov_model(path)
        assert np.array_equal(back.a, model.a)
        assert np.array_equal(back.b, model.b)
        assert np.array_equal(back.pi, model.pi)

    def test_plain_text_layout(self, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("2\n0.9 0.1\n0.1 0.9\n1 0\n0 1\n0.5 0.5\n")
        model = sw.load_markov_model(path)
        assert model.n_states == 2
        assert model.a[0, 1] == 0.1

    def test_wrong_count_rejected(self, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("2\n0.9 0.1\n")
        with pytest.raises(ValueError):
            sw.load_markov_model(path)
