import numpy as np
import pytest

import swldpc as sw
from swldpc.channels import x2_bias
from swldpc.errors import DegenerateChannelError

from oracles import max_mutual_information


class TestBinaryEntropy:
    def test_half_is_one(self):
        assert sw.binary_entropy(0.5) == 1.0

    def test_endpoints_are_zero(self):
        assert sw.binary_entropy(0.0) == 0.0
        assert sw.binary_entropy(1.0) == 0.0

    def test_quarter(self):
        # direct evaluation: 0.25*2 + 0.75*log2(4/3)
        assert sw.binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-4)

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_out_of_range_rejected(self, p):
        with pytest.raises(ValueError):
            sw.binary_entropy(p)

    def test_inverse(self):
        for target in (0.0, 0.1, 0.35, 0.48, 0.9999, 1.0):
            p = sw.invert_binary_entropy(target)
            assert sw.binary_entropy(p) == pytest.approx(target, abs=1e-10)
            assert 0.0 <= p <= 0.5


class TestBacCapacity:
    def test_example1_forward(self):
        assert sw.bac_capacity(sw.BinaryAsymmetricChannel(0.05, 0.185)) == pytest.approx(0.4998, abs=5e-4)

    def test_symmetric_reduces_to_bsc(self):
        assert sw.bac_capacity(sw.bsc(0.11)) == pytest.approx(0.5001, abs=1e-3)
        for p in np.linspace(0.01, 0.49, 25):
            want = 1.0 - sw.binary_entropy(p)
            assert sw.bac_capacity(sw.bsc(p)) == pytest.approx(want, abs=1e-9)

    def test_noiseless(self):
        assert sw.bac_capacity(sw.BinaryAsymmetricChannel(0.0, 0.0)) == 1.0

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateChannelError):
            sw.BinaryAsymmetricChannel(0.3, 0.7)

    def test_mirror_swap(self):
        # capacity is invariant under input relabeling
        assert sw.bac_capacity(sw.BinaryAsymmetricChannel(0.9, 0.8)) == pytest.approx(
            sw.bac_capacity(sw.BinaryAsymmetricChannel(0.2, 0.1)), abs=1e-12)

    def test_matches_numeric_maximization_on_grid(self):
        vals = np.linspace(0.02, 0.45, 10)
        for p1 in vals:
            for p2 in vals:
                got = sw.bac_capacity(sw.BinaryAsymmetricChannel(p1, p2))
                assert got == pytest.approx(max_mutual_information(p1, p2), abs=1e-4)


class TestBackwardChannel:
    def test_symmetric_self_inverse(self):
        model = sw.CorrelationModel(0.5, sw.bsc(0.13))
        bwd = sw.backward_channel(model)
        assert bwd.p1 == pytest.approx(0.13, abs=1e-12)
        assert bwd.p2 == pytest.approx(0.13, abs=1e-12)

    def test_example1_values(self, example1_model):
        bwd = sw.backward_channel(example1_model)
        assert bwd.p1 == pytest.approx(0.2261, abs=1e-4)
        assert bwd.p2 == pytest.approx(0.0339, abs=1e-4)

    def test_perfect_correlation(self):
        bwd = sw.backward_channel(sw.CorrelationModel(0.4, sw.BinaryAsymmetricChannel(0.0, 0.0)))
        assert bwd.p1 == 0.0
        assert bwd.p2 == 0.0

    def test_degenerate_joint_rejected(self):
        with pytest.raises(DegenerateChannelError):
            sw.backward_channel(sw.CorrelationModel(0.5, sw.BinaryAsymmetricChannel(1.0, 0.0)))

    def test_posterior_channel_involution(self, example1_model, example2_model):
        # inverting the exact posterior channel recovers the forward crossovers
        for model in (example1_model, example2_model):
            reversed_model = sw.CorrelationModel(x2_bias(model), sw.posterior_channel(model))
            rec = sw.posterior_channel(reversed_model)
            assert rec.p1 == pytest.approx(model.forward.p1, abs=1e-9)
            assert rec.p2 == pytest.approx(model.forward.p2, abs=1e-9)


class TestBackwardCapacity:
    def test_example1(self, example1_model):
        assert sw.backward_capacity(example1_model) == pytest.approx(0.4839, abs=5e-4)

    def test_example2(self, example2_model):
        assert sw.backward_capacity(example2_model) == pytest.approx(0.4703, abs=5e-4)

    def test_symmetric_equals_forward(self):
        model = sw.CorrelationModel(0.5, sw.bsc(0.08))
        assert sw.backward_capacity(model) == pytest.approx(sw.bac_capacity(model.forward), abs=1e-12)


class TestJointEntropy:
    def test_example1(self, example1_model):
        assert sw.joint_entropy(example1_model) == pytest.approx(1.500, abs=1e-3)

    def test_example2(self, example2_model):
        assert sw.joint_entropy(example2_model) == pytest.approx(1.500, abs=1e-3)

    def test_perfect_copy(self):
        model = sw.CorrelationModel(0.5, sw.BinaryAsymmetricChannel(0.0, 0.0))
        assert sw.joint_entropy(model) == pytest.approx(1.0, abs=1e-12)

    def test_backward_factorization_agrees(self, example1_model, example2_model):
        # H(X1,X2) = H(X2) + H(X1|X2) via the exact posterior channel
        for model in (example1_model, example2_model):
            bias = x2_bias(model)
            bwd = sw.posterior_channel(model)
            other = (sw.binary_entropy(bias)
                     + bias * sw.binary_entropy(bwd.p1)
                     + (1 - bias) * sw.binary_entropy(bwd.p2))
            assert other == pytest.approx(sw.joint_entropy(model), abs=1e-9)


class TestTransmit:
    def test_noiseless_identity(self):
        bits = np.random.default_rng(0).integers(0, 2, 500, dtype=np.uint8)
        out = sw.transmit(sw.BinaryAsymmetricChannel(0.0, 0.0), bits, np.random.default_rng(1))
        assert np.array_equal(out, bits)

    def test_always_flip_complements(self):
        bits = np.random.default_rng(0).integers(0, 2, 500, dtype=np.uint8)
        out = sw.transmit(sw.BinaryAsymmetricChannel(1.0, 1.0), bits, np.random.default_rng(1))
        assert np.array_equal(out, bits ^ 1)

    def test_flip_fraction_concentrates(self):
        n = 100_000
        out = sw.transmit(sw.bsc(0.1), np.zeros(n, dtype=np.uint8), np.random.default_rng(5))
        sigma = np.sqrt(0.1 * 0.9 / n)
        assert abs(out.mean() - 0.1) < 3 * sigma

    def test_seeded_reproducibility(self):
        bits = np.random.default_rng(2).integers(0, 2, 1000, dtype=np.uint8)
        ch = sw.BinaryAsymmetricChannel(0.2, 0.05)
        a = sw.transmit(ch, bits, np.random.default_rng(77))
        b = sw.transmit(ch, bits, np.random.default_rng(77))
        assert np.array_equal(a, b)
