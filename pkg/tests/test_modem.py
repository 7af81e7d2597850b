"""BPSK modem: SNR bookkeeping, channel statistics, closed-form BER checks."""

import numpy as np
import pytest

from grandhop.modem import (
    CHANNEL_AWGN,
    CHANNEL_RAYLEIGH,
    FADING_PER_BLOCK,
    FADING_PER_SYMBOL,
    ChannelRealization,
    SnrSpec,
    demodulate,
    modulate,
    noise_variance,
    transmit,
)

from oracle_utils import awgn_bpsk_ber, rayleigh_bpsk_ber, three_sigma_band


class TestSnrSpec:
    def test_noise_variance_frozen_value(self):
        # 10 dB at rate 116/128: N0 = 1 / (10 * 116/128)
        spec = SnrSpec(eb_n0_db=10.0, code_rate=116 / 128)
        assert noise_variance(spec) == pytest.approx(0.11034482758620691, rel=1e-14)

    def test_zero_db_rate_one(self):
        assert noise_variance(SnrSpec(0.0, 1.0)) == pytest.approx(1.0)

    def test_bits_per_symbol_scales(self):
        one = noise_variance(SnrSpec(3.0, 0.5, bits_per_symbol=1))
        two = noise_variance(SnrSpec(3.0, 0.5, bits_per_symbol=2))
        assert two == pytest.approx(one / 2.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            SnrSpec(0.0, 0.0)
        with pytest.raises(ValueError):
            SnrSpec(0.0, 1.5)
        with pytest.raises(ValueError):
            SnrSpec(0.0, 1.0, bits_per_symbol=0)


class TestModulate:
    def test_antipodal_mapping(self):
        out = modulate([0, 1, 0, 0, 1])
        assert out.tolist() == [1.0, -1.0, 1.0, 1.0, -1.0]
        assert out.dtype == np.float64

    def test_shape_preserved(self):
        bits = np.zeros((3, 7), dtype=np.uint8)
        assert modulate(bits).shape == (3, 7)

    def test_unit_energy(self):
        rng = np.random.Generator(np.random.Philox(51))
        bits = rng.integers(0, 2, size=1000, dtype=np.uint8)
        assert np.all(np.abs(modulate(bits)) == 1.0)


class TestAwgn:
    def test_noise_statistics(self):
        rng = np.random.Generator(np.random.Philox(52))
        n0 = 0.5
        x = np.ones(200_000)
        y, real = transmit(x, CHANNEL_AWGN, n0, rng)
        noise = y - x
        assert abs(noise.mean()) < 3.0 * np.sqrt(n0 / 2.0 / x.size)
        assert noise.var() == pytest.approx(n0 / 2.0, rel=0.02)
        assert np.all(real.gains == 1.0)
        assert real.noise_variance == n0

    def test_llr_formula_and_hard_rule(self):
        real = ChannelRealization(gains=np.ones(4), noise_variance=0.25)
        y = np.array([0.5, -0.3, 0.0, 2.0])
        hard, llr = demodulate(y, real)
        assert llr == pytest.approx(4.0 * y / 0.25)
        assert hard.tolist() == [0, 1, 0, 0]  # exact zero tie -> bit 0

    def test_closed_form_ber(self):
        rng = np.random.Generator(np.random.Philox(53))
        eb_db, rate = 2.0, 1.0
        n0 = noise_variance(SnrSpec(eb_db, rate))
        bits = rng.integers(0, 2, size=100_000, dtype=np.uint8)
        y, real = transmit(modulate(bits), CHANNEL_AWGN, n0, rng)
        hard, _ = demodulate(y, real)
        p = awgn_bpsk_ber(eb_db, rate)
        measured = np.mean(hard != bits)
        assert abs(measured - p) < three_sigma_band(p, bits.size)


class TestRayleigh:
    def test_unit_mean_square_gain(self):
        rng = np.random.Generator(np.random.Philox(54))
        x = np.ones(200_000)
        _, real = transmit(x, CHANNEL_RAYLEIGH, 1.0, rng)
        power = np.abs(real.gains) ** 2
        # |h|^2 is exponential(1): mean 1, variance 1
        assert abs(power.mean() - 1.0) < 3.0 / np.sqrt(x.size)

    def test_per_block_gain_constant_within_rows(self):
        rng = np.random.Generator(np.random.Philox(55))
        x = np.ones((16, 32))
        _, real = transmit(x, CHANNEL_RAYLEIGH, 1.0, rng, fading=FADING_PER_BLOCK)
        assert real.gains.shape == (16, 32)
        for row in real.gains:
            assert np.all(row == row[0])
        firsts = real.gains[:, 0]
        assert len(np.unique(firsts)) == 16

    def test_per_symbol_gains_vary(self):
        rng = np.random.Generator(np.random.Philox(56))
        x = np.ones(64)
        _, real = transmit(x, CHANNEL_RAYLEIGH, 1.0, rng, fading=FADING_PER_SYMBOL)
        assert len(np.unique(real.gains)) == 64

    def test_draw_order_gains_then_noise(self):
        # the realization is reproducible from the raw generator stream
        x = modulate(np.array([0, 1, 1, 0, 1], dtype=np.uint8))
        n0 = 0.8
        y, real = transmit(x, CHANNEL_RAYLEIGH, n0, np.random.Generator(np.random.Philox(57)))
        rng = np.random.Generator(np.random.Philox(57))
        h = (rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)) * np.sqrt(0.5)
        noise = (rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)) * np.sqrt(n0 / 2.0)
        assert np.array_equal(y, h * x + noise)
        assert np.array_equal(real.gains, h)

    def test_coherent_llr_uses_conjugate_gain(self):
        gains = np.array([1j, 2.0, -1.0])
        real = ChannelRealization(gains=gains, noise_variance=2.0)
        y = np.array([1j, 1.0, 1.0])
        _, llr = demodulate(y, real)
        assert llr == pytest.approx([2.0, 4.0, -2.0])

    def test_closed_form_ber_per_symbol(self):
        rng = np.random.Generator(np.random.Philox(58))
        eb_db, rate = 5.0, 1.0
        n0 = noise_variance(SnrSpec(eb_db, rate))
        bits = rng.integers(0, 2, size=100_000, dtype=np.uint8)
        y, real = transmit(modulate(bits), CHANNEL_RAYLEIGH, n0, rng)
        hard, _ = demodulate(y, real)
        p = rayleigh_bpsk_ber(eb_db, rate)
        measured = np.mean(hard != bits)
        assert abs(measured - p) < three_sigma_band(p, bits.size)


class TestTransmitValidation:
    def test_nonpositive_noise_rejected(self):
        with pytest.raises(ValueError):
            transmit(np.ones(4), CHANNEL_AWGN, 0.0, np.random.default_rng(1))

    def test_unknown_channel(self):
        with pytest.raises(ValueError, match="channel"):
            transmit(np.ones(4), "rician", 1.0, np.random.default_rng(1))

    def test_unknown_fading(self):
        with pytest.raises(ValueError, match="fading"):
            transmit(np.ones(4), CHANNEL_RAYLEIGH, 1.0, np.random.default_rng(1), fading="doppler")
