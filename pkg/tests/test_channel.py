import math

import numpy as np
import pytest

from sdof.channel import (
    ZeroNoise,
    check_phase,
    complex_reduce,
    decompose,
    enumerate_decompositions,
    make_generator,
    reduced_noise_variance,
    sample_channel,
    sample_channel_block,
    scale_model,
)
from sdof.types import Sign
from shared.errors import DomainError


class TestScaleModel:

    def test_derived_gains(self):
        params = scale_model(a=2.25, b=4.0)

        assert params.sqrt_ab == pytest.approx(3.0)
        assert params.noise_std_d1 == pytest.approx(2.0)
        assert params.noise_std_d2 == 1.0
        assert params.sign is Sign.PLUS
        assert not params.is_complex

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, 0.0), (-1.0, 2.0)])
    def test_rejects_disconnected_channel(self, a, b):
        with pytest.raises(DomainError):
            scale_model(a=a, b=b)

    def test_rejects_overflowing_cross_gain(self):
        with pytest.raises(DomainError):
            scale_model(a=1e300, b=1e300)

    def test_rejects_nonpositive_power(self):
        with pytest.raises(DomainError):
            scale_model(a=1.0, b=1.0, p1_bar=0.0)


class TestComplexReduction:

    def test_cancels_rotated_helper(self):
        psi, gain, x1, x2 = math.pi / 3, 1.7, 0.8, -2.5
        y1 = x1 + gain * complex(math.cos(psi), math.sin(psi)) * x2

        assert complex_reduce(psi, y1) == pytest.approx(x1, abs=1e-12)

    @pytest.mark.parametrize("psi", [0.0, math.pi, -math.pi, 2 * math.pi])
    def test_real_phase_rejected(self, psi):
        with pytest.raises(DomainError):
            check_phase(psi)
        with pytest.raises(DomainError):
            complex_reduce(psi, 1 + 1j)

    def test_reduced_noise_variance(self):
        assert reduced_noise_variance(1.0, math.pi / 2) == pytest.approx(0.5)
        assert reduced_noise_variance(2.0, math.pi / 6) == pytest.approx(4.0)


class TestDecompose:

    def test_half_integer_rounds_down(self):
        decomposition = decompose(1.5, 1)

        assert (decomposition.p, decomposition.q) == (1, 1)
        assert decomposition.gamma == pytest.approx(0.5)

    def test_irrational_gain(self):
        decomposition = decompose(math.sqrt(2), 2)

        assert (decomposition.p, decomposition.q) == (3, 2)
        assert decomposition.gamma == pytest.approx(2 * math.sqrt(2) - 3)

    @pytest.mark.parametrize("sqrt_ab, q", [(1.5, 2), (0.75, 4), (1.0, 3), (0.2, 1)])
    def test_invalid_decompositions_are_skipped(self, sqrt_ab, q):
        assert decompose(sqrt_ab, q) is None

    def test_not_coprime_is_skipped(self):
        # 2 * 1.05 = 2.1 gives p = 2, q = 2
        assert decompose(1.05, 2) is None

    @pytest.mark.parametrize("sqrt_ab", [0.51, 0.93, math.sqrt(2), math.pi / 2, 1.99, 2.7])
    def test_reconstruction_is_exact(self, sqrt_ab):
        for decomposition in enumerate_decompositions(sqrt_ab, 20):
            target = decomposition.q * sqrt_ab
            assert abs(target - decomposition.p - decomposition.gamma) <= 8 * math.ulp(target)
            assert math.gcd(decomposition.p, decomposition.q) == 1
            assert 0 < abs(decomposition.gamma) <= 0.5

    def test_enumeration_is_ascending_in_q(self):
        found = enumerate_decompositions(1.5, 3)

        assert [(d.p, d.q) for d in found] == [(1, 1), (4, 3)]
        assert all(d.gamma == pytest.approx(0.5) for d in found)

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            enumerate_decompositions(1.5, 0)
        with pytest.raises(DomainError):
            decompose(-1.0, 1)
        with pytest.raises(DomainError):
            decompose(math.inf, 1)


class TestSampling:

    def test_noiseless_sample(self):
        params = scale_model(a=2.25, b=1.0, sign=Sign.MINUS)
        sample = sample_channel(params, 1.0, 1.0, ZeroNoise())

        assert sample.y1 == pytest.approx(2.5)
        assert sample.y2 == pytest.approx(0.0)

    def test_seeded_samples_repeat(self):
        params = scale_model(a=0.5, b=2.0)

        first = sample_channel(params, 0.3, -0.7, make_generator(11))
        second = sample_channel(params, 0.3, -0.7, make_generator(11))

        assert first == second

    def test_streams_are_independent(self):
        assert make_generator(5, 0).random() != make_generator(5, 1).random()

    @pytest.mark.timeout(10)
    def test_noise_variances(self):
        params = scale_model(a=1.0, b=2.0)
        size = 100_000
        x1 = np.linspace(-3, 3, size)
        x2 = np.cos(np.arange(size))

        y1, y2 = sample_channel_block(params, x1, x2, make_generator(3))

        assert np.var(y1 - x1 - params.sqrt_ab * x2) == pytest.approx(2.0, rel=0.05)
        assert np.var(y2 - x1 - x2) == pytest.approx(1.0, rel=0.05)
