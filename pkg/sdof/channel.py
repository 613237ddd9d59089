"""
channel models: scaling of the two-user model, the complex-to-real reduction,
rational decomposition of the cross gain, and AWGN sampling.
"""

import logging
import math
from typing import Optional, Protocol

import numpy as np

from sdof.types import ChannelParams, ChannelSample, RationalDecomposition, Sign
from shared.errors import DomainError


GAMMA_ZERO_THRESHOLD = 1e-12
PHASE_TOLERANCE = 1e-9


class NoiseSource(Protocol):
    def standard_normal(self, size=None): ...


class ZeroNoise:
    """noise source that always yields zeros; turns the channel into its noiseless skeleton."""

    def standard_normal(self, size=None):
        if size is None:
            return 0.0
        return np.zeros(size)


def make_generator(seed: int, *stream: int) -> np.random.Generator:
    """
    counter-based generator for (seed, *stream); distinct stream keys give
    independent streams, identical keys give identical draws.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def scale_model(
    a: float,
    b: float,
    sign: Sign = Sign.PLUS,
    p1_bar: float = 1.0,
    p2_bar: float = 1.0,
    psi: Optional[float] = None,
) -> ChannelParams:
    """
    Scaled model parameters for squared cross gains a (into D1) and b (into D2).

    Raises:
        DomainError: If a gain or power is not strictly positive.
    """
    if not a > 0 or not b > 0:
        raise DomainError(f"channel must be fully connected: a={a}, b={b}")
    return ChannelParams.build(a=a, b=b, sign=sign, p1_bar=p1_bar, p2_bar=p2_bar, psi=psi)


def check_phase(psi: float) -> None:
    """reject phases where the reduction is undefined (psi = 0 or pi mod 2pi)."""
    if abs(math.sin(psi)) < PHASE_TOLERANCE:
        raise DomainError(f"phase psi={psi} is a multiple of pi; the channel is real")


def complex_reduce(psi: float, y1_complex: complex) -> float:
    """
    g(Y1) = Re Y1 - cot(psi) Im Y1, which cancels the rotated helper signal when
    both inputs are real. The reduced noise is sqrt(b)(Re Z1 - cot(psi) Im Z1),
    variance b csc^2(psi) / 2.
    """
    check_phase(psi)
    return y1_complex.real - (math.cos(psi) / math.sin(psi)) * y1_complex.imag


def reduced_noise_variance(b: float, psi: float) -> float:
    check_phase(psi)
    return b / (2 * math.sin(psi) ** 2)


def decompose(sqrt_ab: float, q: int) -> Optional[RationalDecomposition]:
    """
    Write sqrt_ab = (p + gamma)/q with p the integer nearest to q*sqrt_ab
    (half-integers round down).

    Returns None when p is not positive, when gcd(p, q) != 1, or when gamma
    vanishes.
    """
    if not sqrt_ab > 0:
        raise DomainError(f"sqrt_ab must be positive, got {sqrt_ab}")
    if q < 1:
        raise DomainError(f"q must be a positive integer, got {q}")

    target = q * sqrt_ab
    if not math.isfinite(target):
        raise DomainError(f"q*sqrt_ab is not finite for sqrt_ab={sqrt_ab}, q={q}")
    p = math.ceil(target - 0.5)
    gamma = target - p

    if p <= 0 or math.gcd(p, q) != 1 or abs(gamma) < GAMMA_ZERO_THRESHOLD:
        return None
    return RationalDecomposition(p=p, q=q, gamma=gamma)


def enumerate_decompositions(sqrt_ab: float, qmax: int) -> list[RationalDecomposition]:
    """all valid decompositions for q = 1..qmax, ascending in q."""
    if qmax < 1:
        raise DomainError(f"qmax must be at least 1, got {qmax}")

    found = []
    for q in range(1, qmax + 1):
        decomposition = decompose(sqrt_ab, q)
        if decomposition is not None:
            found.append(decomposition)

    logging.debug(f"action: enumerate_decompositions | sqrt_ab: {sqrt_ab} | qmax: {qmax} | found: {len(found)}")
    return found


def sample_channel(params: ChannelParams, x1: float, x2: float, noise_source: NoiseSource) -> ChannelSample:
    """
    One use of the scaled real channel. z1 is drawn before z2, so a seeded
    generator reproduces the same samples.
    """
    z1 = float(noise_source.standard_normal())
    z2 = float(noise_source.standard_normal())
    y1 = x1 + params.sqrt_ab * x2 + params.noise_std_d1 * z1
    y2 = x1 + int(params.sign) * x2 + z2
    return ChannelSample(y1=y1, y2=y2)


def sample_channel_block(
    params: ChannelParams, x1: np.ndarray, x2: np.ndarray, noise_source: NoiseSource
) -> tuple[np.ndarray, np.ndarray]:
    """vectorized sample_channel over equal-length input arrays."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    z1 = noise_source.standard_normal(x1.shape)
    z2 = noise_source.standard_normal(x1.shape)
    y1 = x1 + params.sqrt_ab * x2 + params.noise_std_d1 * z1
    y2 = x1 + int(params.sign) * x2 + z2
    return y1, y2
