"""
Monte Carlo simulation of layered nested-lattice transmission with one-dimensional
lattices, decoded successively from the strongest layer down at receiver D1.

Per layer i both users send X_{k,i} = (u_{k,i} + d_{k,i}) mod c_i and the receiver
works on q*Y1 = q X1 + (p + gamma) X2 + q sqrt(b) Z1. Every layer is decoded in
four steps, each compared against the true values:

    combination     (q u1 + p u2) mod c_i, quantized to the fine grid
    approximation   the residual gamma X2 + lower layers, recovered without wrap
    helper          u2 from the residual reduced modulo |gamma| c_i
    message         u1, after removing the helper's contribution
"""

import logging
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from sdof.channel import ZeroNoise, make_generator, sample_channel_block, scale_model
from sdof.codes import mod_centered, mod_index
from sdof.types import LayerConfig, LayeredAllocation, NestedScalarLattice, SimReport, StageErrors
from shared.errors import DomainError, InfeasibleError
from shared.parallel import ordered_map


BLOCK_SIZE = 1024
MATCH_TOLERANCE = 1e-9
SCALE_TOLERANCE = 1e-12
STAGES = ("combination", "approximation", "helper", "message")


class LeakageBudget(NamedTuple):
    net_bits: float
    gross_bits: float


class BlockDraw(NamedTuple):
    """one block of trials; arrays are indexed [trial, user, layer]."""

    indices: np.ndarray
    dithers: np.ndarray
    signals: np.ndarray
    received: np.ndarray


class BlockTally(NamedTuple):
    stage_errors: np.ndarray
    layer_errors: np.ndarray
    chain_successes: int


def build_layer_config(
    allocation: LayeredAllocation,
    trials: int,
    seed: int = 0,
    rate_backoff: float = 0.3,
    ratios: Optional[Sequence[int]] = None,
    dither_refinement: Optional[int] = None,
    noiseless: bool = False,
    genie: bool = False,
) -> LayerConfig:
    """
    One nested lattice per layer with coarse step sqrt(12 P_i), so a uniform
    draw over its region has power P_i. K_i = max(2, floor(2^(R_i - backoff)))
    unless ``ratios`` fixes the K_i explicitly.

    Raises:
        DomainError: If an explicit ratio is below 2 or the ratio count does not match the layers.
    """
    if rate_backoff < 0:
        raise DomainError(f"rate_backoff must be nonnegative, got {rate_backoff}")

    if ratios is None:
        sized = max(2, math.floor(2 ** (allocation.per_layer_rate - rate_backoff)))
        ratios = [sized] * allocation.m_layers
    else:
        ratios = [int(k) for k in ratios]
        if len(ratios) != allocation.m_layers:
            raise DomainError(f"expected {allocation.m_layers} ratios, got {len(ratios)}")
        if any(k < 2 for k in ratios):
            raise DomainError(f"every layer needs K_i >= 2, got {ratios}")

    lattices = tuple(
        NestedScalarLattice(fine_step=math.sqrt(12 * power) / k, ratio=k) for power, k in zip(allocation.powers, ratios)
    )
    return LayerConfig.build(
        allocation=allocation,
        lattice_per_layer=lattices,
        rate_backoff=rate_backoff,
        trials=trials,
        seed=seed,
        dither_refinement=dither_refinement,
        noiseless=noiseless,
        genie=genie,
    )


def leakage_budget(cfg: LayerConfig) -> LeakageBudget:
    """
    Each layer leaks at most one bit per channel use, so the secrecy accounting
    keeps sum_i max(log2 K_i - 1, 0) out of the gross sum_i log2 K_i.
    """
    rates = [lattice.rate for lattice in cfg.lattice_per_layer]
    return LeakageBudget(
        net_bits=math.fsum(max(rate - 1.0, 0.0) for rate in rates),
        gross_bits=math.fsum(rates),
    )


def noiseless_exact(cfg: LayerConfig) -> bool:
    """
    Whether every decoding step is guaranteed correct without noise: the
    residual gamma X2 + lower layers must stay inside half a fine step, and the
    lower layers alone inside half a helper step |gamma| delta_i.
    """
    allocation = cfg.allocation
    gamma = abs(allocation.gamma)
    spread = allocation.q + abs(allocation.p + allocation.gamma)

    lower = 0.0
    for lattice in cfg.lattice_per_layer:
        c, delta = lattice.coarse_step, lattice.fine_step
        if not gamma * c / 2 + lower < delta / 2:
            return False
        if not lower < gamma * delta / 2:
            return False
        lower += spread * c / 2
    return True


def _layer_arrays(cfg: LayerConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    coarse = np.array([lattice.coarse_step for lattice in cfg.lattice_per_layer])
    fine = np.array([lattice.fine_step for lattice in cfg.lattice_per_layer])
    ratios = np.array(cfg.ratios, dtype=np.int64)
    return coarse, fine, ratios


def draw_block(cfg: LayerConfig, block_index: int, size: int) -> BlockDraw:
    """
    Messages, dithers and the received q*Y1 for one block. The stream depends
    only on (seed, block_index), and messages and dithers come from uniform
    floats, so configurations differing only in K_i share their randomness.
    """
    allocation = cfg.allocation
    layers = allocation.m_layers
    coarse, fine, ratios = _layer_arrays(cfg)
    generator = make_generator(cfg.seed, block_index)

    message_uniforms = generator.random((size, 2, layers))
    dither_uniforms = generator.random((size, 2, layers))

    indices = np.floor(message_uniforms * ratios).astype(np.int64) - ratios // 2
    if cfg.dither_refinement is None:
        dithers = (dither_uniforms - 0.5) * coarse
    else:
        points = ratios * cfg.dither_refinement
        grid = np.floor(dither_uniforms * points).astype(np.int64) - points // 2
        dithers = grid * (fine / cfg.dither_refinement)

    signals = mod_centered(indices * fine + dithers, coarse)

    params = scale_model(
        a=((allocation.p + allocation.gamma) / allocation.q) ** 2 / allocation.b,
        b=allocation.b,
    )
    noise_source = ZeroNoise() if cfg.noiseless else generator
    y1, _ = sample_channel_block(params, signals[:, 0, :].sum(axis=1), signals[:, 1, :].sum(axis=1), noise_source)

    return BlockDraw(indices=indices, dithers=dithers, signals=signals, received=allocation.q * y1)


def _decode_block(cfg: LayerConfig, draw: BlockDraw) -> BlockTally:
    allocation = cfg.allocation
    gamma, p, q = allocation.gamma, allocation.p, allocation.q
    coarse, fine, ratios = _layer_arrays(cfg)
    layers = allocation.m_layers
    size = len(draw.received)

    contributions = q * draw.signals[:, 0, :] + (p + gamma) * draw.signals[:, 1, :]
    if cfg.noiseless:
        noise = np.zeros(size)
    else:
        noise = draw.received - contributions.sum(axis=1)
    lower_true = noise[:, None] + np.cumsum(contributions, axis=1) - contributions

    stage_errors = np.zeros((len(STAGES), layers), dtype=np.int64)
    layer_errors = np.zeros(layers, dtype=np.int64)
    any_error = np.zeros(size, dtype=bool)

    residual = draw.received
    for i in reversed(range(layers)):
        c, delta, k = coarse[i], fine[i], int(ratios[i])
        k1, k2 = draw.indices[:, 0, i], draw.indices[:, 1, i]
        d1, d2 = draw.dithers[:, 0, i], draw.dithers[:, 1, i]
        # rounding in q*Y1 scales with the strongest layer
        tolerance = max(MATCH_TOLERANCE * delta, SCALE_TOLERANCE * coarse[-1])

        observed = mod_centered(residual - q * d1 - p * d2, c)
        combination = mod_index(np.rint(observed / delta).astype(np.int64), k)
        combination_error = combination != mod_index(q * k1 + p * k2, k)

        remainder = mod_centered(observed - combination * delta, c)
        approximation_error = np.abs(remainder - (gamma * draw.signals[:, 1, i] + lower_true[:, i])) > tolerance

        scaled = mod_centered(remainder - gamma * d2, abs(gamma) * c)
        k2_hat = mod_index(np.rint(scaled / (gamma * delta)).astype(np.int64), k)
        helper_error = k2_hat != k2

        x2_hat = mod_centered(k2_hat * delta + d2, c)
        x1_hat = (residual - remainder - p * x2_hat) / q
        k1_hat = mod_index(np.rint(mod_centered(x1_hat - d1, c) / delta).astype(np.int64), k)
        message_error = k1_hat != k1

        errors = (combination_error, approximation_error, helper_error, message_error)
        for stage, error in enumerate(errors):
            stage_errors[stage, i] = int(error.sum())
        layer_error = np.logical_or.reduce(errors)
        layer_errors[i] = int(layer_error.sum())
        any_error |= layer_error

        residual = lower_true[:, i] if cfg.genie else remainder - gamma * x2_hat

    return BlockTally(stage_errors=stage_errors, layer_errors=layer_errors, chain_successes=int((~any_error).sum()))


def _blocks(trials: int) -> list[tuple[int, int]]:
    return [(index, min(BLOCK_SIZE, trials - start)) for index, start in enumerate(range(0, trials, BLOCK_SIZE))]


def run_layered_sim(cfg: LayerConfig) -> SimReport:
    """
    Simulate cfg.trials uses of the layered scheme and report per-layer and
    per-step error rates. Identical configurations give identical reports.

    Raises:
        InfeasibleError: If the allocation's gamma is outside the feasible range.
    """
    allocation = cfg.allocation
    if allocation.gamma**2 >= 0.5 or allocation.gamma == 0:
        raise InfeasibleError(f"gamma={allocation.gamma} is not feasible for the layered scheme")

    tallies = ordered_map(lambda block: _decode_block(cfg, draw_block(cfg, *block)), _blocks(cfg.trials))

    stage_errors = sum((tally.stage_errors for tally in tallies), np.zeros((len(STAGES), allocation.m_layers), np.int64))
    layer_errors = sum((tally.layer_errors for tally in tallies), np.zeros(allocation.m_layers, np.int64))
    successes = sum(tally.chain_successes for tally in tallies)

    trials = cfg.trials
    per_layer_error = tuple(int(count) / trials for count in layer_errors)
    budget = leakage_budget(cfg)
    accounting = math.fsum(
        (1 - error) * max(lattice.rate - 1.0, 0.0) for error, lattice in zip(per_layer_error, cfg.lattice_per_layer)
    )

    report = SimReport(
        per_layer_error=per_layer_error,
        stage_errors=tuple(
            StageErrors(**{stage: int(stage_errors[s, i]) / trials for s, stage in enumerate(STAGES)})
            for i in range(allocation.m_layers)
        ),
        chain_success=successes / trials,
        leakage_budget_bits=budget.net_bits,
        gross_rate_bits=budget.gross_bits,
        achieved_secrecy_rate_accounting=accounting,
        ratios=tuple(cfg.ratios),
        trials=trials,
        seed=cfg.seed,
    )
    logging.info(
        f"action: run_layered_sim | layers: {allocation.m_layers} | trials: {trials} | seed: {cfg.seed} "
        f"| chain_success: {report.chain_success}"
    )
    return report


def empirical_layer_power(cfg: LayerConfig) -> tuple[np.ndarray, np.ndarray]:
    """
    mean of X_{k,i}^2 over cfg.trials draws and its standard error, both shaped [user, layer].
    """
    sums, squares = 0.0, 0.0
    for block in _blocks(cfg.trials):
        energy = draw_block(cfg, *block).signals ** 2
        sums = sums + energy.sum(axis=0)
        squares = squares + (energy**2).sum(axis=0)

    mean = sums / cfg.trials
    variance = squares / cfg.trials - mean**2
    return mean, np.sqrt(variance / cfg.trials)
