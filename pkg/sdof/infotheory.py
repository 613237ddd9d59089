"""
information measures used across the toolkit.

Everything discrete is computed exactly from enumerated tables; the only
numerical step is the one-dimensional quadrature behind mixture_mi.
"""

import logging
import math
from typing import NamedTuple, Union

import numpy as np
from scipy import integrate, optimize, special

from sdof.codes import digit_value_pmf, mod_index
from sdof.types import DigitCodebook, JointPMF, MixtureChannelSpec, NestedScalarLattice, Sign
from shared.errors import DomainError
from shared.parallel import ordered_map


LN2 = math.log(2)

QUADRATURE_TOLERANCE = 1e-8
QUADRATURE_MAX_HALVINGS = 12
QUADRATURE_TAIL_SIGMAS = 10.0
DENSITY_CHUNK = 512
ATOM_MERGE_TOLERANCE = 1e-9

THEOREM6_MIN_GRID = 100
THEOREM6_ROW_CHUNK = 250


class Theorem6Optimum(NamedTuple):
    p1_star: float
    p2_star: float
    value: float
    grid_size: int


class LeakageAudit(NamedTuple):
    mi_mod: float
    mi_full: float


class SecrecyRateTerms(NamedTuple):
    """I(X1;Y1) at the receiver and I(X1;Y2) at the eavesdropper, in bits."""

    mi_receiver: float
    mi_eavesdropper: float

    @property
    def difference(self) -> float:
        return self.mi_receiver - self.mi_eavesdropper


def entropy_bits(pmf) -> float:
    """H(p) in bits with 0 log 0 = 0."""
    values = special.entr(np.asarray(pmf, dtype=float).ravel())
    return math.fsum(values) / LN2


def gaussian_capacity(x: float) -> float:
    if x < 0:
        raise DomainError(f"SNR must be nonnegative, got {x}")
    return 0.5 * math.log2(1 + x)


# DISCRETE
def discrete_mi(joint: Union[JointPMF, np.ndarray]) -> float:
    """
    I(X;Y) in bits from a joint table, rows indexed by X.

    Raises:
        DomainError: If the table is not a valid joint distribution.
    """
    if not isinstance(joint, JointPMF):
        joint = JointPMF.from_array(joint)
    table = joint.as_array()

    px = table.sum(axis=1)
    py = table.sum(axis=0)
    mask = table > 0
    ratio = table[mask] / np.outer(px, py)[mask]
    mi = math.fsum(table[mask] * np.log2(ratio))

    return min(max(mi, 0.0), entropy_bits(px), entropy_bits(py))


def enumerate_sum_joint(Q: int, sign: Sign = Sign.PLUS) -> JointPMF:
    """
    joint table of (X1, X1 +/- X2) for X1, X2 independent uniform on {0..Q-1};
    columns run over the 2Q-1 possible outcomes in increasing order.
    """
    if Q < 1:
        raise DomainError(f"Q must be a positive integer, got {Q}")

    table = np.zeros((Q, 2 * Q - 1))
    x2 = np.arange(Q)
    for x1 in range(Q):
        outcome = x1 + int(sign) * x2
        table[x1, outcome + (Q - 1 if sign is Sign.MINUS else 0)] = 1.0 / Q**2
    return JointPMF.from_array(table)


def f_of_Q(Q: int, sign: Sign = Sign.PLUS) -> float:
    """
    f(Q) = I(X1; X1 +/- X2) for independent uniform Q-ary symbols.

    Given X1 the outcome is a shift of X2, so f(Q) = H(X1 +/- X2) - log2 Q, and
    the outcome counts form the triangle 1, 2, .., Q, .., 2, 1 for either sign.
    """
    if Q < 1:
        raise DomainError(f"Q must be a positive integer, got {Q}")
    if Q == 1:
        return 0.0

    counts = np.arange(1, Q, dtype=float)
    weighted = 2 * math.fsum(counts * np.log2(counts)) + Q * math.log2(Q)
    return math.log2(Q) - weighted / Q**2


def lemma1_bound(Q: int) -> float:
    """(1/2) log2(2 pi e (1/6 - 1/(12 Q^2))), increasing in Q towards (1/2) log2(pi e / 3)."""
    if Q < 1:
        raise DomainError(f"Q must be a positive integer, got {Q}")
    return 0.5 * math.log2(2 * math.pi * math.e * (1 / 6 - 1 / (12 * Q**2)))


def digit_sum_mi(book: DigitCodebook, sign: Sign = Sign.PLUS) -> float:
    """
    I(X1; X1 +/- X2) for two users of a Q-ary digit codebook with the
    per-digit distributions the codebook carries. M = 1 with uniform digits
    reduces to f(Q).
    """
    if len(book.digit_dist) < 2:
        raise DomainError("digit codebook must describe two users")

    p1 = digit_value_pmf(book, 0)
    p2 = digit_value_pmf(book, 1)
    outcome = np.convolve(p1, p2 if sign is Sign.PLUS else p2[::-1])

    mi = entropy_bits(outcome) - entropy_bits(p2)
    return min(max(mi, 0.0), entropy_bits(p1))


# THEOREM 6
def _bernoulli_pair_tables(p1: float, p2: float) -> tuple[np.ndarray, np.ndarray]:
    q1, q2 = 1 - p1, 1 - p2
    sum_table = np.array([[q1 * q2, q1 * p2, 0.0], [0.0, p1 * q2, p1 * p2]])
    difference_table = np.array([[q1 * p2, q1 * q2, 0.0], [0.0, p1 * p2, p1 * q2]])
    return sum_table, difference_table


def theorem6_objective(p1: float, p2: float) -> float:
    """
    I(a1; a1 + a2) - I(a1; a1 - a2) for independent a1 ~ Bern(p1), a2 ~ Bern(p2).

    Raises:
        DomainError: If a probability lies outside [0, 1].
    """
    if not 0 <= p1 <= 1 or not 0 <= p2 <= 1:
        raise DomainError(f"probabilities must lie in [0, 1], got ({p1}, {p2})")

    sum_table, difference_table = _bernoulli_pair_tables(p1, p2)
    return discrete_mi(sum_table) - discrete_mi(difference_table)


def _objective_grid(p1, p2):
    # given a1 both outcomes are shifts of a2, so the gap is H(a1 + a2) - H(a1 - a2)
    q1, q2 = 1 - p1, 1 - p2
    sum_entropy = special.entr(q1 * q2) + special.entr(q1 * p2 + p1 * q2) + special.entr(p1 * p2)
    difference_entropy = special.entr(q1 * p2) + special.entr(q1 * q2 + p1 * p2) + special.entr(p1 * q2)
    return (sum_entropy - difference_entropy) / LN2


def _golden_refine(fn, grid: np.ndarray, index: int) -> float:
    if index == 0 or index == len(grid) - 1:
        return float(grid[index])
    try:
        result = optimize.minimize_scalar(
            lambda x: -fn(x), bracket=(grid[index - 1], grid[index], grid[index + 1]), method="golden"
        )
    except ValueError:
        return float(grid[index])

    candidate = float(np.clip(result.x, 0.0, 1.0))
    return candidate if fn(candidate) >= fn(float(grid[index])) else float(grid[index])


def optimize_theorem6(grid_size: int = 2000) -> Theorem6Optimum:
    """
    Maximize theorem6_objective over a grid_size x grid_size grid of [0, 1]^2,
    then refine each coordinate once with a golden-section search bracketed
    by the neighbouring grid points.

    The objective is invariant under flipping both bits, so the maximizer is
    reported with p1* <= 1/2.
    """
    if grid_size < THEOREM6_MIN_GRID:
        raise DomainError(f"grid_size must be at least {THEOREM6_MIN_GRID}, got {grid_size}")

    grid = np.linspace(0.0, 1.0, grid_size)
    best_value, best_i, best_j = -math.inf, 0, 0
    for start in range(0, grid_size, THEOREM6_ROW_CHUNK):
        rows = grid[start : start + THEOREM6_ROW_CHUNK]
        values = _objective_grid(rows[:, None], grid[None, :])
        flat = int(np.argmax(values))
        i, j = divmod(flat, grid_size)
        if values[i, j] > best_value:
            best_value, best_i, best_j = float(values[i, j]), start + i, j

    p2 = float(grid[best_j])
    p1 = _golden_refine(lambda x: float(_objective_grid(x, p2)), grid, best_i)
    p2 = _golden_refine(lambda x: float(_objective_grid(p1, x)), grid, best_j)

    if p1 > 0.5:
        p1, p2 = 1 - p1, 1 - p2

    value = float(_objective_grid(p1, p2))
    logging.info(f"action: optimize_theorem6 | grid: {grid_size} | p1: {p1:.6f} | p2: {p2:.6f} | value: {value:.6f}")
    return Theorem6Optimum(p1_star=p1, p2_star=p2, value=value, grid_size=grid_size)


# GAUSSIAN MIXTURES
def _merge_atoms(values: np.ndarray, probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keep = probs > 0
    values, probs = values[keep], probs[keep]
    order = np.argsort(values, kind="stable")
    values, probs = values[order], probs[order]

    scale = np.maximum(1.0, np.abs(values[1:]))
    starts = np.concatenate(([True], np.diff(values) > ATOM_MERGE_TOLERANCE * scale))
    group = np.cumsum(starts) - 1
    return values[starts], np.bincount(group, weights=probs)


def _mixture_entropy_integrand(y: np.ndarray, values: np.ndarray, probs: np.ndarray, sigma: float) -> np.ndarray:
    """entr of the mixture density at sorted points y, summing only atoms within the tail reach."""
    out = np.empty_like(y)
    norm = 1.0 / (sigma * math.sqrt(2 * math.pi))
    reach = QUADRATURE_TAIL_SIGMAS * sigma
    for start in range(0, len(y), DENSITY_CHUNK):
        chunk = y[start : start + DENSITY_CHUNK]
        lo = np.searchsorted(values, chunk[0] - reach, side="left")
        hi = np.searchsorted(values, chunk[-1] + reach, side="right")
        z = (chunk[:, None] - values[None, lo:hi]) / sigma
        density = norm * (np.exp(-0.5 * z * z) @ probs[lo:hi])
        out[start : start + DENSITY_CHUNK] = special.entr(density)
    return out


def _atom_windows(values: np.ndarray, sigma: float) -> list[tuple[int, int]]:
    """index ranges [lo, hi) of sorted atoms whose tail windows overlap into one interval."""
    gaps = np.flatnonzero(np.diff(values) > 2 * QUADRATURE_TAIL_SIGMAS * sigma) + 1
    bounds = [0, *gaps.tolist(), len(values)]
    return list(zip(bounds[:-1], bounds[1:]))


def _window_entropy(values: np.ndarray, probs: np.ndarray, sigma: float) -> float:
    """
    integral in nats of entr(density) over [values[0] - reach, values[-1] + reach],
    in coordinates centred on the first atom.
    """
    values = values - values[0]
    reach = QUADRATURE_TAIL_SIGMAS * sigma
    low, high = -reach, float(values[-1]) + reach

    intervals = max(2, math.ceil((high - low) / (sigma / 4)))
    intervals += intervals % 2
    integrand = _mixture_entropy_integrand(np.linspace(low, high, intervals + 1), values, probs, sigma)
    estimate = integrate.simpson(integrand, dx=(high - low) / intervals)

    for _ in range(QUADRATURE_MAX_HALVINGS):
        step = (high - low) / intervals
        midpoints = low + step * (np.arange(intervals) + 0.5)
        refined = np.empty(2 * intervals + 1)
        refined[0::2] = integrand
        refined[1::2] = _mixture_entropy_integrand(midpoints, values, probs, sigma)
        integrand, intervals = refined, 2 * intervals

        previous, estimate = estimate, integrate.simpson(integrand, dx=(high - low) / intervals)
        if abs(estimate - previous) < QUADRATURE_TOLERANCE * LN2:
            break
    else:
        logging.warning(f"action: mixture_entropy | atoms: {len(values)} | sigma: {sigma} | result: not_converged")

    return estimate


def mixture_entropy(values: np.ndarray, probs: np.ndarray, sigma: float) -> float:
    """
    differential entropy in bits of sum_j probs_j N(values_j, sigma^2) by composite
    Simpson quadrature, halving the step until two estimates agree.

    Only the union of the windows [value_j - 10 sigma, value_j + 10 sigma] is
    integrated, so the cost follows the number of atoms rather than the span
    divided by sigma.
    """
    order = np.argsort(values, kind="stable")
    values, probs = np.asarray(values, dtype=float)[order], np.asarray(probs, dtype=float)[order]

    total = sum(_window_entropy(values[lo:hi], probs[lo:hi], sigma) for lo, hi in _atom_windows(values, sigma))
    return total / LN2


def mixture_mi(spec: MixtureChannelSpec) -> float:
    """
    I(X;Y) for Y = X + N(0, noise_std^2) with X drawn from the listed atoms:
    h(Y) - (1/2) log2(2 pi e sigma^2), clamped to [0, H(X)].
    """
    if not spec.noise_std > 0:
        raise DomainError(f"noise_std must be positive, got {spec.noise_std}")

    values, probs = _merge_atoms(spec.values(), spec.probs())
    if len(values) == 1:
        return 0.0

    sigma = spec.noise_std
    mi = mixture_entropy(values, probs, sigma) - 0.5 * math.log2(2 * math.pi * math.e * sigma**2)
    return min(max(mi, 0.0), entropy_bits(probs))


def _uniform_mixture(values: np.ndarray, noise_std: float) -> MixtureChannelSpec:
    values = np.ravel(values)
    values, probs = _merge_atoms(values, np.full(len(values), 1.0 / len(values)))
    return MixtureChannelSpec.from_arrays(values, probs, noise_std)


def secrecy_rate_terms(x1_points, x2_points, sqrt_ab: float, b: float, sign: Sign = Sign.PLUS) -> SecrecyRateTerms:
    """
    Both mutual informations of the achievable secrecy rate I(X1;Y1) - I(X1;Y2)
    for X1, X2 independent and uniform over the given point sets, the helper
    signal X2 acting as interference at both receivers:

        Y1 = X1 + sqrt(ab) X2 + sqrt(b) Z1,    Y2 = X1 +/- X2 + Z2
    """
    if not sqrt_ab > 0 or not b > 0:
        raise DomainError(f"gains must be positive: sqrt_ab={sqrt_ab}, b={b}")

    x1 = np.asarray(x1_points, dtype=float)
    x2 = np.asarray(x2_points, dtype=float)
    noise_d1 = math.sqrt(b)

    receiver = mixture_mi(_uniform_mixture(x1[:, None] + sqrt_ab * x2[None, :], noise_d1)) - mixture_mi(
        _uniform_mixture(sqrt_ab * x2, noise_d1)
    )
    eavesdropper = mixture_mi(_uniform_mixture(x1[:, None] + int(sign) * x2[None, :], 1.0)) - mixture_mi(
        _uniform_mixture(int(sign) * x2, 1.0)
    )
    return SecrecyRateTerms(mi_receiver=receiver, mi_eavesdropper=eavesdropper)


# LEAKAGE
def _pair_counts(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.unique(keys, return_counts=True)


def _mi_from_counts(per_message: list[tuple[np.ndarray, np.ndarray]]) -> float:
    """exact I(U; O) with U uniform, from per-message (observation key, count) tables."""
    keys = np.concatenate([k for k, _ in per_message])
    counts = np.concatenate([c for _, c in per_message]).astype(np.int64)
    _, inverse = np.unique(keys, return_inverse=True)
    observation_counts = np.bincount(inverse, weights=counts).astype(np.int64)

    total = int(counts.sum())
    message_count = total // len(per_message)
    ratio = (counts * total) / (message_count * observation_counts[inverse])
    return math.fsum(counts / total * np.log2(ratio))


def leakage_audit(lat: NestedScalarLattice, dither_refinement: int, sign: Sign = Sign.PLUS) -> LeakageAudit:
    """
    Exact I(u1; (X1 +/- X2) mod coarse, d1, d2) and I(u1; X1 +/- X2, d1, d2)
    for dithered nested-lattice inputs, by enumerating (u1, u2, d1, d2).

    Dithers are uniform on the grid refining the fine lattice by
    dither_refinement. Everything runs in integer units of that grid.
    """
    if dither_refinement < 2:
        raise DomainError(f"dither refinement must be at least 2, got {dither_refinement}")

    period = lat.ratio * dither_refinement
    messages = lat.fine_indices() * dither_refinement
    dithers = np.arange(-(period // 2), period - period // 2)

    u2 = messages[:, None, None]
    d1 = dithers[None, :, None]
    d2 = dithers[None, None, :]
    x2 = mod_index(u2 + d2, period)
    dither_key = (d1 + period) * (2 * period) + (d2 + period)

    def per_message(u1: int) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
        outcome = mod_index(u1 + d1, period) + int(sign) * x2
        reduced = mod_index(outcome, period)
        width = (2 * period) ** 2
        mod_keys = (reduced + 2 * period) * width + dither_key
        full_keys = (outcome + 2 * period) * width + dither_key
        return _pair_counts(mod_keys.ravel()), _pair_counts(full_keys.ravel())

    tables = ordered_map(per_message, [int(u) for u in messages])
    mi_mod = _mi_from_counts([mod for mod, _ in tables])
    mi_full = _mi_from_counts([full for _, full in tables])

    logging.debug(
        f"action: leakage_audit | ratio: {lat.ratio} | refinement: {dither_refinement} | sign: {sign.symbol} "
        f"| mi_mod: {mi_mod} | mi_full: {mi_full}"
    )
    return LeakageAudit(mi_mod=max(mi_mod, 0.0), mi_full=max(mi_full, 0.0))
