"""
structured codebooks: the scalar lattice codebook, Q-ary digit codebooks and
one-dimensional nested lattices with dithering.
"""

import logging
import math
from typing import Sequence

import numpy as np

from sdof.types import DigitCodebook, NestedScalarLattice, ScalarLatticeCodebook, Sign, SumRepresentation
from shared.errors import DomainError


MEMBERSHIP_TOLERANCE = 1e-9
EXACT_CORRECTION_LIMIT = 2**52


def scalar_codebook_size(power: float, epsilon: float) -> int:
    """
    |C| = 2*floor(sqrt(P) / P^(1/4+eps)) + 1, computed without listing the points
    so it stays usable at powers far beyond what can be enumerated.
    """
    _check_codebook_domain(power, epsilon)
    return 2 * _half_count(power, epsilon) + 1


def build_scalar_codebook(power: float, epsilon: float) -> ScalarLatticeCodebook:
    """
    Lattice P^(1/4+eps) * Z intersected with [-sqrt(P), sqrt(P)].

    Raises:
        DomainError: If power is not positive or epsilon lies outside (0, 1/4).
    """
    _check_codebook_domain(power, epsilon)
    step = power ** (0.25 + epsilon)
    half_width = math.sqrt(power)
    half_count = _half_count(power, epsilon)

    points = tuple(k * step for k in range(-half_count, half_count + 1))
    logging.debug(f"action: build_scalar_codebook | power: {power} | epsilon: {epsilon} | size: {len(points)}")
    return ScalarLatticeCodebook(step=step, half_width=half_width, points=points, power=power, epsilon=epsilon)


def _check_codebook_domain(power: float, epsilon: float) -> None:
    if not power > 0 or not math.isfinite(power):
        raise DomainError(f"power must be positive and finite, got {power}")
    if not 0 < epsilon < 0.25:
        raise DomainError(f"epsilon must lie in (0, 1/4), got {epsilon}")


def _half_count(power: float, epsilon: float) -> int:
    step = power ** (0.25 + epsilon)
    half_width = math.sqrt(power)
    count = math.floor(half_width / step)

    # the quotient can land one off when it sits next to an integer
    if count < EXACT_CORRECTION_LIMIT:
        while (count + 1) * step <= half_width:
            count += 1
        while count > 0 and count * step > half_width:
            count -= 1
    return count


def mod_coarse(x, lat: NestedScalarLattice):
    """
    x mod coarse lattice into [-c/2, c/2), c = coarse step; a point exactly on
    the upper boundary maps to -c/2. Works elementwise on arrays.
    """
    return mod_centered(x, lat.coarse_step)


def mod_centered(x, period: float):
    """same reduction as mod_coarse for an arbitrary period."""
    return x - period * np.floor(x / period + 0.5)


def mod_index(n, period: int):
    """integer version of the centered reduction: maps into [-(period//2), period - period//2)."""
    half = period // 2
    return np.mod(np.asarray(n) + half, period) - half


def is_region_point(u: float, lat: NestedScalarLattice) -> bool:
    k = u / lat.fine_step
    nearest = round(k)
    if abs(k - nearest) > MEMBERSHIP_TOLERANCE:
        return False
    low = -(lat.ratio // 2)
    return low <= nearest < low + lat.ratio


def encode_dithered(u: float, d: float, lat: NestedScalarLattice) -> float:
    """
    Transmit (u + d) mod coarse lattice. With d uniform over the fundamental
    region the output is uniform there and independent of u.

    Raises:
        DomainError: If u is not a fine-lattice point of the fundamental region.
    """
    if not is_region_point(u, lat):
        raise DomainError(f"u={u} is not a fine-lattice point of the fundamental region")
    return float(mod_coarse(u + d, lat))


def represent_sum(s: float, lat: NestedScalarLattice, sign: Sign = Sign.PLUS) -> SumRepresentation:
    """
    Split a sum/difference of two region points into its residue modulo the
    coarse lattice and the coarse quotient t, with s = residue + t*c.

    Raises:
        DomainError: If s lies outside [-c, c), so it cannot be x1 +/- x2.
    """
    c = lat.coarse_step
    if not -c <= s < c:
        raise DomainError(f"s={s} is not x1 {sign.symbol} x2 for points of the fundamental region [-{c}/2, {c}/2)")

    residue = float(mod_coarse(s, lat))
    t = round((s - residue) / c)
    return SumRepresentation(t=t, residue=residue)


def digit_encode(digits: Sequence[int], book: DigitCodebook) -> float:
    """
    X = unit * sum_i a_i Q^i.

    Raises:
        DomainError: If the digit count differs from the codebook's or a digit is out of range.
    """
    if len(digits) != book.digits:
        raise DomainError(f"expected {book.digits} digits, got {len(digits)}")

    total = 0
    for index, digit in enumerate(digits):
        if not 0 <= digit < book.base:
            raise DomainError(f"digit {index} = {digit} outside [0, {book.base})")
        total += int(digit) * book.base**index
    return book.unit * total


def digit_value_pmf(book: DigitCodebook, user: int) -> np.ndarray:
    """
    distribution of the integer sum_i a_i Q^i for one user, indexed by that integer.
    """
    if not 0 <= user < len(book.digit_dist):
        raise DomainError(f"codebook has no user {user}")

    pmf = np.ones(1)
    for index in reversed(range(book.digits)):
        dist = np.asarray(book.digit_dist[user][index], dtype=float)
        # most significant digit first: each new (lower) digit refines every existing value
        pmf = np.outer(pmf, dist).ravel()
    return pmf
