"""
closed-form rates and secure degrees of freedom of the achievable schemes,
plus the map choosing the best scheme for a given channel.
"""

import functools
import logging
import math
from typing import NamedTuple, Optional, Sequence

from sdof.channel import PHASE_TOLERANCE, check_phase, enumerate_decompositions
from sdof.codes import build_scalar_codebook, scalar_codebook_size
from sdof.infotheory import gaussian_capacity, optimize_theorem6, secrecy_rate_terms
from sdof.types import (
    ChannelParams,
    DofResult,
    InputKind,
    LayeredAllocation,
    NumberClass,
    RationalDecomposition,
    Scheme,
    Sign,
    Variant,
)
from shared.errors import DomainError, InfeasibleError
from shared.parallel import ordered_map


EQUAL_GAIN_TOLERANCE = 1e-12
EQUAL_GAIN_GRID = 2000
DEFAULT_QMAX = 20


class Theorem7Terms(NamedTuple):
    numerator_eq36: float
    numerator_eq53: float
    denominator_eq36: float
    denominator_eq53: float


def eq7_rate(p1: float, p2: float, b: float, psi: float) -> float:
    """
    Secrecy rate of the complex-gain scheme: C(p1 / (b csc^2(psi) / 2)) - C(p1 / (p2 + 1/2)),
    clamped at 0.

    Raises:
        DomainError: If psi is a multiple of pi or a parameter is out of range.
    """
    check_phase(psi)
    if p1 < 0 or not p2 > 0 or not b > 0:
        raise DomainError(f"invalid parameters: p1={p1}, p2={p2}, b={b}")

    reduced_noise = b / (2 * math.sin(psi) ** 2)
    return max(0.0, gaussian_capacity(p1 / reduced_noise) - gaussian_capacity(p1 / (p2 + 0.5)))


def dof_ratio(rate: float, power: float) -> float:
    """rate / (1/2 log2 P), the finite-power estimate of a secure DoF."""
    if not power > 1:
        raise DomainError(f"power must exceed 1 for a DoF ratio, got {power}")
    return rate / (0.5 * math.log2(power))


def theorem4_mi_bound(P: float, epsilon: float, b: float) -> float:
    """
    (1 - 2 exp(-P^(2 eps) / 8b)) log2 |C| - 1 for the scalar lattice codebook C;
    negative for small P, where the bound is vacuous.
    """
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")

    size = scalar_codebook_size(P, epsilon)
    reliability = 1 - 2 * math.exp(-(P ** (2 * epsilon)) / (8 * b))
    return reliability * math.log2(size) - 1


def _check_layered_parameters(gamma: float, p: int, q: int) -> None:
    if not math.isfinite(gamma) or gamma == 0:
        raise DomainError(f"gamma must be finite and nonzero, got {gamma}")
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise DomainError(f"p={p} and q={q} must be coprime positive integers")
    if gamma * gamma >= 0.5:
        raise InfeasibleError(f"|gamma|={abs(gamma)} must be below 1/sqrt(2) for the layered scheme")


def layered_allocation(gamma: float, p: int, q: int, b: float, m_layers: int) -> LayeredAllocation:
    """
    Power allocation balancing every layer's decodability at D1:

        alpha = (1 - g^2) / g^4,    beta = q^2 + (p + g)^2
        P_i = alpha (alpha beta + 1)^(i-1) q^2 b
        A_i = (alpha beta + 1)^(i-1) q^2 b
        R_i = 1/2 log2((1 - g^2) / g^2)

    Raises:
        InfeasibleError: If |gamma| >= 1/sqrt(2).
        DomainError: For any other parameter violation, or if the powers overflow.
    """
    _check_layered_parameters(gamma, p, q)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    if m_layers < 1:
        raise DomainError(f"m_layers must be at least 1, got {m_layers}")

    g2 = gamma * gamma
    alpha = (1 - g2) / (g2 * g2)
    beta = q * q + (p + gamma) ** 2
    growth = alpha * beta + 1
    base = q * q * b

    try:
        interference = tuple(growth**i * base for i in range(m_layers))
        powers = tuple(alpha * a for a in interference)
        total = (growth**m_layers - 1) / beta * base
    except OverflowError:
        powers, total = (), math.inf

    if not math.isfinite(total) or not all(math.isfinite(x) for x in powers):
        raise DomainError(f"allocation overflows for gamma={gamma} with {m_layers} layers")

    return LayeredAllocation(
        gamma=gamma,
        p=p,
        q=q,
        b=b,
        alpha=alpha,
        beta=beta,
        m_layers=m_layers,
        powers=powers,
        interference=interference,
        per_layer_rate=0.5 * math.log2((1 - g2) / g2),
        total_power=total,
    )


def theorem7_terms(gamma: float, p: int, q: int) -> Theorem7Terms:
    """
    numerators and denominators of both printed forms of the layered DoF.
    The denominators coincide since alpha beta + 1 = f(gamma) / gamma^4.
    """
    _check_layered_parameters(gamma, p, q)
    g2 = gamma * gamma
    f_gamma = (1 - g2) * (q * q + (p + gamma) ** 2) + g2 * g2
    alpha = (1 - g2) / (g2 * g2)
    beta = q * q + (p + gamma) ** 2

    return Theorem7Terms(
        numerator_eq36=math.log2(1 - g2) - math.log2(g2) - 1,
        numerator_eq53=math.log2((1 - g2) / g2) - 2,
        denominator_eq36=math.log2(f_gamma) - 2 * math.log2(g2),
        denominator_eq53=math.log2(alpha * beta + 1),
    )


def theorem7_dof(gamma: float, p: int, q: int, variant: Variant = Variant.EQ36) -> float:
    terms = theorem7_terms(gamma, p, q)
    if variant is Variant.EQ36:
        value = terms.numerator_eq36 / terms.denominator_eq36
    else:
        value = terms.numerator_eq53 / terms.denominator_eq53
    return min(max(value, 0.0), 1.0)


def best_dof_over_decompositions(sqrt_ab: float, qmax: int = DEFAULT_QMAX, variant: Variant = Variant.EQ36) -> DofResult:
    """
    Best layered DoF over the decompositions with q <= qmax and |gamma| < 1/sqrt(2).
    Ties keep the smallest q. Without any feasible decomposition the value is 0
    and no witness is attached.
    """
    best_value: Optional[float] = None
    witness: Optional[RationalDecomposition] = None

    for decomposition in enumerate_decompositions(sqrt_ab, qmax):
        if decomposition.gamma**2 >= 0.5:
            continue
        value = theorem7_dof(decomposition.gamma, decomposition.p, decomposition.q, variant)
        if best_value is None or value > best_value:
            best_value, witness = value, decomposition

    return DofResult(
        value=best_value or 0.0,
        scheme=Scheme.LAYERED_THEOREM7,
        witness=witness,
        variant=variant,
    )


def gaussian_baseline_rate(p1: float, p2: float, a: float, b: float) -> float:
    """
    Gaussian signalling with full-power Gaussian jamming:
    C(p1 / (ab p2 + b)) - C(p1 / (p2 + 1)), clamped at 0. Saturates as powers grow.
    """
    if not all(x > 0 for x in (p1, p2, a, b)):
        raise DomainError(f"parameters must be positive: p1={p1}, p2={p2}, a={a}, b={b}")
    return max(0.0, gaussian_capacity(p1 / (a * b * p2 + b)) - gaussian_capacity(p1 / (p2 + 1)))


@functools.lru_cache(maxsize=None)
def equal_gain_dof(grid_size: int = EQUAL_GAIN_GRID) -> float:
    """
    DoF of the binary digit scheme for equal cross gains with opposite signs:
    the optimised per-digit gap in bits divided by log2 Q, Q = 2.
    """
    optimum = optimize_theorem6(grid_size)
    return optimum.value / math.log2(2)


def sdof_map(
    params: ChannelParams,
    number_class: NumberClass = NumberClass.TREAT_RATIONAL,
    qmax: int = DEFAULT_QMAX,
    variant: Variant = Variant.EQ36,
) -> DofResult:
    """
    Best achievable secure DoF over the schemes applicable to the channel.

    A complex phase away from 0 and pi gives 1. For real gains with sqrt(ab) = 1
    the channel is degraded under + (DoF 0) and served by the binary digit
    scheme under -. Otherwise irrational gains give 1/2 and the layered scheme
    is always available.
    """
    if params.is_complex and abs(math.sin(params.psi)) >= PHASE_TOLERANCE:
        return DofResult(value=1.0, scheme=Scheme.COMPLEX_THEOREM1)

    if abs(params.sqrt_ab - 1.0) <= EQUAL_GAIN_TOLERANCE:
        if params.sign is Sign.PLUS:
            return DofResult(value=0.0, scheme=Scheme.DEGRADED_ZERO)
        return DofResult(value=equal_gain_dof(), scheme=Scheme.EQUAL_GAIN_THEOREM6)

    candidates = []
    if number_class is NumberClass.TREAT_IRRATIONAL:
        candidates.append(DofResult(value=0.5, scheme=Scheme.IRRATIONAL_THEOREM4))
    candidates.append(best_dof_over_decompositions(params.sqrt_ab, qmax, variant))

    best = max(candidates, key=lambda result: result.value)
    logging.debug(f"action: sdof_map | sqrt_ab: {params.sqrt_ab} | scheme: {best.scheme} | value: {best.value}")
    return best


def mi_difference_curve(
    powers: Sequence[float],
    sqrt_ab: float,
    b: float,
    epsilon: float,
    input_kind: InputKind,
    sign: Sign = Sign.PLUS,
) -> list[tuple[float, float]]:
    """
    I(X1;Y1) - I(X1;Y2) (clamped at 0) at each power, either with both users
    drawing uniformly from the scalar lattice codebook or with the Gaussian baseline.
    """
    powers = [float(P) for P in powers]
    if not powers or any(not P > 0 for P in powers):
        raise DomainError(f"powers must be positive, got {powers}")
    if any(later <= earlier for earlier, later in zip(powers, powers[1:])):
        raise DomainError(f"powers must be strictly ascending, got {powers}")
    if not sqrt_ab > 0 or not b > 0:
        raise DomainError(f"gains must be positive: sqrt_ab={sqrt_ab}, b={b}")

    def structured(P: float) -> float:
        codebook = build_scalar_codebook(P, epsilon)
        if codebook.size == 1:
            return 0.0
        points = codebook.as_array()
        return max(0.0, secrecy_rate_terms(points, points, sqrt_ab, b, sign).difference)

    def baseline(P: float) -> float:
        return gaussian_baseline_rate(P, P, sqrt_ab**2 / b, b)

    evaluate = structured if input_kind is InputKind.SCALAR_LATTICE else baseline
    values = ordered_map(evaluate, powers)

    logging.info(f"action: mi_difference_curve | input: {input_kind} | points: {len(powers)}")
    return list(zip(powers, values))
