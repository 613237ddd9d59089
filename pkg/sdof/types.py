import math
from enum import IntEnum, StrEnum
from typing import Optional

import numpy as np
from pydantic import Field, model_validator

from shared.entity import FrozenMessage


PMF_TOLERANCE = 1e-12


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.PLUS else "-"


class Scheme(StrEnum):
    COMPLEX_THEOREM1 = "complex_theorem1"
    IRRATIONAL_THEOREM4 = "irrational_theorem4"
    DEGRADED_ZERO = "degraded_zero"
    EQUAL_GAIN_THEOREM6 = "equal_gain_theorem6"
    LAYERED_THEOREM7 = "layered_theorem7"


class Variant(StrEnum):
    EQ36 = "eq36"
    EQ53 = "eq53"


class NumberClass(StrEnum):
    TREAT_IRRATIONAL = "treat_irrational"
    TREAT_RATIONAL = "treat_rational"


class InputKind(StrEnum):
    SCALAR_LATTICE = "scalar_lattice"
    GAUSSIAN_BASELINE = "gaussian_baseline"


# CHANNEL
class ChannelParams(FrozenMessage):
    """
    Scaled two-user channel seen by the receiver D1 and the eavesdropper D2:

        Y1 = X1 + sqrt(ab) X2 + sqrt(b) Z1
        Y2 = X1 +/- X2 + Z2

    ``psi`` is only set for the complex-gain model, where it is the phase of
    the cross link into D1.
    """

    a: float = Field(gt=0, allow_inf_nan=False)
    b: float = Field(gt=0, allow_inf_nan=False)
    sign: Sign = Sign.PLUS
    p1_bar: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    p2_bar: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    psi: Optional[float] = Field(default=None, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_cross_gain(self) -> "ChannelParams":
        if not math.isfinite(self.a * self.b):
            raise ValueError(f"cross gain overflows: a={self.a}, b={self.b}")
        return self

    @property
    def sqrt_ab(self) -> float:
        return math.sqrt(self.a * self.b)

    @property
    def noise_std_d1(self) -> float:
        return math.sqrt(self.b)

    @property
    def noise_std_d2(self) -> float:
        return 1.0

    @property
    def is_complex(self) -> bool:
        return self.psi is not None


class RationalDecomposition(FrozenMessage):
    """sqrt(ab) = (p + gamma) / q with p, q coprime and gamma a nonzero fraction."""

    p: int = Field(ge=1)
    q: int = Field(ge=1)
    gamma: float = Field(allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_invariants(self) -> "RationalDecomposition":
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")
        if not -1.0 < self.gamma < 1.0 or self.gamma == 0.0:
            raise ValueError(f"gamma={self.gamma} must lie in (-1, 1) and be nonzero")
        return self

    @property
    def value(self) -> float:
        return (self.p + self.gamma) / self.q


class ChannelSample(FrozenMessage):
    y1: float = Field(allow_inf_nan=False)
    y2: float = Field(allow_inf_nan=False)


# CODES
class ScalarLatticeCodebook(FrozenMessage):
    """Points of the scaled integer lattice step*Z that fall inside [-half_width, half_width]."""

    step: float = Field(gt=0)
    half_width: float = Field(gt=0)
    points: tuple[float, ...]
    power: float = Field(gt=0)
    epsilon: float = Field(gt=0, lt=0.25)

    @model_validator(mode="after")
    def _check_points(self) -> "ScalarLatticeCodebook":
        if len(self.points) % 2 != 1:
            raise ValueError(f"codebook must hold an odd number of points, got {len(self.points)}")
        return self

    @property
    def size(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


class NestedScalarLattice(FrozenMessage):
    """
    One-dimensional nested pair: fine lattice fine_step*Z, coarse lattice
    (ratio*fine_step)*Z. The fundamental region of the coarse lattice is the
    centered half-open interval [-coarse_step/2, coarse_step/2).
    """

    fine_step: float = Field(gt=0, allow_inf_nan=False)
    ratio: int = Field(ge=2)

    @property
    def coarse_step(self) -> float:
        return self.ratio * self.fine_step

    @property
    def region(self) -> tuple[float, float]:
        half = self.coarse_step / 2
        return -half, half

    @property
    def rate(self) -> float:
        return math.log2(self.ratio)

    @property
    def power(self) -> float:
        """second moment of a uniform draw over the fundamental region."""
        return self.coarse_step**2 / 12

    def fine_indices(self) -> np.ndarray:
        """integer k such that k*fine_step lies in the fundamental region; exactly ratio of them."""
        low = -(self.ratio // 2)
        return np.arange(low, low + self.ratio)

    def fine_points(self) -> np.ndarray:
        return self.fine_indices() * self.fine_step


class DigitCodebook(FrozenMessage):
    """
    Q-ary expansion codebook X = unit * sum_i a_i Q^i with M digits per user.

    ``digit_dist[k][i]`` is the distribution of digit ``i`` of user ``k``.
    """

    base: int = Field(ge=2)
    digits: int = Field(ge=1)
    unit: float = Field(gt=0, allow_inf_nan=False)
    digit_dist: tuple[tuple[tuple[float, ...], ...], ...]

    @model_validator(mode="after")
    def _check_distributions(self) -> "DigitCodebook":
        for user, per_digit in enumerate(self.digit_dist):
            if len(per_digit) != self.digits:
                raise ValueError(f"user {user}: expected {self.digits} digit distributions, got {len(per_digit)}")
            for index, dist in enumerate(per_digit):
                if len(dist) != self.base:
                    raise ValueError(f"user {user} digit {index}: expected {self.base} probabilities")
                if any(p < 0 for p in dist):
                    raise ValueError(f"user {user} digit {index}: negative probability")
                if abs(math.fsum(dist) - 1.0) > PMF_TOLERANCE:
                    raise ValueError(f"user {user} digit {index}: probabilities sum to {math.fsum(dist)}")
        return self

    @classmethod
    def uniform(cls, base: int, digits: int, unit: float = 1.0, users: int = 2) -> "DigitCodebook":
        dist = tuple([1.0 / base] * base)
        return cls.build(base=base, digits=digits, unit=unit, digit_dist=tuple((dist,) * digits for _ in range(users)))

    @property
    def max_value(self) -> float:
        return self.unit * (self.base**self.digits - 1)


class SumRepresentation(FrozenMessage):
    """
    s = residue + t * coarse_step, with residue in the fundamental region.

    Given the residue, only two quotients are possible, so ``label`` = 1 + |t|
    lies in {1, 2} and (label, residue) determines s.
    """

    t: int
    residue: float

    @property
    def label(self) -> int:
        return 1 + abs(self.t)


# INFOTHEORY
class JointPMF(FrozenMessage):
    probabilities: tuple[tuple[float, ...], ...]

    @model_validator(mode="after")
    def _check_table(self) -> "JointPMF":
        if not self.probabilities or not self.probabilities[0]:
            raise ValueError("joint table must be non-empty")
        width = len(self.probabilities[0])
        if any(len(row) != width for row in self.probabilities):
            raise ValueError("joint table must be rectangular")
        if any(p < 0 or not math.isfinite(p) for row in self.probabilities for p in row):
            raise ValueError("joint table entries must be finite and nonnegative")
        total = math.fsum(p for row in self.probabilities for p in row)
        if abs(total - 1.0) > PMF_TOLERANCE:
            raise ValueError(f"joint table sums to {total}")
        return self

    @classmethod
    def from_array(cls, table) -> "JointPMF":
        array = np.asarray(table, dtype=float)
        if array.ndim != 2:
            return cls.build(probabilities=())
        return cls.build(probabilities=tuple(tuple(float(p) for p in row) for row in array))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.probabilities), len(self.probabilities[0])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)


class MixtureChannelSpec(FrozenMessage):
    """Finite input distribution observed through additive Gaussian noise."""

    atoms: tuple[tuple[float, float], ...]
    noise_std: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_atoms(self) -> "MixtureChannelSpec":
        if not self.atoms:
            raise ValueError("mixture needs at least one atom")
        if any(not math.isfinite(value) or not math.isfinite(prob) or prob < 0 for value, prob in self.atoms):
            raise ValueError("atoms must be finite with nonnegative probabilities")
        total = math.fsum(prob for _, prob in self.atoms)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"atom probabilities sum to {total}")
        return self

    @classmethod
    def from_arrays(cls, values, probs, noise_std: float) -> "MixtureChannelSpec":
        atoms = tuple((float(v), float(p)) for v, p in zip(np.ravel(values), np.ravel(probs)))
        return cls.build(atoms=atoms, noise_std=noise_std)

    def values(self) -> np.ndarray:
        return np.array([value for value, _ in self.atoms], dtype=float)

    def probs(self) -> np.ndarray:
        return np.array([prob for _, prob in self.atoms], dtype=float)


# DOF
class LayeredAllocation(FrozenMessage):
    """Per-layer powers, accumulated interference and common rate of the layered scheme."""

    gamma: float
    p: int = Field(ge=1)
    q: int = Field(ge=1)
    b: float = Field(gt=0)
    alpha: float
    beta: float
    m_layers: int = Field(ge=1)
    powers: tuple[float, ...]
    interference: tuple[float, ...]
    per_layer_rate: float
    total_power: float

    @model_validator(mode="after")
    def _check_layers(self) -> "LayeredAllocation":
        if len(self.powers) != self.m_layers or len(self.interference) != self.m_layers:
            raise ValueError(f"expected {self.m_layers} layers of powers and interference")
        return self

    @property
    def growth(self) -> float:
        """ratio between consecutive layer powers, alpha*beta + 1."""
        return self.alpha * self.beta + 1


class DofResult(FrozenMessage):
    value: float = Field(ge=0, le=1)
    scheme: Scheme
    witness: Optional[RationalDecomposition] = None
    variant: Optional[Variant] = None

    @model_validator(mode="after")
    def _check_witness(self) -> "DofResult":
        if self.witness is not None and self.scheme is not Scheme.LAYERED_THEOREM7:
            raise ValueError(f"scheme {self.scheme} carries no decomposition witness")
        if self.scheme is Scheme.LAYERED_THEOREM7 and self.witness is None and self.value != 0:
            raise ValueError("a positive layered result needs its witness")
        return self


# LAYERSIM
class LayerConfig(FrozenMessage):
    """
    Desk-scale layered transmission: one nested scalar lattice per layer,
    sized from the allocation's per-layer power and rate.

    ``dither_refinement`` of None draws the dither uniformly over the whole
    fundamental region; an integer m restricts it to the grid refining the
    fine lattice m times.
    """

    allocation: LayeredAllocation
    lattice_per_layer: tuple[NestedScalarLattice, ...]
    rate_backoff: float = Field(default=0.3, ge=0)
    trials: int = Field(ge=1)
    seed: int = Field(default=0, ge=0)
    dither_refinement: Optional[int] = Field(default=None, ge=2)
    noiseless: bool = False
    genie: bool = False

    @model_validator(mode="after")
    def _check_lattices(self) -> "LayerConfig":
        if len(self.lattice_per_layer) != self.allocation.m_layers:
            raise ValueError(
                f"expected {self.allocation.m_layers} lattices, got {len(self.lattice_per_layer)}"
            )
        for index, (lattice, power) in enumerate(zip(self.lattice_per_layer, self.allocation.powers)):
            if abs(lattice.power - power) > 1e-9 * power:
                raise ValueError(f"layer {index + 1}: lattice power {lattice.power} does not match {power}")
        return self

    @property
    def ratios(self) -> list[int]:
        return [lattice.ratio for lattice in self.lattice_per_layer]


class StageErrors(FrozenMessage):
    """per-layer error rates of each decoding step."""

    combination: float = Field(ge=0, le=1)
    approximation: float = Field(ge=0, le=1)
    helper: float = Field(ge=0, le=1)
    message: float = Field(ge=0, le=1)


class SimReport(FrozenMessage):
    per_layer_error: tuple[float, ...]
    stage_errors: tuple[StageErrors, ...]
    chain_success: float = Field(ge=0, le=1)
    leakage_budget_bits: float = Field(ge=0)
    gross_rate_bits: float = Field(ge=0)
    achieved_secrecy_rate_accounting: float = Field(ge=0)
    ratios: tuple[int, ...]
    trials: int
    seed: int

    @model_validator(mode="after")
    def _check_rates(self) -> "SimReport":
        if any(not 0.0 <= rate <= 1.0 for rate in self.per_layer_error):
            raise ValueError("per-layer error rates must lie in [0, 1]")
        return self
