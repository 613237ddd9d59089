"""
subcommands producing CSV tables: the DoF sweep, f(Q) against its bound, rate
curves and the leakage audit.
"""

import logging

import numpy as np

from cli.commands.output import CommandOutput, csv_output
from cli.commands.parsing import parse_float_list, parse_int_list, parse_sign
from cli.config import ParameterResolver
from sdof.dof import best_dof_over_decompositions, mi_difference_curve
from sdof.infotheory import f_of_Q, leakage_audit, lemma1_bound
from sdof.types import InputKind, NestedScalarLattice, Variant
from shared.errors import UsageError
from shared.parallel import ordered_map


SWEEP_HEADER = ["sqrt_ab", "dof_eq36", "dof_eq53", "best_p", "best_q", "best_gamma"]
FQ_HEADER = ["Q", "f_Q", "lemma1_bound", "reference"]
RATES_HEADER = ["P", "structured_mi_diff", "gaussian_baseline"]
LEAKAGE_HEADER = ["K", "refinement", "mi_mod", "mi_full"]

LEMMA1_REFERENCE = 0.8
DEFAULT_REFINEMENTS = "2,4,8"


def cmd_sweep(resolver: ParameterResolver) -> CommandOutput:
    ab_min = resolver.get("ab_min", float)
    ab_max = resolver.get("ab_max", float)
    steps = resolver.get("steps", int)
    qmax = resolver.get("qmax", int)
    variant = resolver.get("variant", Variant)

    if not 0 < ab_min < ab_max:
        raise UsageError(f"sweep range must satisfy 0 < ab_min < ab_max, got [{ab_min}, {ab_max}]")
    if steps < 2:
        raise UsageError(f"steps must be at least 2, got {steps}")
    if qmax < 1:
        raise UsageError(f"qmax must be at least 1, got {qmax}")

    def row(sqrt_ab: float) -> list:
        eq36 = best_dof_over_decompositions(sqrt_ab, qmax, Variant.EQ36)
        eq53 = best_dof_over_decompositions(sqrt_ab, qmax, Variant.EQ53)
        witness = (eq36 if variant is Variant.EQ36 else eq53).witness
        if witness is None:
            return [sqrt_ab, eq36.value, eq53.value, "", "", ""]
        return [sqrt_ab, eq36.value, eq53.value, witness.p, witness.q, witness.gamma]

    grid = [float(x) for x in np.linspace(ab_min, ab_max, steps)]
    rows = ordered_map(row, grid)

    logging.info(f"action: sweep | range: [{ab_min}, {ab_max}] | steps: {steps} | qmax: {qmax}")
    return csv_output("sweep", resolver.resolved, SWEEP_HEADER, rows)


def cmd_fq(resolver: ParameterResolver) -> CommandOutput:
    qmax = resolver.get("qmax", int)
    if qmax < 1:
        raise UsageError(f"qmax must be at least 1, got {qmax}")

    rows = [[Q, f_of_Q(Q), lemma1_bound(Q), LEMMA1_REFERENCE] for Q in range(1, qmax + 1)]
    return csv_output("fq", resolver.resolved, FQ_HEADER, rows)


def cmd_rates(resolver: ParameterResolver) -> CommandOutput:
    powers = resolver.get("powers", parse_float_list)
    sqrt_ab = resolver.get("sqrt_ab", float)
    b = resolver.get("b", float, fallback=1.0)
    epsilon = resolver.get("epsilon", float)

    structured = mi_difference_curve(powers, sqrt_ab, b, epsilon, InputKind.SCALAR_LATTICE)
    baseline = mi_difference_curve(powers, sqrt_ab, b, epsilon, InputKind.GAUSSIAN_BASELINE)

    rows = [[P, value, reference] for (P, value), (_, reference) in zip(structured, baseline)]
    return csv_output("rates", resolver.resolved, RATES_HEADER, rows)


def cmd_leakage(resolver: ParameterResolver) -> CommandOutput:
    kmax = resolver.get("leakage_kmax", int)
    refinements = resolver.get("refinements", parse_int_list, fallback=DEFAULT_REFINEMENTS)
    sign = resolver.get("sign", parse_sign, fallback="+")

    if kmax < 2:
        raise UsageError(f"kmax must be at least 2, got {kmax}")
    if any(m < 2 for m in refinements):
        raise UsageError(f"dither refinements must be at least 2, got {refinements}")

    rows = []
    for ratio in range(2, kmax + 1):
        lattice = NestedScalarLattice(fine_step=1.0, ratio=ratio)
        for refinement in refinements:
            audit = leakage_audit(lattice, refinement, sign)
            rows.append([ratio, refinement, audit.mi_mod, audit.mi_full])

    return csv_output("leakage", resolver.resolved, LEAKAGE_HEADER, rows)
