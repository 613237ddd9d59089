"""
subcommands producing JSON reports.
"""

import logging

from cli.commands.output import CommandOutput, json_output
from cli.commands.parsing import parse_bool, parse_sign
from cli.config import ParameterResolver
from sdof.channel import scale_model
from sdof.dof import dof_ratio, eq7_rate, layered_allocation, sdof_map
from sdof.infotheory import optimize_theorem6
from sdof.layersim import build_layer_config, run_layered_sim
from sdof.types import NumberClass, Variant


POWER_SCALES = (10, 100)


def cmd_theorem6(resolver: ParameterResolver) -> CommandOutput:
    grid = resolver.get("theorem6_grid", int)
    optimum = optimize_theorem6(grid)

    result = {
        "p1_star": optimum.p1_star,
        "p2_star": optimum.p2_star,
        "value": optimum.value,
        "grid": optimum.grid_size,
    }
    return json_output("theorem6", resolver.resolved, result)


def cmd_simulate(resolver: ParameterResolver) -> CommandOutput:
    gamma = resolver.get("gamma", float)
    p = resolver.get("p", int, fallback=1)
    q = resolver.get("q", int, fallback=1)
    b = resolver.get("b", float, fallback=1.0)
    layers = resolver.get("layers", int)
    backoff = resolver.get("backoff", float)
    trials = resolver.get("trials", int)
    seed = resolver.get("seed", int)
    dither_refinement = resolver.get("dither_refinement", int, required=False)
    noiseless = resolver.get("noiseless", parse_bool, fallback=False)
    genie = resolver.get("genie", parse_bool, fallback=False)

    allocation = layered_allocation(gamma, p, q, b, layers)
    cfg = build_layer_config(
        allocation,
        trials=trials,
        seed=seed,
        rate_backoff=backoff,
        dither_refinement=dither_refinement,
        noiseless=noiseless,
        genie=genie,
    )
    report = run_layered_sim(cfg)

    result = {"report": report.model_dump(mode="json"), "allocation": allocation.model_dump(mode="json")}
    return json_output("simulate", resolver.resolved, result, seed=seed)


def cmd_complex(resolver: ParameterResolver) -> CommandOutput:
    psi = resolver.get("psi", float)
    b = resolver.get("b", float, fallback=1.0)
    p1 = resolver.get("p1", float, fallback=1.0)
    p2 = resolver.get("p2", float, fallback=1.0)

    result = {"eq7_rate": eq7_rate(p1, p2, b, psi)}
    for scale in POWER_SCALES:
        power = scale * p1
        # a DoF ratio needs log2 P > 0
        result[f"dof_ratio_{scale}x"] = dof_ratio(eq7_rate(power, scale * p2, b, psi), power) if power > 1 else None

    logging.debug(f"action: complex | psi: {psi} | rate: {result['eq7_rate']}")
    return json_output("complex", resolver.resolved, result)


def cmd_sdof(resolver: ParameterResolver) -> CommandOutput:
    a = resolver.get("a", float)
    b = resolver.get("b", float, fallback=1.0)
    sign = resolver.get("sign", parse_sign, fallback="+")
    psi = resolver.get("psi", float, required=False)
    number_class = resolver.get("number_class", NumberClass, fallback=NumberClass.TREAT_RATIONAL)
    qmax = resolver.get("qmax", int)
    variant = resolver.get("variant", Variant)

    params = scale_model(a, b, sign=sign, psi=psi)
    result = sdof_map(params, number_class, qmax, variant)
    return json_output("sdof", resolver.resolved, result.model_dump(mode="json"))
