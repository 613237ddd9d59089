from cli.commands.plotscript import cmd_plotscript
from cli.commands.reports import cmd_complex, cmd_sdof, cmd_simulate, cmd_theorem6
from cli.commands.tables import cmd_fq, cmd_leakage, cmd_rates, cmd_sweep


COMMANDS = {
    "sweep": cmd_sweep,
    "fq": cmd_fq,
    "theorem6": cmd_theorem6,
    "rates": cmd_rates,
    "simulate": cmd_simulate,
    "complex": cmd_complex,
    "plotscript": cmd_plotscript,
    "sdof": cmd_sdof,
    "leakage": cmd_leakage,
}

__all__ = ["COMMANDS"]
