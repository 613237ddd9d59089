"""
gnuplot scripts for the CSV tables. Nothing is rendered here; the script is
handed to gnuplot by the user.
"""

from enum import StrEnum
from pathlib import Path

from cli.commands.output import CommandOutput, script_output
from cli.commands.tables import FQ_HEADER, LEAKAGE_HEADER, LEMMA1_REFERENCE, RATES_HEADER, SWEEP_HEADER
from cli.config import ParameterResolver
from shared.errors import UsageError


class PlotKind(StrEnum):
    SWEEP = "sweep"
    FQ = "fq"
    RATES = "rates"
    LEAKAGE = "leakage"


HEADERS = {
    PlotKind.SWEEP: SWEEP_HEADER,
    PlotKind.FQ: FQ_HEADER,
    PlotKind.RATES: RATES_HEADER,
    PlotKind.LEAKAGE: LEAKAGE_HEADER,
}

PREAMBLE = 'set datafile separator ","\nset key top left\nset grid\n'


def _plot_lines(kind: PlotKind, data: str) -> str:
    if kind is PlotKind.SWEEP:
        return (
            'set xlabel "sqrt(ab)"\nset ylabel "secure DoF"\n'
            f'plot "{data}" using 1:2 skip 1 with lines title "eq36", '
            f'"{data}" using 1:3 skip 1 with lines dashtype 2 title "eq53"\n'
        )
    if kind is PlotKind.FQ:
        return (
            'set xlabel "Q"\nset ylabel "bits"\n'
            f'plot "{data}" using 1:2 skip 1 with linespoints title "f(Q)", '
            f'"{data}" using 1:3 skip 1 with lines title "bound", '
            f'{LEMMA1_REFERENCE} with lines dashtype 2 title "{LEMMA1_REFERENCE}"\n'
        )
    if kind is PlotKind.RATES:
        return (
            'set logscale x\nset xlabel "P"\nset ylabel "bits"\n'
            f'plot "{data}" using 1:2 skip 1 with linespoints title "structured", '
            f'"{data}" using 1:3 skip 1 with linespoints title "gaussian baseline"\n'
        )
    return (
        'set xlabel "K"\nset ylabel "bits"\n'
        f'plot "{data}" using 1:4 skip 1 with points title "I(u1; sum, dithers)", '
        f'"{data}" using 1:3 skip 1 with points title "I(u1; sum mod coarse, dithers)"\n'
    )


def cmd_plotscript(resolver: ParameterResolver) -> CommandOutput:
    csv_path = resolver.get("csv_path", str)
    try:
        kind = resolver.get("kind", PlotKind)
    except UsageError:
        raise UsageError(f"unknown plot kind, expected one of {[k.value for k in PlotKind]}")

    path = Path(csv_path)
    if not path.is_file():
        raise UsageError(f"CSV file not found: {path}")

    with open(path, "r") as f:
        header = f.readline().strip().split(",")
    if header != HEADERS[kind]:
        raise UsageError(f"{path} does not hold a {kind} table: header {header}")

    return script_output("plotscript", resolver.resolved, PREAMBLE + _plot_lines(kind, str(path)))
