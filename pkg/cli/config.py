import configparser
import os
from pathlib import Path
from typing import Any, Optional

import pydantic

from sdof.types import Variant
from shared.config_parser import parse_config_document
from shared.errors import UsageError


CONFIG_FILE = Path(__file__).parent / "config.ini"


class CliConfiguration(pydantic.BaseModel):
    """
    Defaults for every subcommand, read from ``config.ini`` with environment overrides.

    Attributes:
        qmax: Largest denominator q searched for rational decompositions.
        variant: Layered DoF formula used for witnesses and reports.
        ab_min: Lower end of the sqrt(ab) sweep.
        ab_max: Upper end of the sqrt(ab) sweep.
        steps: Number of sweep grid points.
        theorem6_grid: Grid size of the binary digit optimizer.
        powers: Powers at which rate curves are evaluated.
        sqrt_ab: Cross gain used by rate curves.
        epsilon: Exponent slack of the scalar lattice codebook.
        leakage_kmax: Largest nesting ratio audited for leakage.
        layers: Number of layers simulated.
        backoff: Bits subtracted from each layer's rate when sizing its lattice.
        trials: Simulated channel uses.
        seed: Simulation seed.
        logging_level: Logging level to use (e.g. ``"DEBUG"``, ``"INFO"``).
    """

    qmax: int = pydantic.Field(ge=1)
    variant: Variant
    ab_min: float = pydantic.Field(gt=0)
    ab_max: float = pydantic.Field(gt=0)
    steps: int = pydantic.Field(ge=2)
    theorem6_grid: int = pydantic.Field(ge=100)
    powers: list[float]
    sqrt_ab: float = pydantic.Field(gt=0)
    epsilon: float = pydantic.Field(gt=0, lt=0.25)
    leakage_kmax: int = pydantic.Field(ge=2)
    layers: int = pydantic.Field(ge=1)
    backoff: float = pydantic.Field(ge=0)
    trials: int = pydantic.Field(ge=1)
    seed: int = pydantic.Field(ge=0)
    logging_level: str


def initialize_config(config_file: Path = CONFIG_FILE) -> CliConfiguration:
    """
    Load subcommand defaults from ``config.ini``; any key can be overridden by
    an environment variable of the same name.

    Raises:
        KeyError: If a key is missing from the file and not provided via the environment.
        ValueError: If a value cannot be parsed.
    """
    config = configparser.ConfigParser()
    config.read(config_file)

    def value(section: str, key: str) -> str:
        return os.getenv(key, config[section][key])

    try:
        return CliConfiguration(
            qmax=int(value("DEFAULT", "QMAX")),
            variant=value("DEFAULT", "VARIANT"),
            ab_min=float(value("SWEEP", "AB_MIN")),
            ab_max=float(value("SWEEP", "AB_MAX")),
            steps=int(value("SWEEP", "STEPS")),
            theorem6_grid=int(value("SWEEP", "THEOREM6_GRID")),
            powers=[float(p) for p in value("SWEEP", "POWERS").split(",")],
            sqrt_ab=float(value("SWEEP", "SQRT_AB")),
            epsilon=float(value("SWEEP", "EPSILON")),
            leakage_kmax=int(value("SWEEP", "LEAKAGE_KMAX")),
            layers=int(value("SIMULATION", "LAYERS")),
            backoff=float(value("SIMULATION", "BACKOFF")),
            trials=int(value("SIMULATION", "TRIALS")),
            seed=int(value("SIMULATION", "SEED")),
            logging_level=value("LOGGING", "LOGGING_LEVEL"),
        )
    except KeyError as e:
        raise KeyError(f"Key was not found. Error: {e}. Aborting")
    except (ValueError, pydantic.ValidationError) as e:
        raise ValueError(f"Key could not be parsed. Error: {e}. Aborting")


class ParameterResolver:
    """
    Resolves each parameter from, in order: the command-line flag, the
    ``--config`` document, then the ini/environment defaults.
    """

    def __init__(self, flags: dict[str, Any], document: dict[str, Any], defaults: CliConfiguration):
        self._flags = flags
        self._document = document
        self._defaults = defaults
        self.resolved: dict[str, Any] = {}

    def get(self, name: str, cast=None, fallback: Optional[Any] = None, required: bool = True) -> Any:
        if self._flags.get(name) is not None:
            raw = self._flags[name]
        elif name in self._document:
            raw = self._document[name]
        elif hasattr(self._defaults, name):
            raw = getattr(self._defaults, name)
        else:
            raw = fallback

        if raw is None and required:
            raise UsageError(f"missing required parameter: {name}")
        if raw is not None and cast is not None:
            try:
                raw = cast(raw)
            except (TypeError, ValueError) as e:
                raise UsageError(f"parameter {name} could not be parsed: {e}")

        self.resolved[name] = raw
        return raw


def parse_document(path: Optional[str]) -> dict[str, Any]:
    return parse_config_document(path) if path else {}
