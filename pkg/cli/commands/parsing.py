from typing import Any

from sdof.types import Sign


SIGN_NAMES = {"+": Sign.PLUS, "plus": Sign.PLUS, "1": Sign.PLUS, "-": Sign.MINUS, "minus": Sign.MINUS, "-1": Sign.MINUS}


def parse_sign(value: Any) -> Sign:
    if isinstance(value, Sign):
        return value
    try:
        return SIGN_NAMES[str(value).strip().lower()]
    except KeyError:
        raise ValueError(f"unknown sign {value!r}, expected one of {sorted(SIGN_NAMES)}")


def parse_float_list(value: Any) -> list[float]:
    """comma-separated string or sequence of numbers."""
    if isinstance(value, str):
        return [float(part) for part in value.split(",") if part.strip()]
    return [float(v) for v in value]


def parse_int_list(value: Any) -> list[int]:
    if isinstance(value, str):
        return [int(part) for part in value.split(",") if part.strip()]
    return [int(v) for v in value]


def parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).lower() in ("true", "1", "yes")
