# Number conversion functions for files and reports

import math

# Constants
SIGNIFICANT_DIGITS: int = 17


def format_float(value: float) -> str:
    """Returns the value with 17 significant digits, enough to read back the identical double."""

    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def parse_float(text: str) -> float:
    """Returns the float written in the decimal string. Raises ValueError for non-finite values."""

    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"'{text}' is not a finite number")
    return value


def json_number(value: float) -> float | None:
    """Returns the value as a plain float for JSON output, or None when it is not finite."""

    value = float(value)
    return value if math.isfinite(value) else None
