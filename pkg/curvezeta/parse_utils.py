import re
from fractions import Fraction

import sympy as sp

RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(value) -> Fraction:
    """
    Parse an exact rational given as an int or as a "p/q" string.
    Floats are refused: they are not exact.
    """
    if isinstance(value, bool):
        raise ValueError(f"Invalid rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise ValueError(f"Invalid rational: {value!r}, expected an integer or a 'p/q' string")
    text = value.replace(" ", "")
    if not RATIONAL_RE.match(text):
        raise ValueError(f"Invalid rational: {value!r}, expected 'p/q'")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"Invalid rational: {value!r}, zero denominator")
    return Fraction(text)


def parse_multiindex(value: str) -> tuple[int, ...]:
    """
    Parse "2,2" or "8" into a tuple of non-negative integers
    """
    text = value.replace(" ", "")
    if not re.match(r"^\d+(,\d+)*$", text):
        raise ValueError(f"Invalid multi-index format: {value!r}")
    return tuple(int(part) for part in text.split(","))


def format_multiindex(n: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in n)


Q = sp.Symbol("q")


def parse_u_value(value: str) -> Fraction | sp.Symbol:
    """
    Values accepted by `--u`: "q" (symbolic), "q=<rational>", or a bare rational such as "1".
    """
    text = value.replace(" ", "")
    if text == "q":
        return Q
    if text.startswith("q="):
        text = text[2:]
    at = parse_rational(text)
    if at == 0:
        raise ValueError("U cannot be specialized at 0")
    return at
