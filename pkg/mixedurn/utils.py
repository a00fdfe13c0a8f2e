from fractions import Fraction
from math import gcd

from mixedurn.errors import ParameterError


def parse_probability(text: str) -> float | Fraction:
    """Parse a mixing probability given on the command line.

    "num/den" stays an exact Fraction so theta == 0 can be detected exactly;
    anything else is read as a decimal float.
    """
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParameterError(f"p: cannot parse {text!r} as a probability") from e


def parse_int_list(text: str) -> list[int]:
    """Parse a comma separated list such as "0,2000,20000"."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ParameterError(f"not a comma separated list of integers: {text!r}") from e


def reduced_ratio(y: int, b: int) -> tuple[int, int]:
    """y/(y+b) as a reduced (numerator, denominator) pair."""
    total = y + b
    g = gcd(y, total)
    return y // g, total // g


def geometric_checkpoints(n_max: int) -> list[int]:
    """1, 2, 4, ... up to n_max, with n_max itself always last."""
    if n_max < 1:
        raise ParameterError(f"n_max must be at least 1, got {n_max}")
    points = []
    n = 1
    while n < n_max:
        points.append(n)
        n *= 2
    points.append(n_max)
    return points
