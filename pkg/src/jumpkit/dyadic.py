"""Exact dyadic-rational helpers.

Sample times are kept as fractions.Fraction so grid membership tests (powers
of two, dyadic blocks [2^k, 2^(k+1)), uniform dyadic grids) are exact. Wire
format for a dyadic rational is the string "p/2^q" with p an integer and
q >= 0; the parser is more liberal (plain integers, "p/q" with q a power of
two, decimal strings that happen to be dyadic).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidArgumentError


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def is_dyadic(x: Fraction) -> bool:
    """True if x = p / 2^q for integers p, q >= 0."""
    return is_power_of_two(x.denominator)


def is_two_power(x: Fraction) -> bool:
    """True if x = 2^k for some integer k (positive x only)."""
    if x <= 0:
        return False
    return (
        is_power_of_two(x.numerator)
        and is_power_of_two(x.denominator)
        and (x.numerator == 1 or x.denominator == 1)
    )


def two_power_exponent(x: Fraction) -> int:
    """The integer k with x = 2^k. Precondition: is_two_power(x)."""
    if not is_two_power(x):
        raise InvalidArgumentError(f"{x} is not a power of two")
    if x.denominator == 1:
        return x.numerator.bit_length() - 1
    return -(x.denominator.bit_length() - 1)


def floor_log2(x: Fraction) -> int:
    """The integer k with 2^k <= x < 2^(k+1). Precondition: x > 0."""
    if x <= 0:
        raise InvalidArgumentError("floor_log2 needs x > 0")
    k = 0
    while Fraction(2) ** (k + 1) <= x:
        k += 1
    while Fraction(2) ** k > x:
        k -= 1
    return k


def format_dyadic(x: Fraction) -> str:
    """Canonical wire form "p/2^q". Requires a dyadic rational."""
    if not is_dyadic(x):
        raise InvalidArgumentError(f"{x} is not dyadic; cannot serialize")
    q = x.denominator.bit_length() - 1
    return f"{x.numerator}/2^{q}"


def parse_dyadic(s: str | int | float | Fraction) -> Fraction:
    """Parse a dyadic rational from wire or convenience forms."""
    if isinstance(s, Fraction):
        x = s
    elif isinstance(s, int):
        x = Fraction(s)
    elif isinstance(s, float):
        x = Fraction(s)  # floats are exactly dyadic
    elif isinstance(s, str):
        txt = s.strip()
        try:
            if "/2^" in txt:
                p_str, q_str = txt.split("/2^")
                x = Fraction(int(p_str), 2 ** int(q_str))
            else:
                x = Fraction(txt)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgumentError(f"cannot parse dyadic rational {s!r}") from exc
    else:
        raise InvalidArgumentError(f"cannot parse dyadic rational {s!r}")
    if not is_dyadic(x):
        raise InvalidArgumentError(f"{s!r} is not a dyadic rational")
    return x
