"""Dyadic rationals and their signed power-of-two expansions.

A dyadic rational l / 2**p multiplies an integer using only additions,
subtractions, and bit-shifts.  The expansion chosen here is minimal in the
number of nonzero digits and, among minimal expansions, prefers one that
contains an unshifted (2**0) term, because that term costs neither a shift
nor a multiplication.  With that preference the four selected transform
parameters expand as 1, 1 + 1/4 + 1/8, 1 + 1/2, and 2, with (add, shift)
costs (0,0), (2,2), (1,1), and (0,1).

Note that the preference for a free unshifted term can place two nonzero
digits in adjacent positions (e.g. 1 + 1/2).  A strictly adjacency-free
signed form of 3/2 would be 2 - 1/2, which has the same number of adds but
two shifted terms instead of one; since shifts are part of the cost model,
the adjacency rule is deliberately not enforced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class DyadicRational:
    """An exact number numerator / 2**log2_denominator.

    Canonical form: the numerator is odd or zero, or the denominator
    exponent is zero.  Construction normalizes automatically.
    """

    numerator: int
    log2_denominator: int = 0

    def __post_init__(self) -> None:
        num, p = self.numerator, self.log2_denominator
        if p < 0:
            raise ValueError("log2_denominator must be nonnegative")
        if num == 0:
            p = 0
        else:
            while num % 2 == 0 and p > 0:
                num //= 2
                p -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log2_denominator", p)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DyadicRational":
        den = value.denominator
        p = den.bit_length() - 1
        if den != 1 << p:
            raise ValueError(f"{value} is not dyadic (denominator {den})")
        return cls(value.numerator, p)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def __float__(self) -> float:
        return self.numerator / (1 << self.log2_denominator)

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __str__(self) -> str:
        if self.log2_denominator == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.log2_denominator}"


@dataclass(frozen=True)
class CsdForm:
    """A signed power-of-two expansion of a dyadic rational.

    digits are (sign, exponent) pairs with sign in {+1, -1}; the encoded
    value is sum(sign * 2**exponent).  Negative exponents are right-shifts,
    positive are left-shifts, and exponent 0 is shift-free.
    """

    digits: tuple[tuple[int, int], ...]

    @property
    def add_cost(self) -> int:
        return max(len(self.digits) - 1, 0)

    @property
    def shift_cost(self) -> int:
        return sum(1 for _, e in self.digits if e != 0)

    def to_fraction(self) -> Fraction:
        total = Fraction(0)
        for sign, e in self.digits:
            total += sign * (Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e))
        return total

    def expression(self) -> str:
        """Human-readable form, e.g. '1 + 1/4 + 1/8'."""
        if not self.digits:
            return "0"
        parts = []
        for i, (sign, e) in enumerate(self.digits):
            mag = str(1 << e) if e >= 0 else f"1/{1 << -e}"
            if i == 0:
                parts.append(mag if sign > 0 else f"-{mag}")
            else:
                parts.append(f"{'+' if sign > 0 else '-'} {mag}")
        return " ".join(parts)


def _naf_digits(n: int) -> list[tuple[int, int]]:
    """Non-adjacent signed-digit form of a positive integer, as (sign, pos)."""
    digits = []
    pos = 0
    while n > 0:
        if n % 2 == 1:
            r = 2 - (n % 4)  # +1 or -1
            digits.append((r, pos))
            n -= r
        n //= 2
        pos += 1
    return digits


def _binary_digits(n: int) -> list[tuple[int, int]]:
    return [(1, pos) for pos in range(n.bit_length()) if (n >> pos) & 1]


def _minimal_digits(n: int) -> list[tuple[int, int]]:
    """Minimal-weight signed digits of n > 0; plain binary wins ties."""
    naf = _naf_digits(n)
    binary = _binary_digits(n)
    return binary if len(binary) == len(naf) else naf


def csd_encode(v: DyadicRational) -> CsdForm:
    """Minimal signed power-of-two expansion of a dyadic rational.

    Among minimal-weight expansions of the numerator, one containing a digit
    at the denominator's bit position is preferred when it exists: after
    folding the denominator that digit becomes an unshifted 2**0 term.
    """
    if v.numerator == 0:
        return CsdForm(())
    n, d = abs(v.numerator), v.log2_denominator
    w_min = len(_naf_digits(n))
    rep: list[tuple[int, int]] | None = None
    for sign in (1, -1):
        r = n - sign * (1 << d)
        if r == 0:
            if w_min == 1:
                rep = [(sign, d)]
                break
            continue
        rs = 1 if r > 0 else -1
        rest = [(rs * s, pos) for s, pos in _minimal_digits(abs(r))]
        if len(rest) + 1 == w_min and all(pos != d for _, pos in rest):
            rep = [(sign, d)] + rest
            break
    if rep is None:
        rep = _minimal_digits(n)
    sgn = 1 if v.numerator > 0 else -1
    folded = sorted(((sgn * s, pos - d) for s, pos in rep), key=lambda t: -t[1])
    return CsdForm(tuple(folded))


def add_shift_cost(v: DyadicRational) -> tuple[int, int]:
    """(additions, shifts) to multiply an integer by v."""
    form = csd_encode(v)
    return form.add_cost, form.shift_cost
