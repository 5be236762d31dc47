"""Outward-rounded interval arithmetic over dyadic rationals.

Endpoints are exact ``Fraction`` values.  Arithmetic on dyadic inputs is
exact; to cap operand growth, evaluation routines round outward onto the
2**-PRECISION_BITS grid after each step (lower endpoints down, upper
endpoints up), so every computed interval encloses the true range.  No
hardware rounding is involved anywhere, which makes results reproducible
bit-for-bit across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

PRECISION_BITS = 112


def floor_dyadic(x: Fraction, bits: int = PRECISION_BITS) -> Fraction:
    scaled = x.numerator * (1 << bits)
    return Fraction(scaled // x.denominator, 1 << bits)


def ceil_dyadic(x: Fraction, bits: int = PRECISION_BITS) -> Fraction:
    scaled = x.numerator * (1 << bits)
    return Fraction(-((-scaled) // x.denominator), 1 << bits)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Fraction | int) -> "Interval":
        f = Fraction(x)
        return Interval(f, f)

    @staticmethod
    def make(lo, hi) -> "Interval":
        return Interval(Fraction(lo), Fraction(hi))

    def outward(self, bits: int = PRECISION_BITS) -> "Interval":
        return Interval(floor_dyadic(self.lo, bits), ceil_dyadic(self.hi, bits))

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    def scale(self, c: Fraction) -> "Interval":
        if c >= 0:
            return Interval(c * self.lo, c * self.hi)
        return Interval(c * self.hi, c * self.lo)

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def entirely_negative(self) -> bool:
        return self.hi < 0

    def entirely_positive(self) -> bool:
        return self.lo > 0

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def halves(self) -> tuple["Interval", "Interval"]:
        mid = self.midpoint()
        return Interval(self.lo, mid), Interval(mid, self.hi)

    def __repr__(self):
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]"


class Poly2:
    """Polynomial in (r, s) with exact rational coefficients, at most
    linear in s.  Written as p0(r) + s * p1(r)."""

    __slots__ = ("p0", "p1")

    def __init__(self, p0: Sequence[Fraction] = (), p1: Sequence[Fraction] = ()):
        self.p0 = _trim([Fraction(c) for c in p0])
        self.p1 = _trim([Fraction(c) for c in p1])

    @staticmethod
    def constant(c) -> "Poly2":
        return Poly2([Fraction(c)], [])

    @staticmethod
    def var_r() -> "Poly2":
        return Poly2([Fraction(0), Fraction(1)], [])

    @staticmethod
    def var_s() -> "Poly2":
        return Poly2([], [Fraction(1)])

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(_add(self.p0, other.p0), _add(self.p1, other.p1))

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "Poly2":
        c = Fraction(c)
        return Poly2([c * x for x in self.p0], [c * x for x in self.p1])

    def mul_r_poly(self, coeffs: Sequence[Fraction]) -> "Poly2":
        """Multiply by a polynomial in r alone (keeps s-degree <= 1)."""
        return Poly2(_mul(self.p0, list(coeffs)), _mul(self.p1, list(coeffs)))

    def __mul__(self, other: "Poly2") -> "Poly2":
        if other.p1:
            if self.p1:
                raise ValueError("product would exceed degree 1 in s")
            return other.mul_r_poly(self.p0)
        return self.mul_r_poly(other.p0)

    @property
    def degree_r(self) -> int:
        return max(len(self.p0), len(self.p1)) - 1

    def coefficients(self) -> list[Fraction]:
        return list(self.p0) + list(self.p1)

    def integer_normalization(self) -> tuple["Poly2", Fraction]:
        """Scale by the positive rational that makes all coefficients
        integers with content 1.  Zero sets and signs are unchanged;
        returns the scaled polynomial and the factor applied."""
        from math import gcd, lcm

        coeffs = [c for c in self.coefficients() if c != 0]
        if not coeffs:
            return self, Fraction(1)
        denom = lcm(*(c.denominator for c in coeffs))
        scaled = [c * denom for c in coeffs]
        content = gcd(*(abs(int(c)) for c in scaled))
        factor = Fraction(denom, content)
        return self.scale(factor), factor

    def eval_exact(self, r: Fraction, s: Fraction) -> Fraction:
        return _horner_exact(self.p0, r) + s * _horner_exact(self.p1, r)

    def eval_interval(
        self, r: Interval, s: Interval, bits: int = PRECISION_BITS
    ) -> Interval:
        """Enclosure of the polynomial over a box, by interval Horner."""
        base = _horner_interval(self.p0, r, bits)
        if not self.p1:
            return base
        linear = _horner_interval(self.p1, r, bits)
        return (base + (s * linear).outward(bits)).outward(bits)

    def eval_box(self, r: Interval, s: Interval, bits: int = PRECISION_BITS) -> Interval:
        """Tight enclosure over a box.

        The polynomial is linear in s, so its range over the box is the
        hull of the ranges at the two s endpoints.  For each endpoint the
        r-polynomial is Taylor-shifted to the left edge of the r interval
        (exact synthetic division) and bounded monomial by monomial in
        u = r - lo over [0, width]; with u nonnegative each monomial's
        range is known exactly, which avoids the dependency loss of plain
        interval Horner on wide boxes.
        """
        shifted0 = _taylor_shift(self.p0, r.lo)
        shifted1 = _taylor_shift(self.p1, r.lo) if self.p1 else []
        width = r.width()
        corners = (s.lo,) if (not shifted1 or s.lo == s.hi) else (s.lo, s.hi)
        lo = hi = None
        for sv in corners:
            coeffs = _add(shifted0, [sv * c for c in shifted1])
            clo, chi = _monomial_bounds(coeffs, width)
            lo = clo if lo is None else min(lo, clo)
            hi = chi if hi is None else max(hi, chi)
        return Interval(lo, hi).outward(bits)

    def __repr__(self):
        return f"Poly2(p0={self.p0}, p1={self.p1})"


def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def _mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _horner_exact(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _horner_interval(coeffs: Sequence[Fraction], x: Interval, bits: int) -> Interval:
    acc = Interval.point(0)
    for c in reversed(coeffs):
        acc = ((acc * x).outward(bits) + Interval.point(c)).outward(bits)
    return acc


def _taylor_shift(coeffs: Sequence[Fraction], a: Fraction) -> list[Fraction]:
    """Coefficients of p(a + u) given those of p(r), by repeated synthetic
    division.  Exact."""
    c = list(coeffs)
    d = len(c)
    if a != 0:
        for i in range(d - 1):
            for j in range(d - 2, i - 1, -1):
                c[j] += a * c[j + 1]
    return c


def _monomial_bounds(coeffs: Sequence[Fraction], width: Fraction) -> tuple[Fraction, Fraction]:
    """Range bounds of sum c_i u^i over u in [0, width]."""
    if not coeffs:
        return Fraction(0), Fraction(0)
    lo = hi = coeffs[0]
    wpow = Fraction(1)
    for c in coeffs[1:]:
        wpow *= width
        if c == 0:
            continue
        term = c * wpow
        if term > 0:
            hi += term
        else:
            lo += term
    return lo, hi


def one_minus_r_power(power: int) -> list[Fraction]:
    """Coefficients of (1 - r)**power."""
    from math import comb

    return [Fraction((-1) ** i * comb(power, i)) for i in range(power + 1)]
