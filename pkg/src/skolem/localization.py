"""Localization S^-1 R at finitely many non-zero-divisors.

Denominators are kept as exponent vectors over the generators of S, so that
equality is decided by cross-multiplication without any cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidProblem
from .ring import QuotientRing, RingElem, is_zero_divisor


class MultiplicativeSet:
    def __init__(self, ring: QuotientRing, generators: Sequence[RingElem], check: bool = True):
        self.ring = ring
        self.generators: tuple[RingElem, ...] = tuple(ring(g) for g in generators)
        if check:
            for g in self.generators:
                if is_zero_divisor(g):
                    raise InvalidProblem(f"cannot localize at zero-divisor {g}")
        self._power_cache: dict[tuple[int, int], RingElem] = {}

    def __len__(self):
        return len(self.generators)

    def index(self, s: RingElem) -> int:
        return self.generators.index(self.ring(s))

    def power(self, i: int, k: int) -> RingElem:
        key = (i, k)
        if key not in self._power_cache:
            self._power_cache[key] = self.generators[i] ** k
        return self._power_cache[key]

    def product(self, exps: Sequence[int]) -> RingElem:
        out = self.ring.one
        for i, k in enumerate(exps):
            if k:
                out = out * self.power(i, k)
        return out

    def fraction(self, num, den: Sequence[int] | None = None) -> "Fraction":
        exps = tuple(den) if den is not None else (0,) * len(self.generators)
        return Fraction(self, self.ring(num), exps)

    def inverse_of(self, i: int) -> "Fraction":
        """1 / s_i."""
        exps = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return Fraction(self, self.ring.one, exps)


@dataclass(frozen=True, eq=False)
class Fraction:
    S: MultiplicativeSet
    num: RingElem
    den: tuple[int, ...]

    def denominator(self) -> RingElem:
        return self.S.product(self.den)

    def _check(self, other: "Fraction | RingElem | int") -> "Fraction":
        if isinstance(other, Fraction):
            if other.S is not self.S:
                raise ValueError("fractions over different multiplicative sets")
            return other
        return self.S.fraction(other)

    def normalize(self) -> "Fraction":
        return fraction_normalize(self)

    def __add__(self, other):
        return fraction_add(self, self._check(other))

    __radd__ = __add__

    def __neg__(self):
        return Fraction(self.S, -self.num, self.den)

    def __sub__(self, other):
        return fraction_add(self, -self._check(other))

    def __rsub__(self, other):
        return fraction_add(self._check(other), -self)

    def __mul__(self, other):
        return fraction_mul(self, self._check(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.S.fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "Fraction":
        """Inverse when the numerator is a product of generators (times a unit of R)."""
        R = self.S.ring
        for i, g in enumerate(self.S.generators):
            if g == self.num:
                exps = list(self.den)
                num_exps = [0] * len(exps)
                num_exps[i] = 1
                return Fraction(self.S, self.S.product(exps), tuple(num_exps))
        if R.is_finite:
            inv = R.unit_inverse(self.num)
            if inv is not None:
                return Fraction(self.S, inv * self.denominator(), (0,) * len(self.den))
        raise ArithmeticError(f"{self.num} is not invertible in this localization")

    def __eq__(self, other):
        if isinstance(other, (int, RingElem)):
            other = self.S.fraction(other)
        if not isinstance(other, Fraction):
            return NotImplemented
        return fraction_eq(self, other)

    def __hash__(self):
        raise TypeError("fractions are compared by cross-multiplication and are unhashable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_ring(self) -> RingElem:
        """The element of R itself, when the denominator is a unit of a finite ring."""
        if not any(self.den):
            return self.num
        inv = self.S.ring.unit_inverse(self.denominator())
        if inv is None:
            raise ArithmeticError("denominator is not a unit of the ring")
        return self.num * inv

    def __str__(self):
        if not any(self.den):
            return str(self.num)
        parts = [f"({g})^{k}" if k > 1 else f"({g})" for g, k in zip(self.S.generators, self.den) if k]
        return f"({self.num}) / " + "*".join(parts)

    __repr__ = __str__


def fraction_normalize(f: Fraction) -> Fraction:
    """Cancel identical generator powers shared by numerator and denominator."""
    num = f.num
    den = list(f.den)
    for i, g in enumerate(f.S.generators):
        while den[i] and num == g:
            num = f.S.ring.one
            den[i] -= 1
    return Fraction(f.S, num, tuple(den))


def fraction_add(a: Fraction, b: Fraction) -> Fraction:
    S = a.S
    if a.den == b.den:
        return Fraction(S, a.num + b.num, a.den)
    den = tuple(max(x, y) for x, y in zip(a.den, b.den))
    na = a.num * S.product([d - x for d, x in zip(den, a.den)])
    nb = b.num * S.product([d - y for d, y in zip(den, b.den)])
    return Fraction(S, na + nb, den)


def fraction_mul(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a.S, a.num * b.num, tuple(x + y for x, y in zip(a.den, b.den)))


def fraction_eq(a: Fraction, b: Fraction) -> bool:
    if a.den == b.den:
        return a.num == b.num
    den = tuple(max(x, y) for x, y in zip(a.den, b.den))
    S = a.S
    return a.num * S.product([d - x for d, x in zip(den, a.den)]) == b.num * S.product(
        [d - y for d, y in zip(den, b.den)]
    )
