"""Independent brute-force oracles that do not touch the pipeline."""

from __future__ import annotations

import random


def int_zero_set(modulus: int, coefficients, initial, bound: int) -> list[int]:
    """Zeros of an LRS over Z/modulus by plain integer arithmetic."""
    window = [c % modulus for c in initial]
    d = len(coefficients)
    out = [n for n, v in enumerate(window) if v == 0 and n <= bound]
    for n in range(d, bound + 1):
        nxt = sum(coefficients[i] * window[-1 - i] for i in range(d)) % modulus
        window.append(nxt)
        window.pop(0)
        if nxt == 0:
            out.append(n)
    return out


# elements of Z/4[x]/<x^2, 2x> are a + b x with a mod 4 and b mod 2
def dual_mul(u, v):
    return ((u[0] * v[0]) % 4, (u[0] * v[1] + u[1] * v[0]) % 2)


def dual_zero_set(coefficients, initial, bound: int) -> list[int]:
    window = [(a % 4, b % 2) for a, b in initial]
    d = len(coefficients)
    out = [n for n, v in enumerate(window) if v == (0, 0) and n <= bound]
    for n in range(d, bound + 1):
        a = b = 0
        for i in range(d):
            t = dual_mul(coefficients[i], window[-1 - i])
            a, b = a + t[0], b + t[1]
        nxt = (a % 4, b % 2)
        window.append(nxt)
        window.pop(0)
        if nxt == (0, 0):
            out.append(n)
    return out


def dual_str(u) -> str:
    a, b = u
    if b == 0:
        return str(a)
    return f"{a} + x" if a else "x"


def random_int_lrs(rng: random.Random, modulus: int, max_order: int = 3):
    """Random order <= max_order recurrence whose last coefficient is nonzero."""
    d = rng.randint(1, max_order)
    coeffs = [rng.randrange(modulus) for _ in range(d - 1)] + [rng.randrange(1, modulus)]
    init = [rng.randrange(modulus) for _ in range(d)]
    return coeffs, init


def random_dual_lrs(rng: random.Random, max_order: int = 3):
    d = rng.randint(1, max_order)
    elems = [(a, b) for a in range(4) for b in range(2)]
    coeffs = [rng.choice(elems) for _ in range(d - 1)] + [rng.choice(elems[1:])]
    init = [rng.choice(elems) for _ in range(d)]
    return coeffs, init


def nested_members(p: int, ell: int, a0, coeffs, hi: int, lo: int = 0) -> set[int]:
    """Members of {a0 + sum p^(ell k_i) a_i} in [lo, hi] by exponent search.

    Exponents run while p^(ell k) stays below a generous multiple of the window,
    which covers every cancellation pattern for the small sets used in tests.
    """
    from fractions import Fraction
    from itertools import product

    a0 = Fraction(a0)
    coeffs = [Fraction(a) for a in coeffs]
    span = (max(abs(lo), abs(hi)) + 1) * 64 * (1 + abs(a0) + sum(abs(a) for a in coeffs))
    step = p**ell
    powers = [1]
    while powers[-1] <= span:
        powers.append(powers[-1] * step)
    out = set()
    for combo in product(powers, repeat=len(coeffs)):
        v = a0 + sum(c * a for c, a in zip(combo, coeffs))
        if v.denominator == 1 and lo <= v <= hi:
            out.add(int(v))
    return out
