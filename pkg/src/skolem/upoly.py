"""Univariate polynomials with coefficients in a ring, as coefficient lists.

Lists are lowest degree first.  Coefficients may be ``RingElem`` or
``Fraction`` values; only ring operations are used.
"""

from __future__ import annotations

from typing import Sequence


def trim(f: list) -> list:
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def add(f: Sequence, g: Sequence, zero) -> list:
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) for i in range(n)]


def sub(f: Sequence, g: Sequence, zero) -> list:
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else zero) - (g[i] if i < len(g) else zero) for i in range(n)]


def mul(f: Sequence, g: Sequence, zero, limit: int | None = None) -> list:
    """Product, optionally truncated to degrees ``< limit``."""
    if not f or not g:
        return []
    n = len(f) + len(g) - 1
    if limit is not None:
        n = min(n, limit)
    out = [zero] * n
    for i, a in enumerate(f):
        if i >= n:
            break
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + a * b
    return out


def scale(f: Sequence, c) -> list:
    return [c * a for a in f]


def shift(f: Sequence, k: int, zero) -> list:
    return [zero] * k + list(f)


def divmod_monic(f: Sequence, g: Sequence, zero) -> tuple[list, list]:
    """Division by a monic ``g`` (leading coefficient exactly one)."""
    f = list(f)
    dg = len(g) - 1
    if dg < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(f) <= dg:
        return [], f
    quo = [zero] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c.is_zero():
            continue
        quo[k - dg] = c
        for j in range(dg + 1):
            f[k - dg + j] = f[k - dg + j] - c * g[j]
    return quo, f[:dg]


def evaluate(f: Sequence, x, zero):
    acc = zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def power(f: Sequence, k: int, one, zero) -> list:
    out = [one]
    for _ in range(k):
        out = mul(out, f, zero)
    return out


def equal(f: Sequence, g: Sequence, zero) -> bool:
    n = max(len(f), len(g))
    return all(((f[i] if i < len(f) else zero) - (g[i] if i < len(g) else zero)).is_zero() for i in range(n))


def linear_product(roots: Sequence[tuple], one, zero) -> list:
    """prod (X - r)^d for ``(r, d)`` pairs."""
    out = [one]
    for r, d in roots:
        for _ in range(d):
            out = mul(out, [-r, one], zero)
    return out
