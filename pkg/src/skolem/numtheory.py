"""Integer helpers: primality, factorisation, exact roots and logarithms."""

from __future__ import annotations

import math
from functools import reduce

from sympy import factorint as _factorint
from sympy import integer_nthroot as _integer_nthroot
from sympy import isprime as _isprime

from .errors import FactorizationError


def is_prime(n: int) -> bool:
    # sympy's isprime is BPSW: deterministic below 2**64, no known counterexample above.
    return n >= 2 and bool(_isprime(n))


def factorize(n: int, budget: int | None = 10**7) -> dict[int, int]:
    """Prime factorisation of ``n >= 1`` as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    if n == 1:
        return {}
    kwargs = {}
    if budget is not None and n.bit_length() > 64:
        kwargs["limit"] = budget
    facs = {int(p): int(k) for p, k in _factorint(n, **kwargs).items()}
    for q in facs:
        if not is_prime(q):
            raise FactorizationError(f"could not fully factor {n}: cofactor {q}")
    return dict(sorted(facs.items()))


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``n = p**e`` or ``None``."""
    if n < 2:
        return None
    facs = factorize(n)
    if len(facs) != 1:
        return None
    ((p, e),) = facs.items()
    return p, e


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of ``n >= 0`` and whether it is exact."""
    if n < 0 or k < 1:
        raise ValueError("iroot expects n >= 0, k >= 1")
    r, exact = _integer_nthroot(n, k)
    return int(r), bool(exact)


def perfect_power_base(n: int) -> int:
    """Smallest ``b`` with ``n = b**j`` for some ``j >= 1``."""
    if n < 2:
        return n
    for k in range(n.bit_length(), 1, -1):
        r, exact = iroot(n, k)
        if exact:
            return perfect_power_base(r)
    return n


def multiplicatively_independent(p: int, q: int) -> bool:
    """True iff ``p**i == q**j`` forces ``i == j == 0`` (p, q >= 1)."""
    if p < 1 or q < 1:
        raise ValueError("bases must be positive")
    if p == 1 or q == 1:
        return False
    return perfect_power_base(p) != perfect_power_base(q)


def exact_log(value: int, base: int) -> int | None:
    """``k`` with ``base**k == value`` (value >= 1), else ``None``."""
    if value < 1 or base < 2:
        return None
    k = 0
    while value % base == 0:
        value //= base
        k += 1
    return k if value == 1 else None


def floor_log(value: int, base: int) -> int:
    """Largest ``k`` with ``base**k <= value`` (value >= 1)."""
    if value < 1:
        raise ValueError("floor_log expects value >= 1")
    k, acc = 0, base
    while acc <= value:
        acc *= base
        k += 1
    return k


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def crt_pair(b1: int, a1: int, b2: int, a2: int) -> tuple[int, int] | None:
    """Solve z = b1 (mod a1), z = b2 (mod a2); returns (b, lcm) or None."""
    g = math.gcd(a1, a2)
    if (b2 - b1) % g:
        return None
    m = a1 // g * a2
    # b1 + a1*t = b2 (mod a2)
    t = ((b2 - b1) // g) * pow(a1 // g, -1, a2 // g) % (a2 // g) if a2 // g > 1 else 0
    return (b1 + a1 * t) % m, m


def power_residues(base: int, modulus: int) -> tuple[list[int], int]:
    """Values ``base**k mod modulus`` for k in pre-period + one period.

    Returns ``(values, preperiod)``; ``values[k]`` for ``k >= preperiod`` repeats
    with period ``len(values) - preperiod``.
    """
    if modulus == 1:
        return [0], 0
    seen: dict[int, int] = {}
    values: list[int] = []
    x = 1 % modulus
    while x not in seen:
        seen[x] = len(values)
        values.append(x)
        x = x * base % modulus
    return values, seen[x]
