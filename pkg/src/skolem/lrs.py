"""Linear recurrence sequences over a quotient ring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from . import upoly
from .errors import InvalidProblem
from .ring import QuotientRing, RingElem

MATRIX_POWER_THRESHOLD = 64

Matrix = list[list[RingElem]]


@dataclass(frozen=True, eq=False)
class LRS:
    """gamma_n = a_1 gamma_{n-1} + ... + a_d gamma_{n-d}."""

    ring: QuotientRing
    coefficients: tuple[RingElem, ...]
    initial: tuple[RingElem, ...]

    def __init__(self, ring: QuotientRing, coefficients: Sequence, initial: Sequence, check: bool = True):
        coeffs = tuple(ring(c) for c in coefficients)
        init = tuple(ring(c) for c in initial)
        if not coeffs:
            raise InvalidProblem("recurrence order must be positive")
        if len(coeffs) != len(init):
            raise InvalidProblem(
                f"{len(coeffs)} coefficients but {len(init)} initial terms; they must agree"
            )
        if check and coeffs[-1].is_zero():
            raise InvalidProblem("last recurrence coefficient a_d is zero in the ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "initial", init)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def terms(self) -> Iterator[RingElem]:
        """Infinite iterator over gamma_0, gamma_1, ..."""
        window = list(self.initial)
        yield from window
        a = self.coefficients
        d = self.order
        while True:
            nxt = self.ring.zero
            for i in range(d):
                if not a[i].is_zero():
                    nxt = nxt + a[i] * window[d - 1 - i]
            window = window[1:] + [nxt]
            yield nxt

    def prefix(self, n: int) -> list[RingElem]:
        out = []
        for i, t in enumerate(self.terms()):
            if i >= n:
                break
            out.append(t)
        return out

    def map(self, ring: QuotientRing) -> "LRS":
        """Image under the polynomial-identity map into ``ring``."""
        return LRS(ring, [ring(c.poly) for c in self.coefficients], [ring(c.poly) for c in self.initial], check=False)

    def __repr__(self):
        a = ", ".join(map(str, self.coefficients))
        g = ", ".join(map(str, self.initial))
        return f"LRS(a=({a}), init=({g}) over {self.ring})"


@dataclass(frozen=True)
class CharPoly:
    """f(Y) = Y^d - a_1 Y^{d-1} - ... - a_d and its reversal phi(Y) = Y^d f(1/Y)."""

    poly: tuple[RingElem, ...]  # lowest degree first, monic
    reversed: tuple[RingElem, ...]  # constant term 1

    @classmethod
    def of(cls, lrs: LRS) -> "CharPoly":
        R = lrs.ring
        d = lrs.order
        f = [-lrs.coefficients[d - 1 - i] for i in range(d)] + [R.one]
        phi = [R.one] + [-c for c in lrs.coefficients]
        return cls(tuple(f), tuple(phi))


def char_poly(lrs: LRS) -> CharPoly:
    return CharPoly.of(lrs)


# -- companion matrices ---------------------------------------------------------


def companion(lrs: LRS) -> Matrix:
    """Matrix M with M (g_{k+d-1}, ..., g_k)^T = (g_{k+d}, ..., g_{k+1})^T."""
    R = lrs.ring
    d = lrs.order
    M = [[R.zero] * d for _ in range(d)]
    M[0] = list(lrs.coefficients)
    for i in range(1, d):
        M[i][i - 1] = R.one
    return M


def mat_mul(A: Matrix, B: Matrix, zero) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                a = A[i][t]
                if a.is_zero():
                    continue
                b = B[t][j]
                if not b.is_zero():
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Matrix, v: Sequence[RingElem], zero) -> list[RingElem]:
    out = []
    for row in A:
        acc = zero
        for a, x in zip(row, v):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


def mat_pow(M: Matrix, k: int, one, zero) -> Matrix:
    n = len(M)
    result = [[one if i == j else zero for j in range(n)] for i in range(n)]
    base = M
    while k:
        if k & 1:
            result = mat_mul(result, base, zero)
        k >>= 1
        if k:
            base = mat_mul(base, base, zero)
    return result


def berkowitz(A: Matrix, one, zero) -> list:
    """Division-free characteristic polynomial det(X I - A), highest degree first."""
    n = len(A)
    if n == 0:
        return [one]
    C = [one, -A[0][0]]
    for k in range(1, n):
        R = A[k][:k]
        S = [A[i][k] for i in range(k)]
        M = [row[:k] for row in A[:k]]
        vec = [one, -A[k][k]]
        X = S
        for _ in range(k):
            acc = zero
            for r, x in zip(R, X):
                acc = acc + r * x
            vec.append(-acc)
            X = mat_vec(M, X, zero)
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                acc = acc + vec[i - j] * C[j]
            new.append(acc)
        C = new
    return C


# -- operations -------------------------------------------------------------------


def term_at(lrs: LRS, n: int) -> RingElem:
    if n < 0:
        raise ValueError("index must be nonnegative")
    d = lrs.order
    if n < d:
        return lrs.initial[n]
    if n < MATRIX_POWER_THRESHOLD:
        for i, t in enumerate(lrs.terms()):
            if i == n:
                return t
    R = lrs.ring
    state = list(reversed(lrs.initial))  # (g_{d-1}, ..., g_0)
    P = mat_pow(companion(lrs), n - d + 1, R.one, R.zero)
    return mat_vec(P[:1], state, R.zero)[0]


def gf_numerator(lrs: LRS) -> list[RingElem]:
    """h(Y) with sum gamma_n Y^n = h(Y) / phi(Y), lowest degree first, length d."""
    d = lrs.order
    R = lrs.ring
    phi = list(CharPoly.of(lrs).reversed)
    prefix = lrs.prefix(3 * d + 1)
    prod = upoly.mul(phi, prefix, R.zero, limit=3 * d + 1)
    for k in range(d, len(prod)):
        if not prod[k].is_zero():
            raise ArithmeticError(f"phi * g has a nonzero coefficient in degree {k}")
    return prod[:d]


def subsequence(lrs: LRS, m: int, q: int) -> LRS:
    """The sequence n -> gamma_{m n + q}."""
    if m < 1 or not 0 <= q < m:
        raise ValueError("need m >= 1 and 0 <= q < m")
    if m == 1 and q == 0:
        return lrs
    R = lrs.ring
    d = lrs.order
    Mm = mat_pow(companion(lrs), m, R.one, R.zero)
    cp = berkowitz(Mm, R.one, R.zero)  # X^d + c_1 X^{d-1} + ... + c_d
    coeffs = [-c for c in cp[1:]]
    init = [term_at(lrs, q + m * i) for i in range(d)]
    return LRS(R, coeffs, init, check=False)
