"""Zero sets of simple exponential sums  sum_i c_i r_i^z  over rings of characteristic p^e.

Two backends fill the slot of a general S-unit solver:

* finite rings: the bases are units, so (r_1^z, ..., r_t^z) is purely periodic
  and the zero set is an exact union of cosets (status PROVEN);
* any ring: enumerate zeros up to a bound, fit a p-normal description, verify it
  on the whole window and on predicted members beyond it (status CERTIFIED).

``brute_zero_set`` is the independent oracle: plain evaluation of the sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import reduce
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import ResourceExhausted
from .localization import Fraction
from .lrs import LRS
from .numtheory import lcm
from .pnormal import ElementaryPNested, PNormalZ, ProgressionZ, periodic_set
from .poly import MultiPoly, dense_convolve
from .ring import QuotientRing, RingElem

PROVEN = "PROVEN"
CERTIFIED = "CERTIFIED"
DEFAULT_CERTIFY_BOUND = 4096
PERIOD_LIMIT = 1_000_000


@dataclass
class SimpleSumEquation:
    """sum_i c_i r_i^z = 0 with ring elements; every r_i is a non-zero-divisor."""

    ring: QuotientRing
    coefficients: list[RingElem]
    bases: list[RingElem]
    p: int
    e: int

    @classmethod
    def build(cls, ring: QuotientRing, coefficients, bases, p: int, e: int) -> "SimpleSumEquation":
        """Merge equal bases and drop vanishing terms."""
        cs: list[RingElem] = []
        bs: list[RingElem] = []
        for c, b in zip(coefficients, bases):
            c, b = ring(c), ring(b)
            for i, x in enumerate(bs):
                if x == b:
                    cs[i] = cs[i] + c
                    break
            else:
                cs.append(c)
                bs.append(b)
        keep = [(c, b) for c, b in zip(cs, bs) if not c.is_zero()]
        return cls(ring, [c for c, _ in keep], [b for _, b in keep], p, e)

    @classmethod
    def from_fractions(cls, coefficients: Sequence[Fraction], bases: Sequence[Fraction], p: int, e: int) -> "SimpleSumEquation":
        """Clear denominators: with r_i = u_i / s_i, multiply through by prod_k s_k^z
        and by a common denominator of the coefficients."""
        if not bases:
            raise ValueError("empty sum")
        S = bases[0].S
        dens = [b.denominator() for b in bases]
        new_bases = []
        for i, b in enumerate(bases):
            x = b.num
            for k, d in enumerate(dens):
                if k != i:
                    x = x * d
            new_bases.append(x)
        top = tuple(max(c.den[j] for c in coefficients) for j in range(len(S)))
        new_coeffs = [c.num * S.product([t - d for t, d in zip(top, c.den)]) for c in coefficients]
        return cls.build(S.ring, new_coeffs, new_bases, p, e)

    def value(self, z: int) -> RingElem:
        acc = self.ring.zero
        for c, b in zip(self.coefficients, self.bases):
            acc = acc + c * b**z
        return acc

    def __str__(self):
        if not self.bases:
            return "0"
        return " + ".join(f"({c})*({b})^z" for c, b in zip(self.coefficients, self.bases))


@dataclass
class ZeroSetCertificate:
    set: PNormalZ
    status: str
    bound: int | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def to_json(self) -> dict:
        return {
            "set": self.set.to_json(),
            "status": self.status if self.status == PROVEN else f"CERTIFIED_UP_TO({self.bound})",
            "evidence": {k: v for k, v in self.evidence.items() if k != "zeros"},
        }


def _trivial(eq: SimpleSumEquation) -> ZeroSetCertificate | None:
    if not eq.coefficients:
        return ZeroSetCertificate(PNormalZ(eq.p, [ProgressionZ(1, 0)]), PROVEN, evidence={"reason": "all coefficients vanish"})
    if len(eq.coefficients) == 1:
        # c r^z with r a non-zero-divisor and c != 0 never vanishes
        return ZeroSetCertificate(PNormalZ(eq.p, []), PROVEN, evidence={"reason": "single term with non-zero-divisor base"})
    return None


# -- finite rings -------------------------------------------------------------------------


def zero_set_finite_ring(eq: SimpleSumEquation) -> ZeroSetCertificate:
    R = eq.ring
    if not R.is_finite:
        raise ValueError("finite-ring backend needs a finite ring")
    triv = _trivial(eq)
    if triv is not None:
        return triv
    orders = [R.multiplicative_order(b) for b in eq.bases]
    T = reduce(lcm, orders, 1)
    if T > PERIOD_LIMIT:
        raise ResourceExhausted(f"period {T} of the bases exceeds {PERIOD_LIMIT}")
    for b in eq.bases:
        if not (b**T == R.one):
            raise ArithmeticError("bases are not periodic with the computed period")
    zeros = []
    powers = list(eq.coefficients)
    for z in range(T):
        acc = R.zero
        for x in powers:
            acc = acc + x
        if acc.is_zero():
            zeros.append(z)
        powers = [x * b for x, b in zip(powers, eq.bases)]
    return ZeroSetCertificate(
        periodic_set(eq.p, T, zeros), PROVEN, evidence={"period": T, "orders": orders, "zero_residues": zeros}
    )


# -- evaluation helpers -------------------------------------------------------------------


def _free_variable(R: QuotientRing) -> int | None:
    """Index of X when R is Z/q[X] up to variables the ideal sets to zero."""
    killed = set()
    for g in R.ideal.groebner:
        if len(g.terms) != 1:
            return None
        (m, c), = g.terms.items()
        if c != 1 or sum(m) != 1:
            return None
        killed.add(m.index(1))
    free = [i for i in range(len(R.variables)) if i not in killed]
    return free[0] if len(free) == 1 else None


def _is_free_univariate(R: QuotientRing) -> bool:
    return _free_variable(R) is not None


class _Dense:
    """Arithmetic in Z/q[X] on numpy coefficient arrays."""

    def __init__(self, q: int, index: int = 0):
        self.q = q
        self.index = index

    def of(self, x: RingElem) -> np.ndarray:
        # normal forms never involve the killed variables
        terms = x.poly.terms
        deg = max((m[self.index] for m in terms), default=-1)
        arr = np.zeros(deg + 1, dtype=object if self.q >= 1 << 31 else np.int64)
        for m, c in terms.items():
            arr[m[self.index]] = c
        return arr

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.size == 0 or b.size == 0:
            return a[:0]
        return _trim(dense_convolve(a, b, self.q))

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] = (out[: b.size] + b) % self.q
        return _trim(out)

    def pow(self, a: np.ndarray, k: int) -> np.ndarray:
        result = np.ones(1, dtype=a.dtype)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.nonzero(a)[0]
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _sum_zero_flags(eq: SimpleSumEquation, bound: int) -> list[int]:
    """Indices z in [0, bound] with sum c_i r_i^z = 0."""
    R = eq.ring
    zeros = []
    if _is_free_univariate(R):
        D = _Dense(R.q, _free_variable(R))
        cur = [D.of(c) for c in eq.coefficients]
        bases = [D.of(b) for b in eq.bases]
        for z in range(bound + 1):
            acc = cur[0]
            for x in cur[1:]:
                acc = D.add(acc, x)
            if acc.size == 0:
                zeros.append(z)
            cur = [D.mul(x, b) for x, b in zip(cur, bases)]
        return zeros
    cur = list(eq.coefficients)
    for z in range(bound + 1):
        acc = R.zero
        for x in cur:
            acc = acc + x
        if acc.is_zero():
            zeros.append(z)
        cur = [x * b for x, b in zip(cur, eq.bases)]
    return zeros


def _vanishes_at(eq: SimpleSumEquation, z: int) -> bool:
    R = eq.ring
    if _is_free_univariate(R):
        D = _Dense(R.q, _free_variable(R))
        acc = np.zeros(0, dtype=np.int64)
        for c, b in zip(eq.coefficients, eq.bases):
            acc = D.add(acc, D.mul(D.of(c), D.pow(D.of(b), z)))
        return acc.size == 0
    return eq.value(z).is_zero()


# -- fitting -----------------------------------------------------------------------------------


def _members_up_to(part, bound: int) -> set[int]:
    if isinstance(part, ProgressionZ):
        return set(range(part.offset, bound + 1, part.modulus))
    return part.brute_members(0, bound)


def _fit_periodic(zeros: list[int], bound: int):
    """Smallest T <= (bound+1)/3 with the zero pattern periodic on [0, bound]."""
    flags = bytearray(bound + 1)
    for z in zeros:
        flags[z] = 1
    for T in range(1, (bound + 1) // 3 + 1):
        if flags[T:] == flags[: bound + 1 - T]:
            return T, [z for z in zeros if z < T]
    return None


def _fit_nested1(zs: list[int], p: int, max_ell: int) -> ElementaryPNested | None:
    """{a0 + c p^(l k)}: consecutive gaps grow by the ratio p^l."""
    if len(zs) < 3:
        return None
    g0, g1 = zs[1] - zs[0], zs[2] - zs[1]
    if g0 <= 0 or g1 % g0:
        return None
    ratio = g1 // g0
    ell, x = 0, ratio
    while x > 1 and x % p == 0:
        x //= p
        ell += 1
    if x != 1 or not 1 <= ell <= max_ell:
        return None
    for i in range(1, len(zs) - 1):
        if (zs[i + 1] - zs[i]) != (zs[i] - zs[i - 1]) * ratio:
            return None
    c = Q(g0, ratio - 1)
    try:
        return ElementaryPNested(p, ell, zs[0] - c, [c])
    except ValueError:
        return None


def _fit_nested2(zs: list[int], p: int, max_ell: int, bound: int) -> ElementaryPNested | None:
    """{a0 + c1 p^(l a) + c2 p^(l b)} with 0 < c1 <= c2, by candidate search."""
    if len(zs) < 4:
        return None
    target = set(zs)
    for ell in range(1, max_ell + 1):
        step = p**ell
        cands = set()
        for z in zs[1:8]:
            d = z - zs[0]
            w = step
            while w - 1 <= d:
                if d % (w - 1) == 0:
                    cands.add(d // (w - 1))
                w *= step
        cands = sorted(c for c in cands if c > 0)[:24]
        for i, c1 in enumerate(cands):
            for c2 in cands[i:]:
                a0 = zs[0] - c1 - c2
                try:
                    part = ElementaryPNested(p, ell, a0, [c1, c2])
                except ValueError:
                    continue
                if _members_up_to(part, bound) == target:
                    return part
    return None


def fit_pnormal(zeros: list[int], bound: int, p: int, e: int) -> tuple[list, str]:
    """A p-normal description matching ``zeros`` exactly on [0, bound]."""
    if len(zeros) == bound + 1:
        return [ProgressionZ(1, 0)], "full"
    if not zeros:
        return [], "empty"
    per = _fit_periodic(zeros, bound)
    if per is not None:
        T, res = per
        return list(periodic_set(p, T, res).parts), "periodic"
    if len(zeros) == 1:
        return [ElementaryPNested(p, 1, zeros[0], [])], "singleton"
    max_ell = e * max(1, (bound.bit_length() + p.bit_length() - 2) // max(1, p.bit_length() - 1))
    target = set(zeros)
    # a nested part, possibly after a few exceptional small members
    for skip in range(0, min(3, len(zeros) - 2)):
        part = _fit_nested1(zeros[skip:], p, max_ell)
        if part is None:
            continue
        singles = [ElementaryPNested(p, 1, z, []) for z in zeros[:skip] if z not in part]
        parts = singles + [part]
        if set().union(*(_members_up_to(x, bound) for x in parts)) == target:
            return _merge_singletons(parts, p, bound, target), "nested"
    part = _fit_nested2(zeros, p, max_ell, bound)
    if part is not None:
        return [part], "nested2"
    return [ElementaryPNested(p, 1, z, []) for z in zeros], "finite"


def _merge_singletons(parts, p, bound, target):
    """Fold exceptional singletons into the nested part when the result is itself nested."""
    if len(parts) == 1:
        return parts
    merged = _fit_nested1(sorted(target), p, 64)
    if merged is not None and _members_up_to(merged, bound) == target:
        return [merged]
    return parts


def _predicted(parts, lo: int, hi: int, limit: int = 8) -> list[int]:
    out = set()
    for x in parts:
        if isinstance(x, ElementaryPNested) and x.arity:
            out.update(z for z in x.brute_members(lo, hi))
        elif isinstance(x, ProgressionZ):
            first = lo + (x.offset - lo) % x.modulus
            out.update(range(first, min(hi, first + x.modulus * limit) + 1, x.modulus))
    return sorted(out)[:limit]


def zero_set_guess_certify(eq: SimpleSumEquation, bound: int = DEFAULT_CERTIFY_BOUND) -> ZeroSetCertificate:
    triv = _trivial(eq)
    if triv is not None:
        return triv
    zeros = _sum_zero_flags(eq, bound)
    parts, kind = fit_pnormal(zeros, bound, eq.p, eq.e)
    checked = []
    if kind not in ("finite", "empty", "singleton"):
        for z in _predicted(parts, bound + 1, eq.p * bound):
            ok = _vanishes_at(eq, z)
            checked.append([z, ok])
            if not ok:
                parts, kind = [ElementaryPNested(eq.p, 1, x, []) for x in zeros], "finite"
                break
    return ZeroSetCertificate(
        PNormalZ(eq.p, parts),
        CERTIFIED,
        bound,
        evidence={"fit": kind, "zeros": zeros, "zero_count": len(zeros), "spot_checks": checked},
    )


def solve_simple_sum(eq: SimpleSumEquation, backend: str = "auto", bound: int = DEFAULT_CERTIFY_BOUND) -> ZeroSetCertificate:
    if backend not in ("auto", "finite", "certify"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "finite" or (backend == "auto" and eq.ring.is_finite):
        return zero_set_finite_ring(eq)
    return zero_set_guess_certify(eq, bound)


# -- brute force oracle ----------------------------------------------------------------------------


def lrs_values(lrs: LRS) -> Iterator[bool]:
    """Yields whether gamma_n = 0 for n = 0, 1, 2, ..."""
    R = lrs.ring
    if _is_free_univariate(R):
        D = _Dense(R.q, _free_variable(R))
        a = [D.of(c) for c in lrs.coefficients]
        window = [D.of(c) for c in lrs.initial]
        for w in window:
            yield w.size == 0
        d = len(a)
        while True:
            nxt = np.zeros(0, dtype=np.int64)
            for i in range(d):
                if a[i].size:
                    nxt = D.add(nxt, D.mul(a[i], window[d - 1 - i]))
            window = window[1:] + [nxt]
            yield nxt.size == 0
    else:
        for t in lrs.terms():
            yield t.is_zero()


def brute_zero_set(lrs: LRS, bound: int) -> list[int]:
    out = []
    for n, z in enumerate(lrs_values(lrs)):
        if n > bound:
            break
        if z:
            out.append(n)
    return out
