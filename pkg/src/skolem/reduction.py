"""From an LRS over Z/T-algebras to simple exponential sums.

The chain is: split the characteristic by CRT, adjoin roots of the
characteristic polynomial, decompose the zero ideal into primary components,
and in each component rewrite the generating function by partial fractions.
Polynomial parts are kept in the binomial basis ``binom(n, j)`` because
``j!`` need not be invertible modulo ``p^e``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import upoly
from .errors import InvalidProblem, NilpotencyUndetermined, UnsupportedDecomposition
from .groebner import eliminate
from .localization import Fraction, MultiplicativeSet
from .lrs import LRS, CharPoly, gf_numerator, term_at
from .numtheory import factorize, floor_log
from .poly import MultiPoly, parse_poly
from .ring import QuotientRing, RingElem, is_zero_divisor, nilpotency_index

ROOT_SEARCH_LIMIT = 4096
RECONSTRUCTION_WINDOW = 200


# -- CRT ---------------------------------------------------------------------------


@dataclass
class CrtComponent:
    prime: int
    exponent: int
    ring: QuotientRing
    lrs: LRS


def crt_split(
    T: int,
    variables: Sequence[str],
    ideal: Sequence[MultiPoly],
    coefficients: Sequence[MultiPoly],
    initial: Sequence[MultiPoly],
    budget: int | None = None,
) -> list[CrtComponent]:
    """One component Z/p^e[vars]/I per prime power dividing ``T``.

    Inputs are polynomials with coefficients modulo ``T``; each component
    reduces them modulo ``p^e``.
    """
    if T < 2:
        raise InvalidProblem("characteristic must be at least 2")
    out = []
    for p, e in sorted(factorize(T).items()):
        q = p**e
        kw = {} if budget is None else {"budget": budget}
        R = QuotientRing(q, variables, [g.with_modulus(q) for g in ideal], **kw)
        lrs = LRS(R, [c.with_modulus(q) for c in coefficients], [c.with_modulus(q) for c in initial], check=False)
        out.append(CrtComponent(p, e, R, lrs))
    return out


# -- splitting the characteristic polynomial ---------------------------------------


@dataclass
class SplitData:
    extended_ring: QuotientRing
    roots: list[tuple[RingElem, int]]
    adjoined: tuple[str, ...] = ()


def _fresh(ring: QuotientRing, stem: str = "t") -> str:
    k = 1
    while f"{stem}{k}" in ring.variables:
        k += 1
    return f"{stem}{k}"


def _scalar_power_root(f: list[RingElem]) -> RingElem | None:
    """``c`` in Z/p^e with f = (X - c)^d, if any."""
    R = f[0].ring
    d = len(f) - 1
    if R.q > ROOT_SEARCH_LIMIT:
        return None
    for c in range(R.q):
        cand = upoly.power([R(-c), R.one], d, R.one, R.zero)
        if upoly.equal(cand, f, R.zero):
            return R(c)
    return None


def _small_root_candidates(f: list[RingElem]):
    """Polynomials over Z/q of degree at most the coefficients' degree."""
    R = f[0].ring
    D = max(c.poly.total_degree() for c in f if not c.is_zero())
    n = len(R.variables)
    monos = [m for m in itertools.product(range(D + 1), repeat=n) if sum(m) <= D]
    monos.sort(key=lambda m: (sum(m), m))
    if R.q ** len(monos) > ROOT_SEARCH_LIMIT:
        return
    for coeffs in itertools.product(range(R.q), repeat=len(monos)):
        terms = {m: c for m, c in zip(monos, coeffs) if c}
        yield R(MultiPoly(R.variables, R.q, terms))


def _find_root(f: list[RingElem]) -> RingElem | None:
    R = f[0].ring
    if f[0].is_zero():
        return R.zero
    if R.is_finite:
        return _scalar_power_root(f)
    for c in _small_root_candidates(f):
        if upoly.evaluate(f, c, R.zero).is_zero():
            return c
    return None


def split_char_poly(ring: QuotientRing, f: Sequence[RingElem]) -> SplitData:
    """Adjoin roots of the monic ``f`` (coefficients lowest first) until it splits.

    Roots already present are used when they are cheap to see: the root 0, a
    scalar ``c`` with ``f = (X - c)^d`` over a finite ring, or a low-degree
    polynomial root over an infinite ring.  Otherwise the generic root ``t_k``
    of ``R[t_k]/<f(t_k)>`` is adjoined.
    """
    f = [ring(c) for c in f]
    if not f[-1] == ring.one:
        raise ValueError("characteristic polynomial must be monic")
    R = ring
    rem = f
    roots: list[RingElem] = []
    adjoined: list[str] = []
    while len(rem) > 1:
        if len(rem) == 2:
            r = -rem[0]
        else:
            r = _find_root(rem)
        if r is None:
            t = _fresh(R)
            vs = R.variables + (t,)
            T = MultiPoly.variable(vs, R.q, t)
            rel = MultiPoly(vs, R.q)
            for k, c in enumerate(rem):
                rel = rel + c.poly.extend_variables(vs) * T**k
            R = R.extend([t], [rel])
            adjoined.append(t)
            rem = [R(c.poly) for c in rem]
            roots = [R(r.poly) for r in roots]
            r = R.gen(t)
        quo, remainder = upoly.divmod_monic(rem, [-r, R.one], R.zero)
        if any(not c.is_zero() for c in remainder):
            raise ArithmeticError("root does not divide the polynomial")
        roots.append(r)
        rem = quo
    merged: list[tuple[RingElem, int]] = []
    for r in roots:
        for i, (s, k) in enumerate(merged):
            if s == r:
                merged[i] = (s, k + 1)
                break
        else:
            merged.append((r, 1))
    fR = [R(c.poly) for c in f]
    if not upoly.equal(upoly.linear_product(merged, R.one, R.zero), fR, R.zero):
        raise ArithmeticError("product of linear factors does not reproduce f")
    return SplitData(R, merged, tuple(adjoined))


# -- primary decomposition -----------------------------------------------------------


@dataclass
class PrimaryComponent:
    ring: QuotientRing
    lrs: LRS | None = None
    idempotent: RingElem | None = None
    primary_verified: bool = True
    note: str = ""

    def project(self, lrs: LRS) -> "PrimaryComponent":
        return PrimaryComponent(self.ring, lrs.map(self.ring), self.idempotent, self.primary_verified, self.note)


def ideal_intersection(gens_a, gens_b, p: int, e: int, variables: Sequence[str], budget=None) -> list[MultiPoly]:
    """Generators of I ∩ J via elimination of t from t*I + (1-t)*J."""
    t = "__s"
    while t in variables:
        t += "_"
    vs = (t,) + tuple(variables)
    q = p**e
    T = MultiPoly.variable(vs, q, t)
    one = MultiPoly.constant(vs, q, 1)
    gens = [T * g.extend_variables(vs) for g in gens_a] + [(one - T) * g.extend_variables(vs) for g in gens_b]
    kw = {} if budget is None else {"budget": budget}
    out = []
    for h, _ in eliminate(gens, 1, p, e, **kw):
        out.append(MultiPoly(variables, q, {m[1:]: c for m, c in h.terms.items()}))
    return out


def primary_split(ring: QuotientRing, decomposition: Sequence[Sequence[str]] | None = None) -> list[PrimaryComponent]:
    if decomposition:
        return _user_decomposition(ring, decomposition)
    if ring.is_finite:
        idems = ring.primitive_idempotents
        if len(idems) <= 1:
            return [PrimaryComponent(ring, idempotent=ring.one, note="local ring")]
        total = ring.zero
        for i, a in enumerate(idems):
            total = total + a
            for b in idems[i + 1 :]:
                if not (a * b).is_zero():
                    raise ArithmeticError("idempotents are not orthogonal")
        if not total == ring.one:
            raise ArithmeticError("idempotents do not sum to one")
        comps = []
        for a in idems:
            C = ring.quotient([ring.one - a])
            if not C.is_local():
                raise ArithmeticError("idempotent component is not local")
            comps.append(PrimaryComponent(C, idempotent=a, note="idempotent component"))
        return comps
    if not ring.ideal.generators:
        # in Z/p^e[vars] a zero-divisor has all coefficients divisible by p
        return [PrimaryComponent(ring, note="polynomial ring over Z/p^e")]
    raise UnsupportedDecomposition(
        "infinite quotient ring without a supplied [primary_decomposition]"
    )


def _user_decomposition(ring: QuotientRing, decomposition) -> list[PrimaryComponent]:
    ideals = []
    for gens in decomposition:
        polys = [g if isinstance(g, MultiPoly) else parse_poly(g, ring.variables, ring.q) for g in gens]
        ideals.append([g.extend_variables(ring.variables) for g in polys])
    base = list(ring.ideal.generators)
    for P in ideals:
        C = QuotientRing(ring.modulus, ring.variables, P, budget=ring.budget)
        for g in base:
            if not C.ideal.contains(g):
                raise InvalidProblem("a supplied primary component does not contain the ring's ideal")
    inter = ideals[0]
    for P in ideals[1:]:
        inter = ideal_intersection(inter, P, ring.p, ring.e, ring.variables, budget=ring.budget)
    for g in inter:
        if not ring.ideal.contains(g):
            raise InvalidProblem("supplied primary components do not intersect to the zero ideal")
    comps = []
    for P in ideals:
        C = ring.quotient([ring(g) for g in P])
        if C.is_finite:
            if not C.is_local():
                raise InvalidProblem("a supplied component is not primary")
            comps.append(PrimaryComponent(C, note="supplied, verified local"))
        else:
            comps.append(PrimaryComponent(C, primary_verified=False, note="supplied, primariness assumed"))
    return comps


# -- partial fractions ------------------------------------------------------------------


def gbinom(t: int, j: int) -> int:
    """binom(t, j) for any integer t (polynomial in t), j >= 0."""
    if j < 0:
        return 0
    if t >= 0:
        return comb(t, j)
    return (-1) ** j * comb(j - t - 1, j)


@dataclass
class RootData:
    root: RingElem
    multiplicity: int
    nilpotency: int | None  # index for nilpotent roots, None for non-zero-divisors


@dataclass
class ExpPolySum:
    """alpha_n = sum_i r_i^n sum_k c_ik binom(n, k) for n >= start."""

    S: MultiplicativeSet
    start: int
    terms: list[tuple[Fraction, list[Fraction]]]
    index_set: list[int]
    lrs: LRS
    poly_part: list = field(default_factory=list)

    @property
    def ring(self) -> QuotientRing:
        return self.S.ring

    @property
    def degree(self) -> int:
        return max((len(c) - 1 for _, c in self.terms), default=0)

    def value(self, n: int) -> Fraction:
        acc = self.S.fraction(0)
        for r, cs in self.terms:
            poly = self.S.fraction(0)
            for k, c in enumerate(cs):
                b = comb(n, k)
                if b:
                    poly = poly + c * b
            acc = acc + (r**n) * poly
        return acc


class _Inverter:
    """Inverses of elements of S inside S^-1 B; plain ring inverses for finite B."""

    def __init__(self, S: MultiplicativeSet):
        self.S = S
        self.finite = S.ring.is_finite

    def inv(self, x: RingElem) -> Fraction:
        if self.finite:
            y = self.S.ring.unit_inverse(x)
            if y is None:
                raise ArithmeticError(f"{x} is not a unit")
            return self.S.fraction(y)
        return self.S.inverse_of(self.S.index(x))


def classify_roots(ring: QuotientRing, roots: Sequence[tuple[RingElem, int]]) -> list[RootData]:
    out = []
    for r, d in roots:
        if is_zero_divisor(r):
            ell = nilpotency_index(r)
            if ell is None:
                raise NilpotencyUndetermined(f"root {r} is a zero-divisor but no nilpotency index was found")
            out.append(RootData(r, d, ell))
        else:
            out.append(RootData(r, d, None))
    return out


def project_roots(ring: QuotientRing, roots: Sequence[tuple[RingElem, int]]) -> list[tuple[RingElem, int]]:
    merged: list[tuple[RingElem, int]] = []
    for r, d in roots:
        r = ring(r.poly)
        for i, (s, k) in enumerate(merged):
            if s == r:
                merged[i] = (s, k + d)
                break
        else:
            merged.append((r, d))
    return merged


def nilpotent_split(delta, ell: int, m: int = 1) -> list[tuple[object, int, int]]:
    """Rewrite 1/(1 - r_i Y)^m over powers of 1/(1 - r_j Y), delta = r_i - r_j, delta^ell = 0.

    1/(1 - r_i Y)^m = sum_{a < ell} binom(a+m-1, m-1) delta^a Y^a / (1 - r_j Y)^(a+m);
    returns (coef, a, a + m) triples.
    """
    out = []
    power = delta**0
    for a in range(ell):
        if power.is_zero():
            break
        out.append((power * comb(a + m - 1, m - 1), a, a + m))
        power = power * delta
    return out


def exp_poly_sum(component: PrimaryComponent, roots: Sequence[tuple[RingElem, int]]) -> ExpPolySum:
    """Partial fractions of the generating function of ``component.lrs``."""
    B = component.ring
    alpha = component.lrs
    rd = classify_roots(B, project_roots(B, roots))
    n_roots = len(rd)
    # zero-divisor status of all differences
    diff: dict[tuple[int, int], tuple[RingElem, int | None]] = {}
    for i in range(n_roots):
        for j in range(i + 1, n_roots):
            delta = rd[i].root - rd[j].root
            if is_zero_divisor(delta):
                ell = nilpotency_index(delta)
                if ell is None:
                    raise NilpotencyUndetermined(f"difference {delta} of roots is a zero-divisor of unknown nilpotency")
                diff[(i, j)] = (delta, ell)
            else:
                diff[(i, j)] = (delta, None)
    gens = [d for d, ell in diff.values() if ell is None] + [x.root for x in rd if x.nilpotency is None]
    uniq: list[RingElem] = []
    for g in gens:
        if not any(g == u for u in uniq):
            uniq.append(g)
    S = MultiplicativeSet(B, uniq, check=False)
    inv = _Inverter(S)
    zeroF = S.fraction(0)

    # sanity: the split reproduces phi
    phi = list(CharPoly.of(alpha).reversed)
    prod = [B.one]
    for x in rd:
        for _ in range(x.multiplicity):
            prod = upoly.mul(prod, [B.one, -x.root], B.zero)
    if not upoly.equal(prod, phi, B.zero):
        raise ArithmeticError("roots do not factor the characteristic polynomial in this component")

    h = [S.fraction(c) for c in gf_numerator(alpha)]
    work: dict[tuple[int, ...], list[Fraction]] = {tuple(x.multiplicity for x in rd): h}
    final: dict[tuple[int, ...], list[Fraction]] = {}

    def push(target, mults, numer):
        if mults in target:
            target[mults] = upoly.add(target[mults], numer, zeroF)
        else:
            target[mults] = numer

    while work:
        mults = min(work)  # deterministic order
        numer = work.pop(mults)
        if all(c.is_zero() for c in numer):
            continue
        live = [i for i, m in enumerate(mults) if m > 0]
        if len(live) <= 1:
            push(final, mults, numer)
            continue
        i, j = live[0], live[1]
        delta, ell = diff[(i, j)]
        if ell is None:
            dinv = inv.inv(delta)
            a = S.fraction(rd[i].root) * dinv
            b = -(S.fraction(rd[j].root) * dinv)
            mj = list(mults)
            mj[j] -= 1
            mi = list(mults)
            mi[i] -= 1
            push(work, tuple(mj), upoly.scale(numer, a))
            push(work, tuple(mi), upoly.scale(numer, b))
        else:
            for coef, k, pw in nilpotent_split(delta, ell, mults[i]):
                m2 = list(mults)
                m2[i] = 0
                m2[j] += pw
                push(work, tuple(m2), upoly.shift(upoly.scale(numer, S.fraction(coef)), k, zeroF))

    poly_part: list[Fraction] = []
    coeffs: dict[int, list[Fraction]] = {}
    start = 0
    for mults, numer in sorted(final.items()):
        live = [i for i, m in enumerate(mults) if m > 0]
        if not live:
            poly_part = upoly.add(poly_part, numer, zeroF)
            continue
        (i,) = live
        m = mults[i]
        x = rd[i]
        if x.nilpotency is not None:
            geo = [S.fraction(x.root**k) for k in range(x.nilpotency)]
            expansion = upoly.power(geo, m, S.fraction(1), zeroF)
            poly_part = upoly.add(poly_part, upoly.mul(numer, expansion, zeroF), zeroF)
            continue
        rinv = inv.inv(x.root)
        cs = coeffs.setdefault(i, [zeroF] * m)
        if len(cs) < m:
            cs.extend([zeroF] * (m - len(cs)))
        for s, c in enumerate(numer):
            if c.is_zero():
                continue
            # c Y^s / (1 - rY)^m has coefficient c binom(n-s+m-1, m-1) r^(n-s), valid for n >= s-m+1
            scaled = c * rinv**s
            for k in range(m):
                b = gbinom(m - 1 - s, m - 1 - k)
                if b:
                    cs[k] = cs[k] + scaled * b
            start = max(start, s - m + 1)
    poly_part = _trim_fr(poly_part)
    start = max(start, len(poly_part))
    terms = []
    index = []
    for i in sorted(coeffs):
        cs = _trim_fr(coeffs[i])
        if cs:
            terms.append((S.fraction(rd[i].root), cs))
            index.append(i)
    eps = ExpPolySum(S, start, terms, index, alpha, poly_part)
    check_reconstruction(eps)
    return eps


def _trim_fr(f):
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def check_reconstruction(eps: ExpPolySum, window: int = RECONSTRUCTION_WINDOW) -> None:
    """Compare the closed form with term_at on [start, start + window]."""
    S = eps.S
    zero = S.fraction(0)
    powers = [r**eps.start for r, _ in eps.terms]
    terms = eps.lrs.prefix(eps.start + window + 1) if eps.start + window < 4096 else None
    for n in range(eps.start, eps.start + window + 1):
        acc = zero
        for (r, cs), rn in zip(eps.terms, powers):
            poly = zero
            for k, c in enumerate(cs):
                b = comb(n, k)
                if b:
                    poly = poly + c * b
            acc = acc + rn * poly
        actual = terms[n] if terms is not None else term_at(eps.lrs, n)
        if not acc == S.fraction(actual):
            raise ArithmeticError(f"exponential-polynomial form disagrees with the sequence at n={n}")
        powers = [rn * r for (r, _), rn in zip(eps.terms, powers)]


# -- simple sums --------------------------------------------------------------------------


@dataclass
class SimpleSum:
    """alpha_{P n + q} = sum_i bases_i^n coeffs_i whenever P n + q >= start."""

    q: int
    period: int
    bases: list[Fraction]
    coefficients: list[Fraction]
    start: int
    S: MultiplicativeSet | None = None

    def value(self, n: int) -> Fraction:
        acc = self.S.fraction(0)
        for b, c in zip(self.bases, self.coefficients):
            acc = acc + c * b**n
        return acc


def split_modulus(p: int, e: int, u: int) -> int:
    """A power P of p with binom(n + P, j) = binom(n, j) mod p^e for all j <= u."""
    return p ** (e + (floor_log(u, p) if u >= 1 else 0))


def to_simple_sums(eps: ExpPolySum, p: int, e: int) -> list[SimpleSum]:
    P = split_modulus(p, e, eps.degree)
    S = eps.S
    zero = S.fraction(0)
    bases = [r**P for r, _ in eps.terms]
    out = []
    rq = [S.fraction(1) for _ in eps.terms]
    for q in range(P):
        coeffs = []
        for (r, cs), rqi in zip(eps.terms, rq):
            poly = zero
            for k, c in enumerate(cs):
                b = comb(q, k)
                if b:
                    poly = poly + c * b
            coeffs.append(rqi * poly)
        out.append(SimpleSum(q, P, list(bases), coeffs, eps.start, S))
        rq = [x * r for x, (r, _) in zip(rq, eps.terms)]
    return out
