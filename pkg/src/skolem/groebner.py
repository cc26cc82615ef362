"""Strong Groebner bases over the chain ring Z/p^e.

Coefficient ideals of Z/p^e are totally ordered (p^0 > p^1 > ... > p^e = 0),
so every leading coefficient is normalised to a power of ``p`` and Buchberger's
algorithm only needs S-polynomials plus the annihilator polynomials
``p^(e-v) * g`` for basis elements with leading coefficient ``p^v``, v > 0.

Normal forms are canonical: a term ``c*m`` is left with ``0 <= c < p^k(m)``
where ``p^k(m)`` generates the ideal of leading coefficients at ``m``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ResourceExhausted
from .poly import Monomial, MultiPoly, degrevlex_key, elimination_key

DEFAULT_STEP_BUDGET = 500_000


def valuation(c: int, p: int, e: int) -> int:
    """p-adic valuation of ``c`` in Z/p^e (``e`` for zero)."""
    c %= p**e
    if c == 0:
        return e
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


class _Max:
    """Heap entry ordering by descending monomial."""

    __slots__ = ("k", "m")

    def __init__(self, k, m):
        self.k = k
        self.m = m

    def __lt__(self, other):
        return self.k > other.k


@dataclass
class _Elem:
    poly: MultiPoly
    cof: MultiPoly | None
    lm: Monomial
    v: int  # valuation of the leading coefficient (which equals p^v)


@dataclass
class GroebnerEngine:
    p: int
    e: int
    key: Callable[[Monomial], tuple] = degrevlex_key
    budget: int = DEFAULT_STEP_BUDGET
    steps: int = field(default=0, init=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def _tick(self, n=1):
        self.steps += n
        if self.steps > self.budget:
            raise ResourceExhausted(f"Groebner step budget {self.budget} exceeded")

    def normalize(self, f: MultiPoly, cof: MultiPoly | None):
        """Scale so the leading coefficient is a power of p."""
        if f.is_zero():
            return None
        lm, lc = f.leading(self.key)
        v = valuation(lc, self.p, self.e)
        unit = lc // self.p**v
        inv = pow(unit, -1, self.q) if self.q > 1 else 0
        if inv != 1:
            f = f.scale(inv)
            cof = cof.scale(inv) if cof is not None else None
        return _Elem(f, cof, lm, v)

    def reduce(self, f: MultiPoly, cof: MultiPoly | None, basis: Sequence[_Elem]):
        """Full canonical reduction of ``f`` (and its tracked cofactor)."""
        if f.is_zero() or not basis:
            return f, cof
        p, key = self.p, self.key
        work = dict(f.terms)
        heap = [_Max(key(m), m) for m in work]
        heapq.heapify(heap)
        rem: dict[Monomial, int] = {}
        mod = f.modulus
        variables = f.variables
        while heap:
            m = heapq.heappop(heap).m
            c = work.pop(m, 0)
            if not c:
                continue
            best = None
            for g in basis:
                if _divides(g.lm, m) and (best is None or g.v < best.v):
                    best = g
                    if g.v == 0:
                        break
            if best is None:
                rem[m] = c
                continue
            self._tick()
            pk = p**best.v
            quo, r = divmod(c, pk)
            if quo:
                shift = tuple(a - b for a, b in zip(m, best.lm))
                for gm, gc in best.poly.terms.items():
                    if gm == best.lm:
                        continue
                    tm = tuple(a + b for a, b in zip(gm, shift))
                    old = work.get(tm)
                    nv = ((old or 0) - quo * gc) % mod
                    if nv:
                        if old is None:
                            heapq.heappush(heap, _Max(key(tm), tm))
                        work[tm] = nv
                    elif old is not None:
                        work[tm] = 0
                if cof is not None:
                    cof = cof - best.cof.scale(quo, shift)
            if r:
                rem[m] = r
        return MultiPoly._raw(variables, mod, rem), cof

    def s_poly(self, f: _Elem, g: _Elem):
        lcm = tuple(max(a, b) for a, b in zip(f.lm, g.lm))
        c = max(f.v, g.v)
        sf = tuple(a - b for a, b in zip(lcm, f.lm))
        sg = tuple(a - b for a, b in zip(lcm, g.lm))
        poly = f.poly.scale(self.p ** (c - f.v), sf) - g.poly.scale(self.p ** (c - g.v), sg)
        cof = None
        if f.cof is not None:
            cof = f.cof.scale(self.p ** (c - f.v), sf) - g.cof.scale(self.p ** (c - g.v), sg)
        return poly, cof

    def basis(self, gens: Sequence[MultiPoly], cofs: Sequence[MultiPoly] | None = None) -> list[_Elem]:
        G: list[_Elem] = []
        queue: list[tuple[MultiPoly, MultiPoly | None]] = []
        for i, g in enumerate(gens):
            queue.append((g, cofs[i] if cofs is not None else None))

        def add(el: _Elem):
            G.append(el)
            if el.v > 0:
                queue.append(
                    (el.poly.scale(self.p ** (self.e - el.v)), el.cof.scale(self.p ** (self.e - el.v)) if el.cof is not None else None)
                )
            for other in G[:-1]:
                pairs.append((other, el))

        pairs: list[tuple[_Elem, _Elem]] = []
        while queue or pairs:
            if queue:
                f, c = queue.pop(0)
            else:
                a, b = pairs.pop(0)
                f, c = self.s_poly(a, b)
            self._tick()
            f, c = self.reduce(f, c, G)
            el = self.normalize(f, c)
            if el is not None:
                add(el)
        return self.interreduce(G)

    def interreduce(self, G: list[_Elem]) -> list[_Elem]:
        # drop elements whose leading term is a (coefficient-aware) multiple of another
        keep: list[_Elem] = []
        for i, g in enumerate(G):
            redundant = False
            for j, h in enumerate(G):
                if i == j:
                    continue
                if _divides(h.lm, g.lm) and h.v <= g.v:
                    if h.lm != g.lm or h.v < g.v or j < i:
                        redundant = True
                        break
            if not redundant:
                keep.append(g)
        out = []
        for idx, g in enumerate(keep):
            others = [h for h in keep if h is not g]
            lead = MultiPoly._raw(g.poly.variables, g.poly.modulus, {g.lm: g.poly.terms[g.lm]})
            tail = g.poly - lead
            cof_tail = g.cof
            tail, cof_tail = self.reduce(tail, cof_tail, others) if tail else (tail, cof_tail)
            out.append(_Elem(lead + tail, cof_tail, g.lm, g.v))
        out.sort(key=lambda el: (self.key(el.lm), -el.v))
        return out


class Ideal:
    """An ideal of Z/p^e[vars] with a write-once cached strong Groebner basis."""

    def __init__(self, generators: Sequence[MultiPoly], p: int, e: int, variables: Sequence[str], budget: int = DEFAULT_STEP_BUDGET):
        self.variables = tuple(variables)
        self.p = p
        self.e = e
        self.modulus = p**e
        for g in generators:
            if g.variables != self.variables or g.modulus != self.modulus:
                raise ValueError("generator does not live in the ambient polynomial ring")
        self.generators = tuple(g for g in generators if not g.is_zero())
        self.budget = budget
        self._basis: tuple[_Elem, ...] | None = None

    def _engine(self) -> GroebnerEngine:
        return GroebnerEngine(self.p, self.e, budget=self.budget)

    @property
    def elements(self) -> tuple[_Elem, ...]:
        if self._basis is None:
            basis = tuple(self._engine().basis(self.generators))
            if self._basis is None:
                self._basis = basis
        return self._basis

    @property
    def groebner(self) -> list[MultiPoly]:
        return [el.poly for el in self.elements]

    def normal_form(self, f: MultiPoly) -> MultiPoly:
        if f.variables != self.variables or f.modulus != self.modulus:
            raise ValueError("polynomial and ideal live in different rings")
        if not self.generators:
            return f
        return self._engine().reduce(f, None, self.elements)[0]

    def contains(self, f: MultiPoly) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.elements

    def leading_data(self) -> list[tuple[Monomial, int]]:
        """Leading monomials with leading-coefficient valuations."""
        return [(el.lm, el.v) for el in self.elements]


def groebner_basis(ideal: Ideal) -> list[MultiPoly]:
    return ideal.groebner


def normal_form(f: MultiPoly, ideal: Ideal) -> MultiPoly:
    return ideal.normal_form(f)


def eliminate(gens: Sequence[MultiPoly], k: int, p: int, e: int, cofs=None, budget=DEFAULT_STEP_BUDGET):
    """Strong basis of ``<gens>`` under the block order eliminating the first ``k``
    variables; returns the basis elements free of those variables (with cofactors)."""
    eng = GroebnerEngine(p, e, key=elimination_key(k), budget=budget)
    out = []
    for el in eng.basis(gens, cofs):
        if all(not any(m[:k]) for m in el.poly.terms):
            out.append((el.poly, el.cof))
    return out

