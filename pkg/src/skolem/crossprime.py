"""Intersections of p-normal sets for multiplicatively independent bases.

Two nested parts over different bases meet in the solutions of a two-power
equation  sum p^(n_i) a_i + sum q^(n'_j) b_j = d,  which is solved here by
meet-in-the-middle enumeration.  The enumeration is complete (PROVEN) when all
nonzero coefficients share a sign, or there is at most one unknown; otherwise
it is complete only for exponents up to a bound B.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import reduce
from typing import Iterable, Sequence, Union

from .automata import DigitDFA, finite_set_dfa
from .numtheory import crt_pair, floor_log, lcm, multiplicatively_independent
from .pnormal import (
    ElementaryPNested,
    PNormalN,
    PNormalZ,
    ProgressionZ,
    intersect_same_p,
)

PROVEN = "PROVEN"
CERTIFIED = "CERTIFIED"
DEFAULT_EXPONENT_BOUND = 128
DFA_ENUMERATION_BOUND = 100_000


def _status(proven: bool, bound: int | None) -> str:
    return PROVEN if proven else f"CERTIFIED_UP_TO({bound})"


@dataclass
class Certification:
    proven: bool = True
    bound: int | None = None
    notes: list[str] = field(default_factory=list)

    def weaken(self, bound: int, note: str) -> None:
        self.proven = False
        self.bound = bound if self.bound is None else min(self.bound, bound)
        if note not in self.notes:
            self.notes.append(note)

    def merge(self, other: "Certification") -> None:
        if not other.proven:
            for n in other.notes:
                self.weaken(other.bound, n)

    def __str__(self):
        return _status(self.proven, self.bound)


# -- two-power equations ---------------------------------------------------------------------


@dataclass(frozen=True)
class TwoPowerEquation:
    p: int
    q: int
    a: tuple[Q, ...]
    b: tuple[Q, ...]
    d: Q

    def __init__(self, p: int, q: int, a: Sequence, b: Sequence, d, check: bool = True):
        if check and not multiplicatively_independent(p, q):
            raise ValueError(f"{p} and {q} are not multiplicatively independent")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", tuple(Q(x) for x in a))
        object.__setattr__(self, "b", tuple(Q(x) for x in b))
        object.__setattr__(self, "d", Q(d))

    def cleared(self) -> tuple[list[int], list[int], int]:
        L = reduce(lcm, (x.denominator for x in self.a + self.b + (self.d,)), 1)
        return [int(x * L) for x in self.a], [int(x * L) for x in self.b], int(self.d * L)

    def sign_uniform(self) -> bool:
        signs = {x > 0 for x in self.a + self.b if x != 0}
        return len(signs) <= 1

    def holds(self, ns: Sequence[int], ms: Sequence[int]) -> bool:
        lhs = sum(self.p**n * a for n, a in zip(ns, self.a)) + sum(self.q**m * b for m, b in zip(ms, self.b))
        return lhs == self.d


@dataclass(frozen=True)
class Constraint:
    """n_s = n_t + c (``t`` set) or n_s = c (``t`` None); ``side`` is 'p' or 'q'."""

    side: str
    s: int
    t: int | None
    c: int

    def __str__(self):
        v = "n" if self.side == "p" else "n'"
        rhs = f"{v}{self.t + 1} + {self.c}" if self.t is not None else str(self.c)
        return f"{v}{self.s + 1} = {rhs}"


@dataclass(frozen=True)
class SolutionForm:
    conjunctions: tuple[tuple[Constraint, ...], ...]

    def __str__(self):
        return " ∪ ".join("(" + " ∧ ".join(map(str, c)) + ")" for c in self.conjunctions) or "∅"


@dataclass
class TwoPowerSolution:
    solutions: list[tuple[tuple[int, ...], tuple[int, ...]]]
    form: SolutionForm | None
    proven: bool
    bound: int

    @property
    def status(self) -> str:
        return _status(self.proven, self.bound)


def partial_sum_bound(eq: TwoPowerEquation) -> Q | None:
    """C with |sum p^(n_i) a_i| <= C on every solution, in the proven cases."""
    if not eq.b or not eq.a or eq.sign_uniform():
        return abs(eq.d)
    return None


def _side_sums(base: int, coeffs: Sequence[int], caps: Sequence[int]) -> dict[int, list[tuple[int, ...]]]:
    out: dict[int, list[tuple[int, ...]]] = {}
    powers = [[base**n * c for n in range(cap + 1)] for c, cap in zip(coeffs, caps)]
    for ns in itertools.product(*(range(cap + 1) for cap in caps)):
        v = sum(powers[i][n] for i, n in enumerate(ns))
        out.setdefault(v, []).append(ns)
    return out


def solve_two_power_equation(eq: TwoPowerEquation, bound: int = DEFAULT_EXPONENT_BOUND) -> TwoPowerSolution:
    """All solutions with every exponent <= bound (all solutions when proven)."""
    A, Bc, D = eq.cleared()
    if any(x == 0 for x in A + Bc):
        raise ValueError("zero coefficients leave an exponent unconstrained; drop them first")
    n_vars = len(A) + len(Bc)
    proven = n_vars <= 1 or eq.sign_uniform()
    if proven and n_vars >= 1:
        # every term has the sign of d and is at most |d| in size
        caps_a = [floor_log(abs(D) // abs(a), eq.p) if abs(D) >= abs(a) else -1 for a in A]
        caps_b = [floor_log(abs(D) // abs(b), eq.q) if abs(D) >= abs(b) else -1 for b in Bc]
        if n_vars == 1:
            caps_a = [c if c >= 0 else 0 for c in caps_a]
            caps_b = [c if c >= 0 else 0 for c in caps_b]
    else:
        caps_a = [bound] * len(A)
        caps_b = [bound] * len(Bc)
    sols = []
    if min(caps_a + caps_b, default=0) >= 0:
        left = _side_sums(eq.p, A, caps_a)
        right = _side_sums(eq.q, Bc, caps_b)
        for v, ms_list in right.items():
            for ns in left.get(D - v, ()):
                for ms in ms_list:
                    sols.append((ns, ms))
    sols.sort()
    form = None
    if proven:
        conj = []
        for ns, ms in sols:
            conj.append(
                tuple(Constraint("p", i, None, n) for i, n in enumerate(ns))
                + tuple(Constraint("q", j, None, m) for j, m in enumerate(ms))
            )
        form = SolutionForm(tuple(conj))
    return TwoPowerSolution(sols, form, proven, bound)


# -- mixed unions -----------------------------------------------------------------------------


@dataclass
class Component:
    """A p-normal subset of N together with how strongly it is established."""

    p: int
    set: PNormalN
    cert: Certification = field(default_factory=Certification)

    def contains(self, z: int) -> bool:
        return self.set.contains(z)


@dataclass
class MixedUnion:
    components: list[Component]
    cert: Certification = field(default_factory=Certification)

    def contains(self, z: int) -> bool:
        return any(c.contains(z) for c in self.components)

    def is_empty(self) -> bool:
        return all(c.set.is_empty() for c in self.components)

    def min_member(self) -> int | None:
        vals = [m for m in (c.set.min_member() for c in self.components) if m is not None]
        return min(vals) if vals else None

    def enumerate_up_to(self, bound: int) -> list[int]:
        out = set()
        for c in self.components:
            out.update(c.set.enumerate_up_to(bound))
        return sorted(out)

    @property
    def status(self) -> str:
        return str(self.cert)


def _finite_component(p: int, values: Iterable[int], cert: Certification) -> Component:
    vals = sorted({v for v in values if v >= 0})
    n = vals[-1] + 1 if vals else 0
    return Component(p, PNormalN(p, n, frozenset(vals), PNormalZ(p, [])), cert)


def _clean(part: ElementaryPNested) -> ElementaryPNested:
    """Drop vanishing coefficients (they leave the set unchanged)."""
    if all(a != 0 for a in part.coeffs):
        return part
    return ElementaryPNested(part.p, part.ell, part.a0, [a for a in part.coeffs if a != 0], check=False)


def _nested_values(part: ElementaryPNested, ns: Sequence[int]) -> Q:
    return part.a0 + sum(Q(part.p) ** (part.ell * n) * a for n, a in zip(ns, part.coeffs))


def _case1(x: ElementaryPNested, y: ElementaryPNested, bound: int) -> tuple[set[int], Certification]:
    """Nested over p1 meets nested over p2: a two-power equation in p1^l1 and p2^l2."""
    x, y = _clean(x), _clean(y)
    cert = Certification()
    if not x.coeffs:
        return ({int(x.a0)} if x.a0.denominator == 1 and y.contains(int(x.a0)) else set()), cert
    if not y.coeffs:
        return ({int(y.a0)} if y.a0.denominator == 1 and x.contains(int(y.a0)) else set()), cert
    P, Qb = x.p**x.ell, y.p**y.ell
    eq = TwoPowerEquation(P, Qb, list(x.coeffs), [-b for b in y.coeffs], y.a0 - x.a0)
    sol = solve_two_power_equation(eq, bound)
    if not sol.proven:
        cert.weaken(bound, f"two-power equation over {x.p}, {y.p} searched with exponents <= {bound}")
    vals = set()
    for ns, _ in sol.solutions:
        v = x.a0 + sum(Q(P) ** n * a for n, a in zip(ns, x.coeffs))
        if v.denominator == 1:
            vals.add(int(v))
    return vals, cert


def _dfa_vs_nested(dfa: DigitDFA, y: ElementaryPNested, bound: int) -> tuple[set[int], Certification]:
    """Members of a nested set (exponents <= bound) accepted by an automaton over another base."""
    y = _clean(y)
    cert = Certification()
    vals = set()
    if not y.coeffs:
        v = y.a0
        return ({int(v)} if v.denominator == 1 and v >= 0 and dfa.accepts(int(v)) else set()), cert
    cert.weaken(bound, f"base-{dfa.base} automaton against base-{y.p} nested set, exponents <= {bound}")
    step = y.p**y.ell
    for ns in itertools.product(range(bound + 1), repeat=y.arity):
        v = y.a0 + sum(Q(step) ** n * a for n, a in zip(ns, y.coeffs))
        if v.denominator == 1 and v >= 0 and dfa.accepts(int(v)):
            vals.add(int(v))
    return vals, cert


def _dfa_vs_dfa(a: DigitDFA, b: DigitDFA, limit: int) -> tuple[set[int], Certification]:
    cert = Certification()
    cert.weaken(limit, f"automata over bases {a.base}, {b.base} compared up to {limit}")
    small, other = (a, b) if a.n_states <= b.n_states else (b, a)
    return {z for z in small.enumerate_up_to(limit) if other.accepts(z)}, cert


def _tail_parts(s: PNormalN):
    return list(s.tail.parts) if isinstance(s.tail, PNormalZ) else [s.tail]


def intersect_two(c1: Component, c2: Component, bound: int = DEFAULT_EXPONENT_BOUND) -> MixedUnion:
    """(S1 ∩ S2) as a union of a p1-normal and a p2-normal set (plus a finite part)."""
    p1, p2 = c1.p, c2.p
    if p1 == p2:
        return MixedUnion([Component(p1, intersect_same_p(c1.set, c2.set), _joined(c1.cert, c2.cert))], _joined(c1.cert, c2.cert))
    if not multiplicatively_independent(p1, p2):
        raise ValueError(f"bases {p1} and {p2} are not multiplicatively independent")
    cert = _joined(c1.cert, c2.cert)
    s1, s2 = c1.set, c2.set
    n = max(s1.threshold, s2.threshold)
    finite = {z for z in range(n) if s1.contains(z) and s2.contains(z)}
    t1_parts: list = []  # p1 automata
    t2_parts: list = []  # p2 automata
    progressions: list[ProgressionZ] = []
    for x in _tail_parts(s1):
        for y in _tail_parts(s2):
            if isinstance(x, ProgressionZ) and isinstance(y, ProgressionZ):
                # case 4: coset CRT
                r = crt_pair(x.offset, x.modulus, y.offset, y.modulus)
                if r is not None:
                    progressions.append(ProgressionZ(r[1], r[0]))
            elif isinstance(x, ElementaryPNested) and isinstance(y, ElementaryPNested):
                vals, c = _case1(x, y, bound)
                cert.merge(c)
                finite.update(v for v in vals if v >= n)
            elif isinstance(y, ProgressionZ):
                # case 2: p1 part against a coset, same-base product
                dx = x.dfa if isinstance(x, ElementaryPNested) else x
                t1_parts.append(dx.intersect(y.dfa_for(p1)))
            elif isinstance(x, ProgressionZ):
                # case 3: coset against a p2 part
                dy = y.dfa if isinstance(y, ElementaryPNested) else y
                t2_parts.append(dy.intersect(x.dfa_for(p2)))
            elif isinstance(x, DigitDFA) and isinstance(y, ElementaryPNested):
                vals, c = _dfa_vs_nested(x, y, bound)
                cert.merge(c)
                finite.update(v for v in vals if v >= n)
            elif isinstance(y, DigitDFA) and isinstance(x, ElementaryPNested):
                vals, c = _dfa_vs_nested(y, x, bound)
                cert.merge(c)
                finite.update(v for v in vals if v >= n)
            else:
                vals, c = _dfa_vs_dfa(x, y, DFA_ENUMERATION_BOUND)
                cert.merge(c)
                finite.update(v for v in vals if v >= n)
    comps = []
    fin_lo = {z for z in finite if z < n}
    fin_hi = {z for z in finite if z >= n}
    base_tail = PNormalZ(p1, progressions) if progressions else PNormalZ(p1, [])
    comps.append(Component(p1, PNormalN(p1, n, frozenset(fin_lo), base_tail), cert))
    if fin_hi:
        comps.append(_finite_component(p1, fin_hi, cert))
    for t in t1_parts:
        comps.append(Component(p1, PNormalN(p1, n, frozenset(), t), cert))
    for t in t2_parts:
        comps.append(Component(p2, PNormalN(p2, n, frozenset(), t), cert))
    comps = [c for c in comps if not c.set.is_empty()]
    return MixedUnion(comps, cert)


def _joined(a: Certification, b: Certification) -> Certification:
    out = Certification()
    out.merge(a)
    out.merge(b)
    return out


def intersect_multi(components: Sequence[Component], bound: int = DEFAULT_EXPONENT_BOUND) -> MixedUnion:
    """S_1 ∩ ... ∩ S_k, folding pairwise intersections left to right over unions."""
    if not components:
        raise ValueError("nothing to intersect")
    acc = MixedUnion([components[0]], _joined(components[0].cert, Certification()))
    for nxt in components[1:]:
        pieces: list[Component] = []
        cert = _joined(acc.cert, nxt.cert)
        for c in acc.components:
            u = intersect_two(c, nxt, bound)
            cert.merge(u.cert)
            pieces.extend(u.components)
        acc = MixedUnion(pieces, cert)
    return acc


def component_from_part(p: int, part, cert: Certification | None = None) -> Component:
    """Convenience: a single part read as a subset of N."""
    return Component(p, PNormalN(p, 0, frozenset(), PNormalZ(p, [part])), cert or Certification())
