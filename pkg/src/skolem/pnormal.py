"""p-normal subsets of Z and N.

An elementary p-nested set is ``{a0 + sum_i p^(l k_i) a_i : k_i >= 0}`` with
rational ``a_i``; a p-normal subset of Z is a finite union of such sets and
cosets ``aZ + b``.  Symbolic parts compile to digit automata, which carry all
decidable operations: membership, intersection, emptiness, enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, reduce
from typing import Iterable, Sequence, Union

from . import automata
from .automata import DigitDFA
from .numtheory import lcm, power_residues


def _q(x) -> Q:
    return x if isinstance(x, Q) else Q(x)


def _qjson(x: Q):
    return [x.numerator, x.denominator]


# -- parts ------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryPNested:
    p: int
    ell: int
    a0: Q
    coeffs: tuple[Q, ...]

    def __init__(self, p: int, ell: int, a0, coeffs: Sequence = (), check: bool = True):
        if ell < 1:
            raise ValueError("exponent step must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "a0", _q(a0))
        object.__setattr__(self, "coeffs", tuple(_q(a) for a in coeffs))
        if check and not self.is_integral():
            raise ValueError(f"{self} has non-integer members")

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    @property
    def denominator(self) -> int:
        return reduce(lcm, (x.denominator for x in (self.a0,) + self.coeffs), 1)

    def cleared(self) -> tuple[int, list[int], int]:
        M = self.denominator
        return int(self.a0 * M), [int(a * M) for a in self.coeffs], M

    def is_integral(self) -> bool:
        """All instantiations are integers: check every residue pattern of p^(l k) mod M."""
        A0, A, M = self.cleared()
        if M == 1:
            return True
        vals, _ = power_residues(self.p**self.ell, M)
        res = sorted(set(vals))
        for combo in itertools.product(res, repeat=len(A)):
            if (A0 + sum(c * a for c, a in zip(combo, A))) % M:
                return False
        return True

    def negated(self) -> "ElementaryPNested":
        return ElementaryPNested(self.p, self.ell, -self.a0, [-a for a in self.coeffs], check=False)

    def affine(self, scale: int, shift: int) -> "ElementaryPNested":
        """{scale * x + shift : x in self}."""
        return ElementaryPNested(
            self.p, self.ell, self.a0 * scale + shift, [a * scale for a in self.coeffs], check=False
        )

    @cached_property
    def dfa(self) -> DigitDFA:
        A0, A, M = self.cleared()
        return automata.nested_dfa(self.p, self.ell, A0, A, M)

    @cached_property
    def negative_dfa(self) -> DigitDFA:
        A0, A, M = self.cleared()
        return automata.nested_dfa(self.p, self.ell, -A0, [-a for a in A], M)

    def contains(self, z: int) -> bool:
        return self.dfa.accepts(z) if z >= 0 else self.negative_dfa.accepts(-z)

    __contains__ = contains

    def brute_members(self, lo: int, hi: int) -> set[int]:
        """Definitional members in [lo, hi] by bounded exponent search."""
        A0, A, M = self.cleared()
        step = self.p**self.ell
        span = M * (max(abs(lo), abs(hi)) + 1) + abs(A0) + sum(abs(a) for a in A)
        powers = [1]
        while powers[-1] <= span * step:
            powers.append(powers[-1] * step)
        out = set()
        for ks in itertools.product(range(len(powers)), repeat=len(A)):
            num = A0 + sum(powers[k] * a for k, a in zip(ks, A))
            if num % M == 0 and lo <= num // M <= hi:
                out.add(num // M)
        return out

    def __str__(self):
        terms = [str(self.a0)] if self.a0 or not self.coeffs else []
        names = "abcdefgh"
        for i, a in enumerate(self.coeffs):
            power = f"{self.p}^{names[i]}" if self.ell == 1 else f"{self.p}^({self.ell}{names[i]})"
            terms.append(power if a == 1 else f"{a}*{power}")
        return "{" + " + ".join(terms) + "}"

    def to_json(self) -> dict:
        return {
            "kind": "nested",
            "p": self.p,
            "ell": self.ell,
            "a0": _qjson(self.a0),
            "coeffs": [_qjson(a) for a in self.coeffs],
        }


@dataclass(frozen=True)
class ProgressionZ:
    modulus: int
    offset: int

    def __init__(self, modulus: int, offset: int):
        if modulus < 1:
            raise ValueError("progression modulus must be >= 1")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "offset", offset % modulus)

    def contains(self, z: int) -> bool:
        return (z - self.offset) % self.modulus == 0

    __contains__ = contains

    def dfa_for(self, p: int) -> DigitDFA:
        return automata.progression_dfa(p, self.modulus, self.offset)

    def negative_dfa_for(self, p: int) -> DigitDFA:
        return automata.progression_dfa(p, self.modulus, -self.offset)

    def affine(self, scale: int, shift: int) -> "ProgressionZ":
        return ProgressionZ(self.modulus * scale, self.offset * scale + shift)

    def __str__(self):
        if self.modulus == 1:
            return "Z"
        return f"{self.modulus}Z" + (f"+{self.offset}" if self.offset else "")

    def to_json(self) -> dict:
        return {"kind": "progression", "modulus": self.modulus, "offset": self.offset}


Part = Union[ElementaryPNested, ProgressionZ]


def part_from_json(data: dict) -> Part:
    if data["kind"] == "progression":
        return ProgressionZ(data["modulus"], data["offset"])
    return ElementaryPNested(
        data["p"], data["ell"], Q(*data["a0"]), [Q(*c) for c in data["coeffs"]]
    )


@dataclass(frozen=True)
class PNormalZ:
    p: int
    parts: tuple[Part, ...] = ()

    def __init__(self, p: int, parts: Iterable[Part] = ()):
        parts = tuple(parts)
        for x in parts:
            if isinstance(x, ElementaryPNested) and x.p != p:
                raise ValueError("all nested parts must share the base p")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "parts", parts)

    def contains(self, z: int) -> bool:
        return any(x.contains(z) for x in self.parts)

    __contains__ = contains

    def only_progressions(self) -> bool:
        return all(isinstance(x, ProgressionZ) for x in self.parts)

    @cached_property
    def dfa(self) -> DigitDFA:
        """Automaton of the nonnegative members."""
        out = automata.empty_dfa(self.p)
        for x in self.parts:
            out = out.union(x.dfa if isinstance(x, ElementaryPNested) else x.dfa_for(self.p))
        return out

    def affine(self, scale: int, shift: int) -> "PNormalZ":
        return PNormalZ(self.p, [x.affine(scale, shift) for x in self.parts])

    def __str__(self):
        return " ∪ ".join(map(str, self.parts)) if self.parts else "∅"

    def to_json(self) -> dict:
        return {"p": self.p, "parts": [x.to_json() for x in self.parts]}


def periodic_set(p: int, modulus: int, residues: Iterable[int]) -> PNormalZ:
    """Union of cosets modulo ``modulus``, reduced to the smallest period."""
    modulus, residues = minimal_period(modulus, residues)
    return PNormalZ(p, [ProgressionZ(modulus, r) for r in residues])


def minimal_period(modulus: int, residues: Iterable[int]) -> tuple[int, list[int]]:
    rs = {r % modulus for r in residues}
    if not rs:
        return 1, []
    best = modulus
    for d in sorted(_divisors(modulus)):
        if d >= best:
            break
        if all((r + d) % modulus in rs for r in rs):
            best = d
            break
    return best, sorted({r % best for r in rs})


def _divisors(n: int) -> list[int]:
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            out.append(n // d)
    return sorted(set(out))


def progression_residues(parts: Sequence[ProgressionZ], modulus: int) -> set[int]:
    out = set()
    for x in parts:
        if modulus % x.modulus:
            raise ValueError("modulus is not a multiple of the part modulus")
        out.update(range(x.offset, modulus, x.modulus))
    return out


# -- subsets of N ---------------------------------------------------------------------


@dataclass
class PNormalN:
    """(tail ∩ [threshold, oo)) ∪ finite, with finite ⊆ [0, threshold)."""

    p: int
    threshold: int
    finite: frozenset[int]
    tail: PNormalZ | DigitDFA

    def __post_init__(self):
        self.finite = frozenset(self.finite)
        if any(z < 0 or z >= self.threshold for z in self.finite):
            raise ValueError("finite part must lie below the threshold")

    def contains(self, z: int) -> bool:
        if z < 0:
            return False
        if z < self.threshold:
            return z in self.finite
        return self.tail.contains(z) if isinstance(self.tail, PNormalZ) else self.tail.accepts(z)

    __contains__ = contains

    @cached_property
    def tail_dfa(self) -> DigitDFA:
        return self.tail.dfa if isinstance(self.tail, PNormalZ) else self.tail

    @cached_property
    def dfa(self) -> DigitDFA:
        """Automaton of the whole set."""
        tail = self.tail_dfa.intersect(automata.at_least_dfa(self.p, self.threshold))
        return tail.union(automata.finite_set_dfa(self.p, sorted(self.finite)))

    def is_empty(self) -> bool:
        if self.finite:
            return False
        if isinstance(self.tail, PNormalZ) and not self.tail.parts:
            return True
        return self.tail_dfa.min_member(self.threshold) is None

    def min_member(self) -> int | None:
        if self.finite:
            return min(self.finite)
        if isinstance(self.tail, PNormalZ) and self.tail.only_progressions():
            cands = [
                self.threshold + (x.offset - self.threshold) % x.modulus for x in self.tail.parts
            ]
            return min(cands) if cands else None
        return self.tail_dfa.min_member(self.threshold)

    def enumerate_up_to(self, bound: int) -> list[int]:
        low = sorted(z for z in self.finite if z <= bound)
        if bound < self.threshold:
            return low
        if isinstance(self.tail, PNormalZ) and self.tail.only_progressions():
            high = sorted(
                {z for x in self.tail.parts for z in range(self.threshold + (x.offset - self.threshold) % x.modulus, bound + 1, x.modulus)}
            )
        else:
            high = [z for z in self.tail_dfa.enumerate_up_to(bound) if z >= self.threshold]
        return low + high

    def with_threshold(self, n: int) -> "PNormalN":
        """Same set, presented with a larger threshold."""
        if n <= self.threshold:
            return self
        extra = {z for z in range(self.threshold, n) if self.contains(z)}
        return PNormalN(self.p, n, self.finite | extra, self.tail)

    def describe(self) -> str:
        fin = "{" + ", ".join(map(str, sorted(self.finite))) + "}"
        tail = str(self.tail) if isinstance(self.tail, PNormalZ) else f"<DFA base {self.p}, {self.tail.n_states} states>"
        if self.threshold == 0:
            return tail
        return f"{fin} ∪ ({tail}) ∩ [{self.threshold}, ∞)"

    def to_json(self) -> dict:
        tail = self.tail.to_json() if isinstance(self.tail, PNormalZ) else {"dfa": self.tail.to_json()}
        return {"p": self.p, "threshold": self.threshold, "finite": sorted(self.finite), "tail": tail}

    @classmethod
    def from_json(cls, data: dict) -> "PNormalN":
        t = data["tail"]
        if "dfa" in t:
            tail = DigitDFA.from_json(t["dfa"])
        else:
            tail = PNormalZ(t["p"], [part_from_json(x) for x in t["parts"]])
        return cls(data["p"], data["threshold"], frozenset(data["finite"]), tail)


def empty_n(p: int) -> PNormalN:
    return PNormalN(p, 0, frozenset(), PNormalZ(p, []))


def full_n(p: int) -> PNormalN:
    return PNormalN(p, 0, frozenset(), PNormalZ(p, [ProgressionZ(1, 0)]))


# -- operations -----------------------------------------------------------------------------


def contains(s, z: int) -> bool:
    if isinstance(s, DigitDFA):
        return s.accepts(z)
    return s.contains(z)


def to_dfa(part: Part, p: int | None = None) -> DigitDFA:
    if isinstance(part, ElementaryPNested):
        return part.dfa
    if p is None:
        raise ValueError("a base is needed to compile a progression")
    return part.dfa_for(p)


def intersect_same_p(x, y):
    """Intersection of two sets over the same base.

    ``PNormalN`` operands keep threshold/finite bookkeeping (the larger
    threshold is used); progression-only tails stay symbolic, anything else
    becomes a product automaton.
    """
    if isinstance(x, DigitDFA) and isinstance(y, DigitDFA):
        return x.intersect(y)
    if isinstance(x, DigitDFA):
        x = PNormalN(x.base, 0, frozenset(), x)
    if isinstance(y, DigitDFA):
        y = PNormalN(y.base, 0, frozenset(), y)
    if x.p != y.p:
        raise ValueError("intersect_same_p needs a common base")
    n = max(x.threshold, y.threshold)
    finite = frozenset(z for z in range(n) if x.contains(z) and y.contains(z))
    tx, ty = x.tail, y.tail
    if _is_full(tx):
        tail = ty
    elif _is_full(ty):
        tail = tx
    elif isinstance(tx, PNormalZ) and isinstance(ty, PNormalZ) and tx.only_progressions() and ty.only_progressions():
        tail = intersect_progression_unions(x.p, tx, ty)
    else:
        tail = x.tail_dfa.intersect(y.tail_dfa)
    return PNormalN(x.p, n, finite, tail)


def _is_full(tail) -> bool:
    return isinstance(tail, PNormalZ) and any(isinstance(x, ProgressionZ) and x.modulus == 1 for x in tail.parts)


def intersect_progression_unions(p: int, a: PNormalZ, b: PNormalZ) -> PNormalZ:
    if not a.parts or not b.parts:
        return PNormalZ(p, [])
    ma = reduce(lcm, (x.modulus for x in a.parts), 1)
    mb = reduce(lcm, (x.modulus for x in b.parts), 1)
    L = lcm(ma, mb)
    ra = progression_residues(a.parts, ma)
    rb = progression_residues(b.parts, mb)
    common = [r for r in range(L) if r % ma in ra and r % mb in rb]
    return periodic_set(p, L, common)


def normalize_succinct_z(a: int, D: ElementaryPNested) -> PNormalZ:
    """aZ + D as an explicit union of cosets of aZ."""
    if a < 1:
        raise ValueError("subgroup index must be >= 1")
    A0, A, M = D.cleared()
    vals, _ = power_residues(D.p**D.ell, M * a)
    res = sorted(set(vals))
    out = set()
    for combo in itertools.product(res, repeat=len(A)):
        num = A0 + sum(c * x for c, x in zip(combo, A))
        # num = M z (mod M a) for the member z
        out.add((num // M) % a)
    return PNormalZ(D.p, [ProgressionZ(a, b) for b in sorted(out)])


def is_empty(s) -> bool:
    if isinstance(s, DigitDFA):
        return s.is_empty()
    if isinstance(s, PNormalZ):
        return not s.parts
    return s.is_empty()


def enumerate_up_to(s, bound: int) -> list[int]:
    if isinstance(s, DigitDFA):
        return s.enumerate_up_to(bound)
    if isinstance(s, PNormalZ):
        return s.dfa.enumerate_up_to(bound)
    return s.enumerate_up_to(bound)
