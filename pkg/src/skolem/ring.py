"""Finitely presented rings Z/p^e[x1..xN]/I and their elements.

Element equality always goes through the canonical Groebner normal form.  For
finite quotients the ring also exposes its additive basis, the residue ring
R/pR (an F_p-algebra) and its primitive idempotents, which drive the exact
unit / zero-divisor / locality tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg_fp
from .errors import InvalidProblem, ResourceExhausted
from .groebner import DEFAULT_STEP_BUDGET, Ideal, eliminate, valuation
from .numtheory import factorize, is_prime, prime_power
from .poly import Monomial, MultiPoly, parse_poly

FINITE_HINT_LIMIT = 65536


@dataclass(frozen=True)
class Modulus:
    value: int
    prime: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 1 or not is_prime(self.prime) or self.prime**self.exponent != self.value:
            raise InvalidProblem(f"{self.value} is not a prime power p^e with the stated p, e")

    @classmethod
    def of(cls, value: int) -> "Modulus":
        pe = prime_power(value)
        if pe is None:
            raise InvalidProblem(
                f"modulus {value} is not a prime power; split the characteristic by CRT first"
            )
        return cls(value, *pe)


class QuotientRing:
    def __init__(
        self,
        modulus: int | Modulus,
        variables: Sequence[str] = (),
        generators: Iterable[MultiPoly | str] = (),
        budget: int = DEFAULT_STEP_BUDGET,
    ):
        self.modulus = modulus if isinstance(modulus, Modulus) else Modulus.of(int(modulus))
        self.p = self.modulus.prime
        self.e = self.modulus.exponent
        self.q = self.modulus.value
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise InvalidProblem("duplicate variable names")
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = parse_poly(g, self.variables, self.q)
            elif g.modulus != self.q or g.variables != self.variables:
                g = MultiPoly(self.variables, self.q, g.extend_variables(self.variables).terms if g.variables != self.variables else g.terms)
            gens.append(g)
        self.ideal = Ideal(gens, self.p, self.e, self.variables, budget=budget)
        self.budget = budget

    # -- element construction ---------------------------------------------
    def __call__(self, x) -> "RingElem":
        if isinstance(x, RingElem):
            if x.ring is self:
                return x
            return self(x.poly)
        if isinstance(x, int):
            poly = MultiPoly.constant(self.variables, self.q, x)
        elif isinstance(x, str):
            poly = parse_poly(x, self.variables, self.q)
        elif isinstance(x, MultiPoly):
            if x.variables != self.variables:
                x = x.extend_variables(self.variables)
            poly = x if x.modulus == self.q else x.with_modulus(self.q)
        else:
            raise TypeError(f"cannot coerce {type(x).__name__} into {self}")
        return RingElem(self, self.ideal.normal_form(poly))

    @cached_property
    def zero(self) -> "RingElem":
        return self(0)

    @cached_property
    def one(self) -> "RingElem":
        return self(1)

    def gen(self, name: str) -> "RingElem":
        return self(MultiPoly.variable(self.variables, self.q, name))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.ideal.generators)
        vs = ",".join(self.variables)
        return f"Z/{self.q}[{vs}]/<{gens}>" if vs else f"Z/{self.q}" + (f"/<{gens}>" if gens else "")

    # -- derived rings ---------------------------------------------------------
    def extend(self, new_variables: Sequence[str], new_generators: Iterable[MultiPoly | str]) -> "QuotientRing":
        """Adjoin variables (appended) with extra relations."""
        vs = self.variables + tuple(new_variables)
        gens = [g.extend_variables(vs) for g in self.ideal.generators]
        for g in new_generators:
            gens.append(parse_poly(g, vs, self.q) if isinstance(g, str) else g.extend_variables(vs))
        return QuotientRing(self.modulus, vs, gens, budget=self.budget)

    def quotient(self, extra: Iterable["RingElem | MultiPoly"]) -> "QuotientRing":
        """The ring R/<extra>; elements of R map by the identity on polynomials."""
        gens = list(self.ideal.generators)
        for x in extra:
            gens.append(x.poly if isinstance(x, RingElem) else x)
        return QuotientRing(self.modulus, self.variables, gens, budget=self.budget)

    @cached_property
    def residue_ring(self) -> "QuotientRing":
        """R/pR as a quotient over F_p."""
        gens = [g.with_modulus(self.p) for g in self.ideal.generators]
        return QuotientRing(self.p, self.variables, gens, budget=self.budget)

    def to_residue(self, a: "RingElem") -> "RingElem":
        return self.residue_ring(a.poly.with_modulus(self.p))

    def lift(self, b: "RingElem") -> "RingElem":
        return self(b.poly.with_modulus(self.q))

    # -- finiteness ---------------------------------------------------------
    def _k(self, m: Monomial, lead) -> int:
        k = self.e
        for lm, v in lead:
            if v < k and all(x <= y for x, y in zip(lm, m)):
                k = v
        return k

    @cached_property
    def standard_basis(self) -> list[tuple[Monomial, int]] | None:
        """Standard monomials with coefficient exponents ``k`` (coefficients live in
        [0, p^k)); ``None`` when the quotient is infinite."""
        lead = self.ideal.leading_data()
        n = len(self.variables)
        for i in range(n):
            if not any(v == 0 and lm[i] > 0 and sum(lm) == lm[i] for lm, v in lead):
                return None
        out = []
        seen = set()
        frontier = [(0,) * n]
        while frontier:
            m = frontier.pop()
            if m in seen:
                continue
            seen.add(m)
            k = self._k(m, lead)
            if k == 0:
                continue
            out.append((m, k))
            for i in range(n):
                frontier.append(tuple(x + (1 if j == i else 0) for j, x in enumerate(m)))
        from .poly import degrevlex_key

        out.sort(key=lambda t: degrevlex_key(t[0]))
        return out

    @property
    def is_finite(self) -> bool:
        return self.standard_basis is not None

    @cached_property
    def size(self) -> int | None:
        basis = self.standard_basis
        if basis is None:
            return None
        return self.p ** sum(k for _, k in basis)

    @property
    def finite_hint(self) -> list["RingElem"] | None:
        """All elements, when the ring is finite and small enough to enumerate."""
        if self.size is None or self.size > FINITE_HINT_LIMIT:
            return None
        return list(self.elements())

    def elements(self):
        basis = self.standard_basis
        if basis is None:
            raise ValueError("ring is infinite")
        ranges = [range(self.p**k) for _, k in basis]
        for coeffs in itertools.product(*ranges):
            terms = {m: c for (m, _), c in zip(basis, coeffs) if c}
            yield RingElem(self, MultiPoly._raw(self.variables, self.q, terms))

    def is_zero_ring(self) -> bool:
        return self.one.is_zero()

    # -- F_p coordinates on R/pR ---------------------------------------------
    def _residue_basis(self) -> list[Monomial]:
        B = self.residue_ring
        if B.standard_basis is None:
            raise ValueError("ring is infinite")
        return [m for m, _ in B.standard_basis]

    def _coords(self, b: "RingElem", basis: list[Monomial]) -> list[int]:
        return [b.poly.terms.get(m, 0) for m in basis]

    def _from_coords(self, vec: Sequence[int], basis: list[Monomial]) -> "RingElem":
        B = self.residue_ring
        return B(MultiPoly(self.variables, self.p, dict(zip(basis, vec))))

    def _mult_matrix(self, a: "RingElem", basis) -> list[list[int]]:
        """Rows of the F_p matrix of multiplication by ``a`` on R/pR."""
        B = self.residue_ring
        abar = self.to_residue(a) if a.ring is self else a
        cols = []
        for m in basis:
            bm = B(MultiPoly(self.variables, self.p, {m: 1}))
            cols.append(self._coords(abar * bm, basis))
        return linalg_fp.transpose(cols)

    def unit_inverse(self, a: "RingElem") -> "RingElem | None":
        """Inverse of ``a`` in a finite ring, or ``None`` if ``a`` is not a unit."""
        basis = self._residue_basis()
        if not basis:
            return self.zero if self.is_zero_ring() else None
        M = self._mult_matrix(a, basis)
        one = self._coords(self.residue_ring.one, basis)
        x = linalg_fp.solve(M, one, self.p)
        if x is None:
            return None
        inv = self.lift(self._from_coords(x, basis))
        # Newton: (1 - a x) is in pR, hence nilpotent
        for _ in range(self.e.bit_length() + 2):
            err = self.one - a * inv
            if err.is_zero():
                return inv
            inv = inv * (self.one + err)
        if not (a * inv - self.one).is_zero():
            raise ArithmeticError("inverse lifting failed to converge")
        return inv

    @cached_property
    def frobenius_kernel_dim(self) -> int:
        """dim over F_p of {x in R/pR : x^p = x} = number of local factors."""
        return len(self._frobenius_kernel())

    def _frobenius_kernel(self) -> list[list[int]]:
        basis = self._residue_basis()
        B = self.residue_ring
        cols = []
        for i, m in enumerate(basis):
            bm = B(MultiPoly(self.variables, self.p, {m: 1}))
            img = self._coords(bm ** self.p, basis)
            img[i] = (img[i] - 1) % self.p
            cols.append(img)
        return linalg_fp.nullspace(linalg_fp.transpose(cols), self.p)

    def _frobenius_matrix(self, basis) -> list[list[int]]:
        B = self.residue_ring
        cols = []
        for m in basis:
            bm = B(MultiPoly(self.variables, self.p, {m: 1}))
            cols.append(self._coords(bm ** self.p, basis))
        return linalg_fp.transpose(cols)

    @cached_property
    def unit_group_order(self) -> int:
        """|R^*| of a finite ring.

        Units of R are the preimages of units of R/pR.  Each local factor B_i of
        R/pR has residue field F_{p^f_i}, where f_i is the rank of a high
        Frobenius power on B_i (it kills the nilradical).
        """
        if not self.is_finite:
            raise ValueError("unit group order only available for finite rings")
        if self.is_zero_ring():
            return 1
        basis = self._residue_basis()
        dim = len(basis)
        F = self._frobenius_matrix(basis)
        Fk = F
        for _ in range(max(1, dim.bit_length())):
            Fk = linalg_fp.matmul(Fk, Fk, self.p)  # Frobenius^(2^j), 2^j >= dim
        order_B = 1
        for e in self.primitive_idempotents:
            Me = self._mult_matrix(e, basis)
            dim_i = linalg_fp.rank(Me, self.p)
            f_i = linalg_fp.rank(linalg_fp.matmul(Fk, Me, self.p), self.p)
            order_B *= (self.p**f_i - 1) * self.p ** (dim_i - f_i)
        return order_B * self.size // self.p**dim

    def multiplicative_order(self, u: "RingElem") -> int:
        """Order of a unit of a finite ring."""
        cache = self.__dict__.setdefault("_order_cache", {})
        if u.poly in cache:
            return cache[u.poly]
        n = self.unit_group_order
        if not (u**n - self.one).is_zero():
            raise ArithmeticError(f"{u} is not a unit")
        for ell, k in factorize(n).items():
            for _ in range(k):
                if n % ell == 0 and (u ** (n // ell) - self.one).is_zero():
                    n //= ell
                else:
                    break
        cache[u.poly] = n
        return n

    def is_local(self) -> bool:
        """Finite ring with exactly one maximal ideal (every zero-divisor nilpotent)."""
        if not self.is_finite:
            raise ValueError("locality test only available for finite rings")
        return not self.is_zero_ring() and self.frobenius_kernel_dim == 1

    @cached_property
    def primitive_idempotents(self) -> list["RingElem"]:
        """Primitive idempotents of a finite ring, sorted by their normal forms."""
        if not self.is_finite:
            raise ValueError("idempotent decomposition only available for finite rings")
        if self.is_zero_ring():
            return []
        basis = self._residue_basis()
        B = self.residue_ring
        kernel = self._frobenius_kernel()
        if self.p > 1 << 16 and len(kernel) > 1:
            raise ResourceExhausted(f"idempotent splitting over F_{self.p} exceeds the value scan limit")
        idems = [B.one]
        for vec in kernel:
            z = self._from_coords(vec, basis)
            refined = []
            for e in idems:
                remaining = e
                for c in range(self.p):
                    if remaining.is_zero():
                        break
                    piece = remaining * (B.one - (z - B(c)) ** (self.p - 1))
                    if not piece.is_zero():
                        refined.append(piece)
                        remaining = remaining - piece
            idems = refined
        lifted = []
        for eb in idems:
            x = self.lift(eb)
            for _ in range(4 * self.e + 4):
                x2 = x * x
                if x2 == x:
                    break
                x = x2 * (self(3) - x * 2)
            if not (x * x == x):
                raise ArithmeticError("idempotent lifting failed")
            lifted.append(x)
        lifted.sort(key=lambda r: sorted(r.poly.terms.items()))
        return lifted


class RingElem:
    __slots__ = ("ring", "poly")

    def __init__(self, ring: QuotientRing, poly: MultiPoly):
        self.ring = ring
        self.poly = poly

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other
        return self.ring(other)

    def __add__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring.ideal.normal_form(self.poly + other.poly))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring.ideal.normal_form(self.poly - other.poly))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RingElem(self.ring, self.ring.ideal.normal_form(-self.poly))

    def __mul__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring.ideal.normal_form(self.poly * other.poly))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent; use unit_inverse or a localization")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring is other.ring and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"RingElem({self.poly})"


# -- zero-divisors and nilpotents ------------------------------------------------


@dataclass(frozen=True)
class ZeroDivisorVerdict:
    """``is_zero_divisor`` is True/False; ``witness`` is a verified nonzero x with
    a*x = 0, ``inverse`` certifies units in finite rings."""

    is_zero_divisor: bool
    witness: RingElem | None = None
    inverse: RingElem | None = None
    method: str = ""

    def __bool__(self):
        return self.is_zero_divisor


def is_zero_divisor(a: RingElem) -> ZeroDivisorVerdict:
    R = a.ring
    if R.is_zero_ring():
        return ZeroDivisorVerdict(False, method="zero ring")
    if R.is_finite:
        return _zero_divisor_finite(a)
    return _zero_divisor_quotient(a)


def _zero_divisor_finite(a: RingElem) -> ZeroDivisorVerdict:
    R = a.ring
    inv = R.unit_inverse(a)
    if inv is not None:
        return ZeroDivisorVerdict(False, inverse=inv, method="unit")
    # non-unit of a finite ring: some local factor sees a nilpotent image
    for e in R.primitive_idempotents:
        y = a * e
        ell = nilpotency_index(y, cap=_default_cap(R))
        if ell is None:
            continue
        w = e if ell == 1 else y ** (ell - 1)
        _check_witness(a, w)
        return ZeroDivisorVerdict(True, witness=w, method="idempotent")
    raise ArithmeticError("non-unit without nilpotent local image; ring data inconsistent")


def _zero_divisor_quotient(a: RingElem) -> ZeroDivisorVerdict:
    R = a.ring
    p, e, q = R.p, R.e, R.q
    if a.is_zero():
        return ZeroDivisorVerdict(True, witness=R.one, method="zero")
    v = min(valuation(c, p, e) for c in a.poly.terms.values())
    candidates: list[MultiPoly] = []
    if v > 0:
        candidates.append(MultiPoly.constant(R.variables, q, p ** (e - v)))
    if R.ideal.generators:
        t = "__t"
        while t in R.variables:
            t += "_"
        vs = (t,) + R.variables
        T = MultiPoly.variable(vs, q, t)
        one = MultiPoly.constant(vs, q, 1)
        gens, cofs = [], []
        for g in R.ideal.generators:
            gens.append(T * g.extend_variables(vs))
            cofs.append(MultiPoly(vs, q))
        gens.append((one - T) * a.poly.extend_variables(vs))
        cofs.append(one)
        for _h, cof in eliminate(gens, 1, p, e, cofs=cofs, budget=R.budget):
            # h = cof(t=0) * a
            at0 = {m[1:]: c for m, c in cof.terms.items() if m[0] == 0}
            candidates.append(MultiPoly(R.variables, q, at0))
    for x in candidates:
        w = R(x)
        if not w.is_zero():
            _check_witness(a, w)
            return ZeroDivisorVerdict(True, witness=w, method="ideal quotient")
    return ZeroDivisorVerdict(False, method="ideal quotient")


def _check_witness(a: RingElem, w: RingElem):
    if w.is_zero() or not (a * w).is_zero():
        raise ArithmeticError("zero-divisor witness failed verification")


def _default_cap(R: QuotientRing) -> int:
    deg = max((g.total_degree() for g in R.ideal.groebner), default=0)
    return R.e * (1 + deg) * 64


def nilpotency_index(a: RingElem, cap: int | None = None) -> int | None:
    """Smallest ``l <= cap`` with ``a^l = 0`` (``None`` if ``a^cap != 0``)."""
    R = a.ring
    if cap is None:
        cap = _default_cap(R)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if a.is_zero():
        return 1
    # powers a^(2^k) until zero or past the cap
    squares = [a]
    while (1 << (len(squares) - 1)) < cap:
        nxt = squares[-1] * squares[-1]
        squares.append(nxt)
        if nxt.is_zero():
            break
    if not squares[-1].is_zero():
        return None if not (a**cap).is_zero() else _bisect(a, cap)
    hi = 1 << (len(squares) - 1)
    lo = hi >> 1  # a^lo != 0
    ell = _bisect_between(a, squares, lo, hi)
    return ell if ell <= cap else None


def _bisect(a, cap):
    lo, hi = 0, cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (a**mid).is_zero():
            hi = mid
        else:
            lo = mid
    return hi


def _bisect_between(a, squares, lo, hi):
    # invariant: a^lo != 0, a^hi == 0; a^lo known as squares[log2 lo]
    base = squares[lo.bit_length() - 1] if lo else a.ring.one
    cur = lo
    step = (hi - lo) >> 1
    k = (hi - lo).bit_length() - 2
    while step:
        trial = base * squares[k]
        if trial.is_zero():
            pass
        else:
            base = trial
            cur += step
        step >>= 1
        k -= 1
    return cur + 1
