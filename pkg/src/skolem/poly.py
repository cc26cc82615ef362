"""Sparse multivariate polynomials over Z/m and the shared text syntax.

A polynomial is a map from exponent tuples to nonzero residues.  The variable
tuple is part of the value: arithmetic between polynomials over different
variable lists or moduli is an error.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import ParseError

Monomial = tuple[int, ...]

_DENSE_THRESHOLD = 4096


def degrevlex_key(m: Monomial):
    """Sort key: larger key = larger monomial (degree, then reverse lexicographic)."""
    return (sum(m), tuple(-x for x in reversed(m)))


def elimination_key(k: int) -> Callable[[Monomial], tuple]:
    """Block order eliminating the first ``k`` variables."""

    def key(m: Monomial):
        return (degrevlex_key(m[:k]), degrevlex_key(m[k:]))

    return key


class MultiPoly:
    __slots__ = ("variables", "modulus", "terms", "_hash")

    def __init__(self, variables: Iterable[str], modulus: int, terms: Mapping[Monomial, int] | None = None):
        self.variables = tuple(variables)
        self.modulus = int(modulus)
        n = len(self.variables)
        clean: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent vector {m} does not match {n} variables")
                c %= self.modulus
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, variables, modulus, terms):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.modulus = modulus
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, variables, modulus, c: int) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, modulus, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, modulus, name: str) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name)
        m = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, modulus, {m: 1})

    def zero(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, self.modulus, {})

    def one(self) -> "MultiPoly":
        return MultiPoly.constant(self.variables, self.modulus, 1)

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * len(self.variables), 0)

    def sorted_terms(self, key=degrevlex_key) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading(self, key=degrevlex_key) -> tuple[Monomial, int]:
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables or self.modulus != other.modulus:
            raise ValueError(
                f"incompatible polynomials: {self.variables}/Z{self.modulus} vs {other.variables}/Z{other.modulus}"
            )

    def with_modulus(self, modulus: int) -> "MultiPoly":
        return MultiPoly(self.variables, modulus, self.terms)

    def extend_variables(self, variables: Iterable[str]) -> "MultiPoly":
        """Re-embed into a superset of variables (names must all be present)."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(variables)
            for i, k in zip(idx, m):
                e[i] = k
            out[tuple(e)] = c
        return MultiPoly._raw(variables, self.modulus, out)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.variables, self.modulus, other)
        self._check(other)
        mod = self.modulus
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % mod
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(self.variables, mod, out)

    __radd__ = __add__

    def __neg__(self):
        mod = self.modulus
        return MultiPoly._raw(self.variables, mod, {m: mod - c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.variables, self.modulus, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int, mono: Monomial | None = None) -> "MultiPoly":
        """Multiply by the term ``c * x^mono``."""
        mod = self.modulus
        c %= mod
        if not c:
            return self.zero()
        out = {}
        if mono is None or not any(mono):
            for m, v in self.terms.items():
                w = v * c % mod
                if w:
                    out[m] = w
        else:
            for m, v in self.terms.items():
                w = v * c % mod
                if w:
                    out[tuple(a + b for a, b in zip(m, mono))] = w
        return MultiPoly._raw(self.variables, mod, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self.zero()
        if len(self.variables) == 1 and len(self.terms) * len(other.terms) > _DENSE_THRESHOLD:
            return self._dense_mul(other)
        mod = self.modulus
        out: dict[Monomial, int] = {}
        a, b = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = (out.get(m, 0) + ca * cb) % mod
        return MultiPoly._raw(self.variables, mod, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def _dense_mul(self, other):
        a = self.to_dense()
        b = other.to_dense()
        return MultiPoly.from_dense(self.variables, self.modulus, dense_convolve(a, b, self.modulus))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.variables, self.modulus, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.modulus, frozenset(self.terms.items())))
        return self._hash

    # -- dense univariate bridge -----------------------------------------
    def to_dense(self) -> np.ndarray:
        if len(self.variables) != 1:
            raise ValueError("dense form only for univariate polynomials")
        deg = max((m[0] for m in self.terms), default=-1)
        arr = np.zeros(deg + 1, dtype=object if self.modulus >= 1 << 31 else np.int64)
        for (k,), c in self.terms.items():
            arr[k] = c
        return arr

    @classmethod
    def from_dense(cls, variables, modulus, arr) -> "MultiPoly":
        nz = np.nonzero(arr)[0]
        return cls._raw(tuple(variables), modulus, {(int(k),): int(arr[k]) for k in nz})

    # -- display ----------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r} over Z/{self.modulus}{list(self.variables)})"


def dense_convolve(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Exact product of coefficient arrays reduced mod ``modulus``."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    if a.dtype == object or b.dtype == object:
        out = np.convolve(a.astype(object), b.astype(object))
        return np.array([int(x) % modulus for x in out], dtype=object)
    bound = min(a.size, b.size) * (modulus - 1) ** 2
    if bound < (1 << 62) and min(a.size, b.size) <= 64:
        return np.convolve(a, b) % modulus
    if bound < (1 << 50):
        n = a.size + b.size - 1
        size = 1 << (n - 1).bit_length()
        fa = np.fft.rfft(a.astype(np.float64), size)
        fb = np.fft.rfft(b.astype(np.float64), size)
        out = np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)
        return out % modulus
    out = np.convolve(a.astype(object), b.astype(object))
    return np.array([int(x) % modulus for x in out], dtype=object)


def format_poly(f: MultiPoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m, c in f.sorted_terms():
        factors = []
        for v, k in zip(f.variables, m):
            if k == 1:
                factors.append(v)
            elif k > 1:
                factors.append(f"{v}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(
                f"unexpected character {text[pos + stripped]!r}",
                line,
                col0 + pos + stripped,
                ("number", "variable", "+", "-", "*", "^"),
            )
        kind = mt.lastgroup
        start = mt.start(kind)
        toks.append((kind, mt.group(kind), col0 + start))
        pos = mt.end()
    toks.append(("end", "", col0 + len(text)))
    return toks


def parse_poly(text: str, variables: Iterable[str], modulus: int, line: int = 0, column: int = 1) -> MultiPoly:
    """Parse ``3*x^2*y + 2`` style text; implicit multiplication is rejected."""
    variables = tuple(variables)
    toks = _tokenize(text, line, column)
    i = 0
    terms: dict[Monomial, int] = {}

    def peek():
        return toks[i]

    def fail(expected):
        kind, val, col = toks[i]
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", line, col, expected)

    if peek()[0] == "end":
        fail(("number", "variable", "-"))
    first = True
    while True:
        sign = 1
        kind, val, _ = peek()
        if kind == "op" and val in "+-":
            if val == "-":
                sign = -1
            elif first:
                fail(("number", "variable", "-"))
            i += 1
        elif not first:
            fail(("+", "-", "end of input"))
        first = False
        coef = 1
        mono = [0] * len(variables)
        while True:
            kind, val, col = peek()
            if kind == "num":
                coef *= int(val)
                i += 1
            elif kind == "var":
                if val not in variables:
                    raise ParseError(f"unknown variable {val!r}", line, col, variables or ("number",))
                i += 1
                k = 1
                if peek()[:2] == ("op", "^"):
                    i += 1
                    kind2, val2, _ = peek()
                    if kind2 != "num":
                        fail(("exponent",))
                    k = int(val2)
                    i += 1
                mono[variables.index(val)] += k
            else:
                fail(("number", "variable"))
            kind, val, col = peek()
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind in ("num", "var"):
                raise ParseError("implicit multiplication is not allowed", line, col, ("*", "+", "-"))
            break
        m = tuple(mono)
        terms[m] = terms.get(m, 0) + sign * coef
        if peek()[0] == "end":
            break
    return MultiPoly(variables, modulus, terms)
