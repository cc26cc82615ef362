"""Deterministic automata over base-p digits, least significant digit first.

A DFA represents a set of nonnegative integers.  Its language is kept closed
under appending zero digits, so ``accepts`` only has to read the digits of
``z`` itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import ResourceExhausted

DEFAULT_STATE_BUDGET = 1_000_000


def digits(z: int, p: int) -> list[int]:
    if z < 0:
        raise ValueError("digit strings represent nonnegative integers")
    out = []
    while z:
        z, d = divmod(z, p)
        out.append(d)
    return out


@dataclass(frozen=True)
class DigitDFA:
    base: int
    delta: tuple[tuple[int, ...], ...]  # delta[state][digit]
    accepting: frozenset[int]
    start: int = 0

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def run(self, ds: Iterable[int], state: int | None = None) -> int:
        s = self.start if state is None else state
        for d in ds:
            s = self.delta[s][d]
        return s

    def accepts(self, z: int) -> bool:
        if z < 0:
            return False
        return self.run(digits(z, self.base)) in self.accepting

    __contains__ = accepts

    # -- structure ----------------------------------------------------------------
    def reachable(self) -> list[int]:
        seen = {self.start}
        order = [self.start]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def is_empty(self) -> bool:
        return not any(s in self.accepting for s in self.reachable())

    def is_universal(self) -> bool:
        return all(s in self.accepting for s in self.reachable())

    def minimize(self) -> "DigitDFA":
        """Minimal DFA with states numbered in BFS order from the start (canonical)."""
        states = self.reachable()
        index = {s: i for i, s in enumerate(states)}
        delta = [[index[t] for t in self.delta[s]] for s in states]
        block = [1 if s in self.accepting else 0 for s in states]
        n_blocks = len(set(block))
        while True:
            sigs = {}
            new = []
            for i in range(len(states)):
                sig = (block[i],) + tuple(block[t] for t in delta[i])
                new.append(sigs.setdefault(sig, len(sigs)))
            if len(sigs) == n_blocks:
                block = new
                break
            block, n_blocks = new, len(sigs)
        # BFS renumbering of blocks
        order: dict[int, int] = {block[0]: 0}
        rep: dict[int, int] = {block[0]: 0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for t in delta[i]:
                b = block[t]
                if b not in order:
                    order[b] = len(order)
                    rep[b] = t
                    queue.append(t)
        reps = sorted(rep.items(), key=lambda kv: order[kv[0]])
        new_delta = tuple(tuple(order[block[t]] for t in delta[i]) for _, i in reps)
        acc = frozenset(order[b] for b, i in reps if states[i] in self.accepting)
        return DigitDFA(self.base, new_delta, acc, 0)

    def canonical_key(self):
        m = self.minimize()
        return (m.base, m.delta, tuple(sorted(m.accepting)))

    def same_set(self, other: "DigitDFA") -> bool:
        return self.canonical_key() == other.canonical_key()

    # -- combinations -------------------------------------------------------------------
    def product(self, other: "DigitDFA", op: Callable[[bool, bool], bool] = lambda a, b: a and b) -> "DigitDFA":
        if self.base != other.base:
            raise ValueError("product of automata over different bases")
        return from_transition_function(
            self.base,
            (self.start, other.start),
            lambda s, d: (self.delta[s[0]][d], other.delta[s[1]][d]),
            lambda s: op(s[0] in self.accepting, s[1] in other.accepting),
        ).minimize()

    def intersect(self, other: "DigitDFA") -> "DigitDFA":
        return self.product(other, lambda a, b: a and b)

    def union(self, other: "DigitDFA") -> "DigitDFA":
        return self.product(other, lambda a, b: a or b)

    def complement(self) -> "DigitDFA":
        all_states = frozenset(range(self.n_states))
        return DigitDFA(self.base, self.delta, all_states - self.accepting, self.start)

    def min_member(self, at_least: int = 0) -> int | None:
        """Smallest accepted z >= ``at_least``, or ``None``."""
        dfa = self if at_least <= 0 else self.intersect(at_least_dfa(self.base, at_least))
        if dfa.is_empty():
            return None
        if dfa.start in dfa.accepting:
            return 0
        # forward layers: states reachable after exactly i digits
        layers = [{dfa.start}]
        limit = dfa.n_states + 1
        for L in range(1, limit + 1):
            nxt = {dfa.delta[s][d] for s in layers[-1] for d in range(dfa.base)}
            layers.append(nxt)
            # strings of length L whose last (most significant) digit is nonzero
            if not any(dfa.delta[s][d] in dfa.accepting for s in layers[L - 1] for d in range(1, dfa.base)):
                continue
            target = set(dfa.accepting)
            value = 0
            for pos in range(L - 1, -1, -1):
                lo = 1 if pos == L - 1 else 0
                for d in range(lo, dfa.base):
                    cand = {s for s in layers[pos] if dfa.delta[s][d] in target}
                    if cand:
                        value += d * dfa.base**pos
                        target = cand
                        break
            return value
        raise AssertionError("nonempty automaton without a short member")

    def enumerate_up_to(self, bound: int) -> list[int]:
        """Accepted integers in [0, bound], by depth-first search over digit prefixes."""
        if bound < 0:
            return []
        p = self.base
        out = []
        # enumerate z digit by digit from the least significant end
        stack = [(0, 1, self.start)]  # (low value, p^len, state)
        while stack:
            low, w, s = stack.pop()
            if low > bound:
                continue
            if s in self.accepting:
                out.append(low)
            if w > bound:
                continue
            for d in range(p):
                stack.append((low + d * w, w * p, self.delta[s][d]))
        # zero-padded prefixes revisit the same value
        return sorted(set(out))

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "states": self.n_states,
            "start": self.start,
            "transitions": [list(row) for row in self.delta],
            "accepting": sorted(self.accepting),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DigitDFA":
        return cls(
            data["base"],
            tuple(tuple(r) for r in data["transitions"]),
            frozenset(data["accepting"]),
            data.get("start", 0),
        )


def from_transition_function(
    base: int,
    start: Hashable,
    step: Callable[[Hashable, int], Hashable],
    accepting: Callable[[Hashable], bool],
    budget: int = DEFAULT_STATE_BUDGET,
) -> DigitDFA:
    """Explore the reachable part of an implicitly given DFA."""
    index = {start: 0}
    order = [start]
    delta: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for d in range(base):
            t = step(s, d)
            j = index.get(t)
            if j is None:
                j = index[t] = len(order)
                order.append(t)
                if len(order) > budget:
                    raise ResourceExhausted(f"automaton exceeds {budget} states")
            row.append(j)
        delta.append(tuple(row))
        i += 1
    acc = frozenset(j for j, s in enumerate(order) if accepting(s))
    return DigitDFA(base, tuple(delta), acc, 0)


def close_under_zero_padding(dfa: DigitDFA) -> DigitDFA:
    """Make a state accepting when some run of zero digits reaches acceptance."""
    acc = set(dfa.accepting)
    changed = True
    while changed:
        changed = False
        for s in range(dfa.n_states):
            if s not in acc and dfa.delta[s][0] in acc:
                acc.add(s)
                changed = True
    return DigitDFA(dfa.base, dfa.delta, frozenset(acc), dfa.start)


def empty_dfa(base: int) -> DigitDFA:
    return DigitDFA(base, (tuple([0] * base),), frozenset(), 0)


def full_dfa(base: int) -> DigitDFA:
    return DigitDFA(base, (tuple([0] * base),), frozenset({0}), 0)


def progression_dfa(base: int, modulus: int, offset: int) -> DigitDFA:
    """Nonnegative z with z = offset (mod modulus)."""
    a = modulus
    b = offset % a
    return from_transition_function(
        base,
        (0, 1 % a),
        lambda s, d: ((s[0] + d * s[1]) % a, (s[1] * base) % a),
        lambda s: s[0] == b,
    ).minimize()


def at_least_dfa(base: int, n: int) -> DigitDFA:
    """z >= n."""
    if n <= 0:
        return full_dfa(base)
    nd = digits(n, base)
    L = len(nd)

    def step(s, d):
        j, rel = s
        c = nd[j] if j < L else 0
        if d > c:
            rel = 1
        elif d < c:
            rel = -1
        return (min(j + 1, L), rel)

    return from_transition_function(base, (0, 0), step, lambda s: s[0] >= L and s[1] >= 0).minimize()


def finite_set_dfa(base: int, members: Sequence[int]) -> DigitDFA:
    out = empty_dfa(base)
    for z in sorted(set(members)):
        if z < 0:
            continue
        out = out.union(singleton_dfa(base, z))
    return out


def singleton_dfa(base: int, z: int) -> DigitDFA:
    zd = digits(z, base)
    L = len(zd)
    dead = -1

    def step(s, d):
        if s == dead:
            return dead
        want = zd[s] if s < L else 0
        if d != want:
            return dead
        return min(s + 1, L)

    return from_transition_function(base, 0, step, lambda s: s == L).minimize()


def nested_dfa(base: int, ell: int, A0: int, A: Sequence[int], M: int, budget: int = DEFAULT_STATE_BUDGET) -> DigitDFA:
    """Nonnegative z with M z = A0 + sum_i base^(ell k_i) A_i for some k_i >= 0.

    NFA states are (position mod ell, set of placed terms, carry).  Reading
    digit z_j, the terms placed at this position are subtracted and the carry
    ``(carry + M z_j - placed) / base`` must be exact.  The carry stays within
    ``K = |A0| + M (base - 1) + sum |A_i|``.
    """
    p = base
    r = len(A)
    full = (1 << r) - 1
    K = abs(A0) + M * (p - 1) + sum(abs(a) for a in A)
    subsets_of: dict[int, list[tuple[int, int]]] = {}

    def placements(mask):
        if mask not in subsets_of:
            free = [i for i in range(r) if not mask >> i & 1]
            opts = []
            for bits in range(1 << len(free)):
                T = 0
                s = 0
                for k, i in enumerate(free):
                    if bits >> k & 1:
                        T |= 1 << i
                        s += A[i]
                opts.append((T, s))
            subsets_of[mask] = opts
        return subsets_of[mask]

    def nfa_step(state, d):
        pos, mask, c = state
        opts = placements(mask) if pos == 0 else [(0, 0)]
        out = []
        for T, s in opts:
            v = c + M * d - s
            if v % p:
                continue
            nc = v // p
            if abs(nc) > K:
                continue
            out.append(((pos + 1) % ell, mask | T, nc))
        return out

    def step(S, d):
        nxt = set()
        for st in S:
            nxt.update(nfa_step(st, d))
        return frozenset(nxt)

    start = frozenset({(0, 0, -A0)})
    dfa = from_transition_function(
        p, start, step, lambda S: any(m == full and c == 0 for _, m, c in S), budget=budget
    )
    return close_under_zero_padding(dfa).minimize()
