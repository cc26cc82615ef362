import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skolem.crossprime import (
    TwoPowerEquation,
    component_from_part,
    intersect_multi,
    intersect_two,
    partial_sum_bound,
    solve_two_power_equation,
)
from skolem.numtheory import multiplicatively_independent
from skolem.pnormal import ElementaryPNested, ProgressionZ


def nested(p, a0, coeffs, ell=1):
    return component_from_part(p, ElementaryPNested(p, ell, a0, coeffs))


def prog(p, m, o):
    return component_from_part(p, ProgressionZ(m, o))


def test_independence_matches_common_power_criterion():
    for p in range(2, 101):
        for q in range(2, 101):
            # p^i = q^j with i, j <= 7 catches every dependent pair below 100
            dependent = any(p**i == q**j for i in range(1, 8) for j in range(1, 8))
            assert multiplicatively_independent(p, q) == (not dependent)


def test_two_power_examples():
    sol = solve_two_power_equation(TwoPowerEquation(2, 3, [1], [-1], 1), 64)
    assert sol.solutions == [((1,), (0,)), ((2,), (1,))]
    assert not sol.proven and sol.status == "CERTIFIED_UP_TO(64)"
    only_p = solve_two_power_equation(TwoPowerEquation(2, 3, [1], [], 8))
    assert only_p.solutions == [((3,), ())] and only_p.proven
    assert str(only_p.form) == "(n1 = 3)"
    none = solve_two_power_equation(TwoPowerEquation(2, 3, [1], [1], 0))
    assert none.solutions == [] and none.proven


def test_partial_sum_bound_cases():
    assert partial_sum_bound(TwoPowerEquation(2, 3, [1, 1], [], 8)) == 8
    assert partial_sum_bound(TwoPowerEquation(2, 3, [1, 2], [3], 100)) == 100
    assert partial_sum_bound(TwoPowerEquation(2, 3, [1], [-1], 1)) is None


@given(
    st.lists(st.integers(1, 9), min_size=1, max_size=2),
    st.lists(st.integers(1, 9), max_size=2),
    st.integers(0, 3000),
)
def test_proven_solutions_are_stable_and_complete(a, b, d):
    eq = TwoPowerEquation(2, 3, a, b, d)
    s1 = solve_two_power_equation(eq, 16)
    assert s1.proven
    s2 = solve_two_power_equation(eq, 32)
    assert s1.solutions == s2.solutions
    for ns, ms in s1.solutions:
        assert eq.holds(ns, ms)
    # brute force over all exponents whose terms stay below d
    brute = []
    import itertools

    for ns in itertools.product(range(12), repeat=len(a)):
        for ms in itertools.product(range(8), repeat=len(b)):
            if eq.holds(ns, ms):
                brute.append((ns, ms))
    assert sorted(brute) == s1.solutions


def test_pairwise_intersections():
    t = time.perf_counter()
    u = intersect_two(nested(2, 0, [1]), nested(3, 0, [1]), 64)
    assert u.enumerate_up_to(10**6) == [1]
    u = intersect_two(nested(2, 1, [1]), nested(3, 0, [1]), 64)
    assert u.enumerate_up_to(10**6) == [3, 9]
    assert time.perf_counter() - t < 2
    u = intersect_two(prog(2, 4, 1), prog(3, 6, 3))
    assert u.status == "PROVEN"
    assert [str(c.set.tail) for c in u.components] == ["12Z+9"]
    for z in range(10**4):
        assert u.contains(z) == (z % 4 == 1 and z % 6 == 3)


def test_cosets_that_never_meet():
    u = intersect_two(prog(2, 4, 1), prog(3, 6, 2))
    assert u.is_empty() and u.status == "PROVEN"


def test_multi_intersections():
    u = intersect_multi([nested(2, 0, [1]), nested(3, 0, [1]), prog(5, 5, 1)], 64)
    assert u.enumerate_up_to(10**5) == [1] and u.min_member() == 1
    full = [prog(p, 1, 0) for p in (2, 3, 5)]
    u = intersect_multi(full)
    assert u.status == "PROVEN" and u.enumerate_up_to(50) == list(range(51))
    u = intersect_multi([prog(2, 3, 0), prog(3, 4, 0), prog(5, 5, 0)])
    assert u.status == "PROVEN"
    assert u.enumerate_up_to(10**4) == list(range(0, 10**4 + 1, 60))


@pytest.mark.parametrize(
    "left,right",
    [
        (nested(2, 0, [1]), prog(3, 7, 2)),
        (prog(2, 5, 3), nested(3, 1, [2])),
        (nested(2, 1, [1, 1]), nested(3, 0, [1])),
        (nested(2, 0, [1], ell=2), nested(5, -1, [2])),
    ],
)
def test_soundness_and_completeness_to_bound(left, right):
    u = intersect_two(left, right, 64)
    got = u.enumerate_up_to(10**5)
    assert all(left.contains(z) and right.contains(z) for z in got)
    # every common member below 10^5 appears (exponents <= 64 cover this range)
    common = [z for z in left.set.enumerate_up_to(10**5) if right.contains(z)]
    assert got == common
