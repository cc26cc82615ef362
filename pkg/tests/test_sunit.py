import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skolem.lrs import LRS
from skolem.ring import QuotientRing
from skolem.sunit import (
    PROVEN,
    SimpleSumEquation,
    brute_zero_set,
    fit_pnormal,
    solve_simple_sum,
    zero_set_finite_ring,
    zero_set_guess_certify,
)

F2X = QuotientRing(2, ("X",), ())
FINITE = [QuotientRing(8, (), ()), QuotientRing(9, (), ()), QuotientRing(4, ("x",), ("x^2",))]


def eq(R, coeffs, bases):
    return SimpleSumEquation.build(R, coeffs, bases, R.p, R.e)


def test_finite_backend_examples():
    Z4, Z5 = QuotientRing(4, (), ()), QuotientRing(5, (), ())
    c = zero_set_finite_ring(eq(Z4, [2], [1]))
    assert c.proven and str(c.set) == "∅"
    c = zero_set_finite_ring(eq(Z5, [1, -1], [2, 3]))
    assert c.proven and str(c.set) == "2Z"
    c = zero_set_finite_ring(eq(Z5, [2, -2], [3, 3]))
    assert c.proven and str(c.set) == "Z"


def _random_equation(rng, R):
    units = [u for u in R.elements() if R.unit_inverse(u) is not None]
    t = rng.randint(1, 3)
    return eq(R, [rng.choice(list(R.elements())) for _ in range(t)], [rng.choice(units) for _ in range(t)])


@pytest.mark.parametrize("R", FINITE, ids=str)
def test_finite_backend_against_brute_force(R):
    rng = random.Random(str(R))
    for _ in range(100):
        e = _random_equation(rng, R)
        cert = zero_set_finite_ring(e)
        assert cert.status == PROVEN
        T = cert.evidence.get("period", 1)
        for z in range(3 * T + 1):
            assert cert.set.contains(z) == e.value(z).is_zero()
        if "period" not in cert.evidence:
            continue
        # the bases really are purely periodic with that period
        for z in (0, rng.randrange(1, 1000)):
            assert all(b ** (z + T) == b**z for b in e.bases)


def test_trivial_cases_are_proven():
    assert str(solve_simple_sum(eq(F2X, [], [])).set) == "Z"
    c = solve_simple_sum(eq(F2X, ["1"], ["X"]))
    assert c.proven and str(c.set) == "∅"


def test_frobenius_sum_fits_powers_of_two():
    X = F2X.gen("X")
    c = zero_set_guess_certify(eq(F2X, [1, -1, -1], [X + 1, X, 1]), 4096)
    assert not c.proven and c.bound == 4096
    assert str(c.set) == "{2^a}"
    assert c.set.contains(8192)
    assert all(ok for _, ok in c.evidence["spot_checks"])
    assert set(c.evidence["zeros"]) == {2**k for k in range(13)}


def test_constant_sum_is_empty():
    c = zero_set_guess_certify(eq(F2X, [1, "X"], [1, 1]), 256)
    assert str(c.set) == "∅"


@given(st.lists(st.integers(0, 600), max_size=12, unique=True))
def test_fit_reproduces_observed_zeros(zs):
    zeros = sorted(zs)
    parts, kind = fit_pnormal(zeros, 600, 2, 1)
    members = {z for z in range(601) if any(x.contains(z) for x in parts)}
    assert members == set(zeros)


@pytest.mark.parametrize(
    "zeros,kind",
    [
        ([3 * k for k in range(201)], "periodic"),
        ([2**k for k in range(10)], "nested"),
        ([1 + 4**k for k in range(5)], "nested"),
        ([5], "singleton"),
    ],
)
def test_fit_kinds(zeros, kind):
    zeros = [z for z in zeros if z <= 600]
    assert fit_pnormal(zeros, 600, 2, 1)[1] == kind


def test_brute_zero_set_examples():
    Z6 = QuotientRing(2, (), ()), QuotientRing(3, (), ())
    # Fibonacci mod 6 vanishes where it vanishes mod 2 and mod 3
    z2 = set(brute_zero_set(LRS(Z6[0], [1, 1], [0, 1]), 100))
    z3 = set(brute_zero_set(LRS(Z6[1], [1, 1], [0, 1]), 100))
    assert sorted(z2 & z3) == list(range(0, 100, 12))
    assert brute_zero_set(LRS(QuotientRing(4, (), ()), [1, 1], [0, 1]), 30) == list(range(0, 31, 6))
    frob = LRS(F2X, [0, "X^2 + X + 1", "X^2 + X"], [1, 0, 0])
    assert brute_zero_set(frob, 20) == [1, 2, 4, 8, 16]
