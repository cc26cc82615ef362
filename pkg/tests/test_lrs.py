import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skolem.errors import InvalidProblem
from skolem.lrs import LRS, CharPoly, gf_numerator, subsequence, term_at
from skolem.ring import QuotientRing

Z2 = QuotientRing(2, (), ())
Z4 = QuotientRing(4, (), ())
Z5 = QuotientRing(5, (), ())
F2X = QuotientRing(2, ("X",), ())
DUAL = QuotientRing(4, ("x",), ("x^2", "2*x"))
FINITE = [Z4, QuotientRing(8, (), ()), QuotientRing(9, (), ()), DUAL, QuotientRing(2, ("t",), ("t^3 + t + 1",))]


def fib(R):
    return LRS(R, [1, 1], [0, 1])


def frobenius_powers():
    # (X+1)^n - X^n - 1, char poly (Y - X - 1)(Y - X)(Y - 1)
    return LRS(F2X, [0, "X^2 + X + 1", "X^2 + X"], [1, 0, 0])


def random_lrs(rng, R, max_order=3):
    elems = list(R.elements())
    d = rng.randint(1, max_order)
    nonzero = [x for x in elems if not x.is_zero()]
    coeffs = [rng.choice(elems) for _ in range(d - 1)] + [rng.choice(nonzero)]
    return LRS(R, coeffs, [rng.choice(elems) for _ in range(d)])


def test_fibonacci_mod_two():
    L = fib(Z2)
    assert [int(not t.is_zero()) for t in L.prefix(7)] == [0, 1, 1, 0, 1, 1, 0]
    assert term_at(L, 6).is_zero()
    assert term_at(L, 0) == L.initial[0]


def test_frobenius_powers_terms():
    L = frobenius_powers()
    assert term_at(L, 4).is_zero()
    assert not term_at(L, 3).is_zero()
    X = F2X.gen("X")
    for n in (5, 100, 4096):
        assert term_at(L, n) == (X + 1) ** n - X**n - 1
    assert term_at(L, 4096).is_zero()


def test_trailing_zero_coefficient_rejected():
    with pytest.raises(InvalidProblem):
        LRS(Z4, [1, 4], [1, 1])
    with pytest.raises(InvalidProblem):
        LRS(Z4, [1, 1], [1])


def test_char_poly_shapes():
    cp = CharPoly.of(LRS(Z5, [2, 3], [0, 1]))
    assert [int(str(c)) for c in cp.poly] == [2, 3, 1]  # Y^2 - 2Y - 3
    assert [int(str(c)) for c in cp.reversed] == [1, 3, 2]  # 1 - 2Y - 3Y^2


@pytest.mark.parametrize("R", FINITE, ids=str)
def test_matrix_power_agrees_with_iteration(R):
    rng = random.Random(str(R))
    for _ in range(10):
        L = random_lrs(rng, R)
        terms = L.prefix(2001)
        for n in list(range(0, 70)) + rng.sample(range(70, 2001), 30) + [2000]:
            assert term_at(L, n) == terms[n]


def test_gf_numerator_examples():
    assert [str(c) for c in gf_numerator(fib(Z5))] == ["0", "1"]
    assert [str(c) for c in gf_numerator(LRS(Z4, [1], [1]))] == ["1"]
    assert [str(c) for c in gf_numerator(LRS(Z4, [2, -1], [0, 2]))] == ["0", "2"]


@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(FINITE))))
def test_gf_numerator_certifies_itself(seed, idx):
    R = FINITE[idx]
    L = random_lrs(random.Random(seed), R)
    h = gf_numerator(L)
    assert len(h) == L.order
    # phi * prefix vanishes in degrees d..3d, checked independently
    phi = CharPoly.of(L).reversed
    g = L.prefix(3 * L.order + 1)
    for k in range(L.order, 3 * L.order + 1):
        acc = R.zero
        for i, c in enumerate(phi):
            if i <= k:
                acc = acc + c * g[k - i]
        assert acc.is_zero()


def test_subsequence_examples():
    zero = subsequence(fib(Z2), 3, 0)
    assert all(t.is_zero() for t in zero.prefix(20))
    L = fib(Z5)
    assert subsequence(L, 1, 0) is L
    two_n = LRS(Z4, [2, -1], [0, 2])
    assert all(t == 2 for t in subsequence(two_n, 4, 1).prefix(20))


@pytest.mark.parametrize("R", [Z4, DUAL, QuotientRing(9, (), ())], ids=str)
def test_subsequence_consistency(R):
    rng = random.Random(str(R) + "sub")
    L = random_lrs(rng, R)
    terms = L.prefix(6 * 500 + 6)
    for m in range(1, 7):
        for q in range(m):
            S = subsequence(L, m, q)
            assert S.order <= L.order
            assert S.prefix(501) == [terms[m * n + q] for n in range(501)]


def test_subsequence_over_polynomial_ring():
    L = frobenius_powers()
    S = subsequence(L, 4, 1)
    for n in range(30):
        assert term_at(S, n) == term_at(L, 4 * n + 1)


@pytest.mark.slow
def test_matrix_power_agrees_with_iteration_everywhere():
    L = LRS(QuotientRing(8, (), ()), [3, 5, 7], [1, 2, 6])
    terms = L.prefix(2001)
    assert all(term_at(L, n) == terms[n] for n in range(2001))
