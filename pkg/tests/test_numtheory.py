from hypothesis import given
from hypothesis import strategies as st

from skolem.numtheory import crt_pair, factorize, floor_log, lcm, power_residues, prime_power


def test_factorization():
    assert factorize(12) == {2: 2, 3: 1}
    assert factorize(1) == {}
    assert factorize(2**61 - 1) == {2**61 - 1: 1}
    assert factorize((2**61 - 1) * (2**31 - 1)) == {2**31 - 1: 1, 2**61 - 1: 1}
    assert prime_power(49) == (7, 2) and prime_power(12) is None


@given(st.integers(1, 10**6), st.integers(2, 10))
def test_floor_log(v, b):
    k = floor_log(v, b)
    assert b**k <= v < b ** (k + 1)


@given(st.integers(-50, 50), st.integers(1, 40), st.integers(-50, 50), st.integers(1, 40))
def test_crt_pair_matches_search(b1, a1, b2, a2):
    L = lcm(a1, a2)
    sols = [z for z in range(L) if (z - b1) % a1 == 0 and (z - b2) % a2 == 0]
    r = crt_pair(b1, a1, b2, a2)
    if not sols:
        assert r is None
    else:
        assert r == (sols[0], L) and len(sols) == 1


@given(st.integers(1, 50), st.integers(1, 200))
def test_power_residues_cycle(base, modulus):
    vals, pre = power_residues(base, modulus)
    period = len(vals) - pre
    for k in range(3 * len(vals)):
        expect = pow(base, k, modulus)
        idx = k if k < len(vals) else pre + (k - pre) % period
        assert vals[idx] == expect
