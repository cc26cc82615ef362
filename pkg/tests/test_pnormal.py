from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skolem.automata import DigitDFA
from skolem.pnormal import (
    ElementaryPNested,
    PNormalN,
    PNormalZ,
    ProgressionZ,
    contains,
    empty_n,
    enumerate_up_to,
    full_n,
    intersect_same_p,
    is_empty,
    minimal_period,
    normalize_succinct_z,
    periodic_set,
    to_dfa,
)
from oracles import nested_members

POW2 = ElementaryPNested(2, 1, 0, [1])
NESTED_PAIR = ElementaryPNested(2, 2, 1, [5, 1])  # {1 + 5*2^(2a) + 2^(2b)}
HALF_THREE = ElementaryPNested(3, 1, Fraction(1, 2), [Fraction(1, 2)])

CORPUS = [
    POW2,
    NESTED_PAIR,
    HALF_THREE,
    ElementaryPNested(2, 1, 1, [1]),
    ElementaryPNested(3, 1, 0, [1]),
    ElementaryPNested(2, 1, -1, [2]),
    ElementaryPNested(2, 1, 0, [1, -1]),
    ElementaryPNested(2, 3, 3, [Fraction(-1, 7), Fraction(8, 7)]),
    ElementaryPNested(5, 1, Fraction(-1, 4), [Fraction(1, 4)]),
    ElementaryPNested(3, 2, 0, [2, 1]),
]


def test_membership_examples():
    assert 22 in NESTED_PAIR and 11 not in NESTED_PAIR
    assert 2 in HALF_THREE and 5 in HALF_THREE and 3 not in HALF_THREE
    assert contains(POW2, 1024) and not contains(POW2, 1023)


def test_integrality_is_checked():
    with pytest.raises(ValueError):
        ElementaryPNested(2, 1, Fraction(1, 2), [Fraction(1, 2)])  # 3/2 at k = 1
    with pytest.raises(ValueError):
        ElementaryPNested(2, 1, Fraction(1, 3), [Fraction(2, 3)])  # 5/3 at k = 1
    assert ElementaryPNested(2, 2, Fraction(-1, 3), [Fraction(1, 3)]).is_integral()  # (4^k - 1)/3
    assert ElementaryPNested(2, 1, Fraction(1, 3), [Fraction(2, 3)], check=False).brute_members(0, 100) == {
        (1 + 2 ** (k + 1)) // 3 for k in range(0, 8, 2) if (1 + 2 ** (k + 1)) // 3 <= 100
    }


@pytest.mark.parametrize("part", CORPUS, ids=str)
def test_dfa_matches_definition(part):
    truth = nested_members(part.p, part.ell, part.a0, part.coeffs, 4096)
    assert {z for z in range(4097) if part.contains(z)} == truth
    neg = nested_members(part.p, part.ell, part.a0, part.coeffs, -1, lo=-4096)
    assert {z for z in range(-4096, 0) if part.contains(z)} == neg


@pytest.mark.parametrize("part", CORPUS, ids=str)
def test_brute_members_agree_with_oracle(part):
    assert part.brute_members(-500, 500) == nested_members(part.p, part.ell, part.a0, part.coeffs, 500, lo=-500)


def test_progression_dfa_examples():
    d = to_dfa(ProgressionZ(3, 0), 2)
    assert d.accepts(6) and not d.accepts(4)
    assert str(ProgressionZ(12, 9)) == "12Z+9" and str(ProgressionZ(1, 5)) == "Z"


def test_intersections():
    A = PNormalN(2, 0, frozenset(), PNormalZ(2, [POW2]))
    same = intersect_same_p(A, A)
    assert same.enumerate_up_to(10**4) == A.enumerate_up_to(10**4)
    B = PNormalN(2, 0, frozenset(), PNormalZ(2, [ProgressionZ(4, 1)]))
    assert intersect_same_p(A, B).enumerate_up_to(10**4) == [1]
    C = PNormalN(2, 0, frozenset(), PNormalZ(2, [ProgressionZ(3, 0)]))
    D = PNormalN(2, 0, frozenset(), PNormalZ(2, [ProgressionZ(4, 0)]))
    CD = intersect_same_p(C, D)
    assert str(CD.tail) == "12Z"
    assert intersect_same_p(C.tail.dfa, D.tail.dfa).same_set(ProgressionZ(12, 0).dfa_for(2))
    E = PNormalN(2, 0, frozenset(), PNormalZ(2, [ProgressionZ(8, 5)]))
    assert is_empty(intersect_same_p(A, E))


@given(st.sampled_from(range(len(CORPUS))), st.integers(1, 9), st.integers(0, 8), st.integers(0, 6))
def test_product_membership_is_conjunction(i, m, o, threshold):
    part = CORPUS[i]
    p = part.p
    X = PNormalN(p, 0, frozenset(), PNormalZ(p, [part]))
    Y = PNormalN(p, threshold, frozenset(z for z in range(threshold) if z % 2), PNormalZ(p, [ProgressionZ(m, o)]))
    Z = intersect_same_p(X, Y)
    for z in range(0, 10**4 + 1, 7):
        assert Z.contains(z) == (X.contains(z) and Y.contains(z))
    assert Z.dfa.enumerate_up_to(2000) == [z for z in range(2001) if X.contains(z) and Y.contains(z)]


def test_normalize_succinct_examples():
    assert str(normalize_succinct_z(2, ElementaryPNested(3, 1, 0, [1]))) == "2Z+1"
    assert str(normalize_succinct_z(3, ElementaryPNested(2, 1, 1, [1]))) == "3Z ∪ 3Z+2"
    assert {x.offset for x in normalize_succinct_z(1, NESTED_PAIR).parts} == {0}


@pytest.mark.parametrize("a", [1, 2, 3, 5, 6, 12])
@pytest.mark.parametrize("part", CORPUS[:6], ids=str)
def test_normalize_succinct_membership(a, part):
    cosets = normalize_succinct_z(a, part)
    members = nested_members(part.p, part.ell, part.a0, part.coeffs, 300, lo=-300)
    residues = {z % a for z in members}
    # every residue of D mod a appears, and no other
    assert {x.offset for x in cosets.parts} == residues
    for z in range(-10**4, 10**4 + 1, 13):
        assert cosets.contains(z) == (z % a in residues)


def test_enumeration_and_emptiness():
    assert enumerate_up_to(PNormalZ(2, [NESTED_PAIR]), 30) == [7, 10, 22, 25]
    assert is_empty(empty_n(2)) and not is_empty(full_n(2))
    s = PNormalN(2, 5, frozenset({0, 3}), PNormalZ(2, [POW2]))
    assert s.enumerate_up_to(40) == [0, 3, 8, 16, 32]
    assert s.min_member() == 0
    assert PNormalN(2, 5, frozenset(), PNormalZ(2, [POW2])).min_member() == 8


def test_periodic_sets():
    assert minimal_period(12, [0, 3, 6, 9]) == (3, [0])
    assert str(periodic_set(2, 6, [0, 3])) == "3Z"
    assert str(periodic_set(2, 4, [])) == "∅"


def test_json_round_trip():
    s = PNormalN(3, 4, frozenset({1}), PNormalZ(3, [HALF_THREE, ProgressionZ(9, 4)]))
    t = PNormalN.from_json(s.to_json())
    assert [t.contains(z) for z in range(500)] == [s.contains(z) for z in range(500)]
    u = PNormalN(2, 0, frozenset(), POW2.dfa)
    assert isinstance(PNormalN.from_json(u.to_json()).tail, DigitDFA)
