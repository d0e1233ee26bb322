from math import gcd

import pytest
from hypothesis import given, strategies as st

from trigonal_sigma.semigroup import (
    SemigroupError, build_semigroup, frobenius_data, gaps_from_diagram,
    is_symmetric, is_telescopic, is_telescopic_any_order, monomial_relations, u_weights,
    young_diagram,
)


@st.composite
def admissible(draw):
    r = draw(st.integers(0, 6))
    s = draw(st.integers(r + 1, r + 9))
    if r == 0:
        s = s if s % 3 else s + 1
        s = max(s, 2)
    elif (r - s) % 3 == 0:
        s += 1
    return r, s


def brute_gaps(gens):
    # Frobenius number is below the product of the two smallest generators
    bound = gens[0] * gens[1]
    member = [True] + [False] * bound
    for n in range(1, bound + 1):
        member[n] = any(n >= a and member[n - a] for a in gens)
    return tuple(n for n in range(1, bound + 1) if not member[n])


@given(admissible())
def test_genus_and_gaps(rs):
    r, s = rs
    H = build_semigroup(r, s)
    assert H.genus == r + s - 1
    assert H.gaps == brute_gaps(H.generators)
    assert all(not H.contains(l) for l in H.gaps)
    assert H.contains(H.conductor) and all(H.contains(n) for n in range(H.conductor, H.conductor + 10))


@given(admissible())
def test_diagram_roundtrip(rs):
    H = build_semigroup(*rs)
    D = young_diagram(H)
    assert list(D.rows) == sorted(D.rows, reverse=True)
    assert gaps_from_diagram(D.rows) == H.gaps
    # u weights are the gaps in decreasing order
    assert u_weights(D.rows) == tuple(reversed(H.gaps))


@given(admissible())
def test_telescopic_and_symmetric(rs):
    r, s = rs
    H = build_semigroup(r, s)
    # two generators always telescope; the genuine triples never do
    seq = (3, 2 * r + s, r + 2 * s) if r else (3, s)
    assert is_telescopic_any_order(seq) == (r == 0)
    assert is_symmetric(H) == (r == 0)
    assert is_telescopic(seq) <= is_symmetric(H)


def test_non_telescopic_example():
    assert not is_telescopic_any_order((4, 5, 6, 7))
    assert is_telescopic_any_order((4, 6, 5))


@given(admissible(), st.data())
def test_frobenius_hooks(rs, data):
    H = build_semigroup(*rs)
    D = young_diagram(H)
    g = H.genus
    k = data.draw(st.integers(0, g))
    F = frobenius_data(D, k)
    trunc = [x for x in D.rows[k:] if x > 0]
    assert F.N == sum(trunc)
    assert len(F.sharp) == F.rank
    assert all(k + 1 <= ell <= g for ell in F.sharp)
    assert len(set(F.sharp)) == len(F.sharp)
    if k == g:
        assert F.N == 0 and F.sharp == ()


def test_known_cases():
    H = build_semigroup(1, 2)
    assert H.generators == (3, 4, 5)
    assert H.gaps == (1, 2)
    assert young_diagram(H).rows == (1, 1)
    F = frobenius_data(young_diagram(H), 1)
    assert F.N == 1 and F.sharp == (2,)
    H = build_semigroup(2, 3)
    assert H.generators == (3, 7, 8) and H.gaps == (1, 2, 4, 5)
    assert young_diagram(H).rows == (2, 2, 1, 1)
    assert build_semigroup(0, 2).generators == (2, 3)


@pytest.mark.parametrize("r,s", [(2, 1), (1, 4), (0, 3), (0, 1), (-1, 2), (1.0, 2)])
def test_rejects_bad_parameters(r, s):
    with pytest.raises(SemigroupError):
        build_semigroup(r, s)


@given(admissible(), st.integers(1, 5))
def test_monomial_relations_are_weight_homogeneous(rs, t):
    r, s = rs
    r_hat, s_hat = 2 * r + s, r + 2 * s
    for rel in monomial_relations(r, s):
        ws = rel.weights_of_terms(r_hat, s_hat)
        assert ws == [rel.weight] * len(ws)
        assert rel.evaluate(t ** 3, t ** r_hat, t ** s_hat) == 0
    assert gcd(3, r_hat) == 1 or r == 0
