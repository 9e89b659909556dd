import itertools
from math import factorial

import pytest

from otikit.partitions import (
    Partition, WeightMismatch, dominance_leq, kostka, multinomial, partitions_of, specht_vector,
    ssyt, stability, subtract_row,
)


def test_partition_basics():
    assert Partition("6,1,1") == (6, 1, 1)
    assert Partition("[]") == () and Partition("[]").n == 0
    assert str(Partition(())) == "[]"
    with pytest.raises(ValueError):
        Partition((1, 2))
    assert Partition((3, 1)).conjugate() == (2, 1, 1)
    assert [len(list(partitions_of(n))) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_dominance_examples():
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 1), (2, 2))
    assert dominance_leq((2, 1, 1), (2, 1, 1))
    with pytest.raises(WeightMismatch):
        dominance_leq((2,), (2, 1))


def test_subtract_row_examples():
    assert subtract_row((4, 1), 1, 2) == (2, 1)
    assert subtract_row((2, 2), 2, 2) == (2,)
    assert subtract_row((2, 1), 2, 2) is None
    assert subtract_row((3, 3, 1), 2, 3) == (3, 1)


def test_stability_examples():
    s = stability((6, 2), 2, 2)
    assert s.stable and s.quasistable
    assert not stability((5, 2, 1), 2, 2).stable
    for n in range(4, 10):
        s = stability((n,), 2, 2)
        assert s.stable and s.quasistable


def test_acceptance_stable_sets():
    stable8 = {lam for lam in partitions_of(8) if stability(lam, 2, 2).stable}
    assert stable8 == {(8,), (7, 1), (6, 2), (6, 1, 1)}
    stable7 = {lam for lam in partitions_of(7) if stability(lam, 3, 1).stable}
    assert stable7 == {(7,), (6, 1), (5, 2), (5, 1, 1)}


def _stable_by_hand(lam, q):
    # independent restatement: tail < q, and if n < 3q then 2*lam1 >= n + q
    n = sum(lam)
    tail = n - (lam[0] if lam else 0)
    if tail >= q:
        return False
    return n >= 3 * q or 2 * (lam[0] if lam else 0) >= n + q


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_stability_upward_closed_and_equivalence(p, r):
    q = p ** r
    for n in range(0, 11):
        parts = list(partitions_of(n))
        st = {lam: stability(lam, p, r) for lam in parts}
        for lam in parts:
            assert st[lam].stable == _stable_by_hand(lam, q)
            lam_plus = list(lam) or [0]
            lam_plus[0] += q
            assert st[lam].truncated == _stable_by_hand(lam_plus, q)
            if n >= 3 * q:
                assert st[lam].stable == st[lam].truncated
        for lam, mu in itertools.product(parts, repeat=2):
            if dominance_leq(lam, mu):
                if st[lam].stable:
                    assert st[mu].stable
                if st[lam].truncated:
                    assert st[mu].truncated


def test_kostka_examples():
    for n in range(1, 8):
        for lam in partitions_of(n):
            assert kostka((n,), lam) == 1
    assert kostka((2, 1), (1, 1, 1)) == 2
    assert len(ssyt((2, 1), (1, 1, 1))) == 2
    with pytest.raises(WeightMismatch):
        kostka((2, 1), (1, 1))


def test_kostka_matches_enumeration_and_compositions():
    for n in range(1, 7):
        for mu in partitions_of(n):
            for lam in partitions_of(n):
                k = kostka(mu, lam)
                assert k == len(ssyt(mu, lam))
                if not dominance_leq(lam, mu):
                    assert k == 0
                # content order is irrelevant
                assert kostka(mu, tuple(reversed(lam))) == k
    # content (1^n) counts standard tableaux
    for mu in partitions_of(7):
        assert kostka(mu, (1,) * 7) == mu.num_standard_tableaux()


def test_kostka_unitriangular():
    for n in range(1, 8):
        parts = list(partitions_of(n))
        for mu in parts:
            assert kostka(mu, mu) == 1
            for lam in parts:
                if lam != mu and kostka(mu, lam):
                    assert dominance_leq(lam, mu)


def test_specht_vector_examples():
    assert specht_vector((1, 1)) == {(2,): 1, (1, 1): 1}
    assert specht_vector((5,)) == {(5,): 1}
    assert specht_vector((2, 1)) == {(3,): 1, (2, 1): 1}
    # dimension check: dim M^lam = sum K_{mu lam} f^mu
    for lam in partitions_of(6):
        vec = specht_vector(lam)
        assert sum(k * Partition(mu).num_standard_tableaux() for mu, k in vec.items()) == multinomial(lam)


def test_multinomial():
    assert multinomial((2, 2)) == 6
    assert multinomial((3, 2, 1)) == factorial(6) // (6 * 2)
