import itertools

import numpy as np
import pytest

from otikit.partitions import multinomial, partitions_of, stability, subtract_row
from otikit.permsets import (
    InducedGSet, OrderExceedsCap, PermGroup, compose, count_contingency_tables,
    elem_abelian_transitive, first_block_embed, fixed_points, from_cycles,
    last_block_embed, orbit_count, orbit_young_type, orbits, p_cycle_subgroup, perm_order,
    product_gset, symmetric_group, tabloids, to_cycles, young_subgroup, young_type_of_point,
)


def test_group_examples():
    a = elem_abelian_transitive(2, 2, 4)
    assert [to_cycles(g) for g in a.gens] == ["(1,2)(3,4)", "(1,3)(2,4)"]
    assert a.order == 4 and a.is_abelian()
    assert all(perm_order(g) == 2 for g in a.gens)
    assert orbit_count(a, tabloids(4, (1, 1, 1, 1)).restrict(symmetric_group(4))) == 6
    c = p_cycle_subgroup(5, 5)
    assert to_cycles(c.gens[0]) == "(1,2,3,4,5)" and c.order == 5
    assert young_subgroup((2, 2), 4).order == 4
    assert to_cycles(p_cycle_subgroup(6, 3).gens[0]) == "(4,5,6)"


def test_enumerate():
    s3 = PermGroup(3, [from_cycles([(1, 2)], 3), from_cycles([(1, 2, 3)], 3)])
    assert len(s3.enumerate().elements) == 6
    a4 = PermGroup(4, [from_cycles([(1, 2), (3, 4)], 4), from_cycles([(1, 2, 3)], 4)])
    assert a4.order == 12
    for g in a4.elements:
        assert a4.eval_word(a4.word(g)) == g
    with pytest.raises(OrderExceedsCap):
        symmetric_group(8).enumerate(cap=10000)


def test_bubble_words():
    s5 = symmetric_group(5)
    for g in itertools.permutations(range(5)):
        assert s5.eval_word(s5.word(g)) == g
    y = young_subgroup((3, 2), 5)
    g = from_cycles([(1, 3), (4, 5)], 5)
    assert y.contains(g) and y.eval_word(y.word(g)) == g
    assert not y.contains(from_cycles([(3, 4)], 5))
    lb = last_block_embed(5, 3)
    assert lb.contains(from_cycles([(3, 5)], 5)) and not lb.contains(from_cycles([(2, 3)], 5))


def test_tabloid_examples():
    t = tabloids(4, (2, 2))
    assert t.size == 6
    assert tabloids(5, (5,)).size == 1
    t3 = tabloids(3, (2, 1))
    assert t3.size == 3
    # S_3 on Tab^(2,1) is the natural action on the singleton row
    s3 = t3.group
    for g in s3.enumerate().elements:
        act = t3.perm_action(g)
        for i in range(3):
            single = t3.label(i)[1][0] - 1
            assert t3.label(act[i])[1][0] - 1 == g[single]


def test_tabloid_sizes_and_action_homomorphism():
    for n in range(1, 10):
        for lam in partitions_of(n):
            if n == 9 and len(lam) > 6:
                continue
            assert tabloids(n, lam).size == multinomial(lam)
    t = tabloids(5, (2, 2, 1))
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = tuple(rng.permutation(5))
        h = tuple(rng.permutation(5))
        assert np.array_equal(t.perm_action(compose(g, h)), t.perm_action(g)[t.perm_action(h)])
        assert np.array_equal(t.perm_action(g), super(type(t), t).perm_action(g))


def test_fixed_points_examples():
    t = tabloids(4, (2, 2))
    h = PermGroup(4, [from_cycles([(3, 4)], 4)])
    fp = fixed_points(h, t)
    assert sorted(fp.labels) == [((1, 2), (3, 4)), ((3, 4), (1, 2))]
    a = elem_abelian_transitive(2, 2, 4)
    assert fixed_points(a, tabloids(4, (1, 1, 1, 1))).size == 0
    for lam in partitions_of(5):
        assert len(orbits(symmetric_group(5), tabloids(5, lam))) == 1


def _predicted_sizes(lam, q):
    out = []
    for i in range(1, len(lam) + 1):
        nu = subtract_row(lam, i, q)
        if nu is not None:
            out.append(nu)
    return out


@pytest.mark.parametrize("p,r,nmax", [(2, 1, 7), (3, 1, 8), (2, 2, 8)])
def test_fixed_point_decomposition(p, r, nmax):
    q = p ** r
    for n in range(q, nmax + 1):
        resid = first_block_embed(n, n - q)
        for H in (elem_abelian_transitive(p, r, n), last_block_embed(n, q)):
            for lam in partitions_of(n):
                t = tabloids(n, lam)
                fp = fixed_points(H, t, commuting=resid)
                pred = _predicted_sizes(lam, q)
                assert fp.size == sum(multinomial(nu) for nu in pred)
                obs = orbits(resid, fp)
                types = sorted(young_type_of_point(fp, int(o[0]), len(o)) for o in obs)
                assert types == sorted(pred)
                assert (len(obs) == 1) == stability(lam, p, r).quasistable


def test_product_orbits_and_contingency():
    s4 = symmetric_group(4)
    x = product_gset(tabloids(4, (3, 1)), tabloids(4, (2, 2)))
    assert orbit_count(s4, x) == 2 == count_contingency_tables((3, 1), (2, 2))
    for lam in partitions_of(5):
        assert orbit_count(symmetric_group(5), product_gset(tabloids(5, (5,)), tabloids(5, lam))) == 1
    for lam, mu in itertools.product(list(partitions_of(5)), repeat=2):
        xy = product_gset(tabloids(5, lam), tabloids(5, mu))
        obs = orbits(symmetric_group(5), xy)
        assert len(obs) == count_contingency_tables(lam, mu)
        for o in obs:
            nu = orbit_young_type(xy, int(o[0]))
            assert len(o) == multinomial(nu)
            assert nu == young_type_of_point(xy, int(o[0]), len(o))


def test_orbit_young_type_examples():
    t = tabloids(4, (2, 2))
    xy = product_gset(t, t)
    a = t.index_of_label(((1, 2), (3, 4)))
    b = t.index_of_label(((1, 3), (2, 4)))
    assert orbit_young_type(xy, a * t.size + a) == (2, 2)
    assert orbit_young_type(xy, a * t.size + b) == (1, 1, 1, 1)
    pt = tabloids(4, (4,))
    assert orbit_young_type(product_gset(pt, tabloids(4, (3, 1))), 0) == (3, 1)


def test_induced_gset_is_tabloid_sum():
    s4, s5 = symmetric_group(4), symmetric_group(5)
    s4_in_5 = first_block_embed(5, 4)
    x = tabloids(4, (2, 2)).restrict(s4)
    # move the S_4-set to the copy of S_4 inside S_5 fixing point 5
    from otikit.permsets import GSet
    x5 = GSet(s4_in_5, x.actions)
    ind = InducedGSet(x5, s5)
    assert ind.size == 30
    types = sorted(young_type_of_point(ind, int(o[0]), len(o)) for o in orbits(s5, ind))
    assert types == [(2, 2, 1)]  # Ind M^lam = M^(lam,1)


def test_json_roundtrip_shape():
    t = tabloids(3, (2, 1))
    d = t.as_json()
    assert d["points"][0] == [[1, 2], [3]]
    assert len(d["actions"]) == 2
