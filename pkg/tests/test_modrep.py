import itertools

import numpy as np
import pytest

from otikit.exactla import Matrix, field_create, kernel_basis
from otikit.partitions import Partition, partitions_of
from otikit.permsets import (
    PermGroup, count_contingency_tables, elem_abelian_transitive, first_block_embed, from_cycles,
    orbit_count, product_gset, symmetric_group, tabloids,
)
from otikit.modrep import (
    AlgebraElement, GModule, NotEquivariant, act, direct_sum, hom_basis, induce, iso_probe,
    jucys_murphy, perm_module, regular_module, restrict, sign_twist, specht_module, tabloid_module,
    tensor, transfer, trivial_module,
)

GF2, GF3 = field_create(2), field_create(3)


def test_perm_module_examples():
    assert tabloid_module((4,), GF2).dim == 1
    assert tabloid_module((1, 1, 1), GF2).dim == 6
    m = tabloid_module((2, 2), GF2)
    t = m.gset
    for a, mat in zip(t.actions, m.gen_mats):
        for x in range(6):
            col = mat.a[:, x]
            assert col.sum() == 1 and col[a[x]] == 1


def test_specht_examples():
    assert specht_module((3,), GF3).dim == 1
    s21 = specht_module((2, 1), GF3)
    assert s21.dim == 2
    s11 = specht_module((1, 1), GF2)
    assert s11.dim == 1 and s11.gen_mats[0].is_identity()
    s11_3 = specht_module((1, 1), GF3)
    assert s11_3.gen_mats[0] == Matrix.scalar(GF3, 1, -1)


@pytest.mark.parametrize("lam", [(3, 2), (2, 2, 1), (4, 1), (3, 1, 1), (2, 1, 1, 1)])
def test_specht_is_submodule(lam):
    for f in (GF2, GF3):
        s = specht_module(lam, f)
        assert s.dim == Partition(lam).num_standard_tableaux()
        m = s.parent
        inc = s.embedding.basis.T  # columns: basis of S inside M
        for a, b in zip(m.gen_mats, s.gen_mats):
            assert a @ inc == inc @ b


def test_restrict_induce():
    s4, s3 = symmetric_group(4), first_block_embed(4, 3)
    m = tabloid_module((2, 2), GF2)
    r = restrict(m, s3)
    assert r.dim == 6
    # restricted G-set splits as Tab^(2,1) + Tab^(1,2) ~ two copies of M^(2,1)
    from otikit.permsets import orbits, young_type_of_point
    types = sorted(young_type_of_point(r.gset, int(o[0]), len(o)) for o in orbits(s3, r.gset))
    assert types == [(2, 1), (2, 1)]
    triv = trivial_module(s3, GF3)
    ind = induce(triv, s4)
    assert ind.dim == 4
    assert iso_probe(ind, tabloid_module((3, 1), GF3)).certified_iso
    dense = specht_module((2, 1, 1), GF3)
    assert induce(restrict(dense, s3), s4).dim == 4 * dense.dim


def test_heisenberg_dimension_shadow():
    for lam in partitions_of(4):
        m = specht_module(lam, GF2)
        n = 4
        s_up = symmetric_group(n + 1)
        s_n_in = first_block_embed(n + 1, n)
        s_down = first_block_embed(n, n - 1)
        m_up = GModule(s_n_in, GF2, m.gen_mats, check=False, dim=m.dim)
        res_ind = restrict(induce(m_up, s_up), s_n_in).dim
        ind_res = induce(restrict(m, s_down), symmetric_group(n)).dim
        assert res_ind - ind_res == m.dim


def test_act_examples():
    m = tabloid_module((2, 2), GF2)
    assert act(m, AlgebraElement.group_element(tuple(range(4)))).is_identity()
    g34 = from_cycles([(3, 4)], 4)
    z = act(m, AlgebraElement([(1, g34), (-1, tuple(range(4)))]))
    assert (z @ z).is_zero() and z.rank() == 2
    for n in range(2, 6):
        triv = tabloid_module((n,), GF3)
        assert act(triv, jucys_murphy(n)) == Matrix.scalar(GF3, 1, n - 1)


def test_za_commutes_with_residual():
    n, p, r = 6, 2, 2
    a = elem_abelian_transitive(p, r, n)
    gf4 = field_create(2, 2)
    m = tabloid_module((4, 2), gf4)
    terms = []
    for coef, s in zip(gf4.power_basis(), a.gens):
        terms += [(coef, s), (-coef, tuple(range(n)))]
    z = act(m, AlgebraElement(terms))
    resid = first_block_embed(n, n - 4)
    for s in resid.gens:
        ms = m.matrix(s)
        assert ms @ z == z @ ms


def test_hom_examples():
    x, y = tabloid_module((3, 1), GF2), tabloid_module((2, 2), GF2)
    assert hom_basis(x, y).dim == 2 == hom_basis(x, y, method="dense").dim
    for lam in partitions_of(4):
        assert hom_basis(tabloid_module((4,), GF3), tabloid_module(lam, GF3)).dim == 1
    s = specht_module((2, 2), GF3)
    assert hom_basis(s, s).dim >= 1


def test_hom_dim_equals_orbit_count():
    # dense solve versus orbit counting versus contingency tables
    for n in range(1, 6):
        for lam, mu in itertools.product(list(partitions_of(n)), repeat=2):
            for f in (GF2, GF3):
                x, y = tabloid_module(lam, f), tabloid_module(mu, f)
                oc = orbit_count(symmetric_group(n), product_gset(x.gset, y.gset))
                assert oc == count_contingency_tables(lam, mu)
                if x.dim * y.dim <= 400:
                    assert hom_basis(x, y, method="dense").dim == oc
                assert hom_basis(x, y).dim == oc


def test_hom_orbit_basis_intertwines():
    x, y = tabloid_module((4, 2), GF3), tabloid_module((3, 2, 1), GF3)
    h = hom_basis(x, y)
    for b in h.basis:
        for a, c in zip(x.gen_mats, y.gen_mats):
            assert b @ a == c @ b


def test_transfer():
    s4 = symmetric_group(4)
    s3 = first_block_embed(4, 3)
    m = tabloid_module((2, 2), GF3)
    ident = Matrix.identity(GF3, 6)
    assert transfer(ident, s3, s4, m, m) == Matrix.scalar(GF3, 6, 4)
    rs = restrict(m, s3)
    hb = hom_basis(rs, rs)
    rng = np.random.default_rng(5)
    from otikit.permsets import coset_transversal, compose
    trans = coset_transversal(s4, s3)
    alt = [compose(t, from_cycles([(1, 2, 3)], 4)) for t in trans]
    for _ in range(5):
        f = hb.combination(rng.integers(0, 3, size=hb.dim))
        assert transfer(f, s3, s4, m, m) == transfer(f, s3, s4, m, m, transversal=alt)
    bad = Matrix.from_ints(GF3, [[1 if (i, j) == (0, 1) else 0 for j in range(6)] for i in range(6)])
    with pytest.raises(NotEquivariant):
        transfer(bad, s3, s4, m, m)


def test_iso_probe_examples():
    s2 = symmetric_group(2)
    x = tabloid_module((2, 1), GF2)
    assert iso_probe(x, x).certified_iso
    triv = trivial_module(s2, GF3)
    sgn = sign_twist(triv)
    v = iso_probe(triv, sgn)
    assert v.kind == "CertifiedNonIso" and "trace" in v.invariant
    # M^(2) + M^(2) against the module on fixed tabloids of M^(2,2) under (34)
    from otikit.permsets import fixed_points
    t = tabloids(4, (2, 2))
    h = PermGroup(4, [from_cycles([(3, 4)], 4)])
    fp = fixed_points(h, t, commuting=first_block_embed(4, 2))
    s2_in_4 = first_block_embed(4, 2)
    lhs = direct_sum([tabloid_module((2,), GF2)] * 2)
    lhs = GModule(s2_in_4, GF2, lhs.gen_mats, check=False, dim=2)
    v = iso_probe(lhs, perm_module(fp, GF2), trials=16)
    assert v.certified_iso


def test_sign_twist_and_tensor():
    m = specht_module((2, 1), GF3)
    assert sign_twist(sign_twist(m)).gen_mats == m.gen_mats
    t = tensor(m, m)
    assert t.dim == 4
    reg = tabloid_module((1, 1), GF3)
    tt = tensor(reg, reg)
    assert tt.dim == 4
    # (12) swaps both factors: eigenvalue 1 with multiplicity 2 and -1 with multiplicity 2
    g = tt.gen_mats[0]
    assert kernel_basis(g - Matrix.identity(GF3, 4)).dim == 2
    assert kernel_basis(g + Matrix.identity(GF3, 4)).dim == 2
    assert iso_probe(tt, direct_sum([reg, reg])).certified_iso


def test_regular_module_is_free():
    from otikit.modrep import free_rank_check
    a = elem_abelian_transitive(2, 2, 4)
    reg = regular_module(a, GF2)
    assert free_rank_check(reg, a)
    assert not free_rank_check(trivial_module(a, GF2), a)


def test_relation_spot_check_rejects_bad_module():
    from otikit.modrep import NotARepresentation
    s3 = symmetric_group(3)
    # s1 -> swap, s2 -> identity violates the braid relation
    swap = Matrix.from_ints(GF3, [[0, 1], [1, 0]])
    with pytest.raises(NotARepresentation):
        GModule(s3, GF3, [swap, Matrix.from_ints(GF3, [[1, 1], [0, 1]])])
