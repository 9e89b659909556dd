import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from otikit.exactla import Matrix, field_create, random_invertible
from otikit.modrep import AlgebraElement, act, regular_module, tabloid_module
from otikit.nilcyc import (
    NilOperator, NonGenericTuple, NotNilpotentOfOrderP, cf_apply, cyclic_tensor, generic_tuple,
    is_fp_independent, jordan_type, phi_components, random_nilpotent, random_ses,
    shifted_cyclic_operator, split_exactness_check,
)
from otikit.partitions import Partition
from otikit.permsets import elem_abelian_transitive, first_block_embed, from_cycles

GF2, GF3, GF4, GF5 = field_create(2), field_create(3), field_create(2, 2), field_create(5)


def brute_jordan(z, p):
    """Block sizes from dim ker z^k, computed by exhaustive enumeration over GF(p)."""
    d = z.rows
    f = z.field
    kers = [0]
    cur = Matrix.identity(f, d)
    vecs = np.array(list(itertools.product(range(f.q), repeat=d)), dtype=np.int64).T
    for k in range(1, p + 1):
        cur = cur @ z
        img = f.matmul_codes(cur.a, vecs)
        count = int((~img.any(axis=0)).sum())
        kers.append(round(np.log(count) / np.log(f.q)))
    ge = [kers[k] - kers[k - 1] for k in range(1, p + 1)]  # blocks of size >= k
    parts = []
    for k in range(1, p + 1):
        nxt = ge[k] if k < p else 0
        parts += [k] * (ge[k - 1] - nxt)
    return Partition(sorted(parts, reverse=True))


def test_jordan_examples():
    assert jordan_type(NilOperator(Matrix.zeros(GF3, 4, 4), 3)) == (1, 1, 1, 1)
    for p in (2, 3, 5):
        f = field_create(p)
        sigma = Matrix.permutation(f, [(i + 1) % p for i in range(p)])
        assert jordan_type(NilOperator(sigma - Matrix.identity(f, p), p)) == (p,)
    t = cyclic_tensor(GF3, 3, 2, 2)
    assert jordan_type(t) == (3, 1) == brute_jordan(t.z, 3)
    with pytest.raises(NotNilpotentOfOrderP):
        NilOperator(Matrix.identity(GF2, 2), 2)


def test_jordan_matches_brute_force():
    rng = np.random.default_rng(2)
    for p, f in ((2, GF2), (3, GF3)):
        for _ in range(15):
            nop, sizes = random_nilpotent(f, p, int(rng.integers(1, 7)), rng)
            assert jordan_type(nop) == sizes == brute_jordan(nop.z, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_phi_picks_block_sizes(p):
    f = field_create(p)
    for j in range(1, p + 1):
        comps = phi_components(NilOperator.from_jordan(f, p, [j]))
        assert [c.dim for c in comps] == [1 if i == j else 0 for i in range(1, p)]
    free = phi_components(NilOperator.from_jordan(f, p, [p, p]))
    assert all(c.dim == 0 for c in free)


def test_phi_on_tabloid_module():
    m = tabloid_module((2, 2), GF2)
    g34 = from_cycles([(3, 4)], 4)
    z = act(m, AlgebraElement([(1, g34), (-1, tuple(range(4)))]))
    s2 = first_block_embed(4, 2)
    nop = NilOperator(z, 2, {"s1": m.matrix(s2.gens[0])})
    comps = phi_components(nop)
    assert comps[0].dim == 2
    assert comps[0].induced["s1"].is_identity()


def test_cf_variants():
    for p in (2, 3, 5):
        f = field_create(p)
        for j in range(1, p + 1):
            b = cf_apply(NilOperator.from_jordan(f, p, [j]), "Brauer")
            assert b.components[1].dim == (1 if j < p else 0)
    nop = NilOperator.from_jordan(GF3, 3, [1, 1, 3, 3, 1])
    assert cf_apply(nop, "Phi1").components[1].dim == 3


@pytest.mark.parametrize("p", [2, 3, 5])
def test_brauer_dim_is_sum_of_phi(p):
    f = field_create(p)
    rng = np.random.default_rng(p)
    for _ in range(100):
        nop, sizes = random_nilpotent(f, p, int(rng.integers(0, 9)), rng)
        ss = cf_apply(nop, "SS")
        br = cf_apply(nop, "Brauer")
        assert br.components[1].dim == sum(c.dim for c in ss.components.values())
        assert ss.components[1].dim == cf_apply(nop, "Phi1").components[1].dim
        for i, c in ss.components.items():
            assert c.dim == sizes.count(i)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_telescoping_congruence(p):
    f = field_create(p)
    rng = np.random.default_rng(100 + p)
    for _ in range(50):
        d = int(rng.integers(0, 11))
        nop, _ = random_nilpotent(f, p, d, rng)
        comps = phi_components(nop)
        assert sum(c.index * c.dim for c in comps) % p == d % p


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]))
def test_phi_conjugation_invariant(seed, p):
    f = field_create(p)
    rng = np.random.default_rng(seed)
    nop, _ = random_nilpotent(f, p, int(rng.integers(1, 8)), rng)
    g = random_invertible(f, nop.dim, rng)
    other = NilOperator(g @ nop.z @ g.inverse(), p)
    assert [c.dim for c in phi_components(nop)] == [c.dim for c in phi_components(other)]


def test_induced_operators_commute():
    # z on M_2 + M_2 + M_1 with a commuting automorphism; induced actions commute with each other
    f = GF3
    nop = NilOperator.from_jordan(f, 3, [2, 2, 1])
    ident = Matrix.identity(f, 5)
    swap = Matrix.permutation(f, [2, 3, 0, 1, 4])
    scal = Matrix.scalar(f, 5, 2)
    nop = NilOperator(nop.z, 3, {"swap": swap, "scal": scal, "one": ident})
    for c in phi_components(nop):
        a, b = c.induced["swap"], c.induced["scal"]
        assert a @ b == b @ a


def test_shifted_cyclic_examples():
    a = elem_abelian_transitive(2, 2, 4)
    reg = regular_module(a, GF4)
    gen = generic_tuple(GF4, 2)
    assert is_fp_independent(GF4, gen)
    assert jordan_type(shifted_cyclic_operator(reg, a, gen, require_generic=True)) == (2, 2)
    # k[A] is free over every nonzero shifted cyclic subalgebra, so even a = (1,1) sees (2,2)
    reg2 = regular_module(a, GF2)
    assert jordan_type(shifted_cyclic_operator(reg2, a, (1, 1))) == (2, 2)
    with pytest.raises(NonGenericTuple):
        shifted_cyclic_operator(reg2, a, (1, 1), require_generic=True)
    # induced from <s1>: not free, killed by generic and by (1,1), detected only by (1,0)
    from otikit.modrep import free_rank_check, induce, trivial_module
    from otikit.permsets import PermGroup
    ind = induce(trivial_module(PermGroup(4, [a.gens[0]]), GF2), a)
    assert not free_rank_check(ind, a)
    assert jordan_type(shifted_cyclic_operator(ind, a, (1, 1))) == (2,)
    assert jordan_type(shifted_cyclic_operator(ind, a, (1, 0))) == (1, 1)
    ind4 = induce(trivial_module(PermGroup(4, [a.gens[0]]), GF4), a)
    assert jordan_type(shifted_cyclic_operator(ind4, a, gen)) == (2,)
    c = elem_abelian_transitive(3, 1, 3)
    m = regular_module(c, GF3)
    z = shifted_cyclic_operator(m, c, (1,))
    assert z.z == m.gen_mats[0] - Matrix.identity(GF3, 3)


def test_generic_tuples_are_independent():
    gf8 = field_create(2, 3)
    for i in range(6):
        t = generic_tuple(gf8, 3, index=i, seed=4)
        assert is_fp_independent(gf8, t)
    with pytest.raises(NonGenericTuple):
        generic_tuple(GF2, 2)


def _ses_from_blocks(f, p, x_sizes, y_sizes, inc_cols, proj_rows):
    x = NilOperator.from_jordan(f, p, x_sizes)
    y = NilOperator.from_jordan(f, p, y_sizes)
    return x, y, Matrix.from_ints(f, inc_cols), Matrix.from_ints(f, proj_rows)


def test_split_examples():
    f = GF3
    # M_1 -> M_1 + M_2 -> M_2, split
    x = NilOperator.from_jordan(f, 3, [1])
    y = NilOperator.from_jordan(f, 3, [1, 2])
    z = NilOperator.from_jordan(f, 3, [2])
    inc = Matrix.from_ints(f, [[1], [0], [0]])
    proj = Matrix.from_ints(f, [[0, 1, 0], [0, 0, 1]])
    rep = split_exactness_check(x, y, z, inc, proj)
    assert rep.injective and rep.surjective and rep.exact and rep.split
    # 0 -> M_1 -> M_2 -> M_1 -> 0, non split
    for p in (2, 3, 5):
        fp = field_create(p)
        x = NilOperator.from_jordan(fp, p, [1])
        y = NilOperator.from_jordan(fp, p, [2])
        inc = Matrix.from_ints(fp, [[1], [0]])
        proj = Matrix.from_ints(fp, [[0, 1]])
        rep = split_exactness_check(x, y, x, inc, proj)
        assert not (rep.injective or rep.surjective or rep.exact or rep.split)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_split_conditions_agree(p):
    f = field_create(p)
    rng = np.random.default_rng(7 * p)
    seen = {True: 0, False: 0}
    done = 0
    while done < 60:
        data = random_ses(f, p, int(rng.integers(2, 9)), rng)
        if data is None:
            continue
        rep = split_exactness_check(*data)
        assert rep.agree
        seen[rep.split] += 1
        done += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tensor_matches_fusion(p):
    from otikit.verlinde import VerObject, from_jordan, tensor
    f = field_create(p)
    for i in range(1, p + 1):
        for j in range(1, p + 1):
            jt = jordan_type(cyclic_tensor(f, p, i, j))
            obj = from_jordan(jt, p)
            if i == p or j == p:
                assert obj.is_zero()
            else:
                assert obj == tensor(VerObject.simple(i, p), VerObject.simple(j, p))
