"""
Modules over k[x]/x^p given by a nilpotent operator, and the linear CF functors.

phi_i(V) = (ker z ∩ im z^{i-1}) / (ker z ∩ im z^i) picks out the Jordan
blocks of size i; the Brauer construction is ker z / im z^{p-1}.  Every
operator that commutes with z is pushed down to each subquotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from otikit.exactla import (
    Matrix, Subspace, field_create, image_basis, induced_map, induced_operator, intersect, is_prime,
    kernel_basis, quotient, random_invertible, rref, vstack,
)
from otikit.partitions import Partition
from otikit.permsets import compose, perm_order
from otikit.registry import op


class NotNilpotentOfOrderP(ValueError):
    pass


class NotCommuting(ValueError):
    pass


class NotElementaryAbelian(ValueError):
    pass


class NonGenericTuple(ValueError):
    pass


class NotExact(ValueError):
    pass


VARIANTS = ("SS", "Phi1", "Brauer")


class NilOperator:
    def __init__(self, z, p, commuting=None, check=True):
        self.z = z
        self.p = p
        self.commuting = dict(commuting or {})
        self.field = z.field
        if check:
            if z.rows != z.cols:
                raise NotNilpotentOfOrderP("z is not square")
            if not z.power(p).is_zero():
                raise NotNilpotentOfOrderP("z^%d != 0" % p)
            for name, c in self.commuting.items():
                if not (c @ z == z @ c):
                    raise NotCommuting(name)

    @property
    def dim(self):
        return self.z.rows

    @classmethod
    def from_jordan(cls, field, p, sizes):
        """Direct sum of Jordan blocks J_s (z e_0 = 0, z e_{j} = e_{j-1})."""
        d = sum(sizes)
        z = np.zeros((d, d), dtype=np.int64)
        off = 0
        for s in sizes:
            for j in range(1, s):
                z[off + j - 1, off + j] = 1
            off += s
        return cls(Matrix(field, z), p)


def cyclic_generator(field, p, sizes):
    """sigma = 1 + z for a direct sum of Jordan blocks: a C_p-module."""
    op_ = NilOperator.from_jordan(field, p, sizes)
    return op_.z + Matrix.identity(field, op_.dim)


def _rank_sequence(z, p):
    seq = [z.rows]
    cur = Matrix.identity(z.field, z.rows)
    for _ in range(p + 1):
        cur = cur @ z
        seq.append(cur.rank())
    return seq


@op("nilcyc.jordan_type")
def jordan_type(nop):
    z, p = nop.z, nop.p
    if not z.power(p).is_zero():
        raise NotNilpotentOfOrderP("z^%d != 0" % p)
    r = _rank_sequence(z, p)
    parts = []
    for j in range(1, p + 1):
        mult = r[j - 1] - 2 * r[j] + r[j + 1]
        parts += [j] * mult
    return Partition(sorted(parts, reverse=True))


@dataclass
class PhiComponent:
    index: int
    dim: int
    induced: dict
    quotient: object = None

    def as_json(self):
        return {"index": self.index, "dim": self.dim}


def _images(z, p):
    """im z^0 (everything), im z^1, ..., im z^p."""
    f, d = z.field, z.rows
    out = [Subspace.full(f, d)]
    cur = Matrix.identity(f, d)
    for _ in range(p):
        cur = cur @ z
        out.append(image_basis(cur))
    return out


def _component(nop, s, t, index):
    q = quotient(nop.dim, s, t)
    induced = {name: induced_operator(c, s, t, q) for name, c in nop.commuting.items()}
    return PhiComponent(index, q.dim, induced, q)


@op("nilcyc.phi_components")
def phi_components(nop):
    """phi_1 .. phi_{p-1} with commuting operators induced on each."""
    z, p = nop.z, nop.p
    if not z.power(p).is_zero():
        raise NotNilpotentOfOrderP("z^%d != 0" % p)
    for name, c in nop.commuting.items():
        if not (c @ z == z @ c):
            raise NotCommuting(name)
    ker = kernel_basis(z)
    ims = _images(z, p)
    cap = [intersect(ker, im) for im in ims]
    return [_component(nop, cap[i - 1], cap[i], i) for i in range(1, p)]


@dataclass
class CFResult:
    variant: str
    components: dict  # index -> PhiComponent

    def dims(self):
        return {i: c.dim for i, c in self.components.items()}

    def is_zero(self):
        return all(c.dim == 0 for c in self.components.values())

    def total_weighted_dim(self, p):
        if self.variant == "SS":
            return sum(i * c.dim for i, c in self.components.items()) % p
        return sum(c.dim for c in self.components.values()) % p


@op("nilcyc.cf_apply")
def cf_apply(nop, variant):
    """SS: all phi_i; Phi1: ker z/(ker z ∩ im z); Brauer: ker z / im z^{p-1}."""
    if variant not in VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    z, p = nop.z, nop.p
    if variant == "SS":
        comps = phi_components(nop)
        return CFResult("SS", {c.index: c for c in comps})
    if not z.power(p).is_zero():
        raise NotNilpotentOfOrderP("z^%d != 0" % p)
    for name, c in nop.commuting.items():
        if not (c @ z == z @ c):
            raise NotCommuting(name)
    ker = kernel_basis(z)
    if variant == "Phi1":
        t = intersect(ker, image_basis(z))
    else:
        t = image_basis(z.power(p - 1))
    return CFResult(variant, {1: _component(nop, ker, t, 1)})


# -- shifted cyclic subgroups ------------------------------------------------

def is_fp_independent(field, tuple_a):
    """a_1..a_r linearly independent over GF(p) inside GF(p^k)."""
    rows = [field.coeffs(field(a).code) for a in tuple_a]
    return Matrix.from_ints(field_create(field.p), rows).rank() == len(rows)


def generic_tuple(field, r, index=0, seed=0):
    """index 0: the power basis 1, t, ..., t^{r-1}; otherwise a seeded random GF(p)-independent tuple."""
    if field.k < r:
        raise NonGenericTuple("GF(%d^%d) cannot hold %d independent coordinates" % (field.p, field.k, r))
    if index == 0:
        return tuple(field.power_basis()[:r])
    rng = np.random.default_rng([seed, index])
    while True:
        a = tuple(field.element(int(c)) for c in rng.integers(1, field.q, size=r))
        if is_fp_independent(field, a):
            return a


@op("nilcyc.shifted_cyclic_operator")
def shifted_cyclic_operator(module, group_a, a, require_generic=False, commuting_group=None):
    """z_a = sum a_i (rho(sigma_i) - 1) with the residual generators attached."""
    f = module.field
    gens = group_a.gens
    if len(a) != len(gens):
        raise ValueError("tuple length %d != rank %d" % (len(a), len(gens)))
    orders = {perm_order(g) for g in gens}
    if len(orders) != 1 or not is_prime(next(iter(orders))):
        raise NotElementaryAbelian("generator orders %r" % (sorted(orders),))
    for g, h in itertools.combinations(gens, 2):
        if compose(g, h) != compose(h, g):
            raise NotElementaryAbelian("generators do not commute")
    p = orders.pop()
    a = tuple(f(x) for x in a)
    if require_generic and not is_fp_independent(f, a):
        raise NonGenericTuple(a)
    d = module.dim
    z = Matrix.zeros(f, d, d)
    ident = Matrix.identity(f, d)
    for c, g in zip(a, gens):
        if c:
            z = z + (module.matrix(g) - ident).scale(c)
    commuting = {}
    if commuting_group is not None:
        for i, g in enumerate(commuting_group.gens):
            commuting["s%d" % (i + 1)] = module.matrix(g)
    return NilOperator(z, p, commuting)


# -- split exactness ---------------------------------------------------------

@dataclass
class SplitReport:
    injective: bool
    surjective: bool
    exact: bool
    split: bool

    @property
    def agree(self):
        return len({self.injective, self.surjective, self.exact, self.split}) == 1

    def as_json(self):
        return {"injective": self.injective, "surjective": self.surjective,
                "exact": self.exact, "split": self.split, "agree": self.agree}


def _phi_total_map(f_map, src, dst):
    """Block-diagonal map phi(src) -> phi(dst) over all components i = 1..p-1."""
    blocks = []
    for cs, cd in zip(src, dst):
        blocks.append(induced_map(f_map, cs.quotient, cd.quotient))
    return blocks


@op("nilcyc.split_exactness_check")
def split_exactness_check(x, y, zq, inc, proj):
    """For 0 -> X --inc--> Y --proj--> Z -> 0 of k[z]/z^p-modules, the four split conditions."""
    if not (inc @ x.z == y.z @ inc) or not (proj @ y.z == zq.z @ proj):
        raise NotExact("maps are not module maps")
    if inc.rank() != x.dim or proj.rank() != zq.dim or not (proj @ inc).is_zero() \
            or x.dim + zq.dim != y.dim:
        raise NotExact("sequence is not short exact")
    px, py, pz = phi_components(x), phi_components(y), phi_components(zq)
    fi = _phi_total_map(inc, px, py)
    fp = _phi_total_map(proj, py, pz)
    injective = all(m.rank() == m.cols for m in fi)
    surjective = all(m.rank() == m.rows for m in fp)
    exact = injective and surjective and all(
        (b @ a).is_zero() and a.rank() + b.rank() == a.rows for a, b in zip(fi, fp))
    # split iff a module retraction r: Y -> X exists with r inc = 1 and r z_Y = z_X r
    split = _has_retraction(x, y, inc)
    return SplitReport(injective, surjective, exact, split)


def _has_retraction(x, y, inc):
    f = y.field
    dx, dy = x.dim, y.dim
    n = dx * dy
    # unknown r (dx x dy), row-major vec; equations r inc = I and r zY - zX r = 0
    rows = []
    rhs = []
    ident = np.eye(dx, dtype=np.int64)
    for i in range(dx):
        for j in range(dx):
            row = np.zeros(n, dtype=np.int64)
            row[i * dy:(i + 1) * dy] = inc.a[:, j]
            rows.append(row)
            rhs.append(ident[i, j])
    zy, zx = y.z.a, x.z.a
    for i in range(dx):
        for j in range(dy):
            row = np.zeros(n, dtype=np.int64)
            row[i * dy:(i + 1) * dy] = zy[:, j]
            for k in range(dx):
                row[k * dy + j] = f.sub(row[k * dy + j], zx[i, k])
            rows.append(row)
            rhs.append(0)
    a = np.array(rows, dtype=np.int64)
    aug = Matrix(f, np.hstack([a, np.array(rhs, dtype=np.int64)[:, None]]))
    _, rank, piv = rref(aug)
    return n not in piv


def random_ses(field, p, d, rng):
    """Random 0 -> X -> Y -> Y/X -> 0 with Y = P J P^{-1} and X a cyclic submodule."""
    sizes = []
    left = d
    while left:
        s = int(rng.integers(1, min(p, left) + 1))
        sizes.append(s)
        left -= s
    y0 = NilOperator.from_jordan(field, p, sizes)
    pm = random_invertible(field, d, rng)
    zy = pm @ y0.z @ pm.inverse()
    # X = span of z-orbits of a few random vectors (a submodule)
    k = int(rng.integers(1, 3))
    seeds = Matrix(field, rng.integers(0, field.q, size=(k, d)))
    vecs = [seeds]
    cur = seeds
    for _ in range(p):
        cur = cur @ zy.T
        vecs.append(cur)
    xs = Subspace(field, d, vstack(vecs))
    if xs.dim == 0 or xs.dim == d:
        return None
    inc = xs.basis.T  # columns
    zx = xs.coords(xs.basis @ zy.T).T
    q = quotient(d, Subspace.full(field, d), xs)
    proj = q.project.T  # ambient coords are S-coords here
    zz = induced_map(zy, q, q)
    return NilOperator(zx, p), NilOperator(zy, p), NilOperator(zz, p), inc, proj


def random_nilpotent(field, p, d, rng):
    sizes = []
    left = d
    while left:
        s = int(rng.integers(1, min(p, left) + 1))
        sizes.append(s)
        left -= s
    base = NilOperator.from_jordan(field, p, sizes)
    pm = random_invertible(field, d, rng) if d else Matrix.identity(field, 0)
    return NilOperator(pm @ base.z @ pm.inverse(), p), Partition(sorted(sizes, reverse=True))


def cyclic_tensor(field, p, i, j):
    """M_i ⊗ M_j with sigma acting diagonally; returns the nilpotent sigma⊗sigma - 1."""
    si = cyclic_generator(field, p, [i])
    sj = cyclic_generator(field, p, [j])
    s = si.kron(sj)
    return NilOperator(s - Matrix.identity(field, i * j), p)
