"""
Group representations given by one matrix per generator.

Vectors are columns: rho(g) v.  Permutation modules keep their G-set and
only materialise dense matrices on request, so large tabloid modules can
flow through the orbit-based code paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from otikit.exactla import (
    FieldMismatch, Matrix, Subspace, block_diag, field_create, kernel_basis,
)
from otikit.partitions import Partition
from otikit.permsets import (
    GSet, InducedGSet, NotASubgroupElement, ProductGSet, TabloidSet, compose,
    coset_transversal, inverse, orbit_labels, sign, tabloids, to_cycles,
)
from otikit.registry import op


class GroupMismatch(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


class NotAGroupElement(ValueError):
    pass


class NotARepresentation(ValueError):
    pass


RELATION_SPOT_CHECKS = 50


class GModule:
    def __init__(self, group, field, gens=None, label="", gset=None, check=True, dim=None):
        self.group = group
        self.field = field
        self.label = label
        self.gset = gset
        if gset is not None:
            if gset.group != group:
                raise GroupMismatch("G-set is over %s, module over %s" % (gset.group.name, group.name))
            self.dim = gset.size
            self._gens = None
        else:
            gens = list(gens)
            if len(gens) != group.ngens:
                raise NotARepresentation("need %d generator matrices" % group.ngens)
            self.dim = gens[0].rows if gens else (dim or 0)
            for m in gens:
                if m.field != field:
                    raise FieldMismatch((m.field, field))
                if m.shape != (self.dim, self.dim):
                    raise NotARepresentation("generator matrix of shape %r" % (m.shape,))
            self._gens = gens
            if check:
                self._check()

    def __repr__(self):
        kind = "perm" if self.is_perm else "dense"
        return "GModule(%s, %s, dim=%d, %s%s)" % (
            self.group.name, self.field, self.dim, kind, ", " + self.label if self.label else "")

    @property
    def is_perm(self):
        return self.gset is not None

    @property
    def gen_mats(self):
        if self._gens is None:
            self._gens = [Matrix.permutation(self.field, a) for a in self.gset.actions]
        return self._gens

    def _check(self):
        for m in self._gens:
            if self.dim and m.rank() != self.dim:
                raise NotARepresentation("generator matrix is singular")
        if self.dim > 64 or not self.group.ngens:
            return
        # two words for the same element must give the same matrix
        rng = np.random.default_rng(12345)
        for _ in range(RELATION_SPOT_CHECKS):
            length = int(rng.integers(1, 9))
            word = [int(i) for i in rng.integers(0, self.group.ngens, size=length)]
            g = self.group.eval_word(word)
            if self._word_matrix(word) != self._word_matrix(self.group.word(g)):
                raise NotARepresentation("relation fails for word %r" % (word,))

    def _word_matrix(self, word):
        out = Matrix.identity(self.field, self.dim)
        for i in word:
            out = out @ self._gens[i]
        return out

    def matrix(self, g):
        """rho(g) for any element of the group."""
        g = tuple(g)
        if self.is_perm:
            try:
                return Matrix.permutation(self.field, self.gset.perm_action(g))
            except NotASubgroupElement as exc:
                raise NotAGroupElement(str(exc))
        try:
            word = self.group.word(g)
        except NotASubgroupElement as exc:
            raise NotAGroupElement(str(exc))
        return self._word_matrix(word)

    def as_json(self):
        out = {
            "field": self.field.spec,
            "group": self.group.as_json(),
            "dim": self.dim,
            "label": self.label,
        }
        if self.is_perm:
            out["permutation_actions"] = [a.tolist() for a in self.gset.actions]
        else:
            out["matrices"] = [[[self.field.coeffs(c) if self.field.k > 1 else int(c) for c in row]
                                for row in m.a.tolist()] for m in self.gen_mats]
        return out


@dataclass
class AlgebraElement:
    terms: list  # (coefficient, permutation)

    @classmethod
    def group_element(cls, g, coeff=1):
        return cls([(coeff, tuple(g))])

    def __add__(self, other):
        return AlgebraElement(self.terms + other.terms)


def _coeff(field, c):
    return field(c)


def jucys_murphy(n):
    """sum_{i<n} (i n) in k[S_n]."""
    terms = []
    for i in range(n - 1):
        g = list(range(n))
        g[i], g[n - 1] = g[n - 1], g[i]
        terms.append((1, tuple(g)))
    return AlgebraElement(terms)


@op("modrep.act")
def act(m, a):
    """sum c_i rho(g_i)."""
    f = m.field
    out = np.zeros((m.dim, m.dim), dtype=np.int64)
    for c, g in a.terms:
        if not m.group.contains(g):
            raise NotAGroupElement(to_cycles(g))
        c = _coeff(f, c).code
        if m.is_perm:
            img = m.gset.perm_action(g)
            cols = np.arange(m.dim)
            out[img, cols] = f.add(out[img, cols], np.int64(c))
        else:
            out = f.add(out, f.mul(m.matrix(g).a, np.int64(c)))
    return Matrix(f, out)


# -- constructions -----------------------------------------------------------

@op("modrep.perm_module")
def perm_module(x, field, label=None):
    if label is None:
        label = "M^(%s)" % (x.shape,) if isinstance(x, TabloidSet) else "k[X]"
    return GModule(x.group, field, gset=x, label=label)


def tabloid_module(lam, field, n=None):
    lam = Partition(lam)
    n = lam.n if n is None else n
    return perm_module(tabloids(n, lam), field)


def regular_gset(group):
    elems = group.elements
    index = {g: i for i, g in enumerate(elems)}
    acts = [np.array([index[compose(s, g)] for g in elems], dtype=np.int64) for s in group.gens]
    return GSet(group, acts, labels=[to_cycles(g) for g in elems])


def regular_module(group, field):
    return GModule(group, field, gset=regular_gset(group), label="k[%s]" % group.name)


def trivial_module(group, field):
    return GModule(group, field, [Matrix.identity(field, 1) for _ in group.gens], label="1", check=False, dim=1)


def _polytabloid_rows(lam):
    """Standard tableaux of shape lam, as lists of rows of 0-based entries."""
    lam = Partition(lam)
    n = lam.n
    out = []

    def rec(k, filling):
        if k == n:
            out.append([[filling[(i, j)] for j in range(lam[i])] for i in range(len(lam))])
            return
        # place entry k in an addable corner of the current filled shape
        filled = {}
        for (i, j) in filling:
            filled[i] = filled.get(i, 0) + 1
        for i in range(len(lam)):
            j = filled.get(i, 0)
            if j < lam[i] and (i == 0 or filled.get(i - 1, 0) > j):
                filling[(i, j)] = k
                rec(k + 1, filling)
                del filling[(i, j)]

    rec(0, {})
    return out


@op("modrep.specht_module")
def specht_module(lam, field):
    """Span of standard polytabloids inside M^lam, on its echelon basis."""
    lam = Partition(lam)
    n = lam.n
    tab = tabloids(n, lam)
    f = field
    vecs = []
    for t in _polytabloid_rows(lam):
        cols = [[t[i][j] for i in range(len(lam)) if j < lam[i]] for j in range(lam[0] if lam else 0)]
        v = np.zeros(tab.size, dtype=np.int64)
        for perms in itertools.product(*[itertools.permutations(c) for c in cols]):
            sigma = list(range(n))
            for c, pc in zip(cols, perms):
                for a, b in zip(c, pc):
                    sigma[a] = b
            rows = [[sigma[x] for x in row] for row in t]
            row_of = np.zeros(n, dtype=np.int8)
            for r, row in enumerate(rows):
                row_of[row] = r
            idx = tab.index_of_rows(row_of[None, :])[0]
            v[idx] = f.add(v[idx], np.int64(1 if sign(tuple(sigma)) == 1 else f.neg(np.int64(1))))
        vecs.append(v)
    span = Subspace(f, tab.size, Matrix(f, np.array(vecs, dtype=np.int64).reshape(len(vecs), tab.size)))
    return _submodule_from_span(perm_module(tab, f), span, "S^(%s)" % (lam,))


def _submodule_from_span(m, span, label):
    """Action on an invariant subspace (rows of span.basis), column convention."""
    f = m.field
    gens = []
    for i, g in enumerate(m.group.gens):
        if m.is_perm:
            a = m.gset.actions[i]
            img = span.basis.a[:, inverse(tuple(a))] if len(a) else span.basis.a
            img = Matrix(f, img)
        else:
            img = span.basis @ m.gen_mats[i].T
        gens.append(span.coords(img).T)
    out = GModule(m.group, f, gens, label=label, check=False, dim=span.dim)
    out.embedding = span
    out.parent = m
    return out


def submodule(m, span, label="sub"):
    return _submodule_from_span(m, span, label)


@op("modrep.restrict")
def restrict(m, h):
    if m.is_perm:
        return GModule(h, m.field, gset=m.gset.restrict(h), label="Res " + m.label)
    gens = []
    for g in h.gens:
        gens.append(m.matrix(g))
    return GModule(h, m.field, gens, label="Res " + m.label, check=False, dim=m.dim)


@op("modrep.induce")
def induce(m, g):
    h = m.group
    if m.is_perm:
        return GModule(g, m.field, gset=InducedGSet(m.gset, g), label="Ind " + m.label)
    trans = coset_transversal(g, h)
    tinv = [inverse(t) for t in trans]
    d = m.dim
    f = m.field
    gens = []
    for s in g.gens:
        big = np.zeros((len(trans) * d, len(trans) * d), dtype=np.int64)
        for i, t in enumerate(trans):
            st = compose(s, t)
            for j, ti in enumerate(tinv):
                hh = compose(ti, st)
                if h.contains(hh):
                    big[j * d:(j + 1) * d, i * d:(i + 1) * d] = m.matrix(hh).a
                    break
            else:
                raise NotASubgroupElement("coset lookup failed")
        gens.append(Matrix(f, big))
    out = GModule(g, f, gens, label="Ind " + m.label, check=False, dim=len(trans) * d)
    out.transversal = trans
    return out


def _same(x, y):
    if x.group != y.group:
        raise GroupMismatch((x.group.name, y.group.name))
    if x.field != y.field:
        raise FieldMismatch((x.field, y.field))


@op("modrep.direct_sum")
def direct_sum(mods):
    mods = list(mods)
    for m in mods[1:]:
        _same(mods[0], m)
    g, f = mods[0].group, mods[0].field
    if all(m.is_perm for m in mods):
        sizes = [m.dim for m in mods]
        offs = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        acts = [np.concatenate([m.gset.actions[i] + offs[k] for k, m in enumerate(mods)])
                if sum(sizes) else np.zeros(0, dtype=np.int64) for i in range(g.ngens)]
        return GModule(g, f, gset=SumGSet(g, [m.gset for m in mods], acts),
                       label=" + ".join(m.label for m in mods))
    gens = [block_diag(f, [m.gen_mats[i] for m in mods]) for i in range(g.ngens)]
    return GModule(g, f, gens, label=" + ".join(m.label for m in mods), check=False,
                   dim=sum(m.dim for m in mods))


class SumGSet(GSet):
    def __init__(self, group, parts, actions):
        self.parts = parts
        self.offsets = np.concatenate([[0], np.cumsum([p.size for p in parts])]).astype(np.int64)
        super().__init__(group, actions, size=int(self.offsets[-1]), check=False)

    def perm_action(self, g):
        if not self.parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([p.perm_action(g) + self.offsets[k] for k, p in enumerate(self.parts)])


@op("modrep.tensor")
def tensor(x, y):
    _same(x, y)
    if x.is_perm and y.is_perm:
        return GModule(x.group, x.field, gset=ProductGSet(x.gset, y.gset), label="%s (x) %s" % (x.label, y.label))
    gens = [a.kron(b) for a, b in zip(x.gen_mats, y.gen_mats)]
    return GModule(x.group, x.field, gens, label="%s (x) %s" % (x.label, y.label), check=False,
                   dim=x.dim * y.dim)


@op("modrep.sign_twist")
def sign_twist(x):
    f = x.field
    gens = [m if sign(g) == 1 else -m for m, g in zip(x.gen_mats, x.group.gens)]
    return GModule(x.group, f, gens, label=x.label + " (x) sgn", check=False, dim=x.dim)


def change_field(m, field):
    if m.field == field:
        return m
    if m.is_perm:
        return GModule(m.group, field, gset=m.gset, label=m.label)
    return GModule(m.group, field, [g.lift_to(field) for g in m.gen_mats], label=m.label, check=False,
                   dim=m.dim)


# -- Hom spaces ----------------------------------------------------------------

@dataclass
class HomSpace:
    source: GModule
    target: GModule
    basis: list
    orbit_labels: object = None  # for permutation modules: orbit id of each (y, x)

    @property
    def dim(self):
        return len(self.basis)

    def combination(self, coeffs, field=None):
        """sum c_i basis_i as a Matrix (over `field` when scalars are extended)."""
        f = field or self.source.field
        if self.orbit_labels is not None:
            c = np.asarray(coeffs, dtype=np.int64)
            vals = np.concatenate([c, [0]])
            return Matrix(f, vals[self.orbit_labels])
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        emb = self.source.field.embedding_codes(f)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = f.add(out, f.mul(emb[b.a], np.int64(c)))
        return Matrix(f, out)


def _check_intertwines(x, y, t):
    for a, b in zip(x.gen_mats, y.gen_mats):
        if not (t @ a == b @ t):
            return False
    return True


class _LazyOrbitBasis:
    """Basis of orbit-sum matrices, materialised one at a time."""

    def __init__(self, labels, count, field):
        self.labels = labels
        self.count = count
        self.field = field

    def __len__(self):
        return self.count

    def __getitem__(self, i):
        if i < 0:
            i += self.count
        if not 0 <= i < self.count:
            raise IndexError(i)
        return Matrix(self.field, (self.labels == i).astype(np.int64))

    def __iter__(self):
        for i in range(self.count):
            yield self[i]


@op("modrep.hom_basis")
def hom_basis(x, y, method=None):
    """Basis of Hom_G(x, y) as dim(y) x dim(x) matrices."""
    _same(x, y)
    if method is None:
        method = "orbits" if (x.is_perm and y.is_perm) else "dense"
    f = x.field
    if method == "orbits":
        prod = ProductGSet(y.gset, x.gset)
        lab = orbit_labels(prod.actions, prod.size) if prod.size else np.zeros(0, dtype=np.int64)
        uniq, inv = np.unique(lab, return_inverse=True)
        labels = inv.reshape(y.dim, x.dim) if prod.size else np.zeros((y.dim, x.dim), dtype=np.int64)
        return HomSpace(x, y, _LazyOrbitBasis(labels, len(uniq), f), orbit_labels=labels)
    dx, dy = x.dim, y.dim
    nvar = dx * dy
    if nvar == 0:
        return HomSpace(x, y, [])
    # unknown vec(T), row-major: T[i, j] -> i*dx + j
    k = Matrix.identity(f, nvar)  # columns span the current solution space
    for a, b in zip(x.gen_mats, y.gen_mats):
        if not k.cols:
            break
        # apply T -> T a - b T to every column of k at once
        c = k.cols
        ts = k.a.T.reshape(c, dy, dx)
        ta = f.matmul_codes(ts.reshape(c * dy, dx), a.a).reshape(c, dy, dx)
        bt = f.matmul_codes(b.a, ts.transpose(1, 0, 2).reshape(dy, c * dx))
        bt = bt.reshape(dy, c, dx).transpose(1, 0, 2)
        lk = Matrix(f, f.sub(ta, bt).reshape(c, nvar).T.copy())
        ker = kernel_basis(lk)
        if not ker.dim:
            k = Matrix.zeros(f, nvar, 0)
            break
        k = k @ ker.basis.T
    if k.cols:
        k = Subspace(f, nvar, k.T).basis.T
    basis = [Matrix(f, k.a[:, c].reshape(dy, dx).copy()) for c in range(k.cols)]
    return HomSpace(x, y, basis)


def hom_dim(x, y):
    return hom_basis(x, y).dim


# -- transfer ----------------------------------------------------------------

@op("modrep.transfer")
def transfer(f_map, h, g, x, y, transversal=None):
    """Tr_{h,g}(f) = sum_t rho_y(t) f rho_x(t)^{-1} over a left transversal."""
    _same(x, y)
    for s in h.gens:
        if not (f_map @ x.matrix(s) == y.matrix(s) @ f_map):
            raise NotEquivariant("input map is not %s-equivariant" % h.name)
    if transversal is None:
        transversal = coset_transversal(g, h)
    out = Matrix.zeros(x.field, y.dim, x.dim)
    for t in transversal:
        out = out + y.matrix(t) @ f_map @ x.matrix(inverse(t))
    for s in g.gens:
        if not (out @ x.matrix(s) == y.matrix(s) @ out):
            raise NotEquivariant("transfer output failed %s-equivariance" % g.name)
    return out


# -- isomorphism probing -----------------------------------------------------

@dataclass
class IsoVerdict:
    kind: str  # CertifiedIso / CertifiedNonIso / Unknown
    witness: object = None
    invariant: str = ""
    trials_used: int = 0
    field: str = ""

    @property
    def certified_iso(self):
        return self.kind == "CertifiedIso"

    def as_json(self):
        out = {"verdict": self.kind, "trials_used": self.trials_used, "field": self.field}
        if self.invariant:
            out["invariant"] = self.invariant
        return out


def _rank_sequence(mat, p):
    n = mat.rows
    ident = Matrix.identity(mat.field, n)
    u = mat - ident
    seq = []
    cur = ident
    for _ in range(min(n, 2 * p + 2)):
        cur = cur @ u
        r = cur.rank()
        seq.append(r)
        if r == 0:
            break
    return seq


@op("modrep.iso_probe")
def iso_probe(x, y, trials=64, scalar_ext=1, seed=0):
    if x.group != y.group:
        raise GroupMismatch((x.group.name, y.group.name))
    f = x.field
    if x.dim != y.dim:
        return IsoVerdict("CertifiedNonIso", invariant="dimension %d != %d" % (x.dim, y.dim), field=f.spec)
    if x.dim == 0:
        return IsoVerdict("CertifiedIso", witness=Matrix.zeros(f, 0, 0), field=f.spec)
    for i, (a, b) in enumerate(zip(x.gen_mats, y.gen_mats)):
        if a.trace() != b.trace():
            return IsoVerdict("CertifiedNonIso", invariant="trace of generator %d differs" % i, field=f.spec)
    if x.dim <= 300:
        for i, (a, b) in enumerate(zip(x.gen_mats, y.gen_mats)):
            if _rank_sequence(a, f.p) != _rank_sequence(b, f.p):
                return IsoVerdict("CertifiedNonIso", invariant="Jordan type of generator %d minus 1" % i,
                                  field=f.spec)
    hxy = hom_basis(x, y)
    hyx = hom_basis(y, x)
    if hxy.dim != hyx.dim:
        return IsoVerdict("CertifiedNonIso", invariant="dim Hom asymmetry %d vs %d" % (hxy.dim, hyx.dim),
                          field=f.spec)
    if hxy.dim == 0:
        return IsoVerdict("CertifiedNonIso", invariant="Hom is zero", field=f.spec)

    def accept(t, used, fld):
        if t.rank() == t.rows and _check_intertwines(change_field(x, fld), change_field(y, fld), t):
            return IsoVerdict("CertifiedIso", witness=t, trials_used=used, field=fld.spec)
        return None

    d = hxy.dim
    if d <= 3 and f.q ** d <= 4096:
        used = 0
        for coeffs in itertools.product(range(f.q), repeat=d):
            nz = [c for c in coeffs if c]
            if not nz or nz[0] != 1:
                continue
            used += 1
            v = accept(hxy.combination(coeffs), used, f)
            if v:
                return v
        # Noether-Deuring: no invertible intertwiner over the base field means non-isomorphic
        return IsoVerdict("CertifiedNonIso", invariant="exhaustive search: no invertible intertwiner",
                          trials_used=used, field=f.spec)
    ext = f if scalar_ext <= 1 else field_create(f.p, f.k * scalar_ext)
    rng = np.random.default_rng(seed)
    for t in range(1, trials + 1):
        coeffs = rng.integers(0, ext.q, size=d)
        v = accept(hxy.combination(coeffs, ext), t, ext)
        if v:
            return v
    return IsoVerdict("Unknown", trials_used=trials, field=ext.spec)


def free_rank_check(m, group):
    """True iff m is free over k[group] (group a p-group): rank of the norm element times |G| = dim."""
    norm = act(m, AlgebraElement([(1, g) for g in group.elements]))
    return norm.rank() * group.order == m.dim
