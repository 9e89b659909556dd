"""
Permutation groups given by generators, and finite G-sets built from them.

Permutations are 0-based tuples g with g[x] the image of x; products compose
right to left, (gh)(x) = g(h(x)).  A word (i1, ..., ik) in the generators
stands for g_{i1} g_{i2} ... g_{ik}.  Cycle notation in labels and JSON is
1-based.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import cached_property
from math import factorial

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from otikit.partitions import Partition, WeightMismatch, multinomial
from otikit.registry import op


class BadParameters(ValueError):
    pass


class OrderExceedsCap(RuntimeError):
    pass


class ActionMismatch(ValueError):
    pass


class NotProductOrbit(ValueError):
    pass


class NotASubgroupElement(ValueError):
    pass


DEFAULT_ORDER_CAP = 200_000


# -- permutations ------------------------------------------------------------

def identity(n):
    return tuple(range(n))


def compose(g, h):
    return tuple(g[x] for x in h)


def inverse(g):
    out = [0] * len(g)
    for x, y in enumerate(g):
        out[y] = x
    return tuple(out)


def from_cycles(cycles, n):
    """Permutation of {0..n-1} from 1-based cycles, e.g. [(1, 2), (3, 4)]."""
    g = list(range(n))
    for cyc in cycles:
        cyc = [c - 1 for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            g[a] = b
    return tuple(g)


def parse_cycles(text, n):
    """'(1,2)(3,4)' or '()' -> permutation."""
    text = text.replace(" ", "")
    cycles = []
    for chunk in text.split(")"):
        chunk = chunk.strip("(")
        if chunk:
            cycles.append([int(x) for x in chunk.split(",")])
    return from_cycles(cycles, n)


def to_cycles(g):
    seen = set()
    out = []
    for x in range(len(g)):
        if x in seen or g[x] == x:
            continue
        cyc = [x]
        seen.add(x)
        y = g[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = g[y]
        out.append("(" + ",".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"


def transposition(n, i, j):
    g = list(range(n))
    g[i], g[j] = g[j], g[i]
    return tuple(g)


def sign(g):
    s = 1
    seen = [False] * len(g)
    for x in range(len(g)):
        if seen[x]:
            continue
        length = 0
        y = x
        while not seen[y]:
            seen[y] = True
            y = g[y]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def perm_order(g):
    from math import lcm
    out = 1
    seen = [False] * len(g)
    for x in range(len(g)):
        length = 0
        y = x
        while not seen[y]:
            seen[y] = True
            y = g[y]
            length += 1
        if length:
            out = lcm(out, length)
    return out


def power(g, k):
    out = identity(len(g))
    for _ in range(k):
        out = compose(g, out)
    return out


# -- groups ------------------------------------------------------------------

class PermGroup:
    """Group generated by permutations of {0..degree-1}.

    When every generator is an adjacent transposition inside a fixed block
    structure (symmetric and Young subgroups), membership and words come from
    bubble sort; otherwise from breadth-first enumeration.
    """

    def __init__(self, degree, gens, name=None, blocks=None):
        self.degree = degree
        self.gens = tuple(tuple(int(x) for x in g) for g in gens)
        for g in self.gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise BadParameters("generator %r is not a permutation of %d points" % (g, degree))
        self.name = name or "<%s>" % ",".join(to_cycles(g) for g in self.gens)
        self.blocks = blocks
        self._adjacent = None
        if blocks is not None:
            self._adjacent = {}
            for idx, g in enumerate(self.gens):
                moved = [x for x in range(degree) if g[x] != x]
                if len(moved) != 2 or moved[1] != moved[0] + 1:
                    raise BadParameters("block group generators must be adjacent transpositions")
                self._adjacent[moved[0]] = idx
        self._elements = None
        self._words = None

    def __repr__(self):
        return "PermGroup(%s)" % self.name

    def __eq__(self, other):
        return isinstance(other, PermGroup) and (self.degree, self.gens) == (other.degree, other.gens)

    def __hash__(self):
        return hash((self.degree, self.gens))

    @property
    def ngens(self):
        return len(self.gens)

    @cached_property
    def gens_inv(self):
        return tuple(inverse(g) for g in self.gens)

    def identity(self):
        return identity(self.degree)

    # block groups ----------------------------------------------------------
    @cached_property
    def _block_id(self):
        bid = [0] * self.degree
        for b, block in enumerate(self.blocks):
            for x in block:
                bid[x] = b
        return bid

    def _bubble_word(self, g):
        g = list(g)
        swaps = []
        n = len(g)
        changed = True
        while changed:
            changed = False
            for i in range(n - 1):
                if g[i] > g[i + 1]:
                    g[i], g[i + 1] = g[i + 1], g[i]
                    swaps.append(i)
                    changed = True
        # g s_{b1} ... s_{bm} = id, so g = s_{bm} ... s_{b1}
        return [self._adjacent[i] for i in reversed(swaps)]

    # general ---------------------------------------------------------------
    def contains(self, g):
        g = tuple(g)
        if len(g) != self.degree:
            return False
        if self.blocks is not None:
            bid = self._block_id
            return all(bid[g[x]] == bid[x] for x in range(self.degree))
        self.enumerate()
        return g in self._words

    def word(self, g):
        g = tuple(g)
        if not self.contains(g):
            raise NotASubgroupElement("%s not in %s" % (to_cycles(g), self.name))
        if self.blocks is not None:
            return self._bubble_word(g)
        return list(self._words[g])

    def eval_word(self, word):
        out = self.identity()
        for i in word:
            out = compose(out, self.gens[i])
        return out

    @op("permsets.enumerate")
    def enumerate(self, cap=DEFAULT_ORDER_CAP):
        """Breadth-first closure; every element keeps a shortest word."""
        if self._words is not None:
            if len(self._words) > cap:
                raise OrderExceedsCap("|G| = %d > %d" % (len(self._words), cap))
            return self
        if self.blocks is not None and self.order > cap:
            raise OrderExceedsCap("|G| = %d > %d" % (self.order, cap))
        e = self.identity()
        words = {e: ()}
        order = [e]
        queue = deque([e])
        while queue:
            x = queue.popleft()
            w = words[x]
            for i, g in enumerate(self.gens):
                y = compose(x, g)
                if y not in words:
                    words[y] = w + (i,)
                    order.append(y)
                    if len(words) > cap:
                        raise OrderExceedsCap("|G| > %d" % cap)
                    queue.append(y)
        self._words = words
        self._elements = order
        return self

    @property
    def elements(self):
        self.enumerate()
        return self._elements

    @cached_property
    def order(self):
        if self.blocks is not None:
            out = 1
            for b in self.blocks:
                out *= factorial(len(b))
            return out
        return len(self.enumerate()._elements)

    def is_abelian(self):
        return all(compose(g, h) == compose(h, g) for g in self.gens for h in self.gens)

    def as_json(self):
        return {"degree": self.degree, "name": self.name, "gens": [to_cycles(g) for g in self.gens]}


def _block_group(degree, blocks, name):
    gens = []
    for block in blocks:
        for a, b in zip(block, block[1:]):
            gens.append(transposition(degree, a, b))
    return PermGroup(degree, gens, name=name, blocks=[tuple(b) for b in blocks])


@op("permsets.symmetric_group")
def symmetric_group(n):
    """S_n generated by the adjacent transpositions (1 2), ..., (n-1 n)."""
    if n < 0:
        raise BadParameters(n)
    return _block_group(n, [list(range(n))], "S%d" % n)


@op("permsets.young_subgroup")
def young_subgroup(lam, n=None):
    lam = Partition.from_composition(lam) if not isinstance(lam, Partition) else lam
    n = lam.n if n is None else n
    if lam.n != n:
        raise WeightMismatch((lam, n))
    blocks = []
    start = 0
    for part in lam:
        blocks.append(list(range(start, start + part)))
        start += part
    return _block_group(n, blocks, "S_(%s)" % (lam,))


@op("permsets.last_block_embed")
def last_block_embed(n, m):
    """S_m acting on the last m of n points."""
    if m > n or m < 0:
        raise BadParameters((n, m))
    blocks = [[x] for x in range(n - m)] + [list(range(n - m, n))]
    return _block_group(n, blocks, "S%d@last(%d)" % (m, n))


def first_block_embed(n, m):
    """S_m acting on the first m of n points (the residual group of the OTI functors)."""
    if m > n or m < 0:
        raise BadParameters((n, m))
    blocks = [list(range(m))] + [[x] for x in range(m, n)]
    g = _block_group(n, blocks, "S%d@first(%d)" % (m, n))
    g.active = m
    return g


@op("permsets.p_cycle_subgroup")
def p_cycle_subgroup(n, p):
    if n < p:
        raise BadParameters((n, p))
    g = list(range(n))
    for x in range(n - p, n - 1):
        g[x] = x + 1
    g[n - 1] = n - p
    return PermGroup(n, [tuple(g)], name="C%d@last(%d)" % (p, n))


class ElementaryAbelian(PermGroup):
    """Translation action of GF(p)^r on the last p^r points.

    Point n - p^r + sum v_i p^i (i = 0..r-1) is the vector v; generator
    sigma_j adds the j-th unit vector.
    """

    def __init__(self, p, r, n):
        q = p ** r
        if n < q or r < 1:
            raise BadParameters((p, r, n))
        self.p, self.r = p, r
        off = n - q
        gens = []
        for j in range(r):
            g = list(range(n))
            for idx in range(q):
                digits = [(idx // p ** i) % p for i in range(r)]
                digits[j] = (digits[j] + 1) % p
                g[off + idx] = off + sum(d * p ** i for i, d in enumerate(digits))
            gens.append(tuple(g))
        super().__init__(n, gens, name="E(%d^%d)@last(%d)" % (p, r, n))

    def vectors(self):
        return list(itertools.product(range(self.p), repeat=self.r))

    def element(self, vec):
        out = self.identity()
        for j, c in enumerate(vec):
            for _ in range(c % self.p):
                out = compose(self.gens[j], out)
        return out

    def maximal_subgroups(self):
        """Index-p subgroups, one per line in the dual space (as kernels of functionals)."""
        p, r = self.p, self.r
        seen = set()
        out = []
        for f in itertools.product(range(p), repeat=r):
            if not any(f):
                continue
            lead = next(c for c in f if c)
            inv = pow(lead, p - 2, p)
            f = tuple(c * inv % p for c in f)
            if f in seen:
                continue
            seen.add(f)
            kernel = [v for v in self.vectors() if sum(a * b for a, b in zip(f, v)) % p == 0]
            out.append((f, kernel))
        return out


@op("permsets.elem_abelian_transitive")
def elem_abelian_transitive(p, r, n):
    return ElementaryAbelian(p, r, n)


# -- G-sets ------------------------------------------------------------------

def _group_compatible(g1, g2):
    if g1 != g2:
        raise ActionMismatch("different acting groups: %s vs %s" % (g1.name, g2.name))


class GSet:
    """Finite set 0..size-1 with one action array per group generator."""

    def __init__(self, group, actions, size=None, labels=None, check=True):
        self.group = group
        self.actions = [np.asarray(a, dtype=np.int64) for a in actions]
        if len(self.actions) != group.ngens:
            raise ActionMismatch("need %d action arrays, got %d" % (group.ngens, len(self.actions)))
        if size is None:
            size = len(labels) if labels is not None else len(self.actions[0])
        self._size = size
        self._labels = labels
        if check:
            for a in self.actions:
                if len(a) != size or not _is_bijection(a):
                    raise ActionMismatch("generator action is not a bijection of %d points" % size)

    @property
    def size(self):
        return self._size

    def __len__(self):
        return self.size

    @property
    def labels(self):
        if self._labels is None:
            return list(range(self.size))
        return self._labels

    def label(self, i):
        return self.labels[i]

    def perm_action(self, g):
        """Action array of a group element, via its word in the generators."""
        res = np.arange(self.size, dtype=np.int64)
        for i in reversed(self.group.word(g)):
            res = self.actions[i][res]
        return res

    def restrict(self, h):
        """The same points viewed as an h-set."""
        return RestrictedGSet(self, h)

    def as_json(self):
        return {
            "group": self.group.as_json(),
            "points": [_jsonable(x) for x in self.labels],
            "actions": [a.tolist() for a in self.actions],
        }


class RestrictedGSet(GSet):
    def __init__(self, parent, h):
        self.parent = parent
        self.group = h
        self._size = parent.size
        self._labels = None
        self.actions = [parent.perm_action(g) for g in h.gens]

    def perm_action(self, g):
        if not self.group.contains(g):
            raise NotASubgroupElement(to_cycles(g))
        return self.parent.perm_action(g)

    def label(self, i):
        return self.parent.label(i)

    @property
    def labels(self):
        return self.parent.labels


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def _is_bijection(a):
    if not len(a):
        return True
    seen = np.zeros(len(a), dtype=bool)
    if a.min() < 0 or a.max() >= len(a):
        return False
    seen[a] = True
    return bool(seen.all())


class TabloidSet(GSet):
    """Tab^lam: row_of[t, x] is the row containing point x in tabloid t."""

    def __init__(self, n, lam, group=None):
        lam = Partition(lam)
        if lam.n != n:
            raise WeightMismatch((n, lam))
        self.n = n
        self.shape = lam
        self.group = group or symmetric_group(n)
        if self.group.degree != n:
            raise ActionMismatch("group degree %d != %d" % (self.group.degree, n))
        self.rows = _enumerate_row_assignments(lam, n)
        self.base = max(len(lam), 1)
        self.keys = self._keys(self.rows)
        order = np.argsort(self.keys, kind="stable")
        self.rows = self.rows[order]
        self.keys = self.keys[order]
        self._labels = None
        self.actions = [self.perm_action(g) for g in self.group.gens]

    @property
    def size(self):
        return len(self.keys)

    def _keys(self, rows):
        # lexicographic on (row_of[0], ..., row_of[n-1])
        weights = self.base ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return rows.astype(np.int64) @ weights

    def index_of_rows(self, rows):
        keys = self._keys(rows)
        idx = np.searchsorted(self.keys, keys)
        if np.any(idx >= self.size) or np.any(self.keys[np.minimum(idx, self.size - 1)] != keys):
            raise ActionMismatch("not a tabloid of shape %s" % (self.shape,))
        return idx

    def perm_action(self, g):
        if len(g) != self.n:
            raise ActionMismatch("permutation degree %d != %d" % (len(g), self.n))
        ginv = np.array(inverse(g), dtype=np.int64)
        return self.index_of_rows(self.rows[:, ginv])

    def label(self, i):
        row_of = self.rows[i]
        return tuple(tuple(int(x) + 1 for x in np.flatnonzero(row_of == r)) for r in range(len(self.shape)))

    @property
    def labels(self):
        return [self.label(i) for i in range(self.size)]

    def index_of_label(self, rows):
        row_of = np.zeros(self.n, dtype=np.int8)
        for r, row in enumerate(rows):
            for x in row:
                row_of[x - 1] = r
        return int(self.index_of_rows(row_of[None, :])[0])


def _enumerate_row_assignments(lam, n):
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rows = np.full((1, n), -1, dtype=np.int8)
    for r, part in enumerate(lam):
        nfree = n - sum(lam[:r])
        combos = np.array(list(itertools.combinations(range(nfree), part)), dtype=np.int64)
        free = np.nonzero(rows == -1)[1].reshape(len(rows), nfree)
        e, c = len(rows), len(combos)
        new = np.repeat(rows, c, axis=0)
        # positions free[e, combos[c]] of copy (e, c) get row r
        cols = free[np.arange(e)[:, None, None], combos[None, :, :]].reshape(e * c, part)
        new[np.arange(e * c)[:, None], cols] = r
        rows = new
    return rows


@op("permsets.tabloids")
def tabloids(n, lam, group=None):
    return TabloidSet(n, lam, group)


class ProductGSet(GSet):
    def __init__(self, x, y):
        _group_compatible(x.group, y.group)
        self.group = x.group
        self.x, self.y = x, y
        self._labels = None
        ny = y.size
        self.actions = [ax[:, None] * ny + ay[None, :] for ax, ay in zip(x.actions, y.actions)]
        self.actions = [a.reshape(-1) for a in self.actions]

    @property
    def size(self):
        return self.x.size * self.y.size

    def split(self, idx):
        return idx // self.y.size, idx % self.y.size

    def perm_action(self, g):
        ax, ay = self.x.perm_action(g), self.y.perm_action(g)
        return (ax[:, None] * self.y.size + ay[None, :]).reshape(-1)

    @property
    def labels(self):
        return [(self.x.label(i), self.y.label(j)) for i in range(self.x.size) for j in range(self.y.size)]

    def label(self, idx):
        i, j = self.split(idx)
        return (self.x.label(i), self.y.label(j))


@op("permsets.product_gset")
def product_gset(x, y):
    return ProductGSet(x, y)


class SubGSet(GSet):
    """An invariant subset of a parent set, acted on by a (possibly different) group."""

    def __init__(self, parent, index, group):
        self.parent = parent
        self.index = np.asarray(index, dtype=np.int64)
        self.group = group
        self._labels = None
        self._pos = np.full(parent.size, -1, dtype=np.int64)
        self._pos[self.index] = np.arange(len(self.index))
        self.actions = [self.perm_action(g) for g in group.gens]

    @property
    def size(self):
        return len(self.index)

    def perm_action(self, g):
        img = self.parent.perm_action(g)[self.index]
        out = self._pos[img]
        if np.any(out < 0):
            raise ActionMismatch("%s does not preserve the subset" % to_cycles(g))
        return out

    def label(self, i):
        return self.parent.label(int(self.index[i]))

    @property
    def labels(self):
        return [self.label(i) for i in range(self.size)]


class InducedGSet(GSet):
    """G x_H X for an H-set X: points (coset i, x) indexed i*|X| + x."""

    def __init__(self, x, g):
        h = x.group
        if h.degree != g.degree:
            raise ActionMismatch("degrees differ")
        self.base = x
        self.group = g
        self.subgroup = h
        self.transversal = coset_transversal(g, h)
        self._tinv = [inverse(t) for t in self.transversal]
        self._labels = None
        self.actions = [self.perm_action(s) for s in g.gens]

    @property
    def size(self):
        return len(self.transversal) * self.base.size

    def coset_action(self, g):
        """For each coset i: (j, h) with g t_i = t_j h."""
        out = []
        for t in self.transversal:
            gt = compose(g, t)
            for j, tinv in enumerate(self._tinv):
                h = compose(tinv, gt)
                if self.subgroup.contains(h):
                    out.append((j, h))
                    break
            else:
                raise NotASubgroupElement("coset lookup failed")
        return out

    def perm_action(self, g):
        nx = self.base.size
        res = np.zeros(self.size, dtype=np.int64)
        for i, (j, h) in enumerate(self.coset_action(g)):
            res[i * nx:(i + 1) * nx] = j * nx + self.base.perm_action(h)
        return res

    def label(self, idx):
        i, x = divmod(idx, self.base.size)
        return (to_cycles(self.transversal[i]), self.base.label(x))

    @property
    def labels(self):
        return [self.label(i) for i in range(self.size)]


def coset_transversal(g, h):
    """Left transversal of h in g, first found in breadth-first order from the identity."""
    e = g.identity()
    reps = [e]
    queue = deque([e])
    target = g.order // h.order if (g.blocks is not None and h.blocks is not None) else None
    while queue:
        if target is not None and len(reps) == target:
            break
        t = queue.popleft()
        for s in g.gens:
            u = compose(s, t)
            if any(h.contains(compose(inverse(r), u)) for r in reps):
                continue
            reps.append(u)
            queue.append(u)
    return reps


# -- orbits ------------------------------------------------------------------

def orbit_labels(actions, size):
    """Label each point by the smallest index in its orbit."""
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    if not actions:
        return np.arange(size, dtype=np.int64)
    src = np.concatenate([np.arange(size)] * len(actions))
    dst = np.concatenate(actions)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size))
    _, comp = connected_components(graph, directed=True, connection="weak")
    mins = np.full(comp.max() + 1, size, dtype=np.int64)
    np.minimum.at(mins, comp, np.arange(size))
    return mins[comp]


def _actions_for(h, x):
    if h == x.group:
        return x.actions
    if h.degree != x.group.degree:
        raise ActionMismatch("acting group of degree %d on a set for degree %d" % (h.degree, x.group.degree))
    return [x.perm_action(g) for g in h.gens]


@op("permsets.orbits")
def orbits(h, x):
    """Orbits of h on x, each a sorted index array, ordered by smallest element."""
    labels = orbit_labels(_actions_for(h, x), x.size)
    order = np.argsort(labels, kind="stable")
    reps, starts = np.unique(labels[order], return_index=True)
    return [order[a:b] for a, b in zip(starts, list(starts[1:]) + [x.size])]


@op("permsets.orbit_count")
def orbit_count(g, x):
    labels = orbit_labels(_actions_for(g, x), x.size)
    return int(len(np.unique(labels)))


def fixed_indices(h, x):
    acts = _actions_for(h, x)
    mask = np.ones(x.size, dtype=bool)
    for a in acts:
        mask &= a == np.arange(x.size)
    return np.flatnonzero(mask)


@op("permsets.fixed_points")
def fixed_points(h, x, commuting=None):
    """Points fixed by h, as a set acted on by the group `commuting`."""
    idx = fixed_indices(h, x)
    if commuting is None:
        commuting = PermGroup(x.group.degree, [], name="1")
    return SubGSet(x, idx, commuting)


# -- Young types of orbits ---------------------------------------------------

@op("permsets.orbit_young_type")
def orbit_young_type(x, idx):
    """nu with orbit(idx) ~ Tab^nu, for a product of two tabloid sets under S_n."""
    if not isinstance(x, ProductGSet) or not isinstance(x.x, TabloidSet) or not isinstance(x.y, TabloidSet):
        raise NotProductOrbit("orbit_young_type needs a product of two tabloid sets")
    i, j = x.split(int(idx))
    a, b = x.x.rows[i], x.y.rows[j]
    sizes = [int(np.sum((a == r) & (b == s)))
             for r in range(len(x.x.shape)) for s in range(len(x.y.shape))]
    return Partition.from_composition(sizes)


def intersection_matrix(x, idx):
    i, j = x.split(int(idx))
    a, b = x.x.rows[i], x.y.rows[j]
    return [[int(np.sum((a == r) & (b == s))) for s in range(len(x.y.shape))]
            for r in range(len(x.x.shape))]


def young_type_of_point(x, idx, orbit_size=None):
    """Young type of the stabiliser of a point of an S_m-set.

    i ~ j when the transposition (i j) fixes the point; the stabiliser
    contains the Young subgroup of the blocks, and equals it exactly when
    the orbit has m!/prod(nu_i!) points (checked when orbit_size is given).
    """
    n = x.group.degree
    m = getattr(x.group, "active", n)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(m):
        for j in range(i + 1, m):
            if find(i) == find(j):
                continue
            if x.perm_action(transposition(n, i, j))[idx] == idx:
                parent[find(j)] = find(i)
    sizes = {}
    for i in range(m):
        sizes[find(i)] = sizes.get(find(i), 0) + 1
    nu = Partition.from_composition(sizes.values())
    if orbit_size is not None and orbit_size != multinomial(nu):
        raise NotProductOrbit("stabiliser of point %d is not a Young subgroup" % idx)
    return nu


def count_contingency_tables(rows, cols):
    """Nonnegative integer matrices with given row and column sums (independent oracle)."""
    rows, cols = list(rows), list(cols)
    if not rows:
        return 1 if not any(cols) else 0

    def fill_row(r, remaining_cols):
        total = 0
        first = rows[r]

        def rec(c, left, cur):
            nonlocal total
            if c == len(remaining_cols) - 1:
                if left <= remaining_cols[c]:
                    nxt = cur + [remaining_cols[c] - left]
                    if r == len(rows) - 1:
                        total += 1 if not any(nxt) else 0
                    else:
                        total += fill_row(r + 1, nxt)
                return
            for v in range(min(left, remaining_cols[c]) + 1):
                rec(c + 1, left - v, cur + [remaining_cols[c] - v])

        rec(0, first, [])
        return total

    return fill_row(0, cols)
