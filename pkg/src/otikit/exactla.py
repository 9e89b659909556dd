"""
Exact arithmetic in GF(p^k) and dense linear algebra over it.

Field elements are encoded as integers 0 <= c < p^k: the element
c_0 + c_1 t + ... + c_{k-1} t^{k-1} has code sum c_i p^i.  Matrices are
numpy int64 arrays of codes tagged with their Field.  Extension-field
products are schoolbook polynomial products on coefficient planes,
reduced by the modulus.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
from functools import cached_property

import numpy as np

from otikit.registry import op


class ExactLAError(Exception):
    pass


class NonPrime(ExactLAError):
    pass


class ReducibleModulus(ExactLAError):
    pass


class DegreeMismatch(ExactLAError):
    pass


class FieldMismatch(ExactLAError):
    pass


class AmbientMismatch(ExactLAError):
    pass


class NotContained(ExactLAError):
    pass


class NotInvariant(ExactLAError):
    pass


class ShapeMismatch(ExactLAError):
    pass


class DimensionCapExceeded(ExactLAError):
    pass


DEFAULT_DIM_CAP = 5000
_dim_cap = contextvars.ContextVar("dim_cap", default=DEFAULT_DIM_CAP)


@contextlib.contextmanager
def dim_cap(n):
    """Temporarily change the bound on matrix dimensions."""
    token = _dim_cap.set(n)
    try:
        yield
    finally:
        _dim_cap.reset(token)


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient lists low degree first

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return a


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim(poly)
    k = len(poly) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for q in _monic_polys(p, d):
            # _monic_polys yields low-first lists
            if not _poly_mod(poly, q, p):
                return False
    return True


def smallest_irreducible(p, k):
    """Lexicographically smallest monic irreducible of degree k.

    Order: compare coefficient tuples (c_{k-1}, ..., c_0) lexicographically.
    """
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        poly = list(reversed(tail)) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise ReducibleModulus("no irreducible polynomial of degree %d over GF(%d)" % (k, p))


# ---------------------------------------------------------------------------

class Field:
    """GF(p^k) presented as GF(p)[t]/(modulus)."""

    def __init__(self, p, k=1, modulus=None):
        if not is_prime(p):
            raise NonPrime(p)
        if k < 1:
            raise DegreeMismatch("extension degree must be >= 1, got %r" % (k,))
        if modulus is None:
            modulus = smallest_irreducible(p, k)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(_poly_trim(modulus)) != k + 1:
                raise DegreeMismatch("modulus %r does not have degree %d" % (modulus, k))
            if modulus[-1] != 1:
                raise DegreeMismatch("modulus %r is not monic" % (modulus,))
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(modulus)
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)

    # identity ------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return "GF(%d)" % self.p
        return "GF(%d^%d)" % (self.p, self.k)

    @property
    def spec(self):
        if self.k == 1:
            return "p=%d" % self.p
        return "p=%d,k=%d,mod=%s" % (self.p, self.k, ",".join(map(str, self.modulus)))

    @property
    def is_prime_field(self):
        return self.k == 1

    # element coding --------------------------------------------------------
    def coeffs(self, code):
        code = int(code)
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return out

    def code(self, coeffs):
        coeffs = _poly_trim([int(c) % self.p for c in coeffs])
        if len(coeffs) > self.k:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def __call__(self, value):
        """Field element from an int (reduced mod p) or a coefficient list."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch((value.field, self))
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.code(value))
        return FieldElement(self, int(value) % self.p)

    def element(self, code):
        return FieldElement(self, int(code))

    def elements(self):
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def gen(self):
        """The class of t (equal to 1 in a prime field)."""
        if self.k == 1:
            return FieldElement(self, 1)
        return FieldElement(self, self.p)

    def power_basis(self):
        return [FieldElement(self, self.p ** i) for i in range(self.k)]

    # tables ----------------------------------------------------------------
    def _mul_codes_slow(self, a, b):
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.code(_poly_mod(prod, self.modulus, self.p) if self.k > 1 else prod)

    @cached_property
    def mul_table(self):
        q = self.q
        if self.k == 1:
            r = np.arange(q, dtype=np.int64)
            return np.outer(r, r) % q
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                t[a, b] = t[b, a] = self._mul_codes_slow(a, b)
        return t

    @cached_property
    def add_table(self):
        q = self.q
        planes_a = self.to_planes(np.arange(q, dtype=np.int64))
        t = np.zeros((q, q), dtype=np.int64)
        for d in range(self.k):
            t += ((planes_a[d][:, None] + planes_a[d][None, :]) % self.p) * self.p ** d
        return t

    @cached_property
    def neg_table(self):
        planes = self.to_planes(np.arange(self.q, dtype=np.int64))
        return self.from_planes([(-x) % self.p for x in planes])

    @cached_property
    def sub_table(self):
        return self.add_table[:, self.neg_table]

    @cached_property
    def inv_table(self):
        inv = np.zeros(self.q, dtype=np.int64)
        mt = self.mul_table
        for a in range(1, self.q):
            inv[a] = int(np.nonzero(mt[a] == 1)[0][0])
        return inv

    # vectorised arithmetic on code arrays ---------------------------------
    def to_planes(self, a):
        a = np.asarray(a, dtype=np.int64)
        return [(a // self.p ** d) % self.p for d in range(self.k)]

    def from_planes(self, planes):
        out = np.zeros_like(planes[0])
        for d, pl in enumerate(planes):
            out = out + pl * self.p ** d
        return out

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def sub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return self.sub_table[a, b]

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def inv(self, a):
        return self.inv_table[a]

    def matmul_codes(self, a, b):
        p = self.p
        if self.k == 1:
            if a.shape[1] == 0:
                return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
            return (a @ b) % p
        k = self.k
        pa, pb = self.to_planes(a), self.to_planes(b)
        prod = [None] * (2 * k - 1)
        for i in range(k):
            for j in range(k):
                term = pa[i] @ pb[j]
                prod[i + j] = term if prod[i + j] is None else prod[i + j] + term
        prod = [x % p for x in prod]
        mod = self.modulus
        for e in range(2 * k - 2, k - 1, -1):
            top = prod[e]
            for i in range(k):
                if mod[i]:
                    prod[e - k + i] = (prod[e - k + i] - top * mod[i]) % p
        return self.from_planes(prod[:k])


class FieldElement:
    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = int(code)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch((self.field, other.field))
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add_table[self.code, o])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub_table[self.code, o])

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub_table[o, self.code])

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_table[self.code])

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul_table[self.code, o])

    __rmul__ = __mul__

    def inverse(self):
        if self.code == 0:
            raise ZeroDivisionError("inverse of 0 in %r" % (self.field,))
        return FieldElement(self.field, self.field.inv_table[self.code])

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(self.field, o).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElement(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return False
        return self.code == o

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        if self.field.k != 1 and self.code >= self.field.p:
            raise ValueError("%r is not in the prime field" % (self,))
        return self.code

    def __repr__(self):
        f = self.field
        if f.k == 1:
            return str(self.code)
        cs = f.coeffs(self.code)
        terms = []
        for i, c in enumerate(cs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else "t^%d" % i)
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else "%d%s" % (c, mono))
        return "+".join(reversed(terms)) or "0"


@op("exactla.field_create")
def field_create(p, k=1, modulus=None):
    return Field(p, k, modulus)


def parse_field_spec(spec):
    """Parse "p=<prime>[,k=<deg>[,mod=<c0,c1,...,ck>]]", or "GF(q)" / "GF(p^k)"."""
    spec = spec.strip()
    if spec.upper().startswith("GF(") and spec.endswith(")"):
        body = spec[3:-1]
        if "^" in body:
            p, k = (int(x) for x in body.split("^"))
            return Field(p, k)
        q = int(body)
        for p in range(2, q + 1):
            if q % p == 0:
                k, rest = 0, q
                while rest % p == 0:
                    rest //= p
                    k += 1
                if rest != 1:
                    raise ValueError("%d is not a prime power" % q)
                return Field(p, k)
        raise ValueError("bad field order %d" % q)
    modulus = None
    if "mod=" in spec:
        head, _, mod = spec.partition("mod=")
        modulus = [int(x) for x in mod.split(",") if x.strip()]
        spec = head.rstrip(",")
    kv = {}
    for part in spec.split(","):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        kv[key.strip()] = int(val)
    if "p" not in kv:
        raise ValueError("field spec %r lacks p=" % (spec,))
    return Field(kv["p"], kv.get("k", 1), modulus)


# ---------------------------------------------------------------------------

def _check_cap(*dims):
    cap = _dim_cap.get()
    for d in dims:
        if d > cap:
            raise DimensionCapExceeded("dimension %d exceeds cap %d" % (d, cap))


class Matrix:
    """Dense matrix of field codes.  Treated as immutable."""

    __slots__ = ("field", "a")

    def __init__(self, field, a, check=True):
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(-1, a.shape[-1] if a.ndim else 0) if a.size else a.reshape(0, 0)
        if check:
            _check_cap(*a.shape)
            if a.size and (a.min() < 0 or a.max() >= field.q):
                raise ValueError("entries out of range for %r" % (field,))
        a.flags.writeable = False
        self.field = field
        self.a = a

    # constructors
    @classmethod
    def from_ints(cls, field, rows, ncols=None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(field, np.zeros((0, ncols or 0), dtype=np.int64))
        a = np.array([[field(x).code if not isinstance(x, FieldElement) else x.code
                       for x in r] for r in rows], dtype=np.int64)
        return cls(field, a)

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, field, n, c):
        c = field(c).code
        return cls(field, np.eye(n, dtype=np.int64) * c)

    @classmethod
    def permutation(cls, field, images):
        """Matrix sending basis vector j to basis vector images[j]."""
        images = np.asarray(images, dtype=np.int64)
        n = len(images)
        a = np.zeros((n, n), dtype=np.int64)
        a[images, np.arange(n)] = 1
        return cls(field, a)

    # shape
    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def __repr__(self):
        return "Matrix(%r, %dx%d)" % (self.field, self.rows, self.cols)

    def __getitem__(self, idx):
        r, c = idx
        return FieldElement(self.field, self.a[r, c])

    def tolist(self):
        return self.a.tolist()

    # algebra
    def _same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(other)
        if other.field != self.field:
            raise FieldMismatch((self.field, other.field))

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeMismatch((self.shape, other.shape))
        return Matrix(self.field, self.field.add(self.a, other.a), check=False)

    def __sub__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeMismatch((self.shape, other.shape))
        return Matrix(self.field, self.field.sub(self.a, other.a), check=False)

    def __neg__(self):
        return Matrix(self.field, self.field.neg(self.a), check=False)

    def __matmul__(self, other):
        self._same(other)
        if self.cols != other.rows:
            raise ShapeMismatch((self.shape, other.shape))
        return Matrix(self.field, self.field.matmul_codes(self.a, other.a))

    def scale(self, c):
        c = self.field(c).code
        return Matrix(self.field, self.field.mul(self.a, np.int64(c)), check=False)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and self.shape == other.shape and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.field, self.shape, self.a.tobytes()))

    @property
    def T(self):
        return Matrix(self.field, self.a.T.copy(), check=False)

    def is_zero(self):
        return not self.a.any()

    def is_identity(self):
        return self.rows == self.cols and np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))

    def power(self, n):
        if self.rows != self.cols:
            raise ShapeMismatch(self.shape)
        out = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def trace(self):
        f = self.field
        t = 0
        for x in np.diag(self.a):
            t = f.add_table[t, x] if f.k > 1 else (t + x) % f.p
        return FieldElement(f, t)

    def rank(self):
        return rref(self)[1]

    def inverse(self):
        n = self.rows
        if n != self.cols:
            raise ShapeMismatch(self.shape)
        aug = Matrix(self.field, np.hstack([self.a, np.eye(n, dtype=np.int64)]), check=False)
        r, rank, piv = _rref(aug)
        if rank < n or piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, r.a[:, n:].copy(), check=False)

    def is_invertible(self):
        return self.rows == self.cols and self.rank() == self.rows

    def kron(self, other):
        self._same(other)
        f = self.field
        a, b = self.a, other.a
        big = f.mul(a[:, None, :, None], b[None, :, None, :])
        return Matrix(f, big.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))

    def lift_to(self, field):
        """Same matrix read in a larger field."""
        emb = self.field.embedding_codes(field)
        return Matrix(field, emb[self.a])


def block_diag(field, mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(field, out)


def hstack(mats):
    return Matrix(mats[0].field, np.hstack([m.a for m in mats]))


def vstack(mats):
    return Matrix(mats[0].field, np.vstack([m.a for m in mats]))


# ---------------------------------------------------------------------------
# field embeddings (needed to extend scalars)

def _embedding_codes(src, dst):
    if src == dst:
        return np.arange(src.q, dtype=np.int64)
    if src.p != dst.p or dst.k % src.k:
        raise FieldMismatch("%r does not embed in %r" % (src, dst))
    if src.k == 1:
        return np.arange(src.q, dtype=np.int64)
    # find a root of src.modulus in dst, by brute force
    mod = src.modulus
    root = None
    for c in range(dst.q):
        acc = 0
        pw = 1
        for coef in mod:
            if coef:
                acc = dst.add_table[acc, dst.mul_table[pw, coef]]
            pw = dst.mul_table[pw, c]
        if acc == 0:
            root = c
            break
    if root is None:
        raise FieldMismatch("no root of %r in %r" % (mod, dst))
    out = np.zeros(src.q, dtype=np.int64)
    for code in range(src.q):
        acc = 0
        pw = 1
        for coef in src.coeffs(code):
            if coef:
                acc = dst.add_table[acc, dst.mul_table[pw, coef]]
            pw = dst.mul_table[pw, root]
        out[code] = acc
    return out


def _field_embedding_codes(self, other):
    return _embedding_codes(self, other)


Field.embedding_codes = _field_embedding_codes


# ---------------------------------------------------------------------------
# row reduction

def _rref(m):
    f = m.field
    a = m.a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not len(nz):
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = a[r, c]
        if lead != 1:
            a[r, c:] = f.mul(a[r, c:], f.inv(lead))
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if len(others):
            prow = a[r, c:]
            a[others, c:] = f.sub(a[others, c:], f.mul(col[others][:, None], prow[None, :]))
        pivots.append(c)
        r += 1
    return Matrix(f, a, check=False), r, pivots


@op("exactla.rref")
def rref(m):
    """Reduced row-echelon form: returns (R, rank, pivot columns)."""
    return _rref(m)


class Subspace:
    """Row space of a matrix, stored as its reduced echelon basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, rows=None, _reduced=None):
        self.field = field
        self.ambient_dim = ambient_dim
        if _reduced is not None:
            self.basis, self.pivots = _reduced
            return
        if rows is None:
            rows = Matrix.zeros(field, 0, ambient_dim)
        if rows.cols != ambient_dim:
            raise AmbientMismatch((rows.cols, ambient_dim))
        r, rank, piv = _rref(rows)
        self.basis = Matrix(field, r.a[:rank].copy(), check=False)
        self.pivots = piv

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, _reduced=(Matrix.identity(field, n), list(range(n))))

    @property
    def dim(self):
        return self.basis.rows

    def __repr__(self):
        return "Subspace(dim=%d, ambient=%d, %r)" % (self.dim, self.ambient_dim, self.field)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.field == self.field
                and other.ambient_dim == self.ambient_dim and other.basis == self.basis)

    def __hash__(self):
        return hash(self.basis)

    def _compatible(self, other):
        if other.field != self.field:
            raise FieldMismatch((self.field, other.field))
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch((self.ambient_dim, other.ambient_dim))

    def residual(self, vecs):
        """vecs minus their projection along the echelon basis (rows)."""
        f = self.field
        a = vecs.a
        if not self.dim or not a.shape[0]:
            return a.copy()
        c = a[:, self.pivots]
        return f.sub(a, f.matmul_codes(c, self.basis.a))

    def contains(self, vecs):
        """True iff every row of vecs lies in the subspace."""
        if isinstance(vecs, Subspace):
            self._compatible(vecs)
            vecs = vecs.basis
        return not self.residual(vecs).any()

    def coords(self, vecs):
        """Coordinates (rows) of vectors in the echelon basis."""
        if not self.contains(vecs):
            raise NotContained("vectors are not in the subspace")
        return Matrix(self.field, vecs.a[:, self.pivots].copy(), check=False)

    def __add__(self, other):
        self._compatible(other)
        return Subspace(self.field, self.ambient_dim, vstack([self.basis, other.basis]))

    def __le__(self, other):
        return other.contains(self)


@op("exactla.kernel_basis")
def kernel_basis(m):
    """Right kernel {v : M v = 0} as a Subspace of dimension-cols space."""
    r, rank, piv = _rref(m)
    f = m.field
    n = m.cols
    free = [c for c in range(n) if c not in set(piv)]
    k = np.zeros((len(free), n), dtype=np.int64)
    for idx, c in enumerate(free):
        k[idx, c] = 1
        if rank:
            k[idx, piv] = f.neg(r.a[:rank, c])
    return Subspace(f, n, Matrix(f, k, check=False))


@op("exactla.image_basis")
def image_basis(m):
    """Column space of M as a Subspace of dimension-rows space."""
    return Subspace(m.field, m.rows, m.T)


def left_kernel(m):
    """{y : y M = 0} as rows."""
    return kernel_basis(m.T)


@op("exactla.intersect")
def intersect(u, w):
    """Zassenhaus intersection of two subspaces of the same ambient space."""
    u._compatible(w)
    f = u.field
    n = u.ambient_dim
    if not u.dim or not w.dim:
        return Subspace.zero(f, n)
    top = np.hstack([u.basis.a, u.basis.a])
    bot = np.hstack([w.basis.a, np.zeros_like(w.basis.a)])
    r, rank, piv = _rref(Matrix(f, np.vstack([top, bot]), check=False))
    rows = [i for i in range(rank) if piv[i] >= n]
    inter = r.a[rows, n:]
    return Subspace(f, n, Matrix(f, inter, check=False))


class Quotient:
    """Concrete model of S/T: coordinates, projection and a lift."""

    def __init__(self, S, T, dim, project, lift, t_coords):
        self.S = S
        self.T = T
        self.dim = dim
        self.project = project  # dim S x dim, acts on S-coordinate rows
        self.lift = lift        # dim x dim S, rows are S-coordinates
        self._t = t_coords

    def __iter__(self):
        return iter((self.dim, self.project, self.lift))

    @cached_property
    def lift_ambient(self):
        """Rows: ambient vectors representing the quotient basis."""
        return self.lift @ self.S.basis

    def reduce(self, vecs):
        """Quotient coordinates (rows) of ambient vectors lying in S."""
        return self.S.coords(vecs) @ self.project


@op("exactla.quotient")
def quotient(ambient_dim, S, T):
    """S/T for T inside S, with S-coordinates -> quotient coordinates."""
    if S.ambient_dim != ambient_dim or T.ambient_dim != ambient_dim:
        raise AmbientMismatch((ambient_dim, S.ambient_dim, T.ambient_dim))
    f = S.field
    if not S.contains(T.basis):
        raise NotContained("T is not a subspace of S")
    s = S.dim
    tc = S.coords(T.basis)
    r, rank, piv = _rref(tc)
    nonpiv = [j for j in range(s) if j not in set(piv)]
    pm = np.zeros((s, s), dtype=np.int64)
    if rank:
        pm[piv, :] = r.a[:rank]
    proj = f.sub(np.eye(s, dtype=np.int64), pm)[:, nonpiv]
    lift = np.zeros((len(nonpiv), s), dtype=np.int64)
    lift[np.arange(len(nonpiv)), nonpiv] = 1
    return Quotient(S, T, len(nonpiv), Matrix(f, proj, check=False),
                    Matrix(f, lift, check=False), r)


def induced_map(A, q_src, q_dst):
    """Matrix of the map S1/T1 -> S2/T2 induced by A (column convention).

    A must send S1 into S2 and T1 into T2; this is verified.
    """
    if A.field != q_src.S.field:
        raise FieldMismatch((A.field, q_src.S.field))
    if A.cols != q_src.S.ambient_dim or A.rows != q_dst.S.ambient_dim:
        raise ShapeMismatch((A.shape, q_src.S.ambient_dim, q_dst.S.ambient_dim))
    if q_src.T.dim:
        imgT = q_src.T.basis @ A.T
        if not q_dst.T.contains(imgT):
            raise NotInvariant("operator does not carry T into T")
    imgS = q_src.S.basis @ A.T
    if not q_dst.S.contains(imgS):
        raise NotInvariant("operator does not carry S into S")
    if not q_src.dim:
        return Matrix.zeros(A.field, q_dst.dim, 0)
    imgs = q_src.lift_ambient @ A.T
    return q_dst.reduce(imgs).T


@op("exactla.induced_operator")
def induced_operator(A, S, T, q=None):
    """Operator induced by A on S/T, in the coordinates of quotient()."""
    if q is None:
        q = quotient(S.ambient_dim, S, T)
    return induced_map(A, q, q)


def solve_left(B, Y):
    """Some X with X B = Y (rows), or None if inconsistent."""
    f = B.field
    # solve B^T X^T = Y^T
    m = Matrix(f, np.hstack([B.a.T, Y.a.T]), check=False)
    r, rank, piv = _rref(m)
    nb = B.rows
    if any(c >= nb for c in piv):
        return None
    x = np.zeros((nb, Y.rows), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r.a[i, nb:]
    return Matrix(f, x.T.copy(), check=False)


def random_matrix(field, rows, cols, rng):
    return Matrix(field, rng.integers(0, field.q, size=(rows, cols), dtype=np.int64))


def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        if m.rank() == n:
            return m
