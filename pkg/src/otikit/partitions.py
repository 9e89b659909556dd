"""Partitions: dominance, row subtraction, stability predicates, Kostka numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

from otikit.registry import op


class WeightMismatch(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        if isinstance(parts, str):
            parts = parse_parts(parts)
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError("negative part in %r" % (parts,))
        parts = tuple(x for x in parts if x)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("%r is not weakly decreasing" % (parts,))
        return super().__new__(cls, parts)

    @classmethod
    def from_composition(cls, comp):
        return cls(sorted((int(x) for x in comp if x), reverse=True))

    @property
    def n(self):
        return sum(self)

    @property
    def parts(self):
        return tuple(self)

    def part(self, i):
        """1-based part, zero past the end."""
        return self[i - 1] if i <= len(self) else 0

    def __repr__(self):
        return "Partition(%s)" % (",".join(map(str, self)) or "[]")

    def __str__(self):
        return ",".join(map(str, self)) or "[]"

    def conjugate(self):
        if not self:
            return Partition()
        return Partition([sum(1 for x in self if x > j) for j in range(self[0])])

    def hook_lengths(self):
        conj = self.conjugate()
        return [[self[i] - j + conj[j] - i - 1 for j in range(self[i])] for i in range(len(self))]

    def num_standard_tableaux(self):
        from math import factorial, prod
        return factorial(self.n) // prod(h for row in self.hook_lengths() for h in row)

    def add_to_row(self, i, k):
        """Composition-style addition, re-sorted (used for λ + k e_i)."""
        parts = list(self) + [0] * max(0, i - len(self))
        parts[i - 1] += k
        return Partition.from_composition(parts)


def parse_parts(text):
    text = text.strip()
    if text in ("", "[]", "()"):
        return ()
    text = text.strip("[]()")
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def partitions_of(n, max_part=None):
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + tuple(rest))


@op("partitions.dominance_leq")
def dominance_leq(mu, lam):
    """mu ⊴ lam: every partial sum of lam is at least that of mu."""
    mu, lam = Partition(mu), Partition(lam)
    if mu.n != lam.n:
        raise WeightMismatch((mu, lam))
    length = max(len(mu), len(lam))
    a = list(accumulate(list(mu) + [0] * (length - len(mu))))
    b = list(accumulate(list(lam) + [0] * (length - len(lam))))
    return all(x <= y for x, y in zip(a, b))


@op("partitions.subtract_row")
def subtract_row(lam, i, k):
    """Replace lam_i by lam_i - k and re-sort; None when lam_i < k."""
    lam = Partition(lam)
    if not 1 <= i <= len(lam):
        raise IndexError("row %d out of range for %r" % (i, lam))
    if lam[i - 1] < k:
        return None
    parts = list(lam)
    parts[i - 1] -= k
    return Partition.from_composition(parts)


@dataclass(frozen=True)
class StabilityReport:
    quasistable: bool
    stable: bool
    truncated: bool
    p: int
    r: int
    n: int
    boundary_rational: bool = False

    def as_dict(self):
        return {
            "quasistable": self.quasistable,
            "stable": self.stable,
            "truncated": self.truncated,
            "p": self.p,
            "r": self.r,
            "n": self.n,
            "boundary_rational": self.boundary_rational,
        }


def is_quasistable(lam, q):
    lam = Partition(lam)
    return lam.part(1) >= q and lam.part(2) < q


def is_stable(lam, q):
    # the half-sum bound is compared over the rationals, no rounding
    lam = Partition(lam)
    n = lam.n
    if n - lam.part(1) >= q:
        return False
    if n < 3 * q and lam.part(1) < Fraction(n + q, 2):
        return False
    return True


def is_truncated(lam, q):
    lam = Partition(lam)
    return is_stable(lam.add_to_row(1, q), q)


@op("partitions.stability")
def stability(lam, p, r):
    lam = Partition(lam)
    q = p ** r
    n = lam.n
    boundary = (n < 3 * q and (n + q) % 2 == 1) or (n + q < 3 * q and (n + 2 * q) % 2 == 1)
    return StabilityReport(
        quasistable=is_quasistable(lam, q),
        stable=is_stable(lam, q),
        truncated=is_truncated(lam, q),
        p=p, r=r, n=n,
        boundary_rational=boundary,
    )


def _horizontal_strips(shape, k, bound):
    """Shapes obtained from shape by adding a horizontal strip of k boxes.

    bound is the number of rows allowed (the new strip may open a new row).
    """
    shape = list(shape)
    rows = min(len(shape) + 1, bound)
    shape = shape + [0] * (rows - len(shape))
    out = []

    def rec(i, left, cur):
        if i == rows:
            if left == 0:
                out.append(tuple(x for x in cur if x))
            return
        cap = left if i == 0 else min(left, shape[i - 1] - shape[i])
        for add in range(cap, -1, -1):
            cur.append(shape[i] + add)
            rec(i + 1, left - add, cur)
            cur.pop()

    rec(0, k, [])
    return out


@lru_cache(maxsize=None)
def _kostka(mu, content):
    if not content:
        return 1 if not mu else 0

    # fill values 1, 2, ... as successive horizontal strips that stay inside mu
    @lru_cache(maxsize=None)
    def count(shape, idx):
        if idx == len(content):
            return 1 if shape == mu else 0
        total = 0
        for nxt in _horizontal_strips(shape, content[idx], len(mu)):
            if len(nxt) <= len(mu) and all(a <= b for a, b in zip(nxt, mu)):
                total += count(nxt, idx + 1)
        return total

    return count((), 0)


@op("partitions.kostka")
def kostka(mu, content):
    """Number of SSYT of shape mu with the given content (a composition)."""
    mu = Partition(mu)
    content = tuple(int(x) for x in content)
    if any(c < 0 for c in content):
        raise ValueError("negative content %r" % (content,))
    if mu.n != sum(content):
        raise WeightMismatch((mu, content))
    return _kostka(tuple(mu), tuple(c for c in content if c))


def ssyt(mu, content):
    """Explicit enumeration of SSYT (rows as lists), for small cross-checks."""
    mu = Partition(mu)
    content = [c for c in content]
    cells = [(i, j) for i in range(len(mu)) for j in range(mu[i])]
    grid = {}
    remaining = list(content)
    out = []

    def rec(idx):
        if idx == len(cells):
            out.append([[grid[(i, j)] for j in range(mu[i])] for i in range(len(mu))])
            return
        i, j = cells[idx]
        lo = 0
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for v in range(lo, len(remaining)):
            if remaining[v]:
                remaining[v] -= 1
                grid[(i, j)] = v
                rec(idx + 1)
                remaining[v] += 1
        grid.pop((i, j), None)

    rec(0)
    return out


@op("partitions.specht_vector")
def specht_vector(lam):
    """[M^lam] in the Specht basis: mu -> K_{mu, lam}, nonzero entries only."""
    lam = tuple(int(x) for x in lam)
    n = sum(lam)
    out = {}
    for mu in partitions_of(n):
        k = kostka(mu, lam)
        if k:
            out[mu] = k
    return out


def multinomial(parts):
    from math import factorial
    out = factorial(sum(parts))
    for x in parts:
        out //= factorial(x)
    return out
