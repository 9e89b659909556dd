"""Grothendieck ring of the Verlinde category Ver_p."""

from __future__ import annotations

from dataclasses import dataclass

from otikit.exactla import field_create
from otikit.partitions import Partition
from otikit.registry import op


class IndexOutOfRange(ValueError):
    pass


class PrimeMismatch(ValueError):
    pass


class PartExceedsP(ValueError):
    pass


@op("verlinde.fuse")
def fuse(i, j, p):
    """L_i (x) L_j = sum_{k=1}^{min(i,j,p-i,p-j)} L_{|i-j|+2k-1}, largest first."""
    for x in (i, j):
        if not 1 <= x <= p - 1:
            raise IndexOutOfRange("L_%d does not exist for p=%d" % (x, p))
    top = min(i, j, p - i, p - j)
    return sorted((abs(i - j) + 2 * k - 1 for k in range(1, top + 1)), reverse=True)


def format_fusion(indices):
    return " ⊕ ".join("L%d" % i for i in indices) if indices else "0"


@dataclass(frozen=True)
class VerObject:
    p: int
    mult: tuple

    def __post_init__(self):
        if len(self.mult) != self.p - 1:
            raise IndexOutOfRange("need %d multiplicities, got %d" % (self.p - 1, len(self.mult)))
        if any(m < 0 for m in self.mult):
            raise ValueError("negative multiplicity")

    @classmethod
    def simple(cls, i, p):
        if not 1 <= i <= p - 1:
            raise IndexOutOfRange(i)
        mult = [0] * (p - 1)
        mult[i - 1] = 1
        return cls(p, tuple(mult))

    @classmethod
    def zero(cls, p):
        return cls(p, (0,) * (p - 1))

    def __add__(self, other):
        if other.p != self.p:
            raise PrimeMismatch((self.p, other.p))
        return VerObject(self.p, tuple(a + b for a, b in zip(self.mult, other.mult)))

    def is_zero(self):
        return not any(self.mult)

    def as_json(self):
        return {"p": self.p, "mult": list(self.mult)}

    def __str__(self):
        parts = []
        for i, m in enumerate(self.mult, start=1):
            if m:
                parts.append("L%d" % i if m == 1 else "%d·L%d" % (m, i))
        return " ⊕ ".join(parts) or "0"


@op("verlinde.tensor")
def tensor(a, b):
    if a.p != b.p:
        raise PrimeMismatch((a.p, b.p))
    p = a.p
    out = [0] * (p - 1)
    for i, ma in enumerate(a.mult, start=1):
        if not ma:
            continue
        for j, mb in enumerate(b.mult, start=1):
            if not mb:
                continue
            for k in fuse(i, j, p):
                out[k - 1] += ma * mb
    return VerObject(p, tuple(out))


@op("verlinde.dim_p")
def dim_p(a):
    """sum i * mult_i as an element of GF(p)."""
    f = field_create(a.p)
    return f(sum(i * m for i, m in enumerate(a.mult, start=1)))


@op("verlinde.from_jordan")
def from_jordan(jt, p):
    """Blocks of size i < p give L_i; blocks of size p are negligible and dropped."""
    jt = Partition(jt)
    if any(x > p for x in jt):
        raise PartExceedsP("part larger than %d in %s" % (p, jt))
    mult = [0] * (p - 1)
    for x in jt:
        if x < p:
            mult[x - 1] += 1
    return VerObject(p, tuple(mult))
