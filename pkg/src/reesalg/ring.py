"""Base rings A = k[x1..xn]/I and matrices over them."""
from __future__ import annotations

import re
from itertools import product

from .groebner import buchberger, normal_form, standard_monomials
from .poly import GF, QQ, ParseError, Poly, PolyRing

__all__ = ["Ring", "Matrix", "parse_ring"]


class Ring:
    """A computable noetherian ring k[x]/I carried with the reduced Groebner basis of I."""

    __slots__ = ("poly_ring", "ideal", "_hash", "_kbasis")

    def __init__(self, field, names, ideal=()):
        pr = names if isinstance(names, PolyRing) else PolyRing(field, names)
        gens = [pr(g) for g in ideal]
        gb = tuple(buchberger(gens))
        if any(g.is_constant() and g for g in gb):
            raise ValueError("the defining ideal is the unit ideal")
        self.poly_ring = pr
        self.ideal = gb
        self._hash = hash((pr, gb))
        self._kbasis = None

    @property
    def field(self):
        return self.poly_ring.field

    @property
    def names(self):
        return self.poly_ring.names

    @property
    def nvars(self):
        return self.poly_ring.nvars

    def __eq__(self, other):
        return isinstance(other, Ring) and self.poly_ring == other.poly_ring and self.ideal == other.ideal

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ring({self.describe()!r})"

    def describe(self):
        base = f"{'QQ' if not self.field.p else f'GF({self.field.p})'}[{','.join(self.names)}]"
        if self.ideal:
            base += "/(" + ", ".join(str(g) for g in self.ideal) + ")"
        return base

    @property
    def zero(self):
        return self.poly_ring.zero

    @property
    def one(self):
        return self.poly_ring.one

    def reduce(self, p):
        if not self.ideal or not p:
            return p
        return normal_form(p, self.ideal)

    def __call__(self, value):
        return self.reduce(self.poly_ring(value))

    def parse(self, text):
        return self.reduce(self.poly_ring.parse(text))

    def var(self, name):
        return self.reduce(self.poly_ring.var(name))

    def is_unit_constant(self, p):
        return bool(p) and p.is_constant()

    def kbasis(self):
        """Standard monomials of A as a k-vector space, or None when A is infinite-dimensional."""
        if self._kbasis is None:
            sm = standard_monomials(self, ((self.one,),), 0)
            self._kbasis = () if sm is None else tuple(e for _, e in sm)
        return self._kbasis or None

    def is_finite(self):
        return self.kbasis() is not None

    def elements(self):
        """Every element of a finite ring (finite field and finite k-dimension)."""
        basis = self.kbasis()
        if basis is None or not self.field.p:
            raise ValueError("ring is not finite")
        pr = self.poly_ring
        for coeffs in product(range(self.field.p), repeat=len(basis)):
            yield Poly(pr, {e: c for e, c in zip(basis, coeffs) if c})


_RING_RE = re.compile(
    r"^\s*(QQ|Q|GF\(\s*(\d+)\s*\)|F_?(\d+))\s*\[\s*([^\]]*)\]\s*(?:/\s*\((.*)\)\s*)?$"
)


def _split_top(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_ring(text):
    """Parse ``QQ[x,y]``, ``GF(5)[x,y]/(x^2, x*y, y^2)`` and the like."""
    m = _RING_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse ring description {text!r}")
    p = int(m.group(2) or m.group(3) or 0)
    field = GF(p) if p else QQ
    names = [n.strip() for n in m.group(4).split(",") if n.strip()]
    pr = PolyRing(field, names)
    ideal = [pr.parse(g) for g in _split_top(m.group(5) or "")]
    return Ring(field, pr, ideal)


class Matrix:
    """Immutable matrix over a Ring; entries are reduced Polys."""

    __slots__ = ("ring", "nrows", "ncols", "rows", "_hash")

    def __init__(self, ring, rows, nrows=None, ncols=None):
        rows = tuple(tuple(ring.reduce(ring.poly_ring(x)) for x in row) for row in rows)
        self.ring = ring
        self.nrows = len(rows) if nrows is None else nrows
        if ncols is None:
            if not rows:
                raise ValueError("ncols must be given for a matrix without rows")
            ncols = len(rows[0])
        self.ncols = ncols
        if len(rows) != self.nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"ragged matrix: expected {self.nrows}x{ncols}")
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, ring, rows, nrows, ncols):
        m = cls.__new__(cls)
        m.ring, m.rows, m.nrows, m.ncols, m._hash = ring, rows, nrows, ncols, None
        return m

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero
        return cls._raw(ring, tuple((z,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls._raw(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, ring, columns, nrows):
        columns = list(columns)
        rows = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls._raw(ring, rows, nrows, len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows]})"

    def is_zero(self):
        return not any(x for row in self.rows for x in row)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        ring = self.ring
        zero = ring.zero
        cols = other.columns()
        rows = []
        for row in self.rows:
            out = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out.append(ring.reduce(acc))
            rows.append(tuple(out))
        return Matrix._raw(ring, tuple(rows), self.nrows, other.ncols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix._raw(self.ring, rows, self.nrows, self.ncols)

    def __neg__(self):
        return Matrix._raw(self.ring, tuple(tuple(-a for a in r) for r in self.rows), self.nrows, self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        ring = self.ring
        c = ring.poly_ring(c)
        return Matrix._raw(ring, tuple(tuple(ring.reduce(a * c) for a in r) for r in self.rows), self.nrows, self.ncols)

    def T(self):
        return Matrix.from_columns(self.ring, self.rows, self.ncols)

    def hstack(self, *others):
        mats = (self,) + others
        if len({m.nrows for m in mats}) > 1:
            raise ValueError("hstack needs equal row counts")
        rows = tuple(sum((m.rows[i] for m in mats), ()) for i in range(self.nrows))
        return Matrix._raw(self.ring, rows, self.nrows, sum(m.ncols for m in mats))

    def vstack(self, *others):
        mats = (self,) + others
        if len({m.ncols for m in mats}) > 1:
            raise ValueError("vstack needs equal column counts")
        rows = sum((m.rows for m in mats), ())
        return Matrix._raw(self.ring, rows, sum(m.nrows for m in mats), self.ncols)

    def select_columns(self, idx):
        return Matrix.from_columns(self.ring, [self.column(j) for j in idx], self.nrows)

    def select_rows(self, idx):
        return Matrix._raw(self.ring, tuple(self.rows[i] for i in idx), len(idx), self.ncols)

    def kron(self, other):
        ring = self.ring
        rows = []
        for r1 in self.rows:
            for r2 in other.rows:
                rows.append(tuple(ring.reduce(a * b) if a and b else ring.zero for a in r1 for b in r2))
        return Matrix._raw(ring, tuple(rows), self.nrows * other.nrows, self.ncols * other.ncols)

    def to_strings(self):
        return [[str(x) for x in r] for r in self.rows]


def block_diag(ring, mats):
    nrows = sum(m.nrows for m in mats)
    ncols = sum(m.ncols for m in mats)
    z = ring.zero
    rows = []
    c0 = 0
    for m in mats:
        for r in m.rows:
            rows.append((z,) * c0 + r + (z,) * (ncols - c0 - m.ncols))
        c0 += m.ncols
    return Matrix._raw(ring, tuple(rows), nrows, ncols)


def vec(m):
    """Column-major vectorization as a single column tuple."""
    return tuple(x for j in range(m.ncols) for x in m.column(j))


def unvec(ring, column, nrows, ncols):
    return Matrix.from_columns(ring, [column[j * nrows:(j + 1) * nrows] for j in range(ncols)], nrows)
