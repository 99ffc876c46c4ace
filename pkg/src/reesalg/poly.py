"""Exact multivariate polynomials over QQ and prime fields.

A polynomial is an immutable mapping from exponent tuples to nonzero
coefficients.  Rationals are ``gmpy2.mpq`` (always reduced, positive
denominator); prime-field elements are plain ints in ``[0, p)``.
"""
from __future__ import annotations

import re
from functools import reduce as _fold

from gmpy2 import mpq

__all__ = [
    "Field",
    "QQ",
    "GF",
    "MonomialOrder",
    "DEGREVLEX",
    "LEX",
    "block_order",
    "PolyRing",
    "Poly",
    "ParseError",
]


class Field:
    """Coefficient field: ``QQ`` (p == 0) or ``GF(p)``."""

    __slots__ = ("p",)

    def __init__(self, p=0):
        if p:
            if p < 2 or p >= 2**31 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if not self.p else f"GF({self.p})"

    def __call__(self, value):
        if self.p:
            if isinstance(value, int):
                return value % self.p
            q = mpq(value)
            return int(q.numerator) * pow(int(q.denominator), -1, self.p) % self.p
        return mpq(value)

    @property
    def zero(self):
        return 0 if self.p else mpq(0)

    @property
    def one(self):
        return 1 if self.p else mpq(1)

    def inv(self, c):
        if self.p:
            return pow(c, -1, self.p)
        return 1 / c

    def fmt(self, c):
        if self.p:
            return str(c)
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"

    def elements(self):
        if not self.p:
            raise ValueError("QQ is infinite")
        return range(self.p)


QQ = Field(0)


def GF(p):
    return Field(p)


# Order keys are arranged so that the *smallest* key is the *largest* monomial;
# this lets heapq and min() pick leading terms directly.

def _drl_key(e):
    return (-sum(e),) + tuple(reversed(e))


def _lex_key(e):
    return tuple(-a for a in e)


class MonomialOrder:
    """A monomial order given by a sort key (smaller key = larger monomial)."""

    __slots__ = ("name", "split", "_cache")

    def __init__(self, name, split=None):
        if name not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {name!r}")
        self.name = name
        self.split = split
        self._cache = {}

    def key(self, e):
        k = self._cache.get(e)
        if k is None:
            if self.name == "degrevlex":
                k = _drl_key(e)
            elif self.name == "lex":
                k = _lex_key(e)
            else:
                s = self.split
                k = _drl_key(e[:s]) + _drl_key(e[s:])
            if len(self._cache) < 2_000_000:
                self._cache[e] = k
        return k

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.name, self.split) == (other.name, other.split)

    def __hash__(self):
        return hash((self.name, self.split))

    def __repr__(self):
        return self.name if self.split is None else f"block({self.split})"


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
_BLOCK_ORDERS = {}


def block_order(split):
    """Elimination order: degrevlex on the first ``split`` variables, then degrevlex on the rest."""
    if split not in _BLOCK_ORDERS:
        _BLOCK_ORDERS[split] = MonomialOrder("block", split)
    return _BLOCK_ORDERS[split]


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} (at offset {pos})")
        self.msg = msg
        self.pos = pos


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


class PolyRing:
    """The polynomial ring k[x1..xn] with named variables."""

    __slots__ = ("field", "names", "nvars", "_index", "_hash")

    def __init__(self, field, names):
        names = tuple(names)
        for n in names:
            if not _NAME_RE.match(n):
                raise ValueError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((field, names))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.field == self.field and other.names == self.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.names)}]"

    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1):
        c = self.field(coeff)
        return Poly(self, {tuple(exp): c} if c else {})

    def index(self, name):
        return self._index[name]

    def __call__(self, value):
        if isinstance(value, Poly):
            if value.ring != self:
                raise ValueError(f"polynomial from {value.ring!r} used in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    # -- parsing ---------------------------------------------------------

    def parse(self, text):
        """Parse the ASCII grammar ``3/2*x^2*y - 5`` (also ``**``, parentheses)."""
        return _Parser(self, text).parse()


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
            if m.group(1):
                self.tokens.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            else:
                op = m.group(3)
                self.tokens.append(("op", "^" if op == "**" else op, m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty polynomial", 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return p

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division only by nonzero constants", pos)
                p = p * self.ring.const(self.ring.field.inv(d.constant_coeff()))
            else:
                return p

    def factor(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, n, p2 = self.take()
            if k2 != "num":
                raise ParseError("exponent must be a nonnegative integer", p2)
            return base ** n
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring._index:
                raise ParseError(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", p2)
            return p
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}", pos)


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, indices):
        return max((sum(e[i] for i in indices) for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return sorted(used)

    def lead(self, order=DEGREVLEX):
        """Leading (exponent, coefficient) under ``order``."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = min(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order=DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return Poly(self.ring, {e: ((-c) % p if p else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Poly(self.ring, {})
        p = self.ring.field.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                c = c1 * c2
                if v is not None:
                    c = c + v
                if p:
                    c %= p
                if c:
                    out[e] = c
                elif v is not None:
                    del out[e]
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c):
        f = self.ring.field
        c = f(c) if not isinstance(c, mpq) or f.p else c
        if not c:
            return Poly(self.ring, {})
        p = f.p
        return Poly(self.ring, {e: ((v * c) % p if p else v * c) for e, v in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self, order=DEGREVLEX):
        if not self.terms:
            return self
        _, c = self.lead(order)
        return self.scale(self.ring.field.inv(c))

    def subs(self, images):
        """Substitute ``images[i]`` (Polys in a common ring) for variable i."""
        target = images[0].ring if images else self.ring
        result = target.zero
        powers = [dict() for _ in images]
        for e, c in self.terms.items():
            t = Poly(target, {(0,) * target.nvars: c})
            for i, a in enumerate(e):
                if a:
                    pw = powers[i].get(a)
                    if pw is None:
                        pw = images[i] ** a
                        powers[i][a] = pw
                    t = t * pw
            result = result + t
        return result

    def change_ring(self, ring, index_map):
        """Re-embed into ``ring``; variable i goes to ``index_map[i]``."""
        out = {}
        n = ring.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for i, a in enumerate(e):
                if a:
                    ne[index_map[i]] += a
            out[tuple(ne)] = c
        return Poly(ring, out)

    # -- comparison & display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()!r})"

    def format(self, order=DEGREVLEX):
        if not self.terms:
            return "0"
        f = self.ring.field
        names = self.ring.names
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a
            )
            neg = not f.p and c < 0
            mag = -c if neg else c
            cs = f.fmt(mag)
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_sum(polys, ring):
    return _fold(lambda a, b: a + b, polys, ring.zero)
