"""Smith normal form oracle for modules over k[x].

Invariant factors come from Euclidean row and column elimination on sympy
polynomials, sharing no code with the Groebner machinery.  The slower
determinantal-divisor formula (d_k = monic gcd of the k x k minors, factor
k = d_k / d_{k-1}) is kept as a cross-check for small matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import sympy

from .fpmod import FpModule

__all__ = ["SNF", "snf_oracle", "smith_factors", "snf_of_matrix", "torsion_dimension", "hom_invariants", "tensor_invariants"]


@dataclass(frozen=True)
class SNF:
    free_rank: int
    factors: tuple  # monic non-unit invariant factors, as sympy Polys, divisibility chain

    def k_dimension(self):
        return None if self.free_rank else sum(f.degree() for f in self.factors)

    def strings(self):
        return [str(f.as_expr()).replace("**", "^") for f in self.factors]


def _to_sympy(p, sym, domain):
    terms = {e: sympy.Rational(int(c.numerator), int(c.denominator)) if hasattr(c, "denominator") else int(c) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(terms, sym, domain=domain) if terms else sympy.Poly(0, sym, domain=domain)


def snf_of_matrix(rows, sym, domain):
    """Invariant factors (all of them, units included) of a matrix of sympy Polys."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    zero = sympy.Poly(0, sym, domain=domain)
    divisors = [sympy.Poly(1, sym, domain=domain)]
    for k in range(1, min(nrows, ncols) + 1):
        g = zero
        for ri in combinations(range(nrows), k):
            for ci in combinations(range(ncols), k):
                sub = sympy.Matrix([[rows[i][j].as_expr() for j in ci] for i in ri])
                det = sympy.Poly(sub.det(method="berkowitz"), sym, domain=domain)
                if not det.is_zero:
                    g = det if g.is_zero else sympy.gcd(g, det)
        if g.is_zero:
            break
        divisors.append(g.monic())
    return [sympy.div(divisors[k], divisors[k - 1])[0].monic() for k in range(1, len(divisors))]


def smith_factors(rows, sym, domain):
    """Invariant factors (units included) by Euclidean elimination."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if A else 0
    factors = []
    for t in range(min(m, n)):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if not A[i][j].is_zero and (piv is None or A[i][j].degree() < A[piv[0]][piv[1]].degree()):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if not A[i][t].is_zero:
                    q, r = sympy.div(A[i][t], p)
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if not r.is_zero:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if not A[t][j].is_zero:
                    q, r = sympy.div(A[t][j], p)
                    for row in A:
                        row[j] = row[j] - q * row[t]
                    if not r.is_zero:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if not sympy.rem(A[i][j], p).is_zero), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        factors.append(A[t][t].monic())
    return factors


def snf_oracle(M: FpModule) -> SNF:
    ring = M.ring
    if ring.nvars != 1 or ring.ideal:
        raise ValueError("the Smith form oracle needs a univariate polynomial ring")
    p = ring.field.p
    domain = sympy.GF(p) if p else sympy.QQ
    sym = sympy.Symbol(ring.names[0])
    rows = [[_to_sympy(e, sym, domain) for e in row] for row in M.relations.rows]
    factors = smith_factors(rows, sym, domain) if M.nrels else []
    rank = len(factors)
    nonunit = tuple(f for f in factors if f.degree() > 0)
    return SNF(M.ngens - rank, nonunit)


def torsion_dimension(s: SNF) -> int:
    return sum(f.degree() for f in s.factors)


def _gcd_degree(f, g):
    return sympy.gcd(f, g).degree()


def hom_invariants(s: SNF, t: SNF):
    """(free rank, torsion k-dimension) of Hom(M, N) from the decompositions of M and N."""
    a, b = s.free_rank, t.free_rank
    tors = a * torsion_dimension(t) + sum(_gcd_degree(f, g) for f in s.factors for g in t.factors)
    return a * b, tors


def tensor_invariants(s: SNF, t: SNF):
    """(free rank, torsion k-dimension) of M (x) N."""
    a, b = s.free_rank, t.free_rank
    tors = a * torsion_dimension(t) + b * torsion_dimension(s)
    tors += sum(_gcd_degree(f, g) for f in s.factors for g in t.factors)
    return a * b, tors
