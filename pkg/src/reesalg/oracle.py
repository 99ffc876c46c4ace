"""Brute-force linear algebra over a finite ring F_p[x]/I.

Everything here is computed from scratch: the ring structure comes from
sympy's Groebner bases and modules become F_p-vector spaces with one
action matrix per variable.  Hom spaces are solved as commutation
equations, so nothing depends on the syzygy machinery of the package.
"""
from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np
import sympy

__all__ = ["FiniteRing", "KModule", "rank_mod_p", "nullspace_mod_p"]


def _rref(mat, p):
    a = np.array(mat, dtype=np.int64) % p
    if a.size == 0:
        return a, []
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(mat, p):
    a = np.array(mat, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(_rref(a, p)[1])


def nullspace_mod_p(mat, p, ncols=None):
    """Basis (list of vectors) of {v : mat v = 0}."""
    a = np.array(mat, dtype=np.int64)
    n = a.shape[1] if a.ndim == 2 and a.size else ncols
    if a.size == 0:
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    red, piv = _rref(a, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-red[i, f]) % p
        basis.append(v)
    return basis


class FiniteRing:
    """Structure constants of F_p[x]/I on its standard monomials."""

    def __init__(self, p, names, ideal_strings):
        self.p = p
        self.names = list(names)
        self.syms = sympy.symbols(self.names)
        gens = [sympy.sympify(s.replace("^", "**"), locals=dict(zip(self.names, self.syms))) for s in ideal_strings]
        self.G = sympy.groebner(gens, *self.syms, modulus=p, order="grevlex")
        lms = [sympy.Poly(g, *self.syms, modulus=p).monoms(order="grevlex")[0] for g in self.G.exprs]
        n = len(self.syms)
        bound = []
        for i in range(n):
            pure = [lm[i] for lm in lms if all(lm[j] == 0 for j in range(n) if j != i)]
            if not pure:
                raise ValueError("ring is not finite dimensional")
            bound.append(min(pure))
        self.basis = sorted(
            (e for e in product(*[range(b) for b in bound]) if not any(all(e[j] >= lm[j] for j in range(n)) for lm in lms)),
            key=lambda e: (sum(e), e),
        )
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.dim = len(self.basis)
        # mult[i] : matrix of multiplication by variable i
        self.mult = []
        for i in range(n):
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            for a, e in enumerate(self.basis):
                mono = sympy.Mul(*[s ** k for s, k in zip(self.syms, e)]) * self.syms[i]
                m[:, a] = self.vector(mono)
            self.mult.append(m)

    def vector(self, expr):
        """Coordinates of a sympy expression (or text) on the standard monomials."""
        if isinstance(expr, str):
            expr = sympy.sympify(expr.replace("^", "**"), locals=dict(zip(self.names, self.syms)))
        _, rem = self.G.reduce(sympy.expand(expr))
        v = np.zeros(self.dim, dtype=np.int64)
        if rem == 0:
            return v
        for mon, c in sympy.Poly(rem, *self.syms, modulus=self.p).terms():
            v[self.index[mon]] = int(c) % self.p
        return v

    def mult_matrix(self, expr):
        """Matrix of multiplication by an element."""
        v = self.vector(expr)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for b, e in enumerate(self.basis):
            if v[b]:
                mono = np.eye(self.dim, dtype=np.int64)
                for i, k in enumerate(e):
                    for _ in range(k):
                        mono = self.mult[i] @ mono % self.p
                out = (out + v[b] * mono) % self.p
        return out


class KModule:
    """A module over a FiniteRing as a vector space with variable actions."""

    def __init__(self, ring: FiniteRing, dim, actions):
        self.ring = ring
        self.dim = dim
        self.actions = [np.array(a, dtype=np.int64) % ring.p for a in actions]

    @classmethod
    def presented(cls, ring: FiniteRing, ngens, relation_columns):
        """coker of the relation matrix; entries are text polynomials."""
        p, d = ring.p, ring.dim
        N = ngens * d
        span = []
        for col in relation_columns:
            blocks = [ring.mult_matrix(e) if _nonzero(e) else None for e in col]
            for a in range(d):
                v = np.zeros(N, dtype=np.int64)
                for g, blk in enumerate(blocks):
                    if blk is not None:
                        v[g * d:(g + 1) * d] = blk[:, a]
                span.append(v)
        red, piv = _rref(np.array(span, dtype=np.int64).reshape(len(span), N) if span else np.zeros((0, N), dtype=np.int64), p)
        free = [c for c in range(N) if c not in piv]
        mod = cls.__new__(cls)
        mod.ring, mod.dim = ring, len(free)
        mod._red, mod._piv, mod._free, mod._N = red, piv, free, N

        def project(v):
            v = np.array(v, dtype=np.int64) % p
            for i, c in enumerate(piv):
                if v[c]:
                    v = (v - v[c] * red[i]) % p
            return v[free]

        mod.project = project
        actions = []
        for xi in ring.mult:
            act = np.zeros((mod.dim, mod.dim), dtype=np.int64)
            big = np.kron(np.eye(ngens, dtype=np.int64), xi)
            for j, c in enumerate(free):
                e = np.zeros(N, dtype=np.int64)
                e[c] = 1
                act[:, j] = project(big @ e)
            actions.append(act)
        mod.actions = actions
        mod.ngens = ngens
        return mod

    def lift_generator_map(self, target: "KModule", matrix_strings):
        """k-linear matrix of the A-map given on generators (target.ngens x self.ngens)."""
        ring, p, d = self.ring, self.ring.p, self.ring.dim
        out = np.zeros((target.dim, self.dim), dtype=np.int64)
        blocks = [[ring.mult_matrix(e) if _nonzero(e) else None for e in row] for row in matrix_strings]
        for j, c in enumerate(self._free):
            g, a = divmod(c, d)
            v = np.zeros(target._N, dtype=np.int64)
            for k in range(target.ngens):
                blk = blocks[k][g]
                if blk is not None:
                    v[k * d:(k + 1) * d] = blk[:, a]
            out[:, j] = target.project(v)
        return out


def _nonzero(e):
    return str(e).strip() not in ("0", "")


def hom_space(M: KModule, N: KModule):
    """Basis of Hom_A(M,N) as N.dim x M.dim matrices."""
    p = M.ring.p
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    eqs = []
    for XM, XN in zip(M.actions, N.actions):
        # T XM - XN T = 0, vec column-major: (XM^T ⊗ I) - (I ⊗ XN)
        eqs.append(np.kron(XM.T, np.eye(n, dtype=np.int64)) - np.kron(np.eye(m, dtype=np.int64), XN))
    sysm = np.vstack(eqs) % p if eqs else np.zeros((0, m * n), dtype=np.int64)
    sols = nullspace_mod_p(sysm, p, ncols=m * n)
    return [s.reshape((m, n)).T % p for s in sols]


def hom_module(M: KModule, N: KModule) -> KModule:
    """Hom_A(M,N) with the A-action through N."""
    p = M.ring.p
    basis = hom_space(M, N)
    B = np.array([b.flatten(order="F") for b in basis], dtype=np.int64).T if basis else np.zeros((M.dim * N.dim, 0), dtype=np.int64)
    acts = []
    for XN in N.actions:
        imgs = [(XN @ b % p).flatten(order="F") for b in basis]
        acts.append(_solve_columns(B, imgs, p))
    out = KModule(M.ring, len(basis), acts)
    out.basis = basis
    return out


def _solve_columns(B, targets, p):
    """Coordinates of each target in the column span of B (assumed independent)."""
    h = B.shape[1]
    out = np.zeros((h, len(targets)), dtype=np.int64)
    if not targets:
        return out
    aug = np.hstack([B, np.array(targets, dtype=np.int64).T]) % p
    red, piv = _rref(aug, p)
    for i, c in enumerate(piv):
        if c >= h:
            raise ValueError("target not in span")
        out[c, :] = red[i, h:]
    return out


def dual(M: KModule) -> KModule:
    return hom_module(M, free(M.ring, 1))


def free(ring: FiniteRing, r):
    return KModule(ring, ring.dim * r, [np.kron(np.eye(r, dtype=np.int64), x) for x in ring.mult])


def tensor_dim(M: KModule, N: KModule) -> int:
    p = M.ring.p
    if M.dim == 0 or N.dim == 0:
        return 0
    rows = []
    for XM, XN in zip(M.actions, N.actions):
        rows.append(np.kron(XM, np.eye(N.dim, dtype=np.int64)) - np.kron(np.eye(M.dim, dtype=np.int64), XN))
    rel = np.hstack(rows) % p
    return M.dim * N.dim - rank_mod_p(rel.T, p)


def bidual_image_dim(M: KModule) -> int:
    """dim of the image of M -> M** (the torsionless quotient)."""
    p = M.ring.p
    D = dual(M)
    if D.dim == 0:
        return 0
    cols = []
    for b in range(M.dim):
        e = np.zeros(M.dim, dtype=np.int64)
        e[b] = 1
        cols.append(np.concatenate([T @ e % p for T in D.basis]))
    return rank_mod_p(np.array(cols).T, p)


def functor_dim(fmat, M: KModule, N: KModule, P: KModule) -> int:
    """dim coker(Hom(N,P) -> Hom(M,P)) for the k-linear matrix of f: M -> N."""
    p = P.ring.p
    HM = hom_space(M, P)
    HN = hom_space(N, P)
    if not HM:
        return 0
    img = [(T @ fmat % p).flatten(order="F") for T in HN]
    return len(HM) - (rank_mod_p(np.array(img), p) if img else 0)


def functor_morphism_dims(lift, src, tgt, P):
    """Pointwise (kernel, image, cokernel) dimensions of a functor morphism.

    ``src``/``tgt`` are (fmat, M, N) triples and ``lift`` the k-matrix of
    u: M' -> M.
    """
    p = P.ring.p
    f, M, N = src
    g, Mp, Np = tgt
    HM, HN, HMp, HNp = hom_space(M, P), hom_space(N, P), hom_space(Mp, P), hom_space(Np, P)
    B_F = [(T @ f % p).flatten(order="F") for T in HN]
    B_G = [(T @ g % p).flatten(order="F") for T in HNp]
    dimF = len(HM) - (rank_mod_p(np.array(B_F), p) if B_F else 0)
    rG = rank_mod_p(np.array(B_G), p) if B_G else 0
    dimG = len(HMp) - rG
    imgs = [(T @ lift % p).flatten(order="F") for T in HM]
    both = imgs + B_G
    r_both = rank_mod_p(np.array(both), p) if both else 0
    im = r_both - rG
    return {"kernel": dimF - im, "image": im, "cokernel": dimG - im, "source": dimF, "target": dimG}


def _tensor_relations(M: KModule, N: KModule):
    p = M.ring.p
    rows = [np.kron(XM, np.eye(N.dim, dtype=np.int64)) - np.kron(np.eye(M.dim, dtype=np.int64), XN) for XM, XN in zip(M.actions, N.actions)]
    return (np.hstack(rows) % p) if rows else np.zeros((M.dim * N.dim, 0), dtype=np.int64)


def tensor_kernel_dim(fmat, M: KModule, N: KModule, P: KModule) -> int:
    """dim ker(f ⊗ P: M ⊗ P -> N ⊗ P)."""
    p = P.ring.p
    if M.dim == 0 or P.dim == 0:
        return 0
    RM = _tensor_relations(M, P)
    src_dim = M.dim * P.dim - rank_mod_p(RM.T, p)
    if N.dim == 0:
        return src_dim
    RN = _tensor_relations(N, P)
    big = np.kron(fmat, np.eye(P.dim, dtype=np.int64)) % p
    rN = rank_mod_p(RN.T, p)
    both = np.hstack([big, RN]) % p
    image = rank_mod_p(both.T, p) - rN
    return src_dim - image


def graded_image_dim(ring: FiniteRing, columns, d: int) -> int:
    """dim_k of the degree-d part of the A-subalgebra of A[z] generated by the given linear forms.

    ``columns[i]`` lists the coefficients (text) of the i-th form on z_1..z_n.
    """
    p = ring.p
    if not columns:
        return ring.dim if d == 0 else 0
    n = len(columns[0])
    if n == 0:
        return ring.dim if d == 0 else 0
    z = sympy.symbols(f"_z0:{n}")
    loc = dict(zip(ring.names, ring.syms))
    forms = [sum(sympy.sympify(str(c).replace("^", "**"), locals=loc) * z[k] for k, c in enumerate(col)) for col in columns]
    zmons = sorted(set(tuple(sorted(c)) for c in combinations_with_replacement(range(n), d)))
    zindex = {m: i for i, m in enumerate(zmons)}
    vecs = []
    for combo in combinations_with_replacement(range(len(forms)), d):
        prod = sympy.Integer(1)
        for i in combo:
            prod = prod * forms[i]
        prod = sympy.Poly(sympy.expand(prod), *z) if d else None
        for b in ring.basis:
            bexpr = sympy.Mul(*[s ** k for s, k in zip(ring.syms, b)])
            v = np.zeros(len(zmons) * ring.dim, dtype=np.int64)
            if d == 0:
                v[: ring.dim] = ring.vector(bexpr)
            else:
                for mon, coeff in prod.terms():
                    if coeff == 0:
                        continue
                    key = tuple(sorted(i for i, e in enumerate(mon) for _ in range(e)))
                    j = zindex[key]
                    v[j * ring.dim:(j + 1) * ring.dim] = (v[j * ring.dim:(j + 1) * ring.dim] + ring.vector(coeff * bexpr)) % p
            vecs.append(v)
    return rank_mod_p(np.array(vecs), p) if vecs else 0
