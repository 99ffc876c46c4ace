"""Finitely presented modules over a Ring and their morphisms.

A module is ``coker(R: A^r -> A^g)``: ``g`` generators and the columns of
``R`` as relations.  Elements are columns in A^g, read modulo the relation
span.  Every construction returns explicit structure maps so equality claims
can be witnessed by certificates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import groebner
from .ring import Matrix, Ring, block_diag, unvec, vec

__all__ = [
    "FpModule",
    "ModuleMap",
    "InvalidMap",
    "free_module",
    "free_cover",
    "direct_sum",
    "HomModule",
    "hom_module",
    "dual",
    "dual_map",
    "bidual_map",
    "kernel",
    "image",
    "cokernel",
    "tensor",
    "tensor_map",
    "is_surjective",
    "is_injective",
    "is_isomorphism",
    "is_split_mono",
    "tl",
    "minimize",
    "solve_linear",
    "k_dimension",
    "submodule_equal",
]


class InvalidMap(ValueError):
    """A matrix that does not send relations into relations."""


def _clean_columns(cols):
    out, seen = [], set()
    for c in cols:
        if any(c) and c not in seen:
            seen.add(c)
            out.append(c)
    return out


class FpModule:
    """coker of the relation matrix; ``relations`` has ``ngens`` rows."""

    __slots__ = ("ring", "ngens", "relations", "_hash")

    def __init__(self, ring: Ring, ngens: int, relations=()):
        if isinstance(relations, Matrix):
            if relations.nrows != ngens:
                raise ValueError(f"relation matrix has {relations.nrows} rows, expected {ngens}")
            cols = relations.columns()
        else:
            cols = [tuple(ring.reduce(ring.poly_ring(x)) for x in c) for c in relations]
            for c in cols:
                if len(c) != ngens:
                    raise ValueError(f"relation of length {len(c)} for a module on {ngens} generators")
        cols = _clean_columns(cols)
        self.ring = ring
        self.ngens = ngens
        self.relations = Matrix.from_columns(ring, cols, ngens)
        self._hash = None

    @property
    def nrels(self):
        return self.relations.ncols

    def __eq__(self, other):
        return isinstance(other, FpModule) and self.ring == other.ring and self.relations == other.relations

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.relations))
        return self._hash

    def __repr__(self):
        return f"FpModule(ngens={self.ngens}, relations={self.relations.to_strings()})"

    def is_free_presentation(self):
        return self.nrels == 0

    def contains_zero(self, column):
        """True when ``column`` represents the zero element."""
        return groebner.in_span(self.ring, self.relations.rows, self.nrels, tuple(column))

    def equal_elements(self, a, b):
        return self.contains_zero(tuple(x - y for x, y in zip(a, b)))

    def is_zero(self):
        """Zero-module test: every generator lies in the relation span."""
        ring = self.ring
        for i in range(self.ngens):
            e = tuple(ring.one if k == i else ring.zero for k in range(self.ngens))
            if not self.contains_zero(e):
                return False
        return True

    def unit(self, i):
        ring = self.ring
        return tuple(ring.one if k == i else ring.zero for k in range(self.ngens))


def free_module(ring, r):
    return FpModule(ring, r, ())


class ModuleMap:
    """Homomorphism given by a ``target.ngens x source.ngens`` matrix on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FpModule, target: FpModule, matrix, check=True):
        ring = source.ring
        if target.ring != ring:
            raise ValueError("source and target live over different rings")
        if not isinstance(matrix, Matrix):
            matrix = Matrix(ring, matrix, nrows=target.ngens, ncols=source.ngens)
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit {source.ngens} -> {target.ngens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and source.nrels:
            images = matrix @ source.relations
            for j in range(images.ncols):
                if not target.contains_zero(images.column(j)):
                    raise InvalidMap(f"relation {j} of the source is not sent to zero")

    def __repr__(self):
        return f"ModuleMap({self.source.ngens}->{self.target.ngens}, {self.matrix.to_strings()})"

    def __call__(self, column):
        ring = self.source.ring
        out = []
        for row in self.matrix.rows:
            acc = ring.zero
            for a, b in zip(row, column):
                if a and b:
                    acc = acc + a * b
            out.append(ring.reduce(acc))
        return tuple(out)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other."""
        if other.target.ngens != self.source.ngens:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def equals(self, other: "ModuleMap") -> bool:
        diff = self.matrix - other.matrix
        return all(self.target.contains_zero(diff.column(j)) for j in range(diff.ncols))

    def is_zero(self):
        return all(self.target.contains_zero(self.matrix.column(j)) for j in range(self.matrix.ncols))

    @classmethod
    def identity(cls, module):
        return cls(module, module, Matrix.identity(module.ring, module.ngens), check=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, Matrix.zeros(source.ring, target.ngens, source.ngens), check=False)


def free_cover(module):
    """The canonical surjection from the free module on the generators."""
    return ModuleMap(free_module(module.ring, module.ngens), module, Matrix.identity(module.ring, module.ngens), check=False)


@dataclass(frozen=True)
class DirectSum:
    module: FpModule
    injections: tuple
    projections: tuple


def direct_sum(*modules):
    ring = modules[0].ring
    total = sum(m.ngens for m in modules)
    rel = block_diag(ring, [m.relations for m in modules])
    S = FpModule(ring, total, rel)
    inj, proj = [], []
    off = 0
    for m in modules:
        idx = list(range(off, off + m.ngens))
        E = Matrix.identity(ring, total)
        inj.append(ModuleMap(m, S, E.select_columns(idx), check=False))
        proj.append(ModuleMap(S, m, E.select_rows(idx), check=False))
        off += m.ngens
    return DirectSum(S, tuple(inj), tuple(proj))


# -- linear systems over A -----------------------------------------------------


def solve_linear(ring, unknowns, equations):
    """Solve a system of matrix equations over A, or return None.

    ``unknowns`` lists shapes ``(rows, cols)``.  Each equation is
    ``(terms, rhs, modulus)``: ``sum(L @ X[k] @ R for k, L, R in terms)``
    must equal ``rhs`` column by column modulo the column span of
    ``modulus`` (``None`` for exact equality).  ``L``/``R`` may be None for
    identity.
    """
    offsets, total = [], 0
    for r, c in unknowns:
        offsets.append(total)
        total += r * c
    blocks_rows = []
    rhs_col = []
    slack = []
    for terms, rhs, modulus in equations:
        er, ec = rhs.shape
        nrow = er * ec
        coef = [[ring.zero] * total for _ in range(nrow)]
        for k, L, R in terms:
            ur, uc = unknowns[k]
            Lm = L if L is not None else Matrix.identity(ring, ur)
            Rm = R if R is not None else Matrix.identity(ring, uc)
            if Lm.shape != (er, ur) or Rm.shape != (uc, ec):
                raise ValueError("equation term has inconsistent shape")
            K = Rm.T().kron(Lm)
            off = offsets[k]
            for i, row in enumerate(K.rows):
                target = coef[i]
                for j, x in enumerate(row):
                    if x:
                        target[off + j] = ring.reduce(target[off + j] + x)
        blocks_rows.append(coef)
        rhs_col.extend(vec(rhs))
        if modulus is not None and modulus.ncols:
            slack.append(Matrix.identity(ring, ec).kron(modulus))
        else:
            slack.append(Matrix.zeros(ring, nrow, 0))
    nrows = len(rhs_col)
    if nrows == 0:
        return [Matrix.zeros(ring, r, c) for r, c in unknowns]
    main = Matrix._raw(ring, tuple(tuple(r) for block in blocks_rows for r in block), nrows, total)
    big = main.hstack(block_diag(ring, slack)) if slack else main
    sol = groebner.lift(ring, big.rows, big.ncols, tuple(rhs_col))
    if sol is None:
        return None
    return [unvec(ring, sol[off:off + r * c], r, c) for off, (r, c) in zip(offsets, unknowns)]


# -- submodules --------------------------------------------------------------


def _first_block_syzygies(ring, mat, first):
    syz = groebner.syzygies(ring, mat.rows, mat.ncols)
    return _clean_columns([s[:first] for s in syz])


def _prune(ring, gens, ambient_rel, nrows):
    """Greedily drop generators lying in the span of the others (plus ``ambient_rel``)."""
    gens = [g for g in _clean_columns(gens) if not groebner.in_span(ring, ambient_rel.rows, ambient_rel.ncols, g)]
    if len(gens) <= 1:
        return gens
    order = sorted(range(len(gens)), key=lambda i: (-max(x.degree() for x in gens[i]), -sum(len(x.terms) for x in gens[i]), -i))
    alive = set(range(len(gens)))
    for i in order:
        rest = [gens[j] for j in sorted(alive) if j != i]
        mat = Matrix.from_columns(ring, rest, nrows).hstack(ambient_rel)
        if groebner.in_span(ring, mat.rows, mat.ncols, gens[i]):
            alive.discard(i)
    return [gens[i] for i in sorted(alive)]


def _submodule(ring, gens, ambient_rel, nrows, prune=True):
    """Presentation of the submodule generated by ``gens`` inside coker(ambient_rel)."""
    if prune:
        gens = _prune(ring, gens, ambient_rel, nrows)
    else:
        gens = _clean_columns(gens)
    K = Matrix.from_columns(ring, gens, nrows)
    rels = _first_block_syzygies(ring, K.hstack(ambient_rel), len(gens))
    return FpModule(ring, len(gens), rels), K


def submodule_equal(ring, a_cols, b_cols, ambient_rel, nrows):
    """Equality of two submodules of coker(ambient_rel) given by generators."""
    A_ = Matrix.from_columns(ring, a_cols, nrows).hstack(ambient_rel)
    B_ = Matrix.from_columns(ring, b_cols, nrows).hstack(ambient_rel)
    return all(groebner.in_span(ring, B_.rows, B_.ncols, c) for c in a_cols) and all(
        groebner.in_span(ring, A_.rows, A_.ncols, c) for c in b_cols
    )


# -- Hom ------------------------------------------------------------------------


class HomModule:
    """Hom_A(M, N) with the interpretation of its generators as maps."""

    def __init__(self, source, target, module, basis):
        self.source = source
        self.target = target
        self.module = module
        self.basis = basis  # tuple of Matrix (target.ngens x source.ngens)
        n, m = target.ngens, source.ngens
        ring = source.ring
        K = Matrix.from_columns(ring, [vec(b) for b in basis], n * m)
        self._lift_matrix = K.hstack(block_diag(ring, [target.relations] * m)) if m else K

    def __repr__(self):
        return f"HomModule({self.source.ngens}->{self.target.ngens}, ngens={self.module.ngens})"

    def to_map(self, coeffs):
        ring = self.source.ring
        n, m = self.target.ngens, self.source.ngens
        acc = Matrix.zeros(ring, n, m)
        for c, b in zip(coeffs, self.basis):
            if c:
                acc = acc + b.scale(c)
        return ModuleMap(self.source, self.target, acc, check=False)

    def coords(self, f):
        """Coordinates of a map (ModuleMap or Matrix) in terms of the generators."""
        mat = f.matrix if isinstance(f, ModuleMap) else f
        ring = self.source.ring
        if self.source.ngens == 0 or self.target.ngens == 0:
            return tuple(ring.zero for _ in self.basis)
        L = self._lift_matrix
        sol = groebner.lift(ring, L.rows, L.ncols, vec(mat))
        if sol is None:
            raise InvalidMap("matrix does not define a homomorphism")
        return sol[: len(self.basis)]


@lru_cache(maxsize=4096)
def hom_module(M: FpModule, N: FpModule) -> HomModule:
    """Presentation of Hom_A(M, N) via the two-step syzygy construction."""
    if M.ring != N.ring:
        raise ValueError("modules live over different rings")
    ring = M.ring
    m, n = M.ngens, N.ngens
    if m == 0 or n == 0:
        return HomModule(M, N, FpModule(ring, 0), ())
    # smaller presentations keep the syzygy computation (and its coefficients) small
    Mm, Nm = minimize(M), minimize(N)
    if Mm.module.ngens < m or Nm.module.ngens < n:
        inner = hom_module(Mm.module, Nm.module)
        basis = tuple(Nm.from_min.matrix @ b @ Mm.to_min.matrix for b in inner.basis)
        return HomModule(M, N, inner.module, basis)
    diag_m = block_diag(ring, [N.relations] * m)
    if M.nrels == 0:
        module = FpModule(ring, n * m, diag_m)
        basis = tuple(unvec(ring, Matrix.identity(ring, n * m).column(k), n, m) for k in range(n * m))
        return HomModule(M, N, module, basis)
    phi = M.relations.T().kron(Matrix.identity(ring, n))
    diag_r = block_diag(ring, [N.relations] * M.nrels)
    K0 = _first_block_syzygies(ring, phi.hstack(diag_r), n * m)
    module, K = _submodule(ring, K0, diag_m, n * m)
    basis = tuple(unvec(ring, K.column(j), n, m) for j in range(K.ncols))
    return HomModule(M, N, module, basis)


def dual(M: FpModule) -> HomModule:
    """M* = Hom(M, A); generators are row vectors (1 x ngens matrices)."""
    return hom_module(M, free_module(M.ring, 1))


def dual_map(f: ModuleMap) -> ModuleMap:
    """f*: N* -> M*, psi |-> psi ∘ f."""
    DM, DN = dual(f.source), dual(f.target)
    cols = [DM.coords(psi @ f.matrix) for psi in DN.basis]
    return ModuleMap(DN.module, DM.module, Matrix.from_columns(f.source.ring, cols, DM.module.ngens), check=False)


def bidual_map(M: FpModule) -> ModuleMap:
    """Evaluation M -> M**."""
    D = dual(M)
    DD = dual(D.module)
    ring = M.ring
    s = len(D.basis)
    cols = []
    for j in range(M.ngens):
        row = Matrix(ring, [[psi[0, j] for psi in D.basis]], nrows=1, ncols=s)
        cols.append(DD.coords(row))
    return ModuleMap(M, DD.module, Matrix.from_columns(ring, cols, DD.module.ngens), check=False)


# -- kernels, images, cokernels ------------------------------------------------


@dataclass(frozen=True)
class Kernel:
    module: FpModule
    inclusion: ModuleMap


@dataclass(frozen=True)
class Image:
    module: FpModule
    surjection: ModuleMap
    inclusion: ModuleMap


@dataclass(frozen=True)
class Cokernel:
    module: FpModule
    projection: ModuleMap


def kernel(f: ModuleMap, prune=True) -> Kernel:
    ring = f.source.ring
    m = f.source.ngens
    if m == 0:
        K = FpModule(ring, 0)
        return Kernel(K, ModuleMap(K, f.source, Matrix.zeros(ring, 0, 0), check=False))
    K0 = _first_block_syzygies(ring, f.matrix.hstack(f.target.relations), m)
    module, Kmat = _submodule(ring, K0, f.source.relations, m, prune=prune)
    return Kernel(module, ModuleMap(module, f.source, Kmat, check=False))


def image(f: ModuleMap) -> Image:
    """Image presented on the source generators."""
    ring = f.source.ring
    m = f.source.ngens
    rels = _first_block_syzygies(ring, f.matrix.hstack(f.target.relations), m) if m else []
    module = FpModule(ring, m, rels)
    return Image(
        module,
        ModuleMap(f.source, module, Matrix.identity(ring, m), check=False),
        ModuleMap(module, f.target, f.matrix, check=False),
    )


def cokernel(f: ModuleMap) -> Cokernel:
    ring = f.target.ring
    module = FpModule(ring, f.target.ngens, f.target.relations.hstack(f.matrix))
    return Cokernel(module, ModuleMap(f.target, module, Matrix.identity(ring, f.target.ngens), check=False))


def is_surjective(f: ModuleMap) -> bool:
    """coker(f) == 0: every target generator lies in the span of images and relations."""
    return cokernel(f).module.is_zero()


def is_injective(f: ModuleMap) -> bool:
    return kernel(f, prune=False).module.is_zero()


def is_isomorphism(f: ModuleMap) -> bool:
    return is_surjective(f) and is_injective(f)


def is_split_mono(f: ModuleMap):
    """(True, r) with r ∘ f = id when a retraction exists, else (False, None)."""
    ring = f.source.ring
    M, N = f.source, f.target
    m, n = M.ngens, N.ngens
    if m == 0:
        return True, ModuleMap.zero(N, M)
    eqs = []
    if N.nrels:
        eqs.append(([(0, None, N.relations)], Matrix.zeros(ring, m, N.nrels), M.relations))
    eqs.append(([(0, None, f.matrix)], Matrix.identity(ring, m), M.relations))
    sol = solve_linear(ring, [(m, n)], eqs)
    if sol is None:
        return False, None
    return True, ModuleMap(N, M, sol[0], check=False)


# -- tensor ----------------------------------------------------------------------


def tensor(M: FpModule, N: FpModule) -> FpModule:
    """M ⊗ N on generators e_i ⊗ f_j (index i * N.ngens + j)."""
    ring = M.ring
    m, n = M.ngens, N.ngens
    left = M.relations.kron(Matrix.identity(ring, n))
    right = Matrix.identity(ring, m).kron(N.relations)
    return FpModule(ring, m * n, left.hstack(right))


def tensor_map(f: ModuleMap, N: FpModule) -> ModuleMap:
    ring = f.source.ring
    return ModuleMap(tensor(f.source, N), tensor(f.target, N), f.matrix.kron(Matrix.identity(ring, N.ngens)), check=False)


# -- torsionless quotient --------------------------------------------------------


@dataclass(frozen=True)
class Torsionless:
    module: FpModule
    surjection: ModuleMap
    inclusion: ModuleMap  # into M**
    bidual: ModuleMap


def tl(M: FpModule) -> Torsionless:
    """M^tl = image(M -> M**), presented on the generators of M."""
    ev = bidual_map(M)
    im = image(ev)
    return Torsionless(im.module, im.surjection, im.inclusion, ev)


# -- presentation simplification ---------------------------------------------


@dataclass(frozen=True)
class Minimized:
    module: FpModule
    to_min: ModuleMap
    from_min: ModuleMap


def minimize(M: FpModule) -> Minimized:
    """Eliminate generators killed by relations with a nonzero constant entry."""
    ring = M.ring
    field = ring.field
    g = M.ngens
    rels = [list(c) for c in M.relations.columns()]
    T = [list(r) for r in Matrix.identity(ring, g).rows]  # g' x g
    alive = list(range(g))
    while True:
        pick = None
        for ri, r in enumerate(rels):
            for pos, x in enumerate(r):
                if x and x.is_constant():
                    pick = (ri, pos)
                    break
            if pick:
                break
        if pick is None:
            break
        ri, pos = pick
        r = rels.pop(ri)
        inv = field.inv(r[pos].constant_coeff())
        new_rels = []
        for s in rels:
            if s[pos]:
                fac = s[pos].scale(inv)
                s = [ring.reduce(a - fac * b) for a, b in zip(s, r)]
            new_rels.append(s)
        # rows of T are coordinates; apply v -> v - (v[pos]/r[pos]) r then drop pos.
        trow = T[pos]
        newT = []
        for k in range(len(T)):
            if k == pos:
                continue
            if r[k]:
                fac = r[k].scale(inv)
                newT.append([ring.reduce(a - fac * b) for a, b in zip(T[k], trow)])
            else:
                newT.append(T[k])
        T = newT
        rels = [[x for k, x in enumerate(s) if k != pos] for s in new_rels]
        alive.pop(pos)
    small = FpModule(ring, len(alive), [tuple(s) for s in rels])
    to_min = ModuleMap(M, small, Matrix(ring, T, nrows=len(alive), ncols=g) if alive else Matrix.zeros(ring, 0, g), check=False)
    from_min = ModuleMap(small, M, Matrix.identity(ring, g).select_columns(alive), check=False)
    return Minimized(small, to_min, from_min)


def k_dimension(M: FpModule) -> Optional[int]:
    """dim_k M when finite (A finite-dimensional or M torsion), else None."""
    sm = groebner.standard_monomials(M.ring, M.relations.rows, M.nrels) if M.ngens else []
    return None if sm is None else len(sm)
