"""Graded A-algebras generated in degree one.

An algebra is ``A[y_1..y_m]/J`` with J homogeneous in the y-grading.  The
presentation lives in the ambient polynomial ring ``k[y_1..y_m, x_1..x_n]``
and the stored ideal is the reduced degrevlex basis of ``J + I_A``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from . import fpmod
from .fpmod import FpModule, ModuleMap
from .groebner import buchberger, eliminate, normal_form
from .poly import LEX, PolyRing
from .ring import Matrix, Ring

__all__ = [
    "GradedAlgebra",
    "GradedAlgMap",
    "default_names",
    "sym",
    "sym_map",
    "image_subalgebra",
    "algebra_kernel",
    "is_injective",
    "is_surjective",
    "degree_component",
    "algebras_equal",
]

_POOL = "stuvwabcdefghijklmnopqr"


def default_names(base: Ring, m: int):
    """Names for m degree-one generators avoiding the base variables."""
    taken = set(base.names)
    pool = [c for c in _POOL if c not in taken]
    if m <= len(pool):
        return tuple(pool[:m])
    names, i = [], 1
    while len(names) < m:
        cand = f"y{i}"
        if cand not in taken:
            names.append(cand)
        i += 1
    return tuple(names)


class GradedAlgebra:
    __slots__ = ("base", "ynames", "ambient", "ideal", "_hash", "_display")

    def __init__(self, base: Ring, ynames, relations=()):
        ynames = tuple(ynames)
        if set(ynames) & set(base.names) or len(set(ynames)) != len(ynames):
            raise ValueError("algebra generator names must be distinct and differ from the base variables")
        self.base = base
        self.ynames = ynames
        self.ambient = PolyRing(base.field, ynames + tuple(base.names))
        emb = list(range(len(ynames), len(ynames) + base.nvars))
        lifted = [g.change_ring(self.ambient, emb) for g in base.ideal]
        gens = lifted + [self.ambient(r) for r in relations]
        self.ideal = tuple(buchberger(gens)) if gens else ()
        self._hash = None
        self._display = None

    @property
    def m(self):
        return len(self.ynames)

    @property
    def y_indices(self):
        return range(self.m)

    def y(self, i):
        return self.ambient.var(i)

    def reduce(self, p):
        return normal_form(p, self.ideal) if self.ideal and p else p

    def contains(self, p):
        return not self.reduce(p)

    def relations(self):
        """Reduced basis elements of positive y-degree, sorted by their text."""
        ys = list(self.y_indices)
        return sorted((g for g in self.ideal if g.degree_in(ys) > 0), key=lambda g: (g.degree_in(ys), str(g)))

    def format(self, p):
        """Text with base variables written first, terms in lex order."""
        if self._display is None:
            self._display = PolyRing(self.base.field, tuple(self.base.names) + self.ynames)
        n = self.base.nvars
        idx = [n + i for i in range(self.m)] + list(range(n))
        return p.change_ring(self._display, idx).format(LEX)

    def relation_strings(self):
        return sorted(self.format(g) for g in self.relations())

    def from_base(self, a):
        """Embed an element of the base polynomial ring."""
        return a.change_ring(self.ambient, list(range(self.m, self.m + self.base.nvars)))

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.ambient == other.ambient and self.ideal == other.ideal

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.ideal))
        return self._hash

    def __repr__(self):
        return f"GradedAlgebra({self.describe()})"

    def describe(self):
        rels = self.relation_strings()
        head = f"{self.base.describe()}[{','.join(self.ynames)}]"
        return head + ("/(" + ", ".join(rels) + ")" if rels else "")


def _linear_form(alg: GradedAlgebra, column):
    """sum_i column[i] * y_i in the ambient ring."""
    acc = alg.ambient.zero
    for i, c in enumerate(column):
        if c:
            acc = acc + alg.from_base(c) * alg.y(i)
    return acc


class GradedAlgMap:
    """Algebra map determined by degree-one images of the source generators."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra, images, check=True):
        if source.base != target.base:
            raise ValueError("algebras over different base rings")
        images = tuple(target.reduce(target.ambient(p)) for p in images)
        if len(images) != source.m:
            raise ValueError("one image per source generator is required")
        ys = list(target.y_indices)
        for p in images:
            if p and any(sum(e[i] for i in ys) != 1 for e in p.terms):
                raise ValueError("images must be homogeneous of degree one")
        self.source = source
        self.target = target
        self.images = images
        if check:
            for r in source.relations():
                if not target.contains(self.apply(r)):
                    raise ValueError(f"relation {r} is not sent into the target ideal")

    def _subs_images(self):
        s, t = self.source, self.target
        return list(self.images) + [t.ambient.var(t.m + j) for j in range(s.base.nvars)]

    def apply(self, p):
        return self.target.reduce(p.subs(self._subs_images()))

    def matrix(self):
        """Degree-one part as a matrix over A (target generators x source generators)."""
        t = self.target
        base_pr = t.base.poly_ring
        rows = [[base_pr.zero] * self.source.m for _ in range(t.m)]
        for j, p in enumerate(self.images):
            for e, c in p.terms.items():
                i = next(k for k in t.y_indices if e[k])
                rows[i][j] = rows[i][j] + base_pr.monomial(e[t.m:], c)
        return Matrix(t.base, rows, nrows=t.m, ncols=self.source.m)

    def compose(self, other: "GradedAlgMap") -> "GradedAlgMap":
        """self ∘ other."""
        return GradedAlgMap(other.source, self.target, [self.apply(p) for p in other.images], check=False)

    def __repr__(self):
        return f"GradedAlgMap({[str(p) for p in self.images]})"


def sym(M: FpModule, names=None) -> GradedAlgebra:
    """A[y]/(linear forms of the relation columns)."""
    base = M.ring
    names = tuple(names) if names else default_names(base, M.ngens)
    probe = GradedAlgebra(base, names)
    rels = [_linear_form(probe, c) for c in M.relations.columns()]
    return GradedAlgebra(base, names, rels)


def sym_map(f: ModuleMap, source=None, target=None) -> GradedAlgMap:
    S = source or sym(f.source)
    T = target or sym(f.target)
    images = [_linear_form(T, f.matrix.column(j)) for j in range(f.matrix.ncols)]
    return GradedAlgMap(S, T, images, check=False)


@dataclass(frozen=True)
class ImageFactorization:
    algebra: GradedAlgebra
    surjection: GradedAlgMap
    inclusion: GradedAlgMap


def _kernel_gb(phi: GradedAlgMap):
    S, T = phi.source, phi.target
    base = S.base
    ms, mt, n = S.m, T.m, base.nvars
    names = [f"_a{i}" for i in range(ms)] + [f"_b{i}" for i in range(mt)] + list(base.names)
    big = PolyRing(base.field, names)
    t_emb = [ms + i for i in range(mt)] + [ms + mt + j for j in range(n)]
    gens = [g.change_ring(big, t_emb) for g in T.ideal]
    for i, p in enumerate(phi.images):
        gens.append(big.var(i) - p.change_ring(big, t_emb))
    elim = eliminate(gens, list(range(ms, ms + mt)))
    back = {i: i for i in range(ms)}
    back.update({ms + mt + j: ms + j for j in range(n)})
    out = [g.change_ring(S.ambient, back) for g in elim]
    return tuple(buchberger(out)) if out else ()


def algebra_kernel(phi: GradedAlgMap):
    """Reduced basis of the kernel ideal (including J and I_A) in the source ambient ring."""
    return _kernel_gb(phi)


def image_subalgebra(phi: GradedAlgMap) -> ImageFactorization:
    S = phi.source
    ker = _kernel_gb(phi)
    ys = list(S.y_indices)
    img = GradedAlgebra(S.base, S.ynames, [g for g in ker if g.degree_in(ys) > 0])
    surj = GradedAlgMap(S, img, [img.y(i) for i in range(S.m)], check=False)
    incl = GradedAlgMap(img, phi.target, phi.images, check=False)
    return ImageFactorization(img, surj, incl)


def is_injective(phi: GradedAlgMap) -> bool:
    S = phi.source
    return all(S.contains(g) for g in _kernel_gb(phi))


def is_surjective(phi: GradedAlgMap) -> bool:
    T1 = degree_component(phi.target, 1)
    return fpmod.is_surjective(ModuleMap(fpmod.free_module(T1.ring, phi.source.m), T1, phi.matrix(), check=False))


def _monomials(m, d):
    out = []
    for combo in combinations_with_replacement(range(m), d):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def degree_component(R: GradedAlgebra, d: int) -> FpModule:
    """R_d as an A-module on the degree-d monomials (lexicographically descending)."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    base = R.base
    mons = _monomials(R.m, d)
    index = {e: i for i, e in enumerate(mons)}
    ys = list(R.y_indices)
    base_pr = base.poly_ring
    cols = []
    for g in R.relations():
        e0 = g.degree_in(ys)
        if e0 > d:
            continue
        for shift in _monomials(R.m, d - e0):
            col = [base_pr.zero] * len(mons)
            for e, c in g.terms.items():
                ye = tuple(a + b for a, b in zip(e[: R.m], shift))
                col[index[ye]] = col[index[ye]] + base_pr.monomial(e[R.m:], c)
            cols.append(tuple(base.reduce(x) for x in col))
    return FpModule(base, len(mons), cols)


def algebras_equal(R: GradedAlgebra, S: GradedAlgebra, correspondence=None) -> bool:
    """Compare presentation ideals after matching generators.

    ``correspondence[i]`` is the index in S of the generator matched with
    R's generator i; the identity matching is the default.
    """
    if R.m != S.m:
        raise ValueError("algebras have different numbers of generators")
    if R.base != S.base:
        return False
    perm = list(correspondence) if correspondence is not None else list(range(R.m))
    if sorted(perm) != list(range(R.m)):
        raise ValueError("correspondence must be a bijection of generator indices")
    inv = [0] * R.m
    for i, j in enumerate(perm):
        inv[j] = i
    index_map = inv + list(range(R.m, R.m + R.base.nvars))
    moved = [g.change_ring(R.ambient, index_map) for g in S.ideal]
    other = tuple(buchberger(moved)) if moved else ()
    return set(other) == set(R.ideal)
