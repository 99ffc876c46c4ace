"""Coherent functors presented by a module map.

A datum ``f: M -> N`` stands for the functor ``P |-> coker(Hom(N,P) -> Hom(M,P))``.
A morphism from the functor of ``f: M -> N`` to the functor of ``g: M' -> N'``
is given by a lift ``u: M' -> M`` together with a certificate ``w: N' -> N``
satisfying ``f u = w g``; two lifts define the same morphism when they differ
by ``s g`` for some ``s: N' -> M``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import fpmod
from .fpmod import FpModule, ModuleMap, direct_sum, free_module, hom_module, solve_linear
from .ring import Matrix, block_diag

__all__ = [
    "CoherentFunctor",
    "FunctorMorphism",
    "NoCertificate",
    "h_of",
    "t_of",
    "h_map",
    "t_map",
    "evaluate",
    "evaluate_morphism",
    "morphism",
    "identity",
    "zero_morphism",
    "morphisms_equal",
    "simplify",
    "kernel",
    "cokernel",
    "image",
    "dual",
    "dual_morphism",
    "is_zero",
    "is_mono",
    "is_epi",
    "canonical_t_to_h",
    "alpha",
    "torsionless_functor",
    "g_on_map",
    "factor_through",
    "subfunctor_equal",
]


class NoCertificate(ValueError):
    """The proposed lift does not define a natural transformation."""


class CoherentFunctor:
    __slots__ = ("datum",)

    def __init__(self, datum: ModuleMap):
        self.datum = datum

    @property
    def ring(self):
        return self.datum.source.ring

    @property
    def gen(self) -> FpModule:
        return self.datum.source

    @property
    def rel(self) -> FpModule:
        return self.datum.target

    def __repr__(self):
        return f"CoherentFunctor({self.datum!r})"


class FunctorMorphism:
    """Morphism source -> target carried by (lift, cert)."""

    __slots__ = ("source", "target", "lift", "cert")

    def __init__(self, source, target, lift: ModuleMap, cert: ModuleMap, check=True):
        self.source = source
        self.target = target
        self.lift = lift
        self.cert = cert
        if check:
            if lift.source != target.gen or lift.target != source.gen:
                raise ValueError("lift must go from the target's generator module to the source's")
            if cert.source != target.rel or cert.target != source.rel:
                raise ValueError("certificate must go from the target's relation module to the source's")
            if not (source.datum @ lift).equals(cert @ target.datum):
                raise NoCertificate("certificate equation fails")

    def __matmul__(self, other: "FunctorMorphism") -> "FunctorMorphism":
        """self ∘ other."""
        return FunctorMorphism(other.source, self.target, other.lift @ self.lift, other.cert @ self.cert, check=False)

    def __repr__(self):
        return f"FunctorMorphism(lift={self.lift.matrix.to_strings()})"


def h_of(M: FpModule) -> CoherentFunctor:
    return CoherentFunctor(ModuleMap(M, FpModule(M.ring, 0), Matrix.zeros(M.ring, 0, M.ngens), check=False))


def t_of(M: FpModule) -> CoherentFunctor:
    """Dualized presentation A^g -> A^r of M."""
    ring = M.ring
    g, r = M.ngens, M.nrels
    return CoherentFunctor(ModuleMap(free_module(ring, g), free_module(ring, r), M.relations.T() if r else Matrix.zeros(ring, 0, g), check=False))


def h_map(f: ModuleMap) -> FunctorMorphism:
    """h^N -> h^M induced by f: M -> N."""
    ring = f.source.ring
    return FunctorMorphism(h_of(f.target), h_of(f.source), f, ModuleMap.zero(FpModule(ring, 0), FpModule(ring, 0)), check=False)


def t_map(f: ModuleMap) -> FunctorMorphism:
    """t_M -> t_N with lift the transpose of f."""
    S, T = t_of(f.source), t_of(f.target)
    ring = f.source.ring
    lift = ModuleMap(T.gen, S.gen, f.matrix.T() if f.matrix.nrows else Matrix.zeros(ring, f.source.ngens, 0), check=False)
    return morphism(S, T, lift)


# -- evaluation ------------------------------------------------------------------


def _check_ring(F, P):
    if F.ring != P.ring:
        raise ValueError("functor and module live over different rings")


def evaluate(F: CoherentFunctor, P: FpModule) -> FpModule:
    """F(P) presented on the generators of Hom(M, P)."""
    _check_ring(F, P)
    HM = hom_module(F.gen, P)
    HN = hom_module(F.rel, P)
    ring = F.ring
    cols = [HM.coords(b @ F.datum.matrix) for b in HN.basis]
    rel = HM.module.relations.hstack(Matrix.from_columns(ring, cols, HM.module.ngens))
    return FpModule(ring, HM.module.ngens, rel)


def evaluate_morphism(phi: "FunctorMorphism", P: FpModule) -> ModuleMap:
    HS = hom_module(phi.source.gen, P)
    HT = hom_module(phi.target.gen, P)
    ring = P.ring
    cols = [HT.coords(b @ phi.lift.matrix) for b in HS.basis]
    src, tgt = evaluate(phi.source, P), evaluate(phi.target, P)
    return ModuleMap(src, tgt, Matrix.from_columns(ring, cols, tgt.ngens), check=False)


# -- morphisms -------------------------------------------------------------------


def morphism(F: CoherentFunctor, G: CoherentFunctor, u: ModuleMap) -> FunctorMorphism:
    """Find a certificate for the lift u: G.gen -> F.gen, or raise NoCertificate."""
    ring = F.ring
    f, g = F.datum, G.datum
    n, n2 = F.rel.ngens, G.rel.ngens
    if n == 0 or n2 == 0:
        W = Matrix.zeros(ring, n, n2)
    else:
        eqs = [([(0, None, g.matrix)], f.matrix @ u.matrix, F.rel.relations)]
        if G.rel.nrels:
            eqs.append(([(0, None, G.rel.relations)], Matrix.zeros(ring, n, G.rel.nrels), F.rel.relations))
        sol = solve_linear(ring, [(n, n2)], eqs)
        if sol is None:
            raise NoCertificate("lift does not define a morphism")
        W = sol[0]
    return FunctorMorphism(F, G, u, ModuleMap(G.rel, F.rel, W, check=False))


def identity(F):
    return FunctorMorphism(F, F, ModuleMap.identity(F.gen), ModuleMap.identity(F.rel), check=False)


def zero_morphism(F, G):
    return FunctorMorphism(F, G, ModuleMap.zero(G.gen, F.gen), ModuleMap.zero(G.rel, F.rel), check=False)


def morphisms_equal(a: FunctorMorphism, b: FunctorMorphism) -> bool:
    """Lifts agree up to s ∘ g with s: N' -> M."""
    ring = a.source.ring
    M, G = a.source.gen, a.target
    m, n2 = M.ngens, G.rel.ngens
    diff = a.lift.matrix - b.lift.matrix
    if m == 0:
        return True
    if n2 == 0:
        return (a.lift - b.lift).is_zero()
    eqs = [([(0, None, G.datum.matrix)], diff, M.relations)]
    if G.rel.nrels:
        eqs.append(([(0, None, G.rel.relations)], Matrix.zeros(ring, m, G.rel.nrels), M.relations))
    return solve_linear(ring, [(m, n2)], eqs) is not None


# -- presentation cleanup ----------------------------------------------------------


@dataclass(frozen=True)
class Simplified:
    functor: CoherentFunctor
    to_new: FunctorMorphism
    from_new: FunctorMorphism


def simplify(F: CoherentFunctor) -> Simplified:
    """Shrink both modules of the datum with fpmod.minimize."""
    mC = fpmod.minimize(F.gen)
    mT = fpmod.minimize(F.rel)
    datum = ModuleMap(mC.module, mT.module, (mT.to_min @ F.datum @ mC.from_min).matrix, check=False)
    G = CoherentFunctor(datum)
    to_new = FunctorMorphism(F, G, mC.from_min, mT.from_min, check=False)
    from_new = FunctorMorphism(G, F, mC.to_min, mT.to_min, check=False)
    return Simplified(G, to_new, from_new)


# -- kernels, cokernels, images ----------------------------------------------------


def cokernel(phi: FunctorMorphism):
    """(C, projection G -> C); the datum of C is (u; g): M' -> M ⊕ N'."""
    F, G = phi.source, phi.target
    ring = F.ring
    ds = direct_sum(F.gen, G.rel)
    C = CoherentFunctor(ModuleMap(G.gen, ds.module, phi.lift.matrix.vstack(G.datum.matrix), check=False))
    w = Matrix.zeros(ring, G.rel.ngens, F.gen.ngens).hstack(Matrix.identity(ring, G.rel.ngens))
    proj = FunctorMorphism(G, C, ModuleMap.identity(G.gen), ModuleMap(ds.module, G.rel, w, check=False), check=False)
    return C, proj


def _kernel_raw(phi: FunctorMorphism):
    F, G = phi.source, phi.target
    ring = F.ring
    M, N, Mp, Np = F.gen, F.rel, G.gen, G.rel
    S = direct_sum(M, Np)
    theta = phi.lift.matrix.vstack(-G.datum.matrix)
    C = FpModule(ring, S.module.ngens, S.module.relations.hstack(theta))
    Qp = FpModule(ring, Np.ngens, Np.relations.hstack(G.datum.matrix))
    T = direct_sum(N, Qp)
    top = F.datum.matrix.hstack(phi.cert.matrix)
    bottom = Matrix.zeros(ring, Np.ngens, M.ngens).hstack(Matrix.identity(ring, Np.ngens))
    K = CoherentFunctor(ModuleMap(C, T.module, top.vstack(bottom), check=False))
    j = Matrix.identity(ring, M.ngens).vstack(Matrix.zeros(ring, Np.ngens, M.ngens))
    w = Matrix.identity(ring, N.ngens).vstack(Matrix.zeros(ring, Qp.ngens, N.ngens))
    incl = FunctorMorphism(K, F, ModuleMap(M, C, j, check=False), ModuleMap(N, T.module, w, check=False), check=False)
    return K, incl


def kernel(phi: FunctorMorphism):
    """(K, inclusion K -> F) with the pointwise kernel of phi."""
    K, incl = _kernel_raw(phi)
    s = simplify(K)
    return s.functor, incl @ s.from_new


def image(phi: FunctorMorphism):
    """(I, F ->> I, I >-> G) with inclusion ∘ surjection = phi."""
    F, G = phi.source, phi.target
    ring = F.ring
    C, proj = cokernel(phi)
    K, incl = _kernel_raw(proj)
    # generators of K: M' ⊕ M ⊕ N' modulo (id; -u; -g)
    v = phi.lift.matrix.hstack(Matrix.identity(ring, F.gen.ngens), Matrix.zeros(ring, F.gen.ngens, G.rel.ngens))
    surj = morphism(F, K, ModuleMap(K.gen, F.gen, v, check=False))
    s = simplify(K)
    return s.functor, s.to_new @ surj, incl @ s.from_new


# -- duality -----------------------------------------------------------------------


def _dual_with_inclusion(F: CoherentFunctor):
    return kernel(t_map(F.datum))


def dual(F: CoherentFunctor) -> CoherentFunctor:
    return _dual_with_inclusion(F)[0]


def dual_morphism(phi: FunctorMorphism) -> FunctorMorphism:
    """phi^∨: G^∨ -> F^∨."""
    DF, iF = _dual_with_inclusion(phi.source)
    DG, iG = _dual_with_inclusion(phi.target)
    out = factor_through(t_map(phi.lift) @ iG, iF)
    if out is None:
        raise AssertionError("dual morphism does not factor through the kernel")
    return out


# -- tests -------------------------------------------------------------------------


def is_zero(F: CoherentFunctor) -> bool:
    return fpmod.is_split_mono(F.datum)[0]


def is_mono(phi: FunctorMorphism) -> bool:
    return is_zero(_kernel_raw(phi)[0])


def is_epi(phi: FunctorMorphism) -> bool:
    return is_zero(cokernel(phi)[0])


def is_iso(phi: FunctorMorphism) -> bool:
    return is_mono(phi) and is_epi(phi)


# -- canonical maps ----------------------------------------------------------------


def _psi_matrix(M):
    """Rows are the generators of M* as functionals on M's generators."""
    D = fpmod.dual(M)
    ring = M.ring
    if not D.basis:
        return D, Matrix.zeros(ring, 0, M.ngens)
    return D, Matrix(ring, [b.rows[0] for b in D.basis], nrows=len(D.basis), ncols=M.ngens)


def canonical_t_to_h(M: FpModule) -> FunctorMorphism:
    """t_M -> h^{M*} with lift the transpose of the generator matrix of M*."""
    ring = M.ring
    D, Psi = _psi_matrix(M)
    T, H = t_of(M), h_of(D.module)
    lift = ModuleMap(D.module, T.gen, Psi.T() if Psi.nrows else Matrix.zeros(ring, M.ngens, 0), check=False)
    return FunctorMorphism(T, H, lift, ModuleMap.zero(H.rel, T.rel))


def alpha(F: CoherentFunctor) -> FunctorMorphism:
    """t_{F(A)} -> F."""
    ring = F.ring
    E = evaluate(F, free_module(ring, 1))
    HM = hom_module(F.gen, free_module(ring, 1))
    Psi = Matrix(ring, [b.rows[0] for b in HM.basis], nrows=len(HM.basis), ncols=F.gen.ngens) if HM.basis else Matrix.zeros(ring, 0, F.gen.ngens)
    T = t_of(E)
    return morphism(T, F, ModuleMap(F.gen, T.gen, Psi, check=False))


@dataclass(frozen=True)
class TorsionlessFunctor:
    functor: CoherentFunctor
    surjection: FunctorMorphism  # t_M ->> G_M
    inclusion: FunctorMorphism  # G_M >-> h^{M*}


def torsionless_functor(M: FpModule) -> TorsionlessFunctor:
    """G_M with datum id: A^g -> L, L the cokernel of the transposed dual generators."""
    ring = M.ring
    g = M.ngens
    D, Psi = _psi_matrix(M)
    Ag = free_module(ring, g)
    L = FpModule(ring, g, Psi.T() if Psi.nrows else ())
    G = CoherentFunctor(ModuleMap(Ag, L, Matrix.identity(ring, g), check=False))
    T = t_of(M)
    H = h_of(D.module)
    RT = M.relations.T() if M.nrels else Matrix.zeros(ring, 0, g)
    surj = FunctorMorphism(T, G, ModuleMap.identity(Ag), ModuleMap(L, T.rel, RT, check=False))
    incl = FunctorMorphism(
        G,
        H,
        ModuleMap(D.module, Ag, Psi.T() if Psi.nrows else Matrix.zeros(ring, g, 0), check=False),
        ModuleMap.zero(H.rel, L),
    )
    return TorsionlessFunctor(G, surj, incl)


def g_on_map(f: ModuleMap) -> FunctorMorphism:
    """G_M -> G_N induced by f: M -> N."""
    GM = torsionless_functor(f.source).functor
    GN = torsionless_functor(f.target).functor
    ring = f.source.ring
    FT = f.matrix.T() if f.matrix.nrows else Matrix.zeros(ring, f.source.ngens, 0)
    return FunctorMorphism(GM, GN, ModuleMap(GN.gen, GM.gen, FT, check=False), ModuleMap(GN.rel, GM.rel, FT))


# -- subfunctors -------------------------------------------------------------------


def factor_through(phi: FunctorMorphism, iota: FunctorMorphism):
    """psi: X -> Y with iota ∘ psi = phi, or None."""
    X, Y, Z = phi.source, iota.source, phi.target
    if iota.target.gen != Z.gen or iota.target.rel != Z.rel or iota.target.datum.matrix != Z.datum.matrix:
        raise ValueError("both morphisms must end in the same functor")
    ring = X.ring
    mX, nX, mY, nY, mZ, nZ = X.gen.ngens, X.rel.ngens, Y.gen.ngens, Y.rel.ngens, Z.gen.ngens, Z.rel.ngens
    # unknowns: psi (mX x mY), s (mX x nZ), w (nX x nY)
    unknowns = [(mX, mY), (mX, nZ), (nX, nY)]
    RX, RnX = X.gen.relations, X.rel.relations
    eqs = []
    terms = [(0, None, iota.lift.matrix)]
    if nZ:
        terms.append((1, None, -Z.datum.matrix))
    eqs.append((terms, phi.lift.matrix, RX))
    if Y.gen.nrels:
        eqs.append(([(0, None, Y.gen.relations)], Matrix.zeros(ring, mX, Y.gen.nrels), RX))
    if nZ and Z.rel.nrels:
        eqs.append(([(1, None, Z.rel.relations)], Matrix.zeros(ring, mX, Z.rel.nrels), RX))
    if nX:
        eqs.append(([(0, X.datum.matrix, None), (2, None, -Y.datum.matrix)], Matrix.zeros(ring, nX, mY), RnX))
        if nY and Y.rel.nrels:
            eqs.append(([(2, None, Y.rel.relations)], Matrix.zeros(ring, nX, Y.rel.nrels), RnX))
    sol = solve_linear(ring, unknowns, eqs)
    if sol is None:
        return None
    psi, _, w = sol
    return FunctorMorphism(X, Y, ModuleMap(Y.gen, X.gen, psi, check=False), ModuleMap(Y.rel, X.rel, w, check=False))


def subfunctor_equal(i1: FunctorMorphism, i2: FunctorMorphism) -> bool:
    return factor_through(i1, i2) is not None and factor_through(i2, i1) is not None
