"""Versal maps, Rees algebras, gamma and the functor Phi on coherent functors."""
from __future__ import annotations

from dataclasses import dataclass

from . import coherent as coh
from . import fpmod, groebner
from .fpmod import FpModule, ModuleMap, free_module
from .graded import (
    GradedAlgebra,
    GradedAlgMap,
    _linear_form,
    default_names,
    image_subalgebra,
    sym,
    sym_map,
)
from .ring import Matrix

__all__ = [
    "VersalDatum",
    "versal_map",
    "is_versal",
    "mainversal_report",
    "rees",
    "rees_induced",
    "gamma",
    "phi",
    "phi_morphism",
    "rees_via_phi",
    "rees_via_gamma",
]


@dataclass(frozen=True)
class VersalDatum:
    module: FpModule
    free: FpModule
    map: ModuleMap
    cover: ModuleMap  # free cover of M* whose dual receives M


def _dual_rows(M, order=None):
    D = fpmod.dual(M)
    idx = list(order) if order is not None else list(range(len(D.basis)))
    rows = [D.basis[k].rows[0] for k in idx]
    return D, idx, rows


def versal_map(M: FpModule, order=None) -> VersalDatum:
    """M -> (F')* for the free cover F' of M* on its generators (optionally reordered)."""
    ring = M.ring
    D, idx, rows = _dual_rows(M, order)
    s = len(rows)
    F = free_module(ring, s)
    mat = Matrix(ring, rows, nrows=s, ncols=M.ngens) if s else Matrix.zeros(ring, 0, M.ngens)
    cover_mat = Matrix.identity(ring, D.module.ngens).select_columns(idx) if s else Matrix.zeros(ring, D.module.ngens, 0)
    cover = ModuleMap(F, D.module, cover_mat, check=False)
    return VersalDatum(M, F, ModuleMap(M, F, mat, check=False), cover)


def is_versal(phi_: ModuleMap) -> bool:
    if phi_.target.nrels:
        raise ValueError("versality is tested for maps into free modules")
    return fpmod.is_surjective(fpmod.dual_map(phi_))


def _factors_through(phi_: ModuleMap) -> bool:
    """Every functional on M is an A-combination of the coordinate functions of phi."""
    M = phi_.source
    ring = M.ring
    rows = phi_.matrix.rows
    span = Matrix.from_columns(ring, rows, M.ngens)
    return all(groebner.in_span(ring, span.rows, span.ncols, b.rows[0]) for b in fpmod.dual(M).basis)


def mainversal_report(phi_: ModuleMap) -> dict:
    """The five equivalent conditions for phi: M -> F, evaluated independently."""
    M, F = phi_.source, phi_.target
    if F.nrels:
        raise ValueError("target must be free")
    dmap = fpmod.dual_map(phi_)
    item1 = _factors_through(phi_)
    item2 = fpmod.is_surjective(dmap)
    hM = coh.h_of(M)
    _, _, im_hF = coh.image(coh.h_map(phi_))
    _, _, im_t = coh.image(coh.alpha(hM))
    item3 = coh.subfunctor_equal(im_hF, im_t)
    _, k1 = coh.kernel(coh.t_map(phi_))
    _, k2 = coh.kernel(coh.canonical_t_to_h(M))
    item4 = coh.subfunctor_equal(k1, k2)
    D = fpmod.dual(M)
    hD, tF = coh.h_of(D.module), coh.t_of(F)
    to_t = coh.morphism(hD, tF, ModuleMap(tF.gen, D.module, dmap.matrix, check=False))
    item5 = coh.is_mono(to_t)
    items = {"i": item1, "ii": item2, "iii": item3, "iv": item4, "v": item5}
    return {"items": items, "agree": len(set(items.values())) == 1, "versal": item2}


def rees(M: FpModule, names=None, datum: VersalDatum | None = None) -> GradedAlgebra:
    """Image of Sym(M) in Sym(F) along a versal map, presented on M's generators."""
    datum = datum or versal_map(M)
    S = sym(M, names)
    return image_subalgebra(sym_map(datum.map, source=S)).algebra


def rees_induced(f: ModuleMap, source=None, target=None) -> GradedAlgMap:
    """R(M) -> R(N) on degree-one generators; raises if not well defined."""
    RM = source or rees(f.source)
    RN = target or rees(f.target)
    return GradedAlgMap(RM, RN, [_linear_form(RN, c) for c in f.matrix.columns()], check=True)


def gamma(N: FpModule, cover: ModuleMap | None = None, names=None) -> GradedAlgebra:
    """Image of Sym(N*) -> Sym(F0*) for a free cover F0 ->> N."""
    p = cover or fpmod.free_cover(N)
    if p.source.nrels:
        raise ValueError("cover must start at a free module")
    dp = fpmod.dual_map(p)
    S = sym(dp.source, names)
    return image_subalgebra(sym_map(dp, source=S)).algebra


def phi(F: coh.CoherentFunctor, names=None) -> GradedAlgebra:
    """gamma(M) modulo the degree-one image of N* for the datum M -> N."""
    G = gamma(F.gen, names=names)
    d = fpmod.dual_map(F.datum)
    forms = [p for p in (_linear_form(G, c) for c in d.matrix.columns()) if p]
    return GradedAlgebra(G.base, G.ynames, list(G.relations()) + forms)


def phi_morphism(m: coh.FunctorMorphism, source=None, target=None) -> GradedAlgMap:
    """Phi(F) -> Phi(G) through the dual of the lift."""
    S = source or phi(m.source)
    T = target or phi(m.target)
    du = fpmod.dual_map(m.lift)
    return GradedAlgMap(S, T, [_linear_form(T, c) for c in du.matrix.columns()], check=True)


def rees_via_phi(M: FpModule) -> GradedAlgebra:
    """im(Phi(t_M) -> Phi(h^{M*})) along the canonical morphism."""
    c = coh.canonical_t_to_h(M)
    src = phi(c.source, names=default_names(M.ring, M.ngens))
    return image_subalgebra(phi_morphism(c, source=src)).algebra


def rees_via_gamma(M: FpModule):
    """Factorization of Sym(M) -> gamma(M*) along the evaluation map."""
    ev = fpmod.bidual_map(M)
    G = gamma(fpmod.dual(M).module)
    images = [_linear_form(G, c) for c in ev.matrix.columns()]
    return image_subalgebra(GradedAlgMap(sym(M), G, images, check=True))
