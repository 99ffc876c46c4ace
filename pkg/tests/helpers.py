from reesalg import fpmod
from reesalg.fpmod import FpModule, ModuleMap, free_module


def ideal(ring, *names):
    """The ideal generated by the given elements, presented by its syzygies."""
    gens = [ring.parse(n) for n in names]
    syz = fpmod.kernel(ModuleMap(free_module(ring, len(gens)), free_module(ring, 1), [gens])).inclusion.matrix
    return FpModule(ring, len(gens), syz.columns())


def cyclic(ring, *rels):
    return FpModule(ring, 1, [(ring.parse(r),) for r in rels])


def inclusion(M, ring, *names):
    """The generator map M -> A sending generator i to the i-th element."""
    return ModuleMap(M, free_module(ring, 1), [[ring.parse(n) for n in names]])
