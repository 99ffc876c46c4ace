import random

import pytest

from reesalg import fpmod, oracle
from reesalg.fpmod import FpModule, InvalidMap, ModuleMap, free_module
from reesalg.ring import Matrix, parse_ring
from reesalg.snf import hom_invariants, snf_oracle, tensor_invariants, torsion_dimension
from reesalg.suite import FiniteOracle, random_element, random_hom, random_module, random_morphism

from helpers import cyclic, ideal


@pytest.fixture(scope="module")
def fo():
    return FiniteOracle(parse_ring("GF(5)[x,y]/(x^2, x*y, y^2)"))


class TestConstruction:
    def test_invalid_map_rejected(self, qx):
        M = cyclic(qx, "x")
        with pytest.raises(InvalidMap):
            ModuleMap(M, free_module(qx, 1), [[qx.one]])

    def test_shape_checked(self, qx):
        with pytest.raises(ValueError):
            ModuleMap(free_module(qx, 2), free_module(qx, 1), [[qx.one]])
        with pytest.raises(ValueError):
            FpModule(qx, 2, [(qx.one,)])

    def test_entries_reduced(self, fin):
        M = FpModule(fin, 1, [(fin.parse("x^2 + y"),)])
        assert M.relations.to_strings() == [["y"]]

    def test_zero_module(self, qx):
        assert FpModule(qx, 0).is_zero()
        assert cyclic(qx, "1").is_zero()
        assert not cyclic(qx, "x").is_zero()

    def test_free_cover(self, qx, fin):
        assert fpmod.free_cover(free_module(qx, 1)).matrix == Matrix.identity(qx, 1)
        p = fpmod.free_cover(cyclic(qx, "x"))
        assert p.source == free_module(qx, 1) and fpmod.is_surjective(p)
        m = ideal(fin, "x", "y")
        assert fpmod.free_cover(m).source.ngens == 2


class TestHom:
    def test_hom_from_A(self, qxy, rng):
        for _ in range(5):
            N = random_module(rng, qxy, small=True)
            H = fpmod.hom_module(free_module(qxy, 1), N)
            # evaluation at 1 identifies Hom(A, N) with N
            ev = ModuleMap(H.module, N, Matrix.from_columns(qxy, [b.column(0) for b in H.basis], N.ngens))
            assert fpmod.is_isomorphism(ev)

    def test_torsion_into_domain(self, qx):
        assert fpmod.hom_module(cyclic(qx, "x"), free_module(qx, 1)).module.is_zero()

    def test_dual_of_maximal_ideal(self, fin, fo):
        m = ideal(fin, "x", "y")
        D = fpmod.dual(m)
        assert fpmod.k_dimension(D.module) == 4
        assert oracle.dual(fo.module(m)).dim == 4

    def test_interpretation_roundtrip(self, fin, rng):
        for _ in range(8):
            M, N = random_module(rng, fin, small=True), random_module(rng, fin, small=True)
            H = fpmod.hom_module(M, N)
            f = random_hom(rng, M, N)
            back = H.to_map(H.coords(f))
            assert back.equals(f)

    def test_dual_examples(self, qx):
        F = free_module(qx, 3)
        assert fpmod.dual(F).module.ngens == 3 and fpmod.dual(F).module.nrels == 0
        assert fpmod.dual(cyclic(qx, "x")).module.is_zero()

    def test_dual_functorial(self, fin, rng):
        for _ in range(8):
            f, _ = random_morphism(rng, fin)
            g = random_hom(rng, f.target, random_module(rng, fin, small=True))
            lhs = fpmod.dual_map(g @ f)
            rhs = fpmod.dual_map(f) @ fpmod.dual_map(g)
            assert lhs.equals(rhs)
            ident = fpmod.dual_map(ModuleMap.identity(f.source))
            assert ident.equals(ModuleMap.identity(ident.source))


class TestBidual:
    def test_free(self, qxy):
        assert fpmod.is_isomorphism(fpmod.bidual_map(free_module(qxy, 2)))

    def test_torsion(self, qx):
        ev = fpmod.bidual_map(cyclic(qx, "x"))
        assert ev.target.is_zero() and ev.is_zero()

    def test_maximal_ideal(self, fin, fo):
        m = ideal(fin, "x", "y")
        ev = fpmod.bidual_map(m)
        assert fpmod.is_injective(ev)
        assert fpmod.k_dimension(fpmod.image(ev).module) == 2 == oracle.bidual_image_dim(fo.module(m))

    def test_natural(self, fin, rng):
        for _ in range(6):
            f, _ = random_morphism(rng, fin)
            dd = fpmod.dual_map(fpmod.dual_map(f))
            lhs = fpmod.bidual_map(f.target) @ f
            rhs = dd @ fpmod.bidual_map(f.source)
            assert lhs.equals(rhs)


class TestExactness:
    def test_multiplication_by_x(self, qx):
        f = ModuleMap(free_module(qx, 1), free_module(qx, 1), [[qx.var("x")]])
        assert fpmod.kernel(f).module.is_zero()
        assert fpmod.cokernel(f).module == cyclic(qx, "x")

    def test_koszul(self, qxy):
        x, y = qxy.var("x"), qxy.var("y")
        f = ModuleMap(free_module(qxy, 2), free_module(qxy, 1), [[x, y]])
        K = fpmod.kernel(f)
        assert K.inclusion.matrix.columns() in ([(y, -x)], [(-y, x)])

    def test_identity(self, fin):
        M = ideal(fin, "x", "y")
        f = ModuleMap.identity(M)
        assert fpmod.kernel(f).module.is_zero()
        assert fpmod.is_isomorphism(fpmod.image(f).inclusion)
        assert fpmod.cokernel(f).module.is_zero()

    @pytest.mark.parametrize("text", ["QQ[x,y]", "GF(5)[x,y]/(x^2, x*y, y^2)"])
    def test_random_exactness(self, text, rng):
        ring = parse_ring(text)
        for _ in range(8):
            f, _ = random_morphism(rng, ring)
            K, I, C = fpmod.kernel(f), fpmod.image(f), fpmod.cokernel(f)
            assert (f @ K.inclusion).is_zero()
            assert (C.projection @ f).is_zero()
            assert fpmod.is_surjective(I.surjection) and fpmod.is_injective(I.inclusion)
            assert (I.inclusion @ I.surjection).equals(f)
            # source / kernel ~ image: the induced map is an isomorphism
            Q = fpmod.cokernel(K.inclusion)
            induced = ModuleMap(Q.module, I.module, I.surjection.matrix)
            assert fpmod.is_isomorphism(induced)
            # image = kernel of the cokernel projection
            K2 = fpmod.kernel(C.projection)
            assert fpmod.submodule_equal(ring, I.inclusion.matrix.columns(), K2.inclusion.matrix.columns(), f.target.relations, f.target.ngens)


class TestTensor:
    def test_A_tensor(self, qxy, rng):
        for _ in range(4):
            N = random_module(rng, qxy, small=True)
            T = fpmod.tensor(free_module(qxy, 1), N)
            assert fpmod.is_isomorphism(ModuleMap(T, N, Matrix.identity(qxy, N.ngens)))

    def test_cyclic(self, qxy):
        T = fpmod.tensor(cyclic(qxy, "x"), cyclic(qxy, "y"))
        assert fpmod.is_isomorphism(ModuleMap(T, cyclic(qxy, "x", "y"), [[qxy.one]]))

    def test_maximal_ideal_square(self, fin, fo):
        m = ideal(fin, "x", "y")
        assert fpmod.k_dimension(fpmod.tensor(m, m)) == 4 == oracle.tensor_dim(fo.module(m), fo.module(m))

    def test_right_exact(self, fin, rng):
        for _ in range(6):
            f, _ = random_morphism(rng, fin)
            N = random_module(rng, fin, small=True)
            C = fpmod.cokernel(f)
            lhs = fpmod.cokernel(fpmod.tensor_map(f, N)).module
            rhs = fpmod.tensor(C.module, N)
            assert fpmod.k_dimension(lhs) == fpmod.k_dimension(rhs)


class TestSplitAndSurjective:
    def test_identity(self, fin):
        M = ideal(fin, "x", "y")
        assert fpmod.is_surjective(ModuleMap.identity(M))
        ok, r = fpmod.is_split_mono(ModuleMap.identity(M))
        assert ok

    def test_mult_x_not_split(self, qx):
        f = ModuleMap(free_module(qx, 1), free_module(qx, 1), [[qx.var("x")]])
        assert fpmod.is_injective(f)
        assert fpmod.is_split_mono(f)[0] is False

    def test_coordinate_inclusion(self, qx):
        f = ModuleMap(free_module(qx, 1), free_module(qx, 2), [[qx.one], [qx.zero]])
        ok, r = fpmod.is_split_mono(f)
        assert ok and (r @ f).equals(ModuleMap.identity(f.source))


class TestTorsionless:
    def test_free(self, qxy):
        F = free_module(qxy, 2)
        assert fpmod.tl(F).module == F

    def test_torsion(self, qx):
        assert fpmod.tl(cyclic(qx, "x")).module.is_zero()

    def test_maximal_ideal(self, fin):
        m = ideal(fin, "x", "y")
        T = fpmod.tl(m)
        assert fpmod.k_dimension(T.module) == 2
        assert fpmod.is_isomorphism(T.surjection)

    def test_dual_unchanged(self, fin, fo, rng):
        for _ in range(8):
            M = random_module(rng, fin, small=True)
            T = fpmod.tl(M)
            assert fpmod.is_isomorphism(fpmod.dual_map(T.surjection))
            assert fpmod.k_dimension(T.module) == oracle.bidual_image_dim(fo.module(M))


class TestFiniteOracle:
    def test_random_against_brute_force(self, fin, fo, rng):
        for _ in range(10):
            M, N = random_module(rng, fin, small=True), random_module(rng, fin, small=True)
            kM, kN = fo.module(M), fo.module(N)
            assert fpmod.k_dimension(M) == kM.dim
            assert fpmod.k_dimension(fpmod.hom_module(M, N).module) == oracle.hom_module(kM, kN).dim
            assert fpmod.k_dimension(fpmod.tensor(M, N)) == oracle.tensor_dim(kM, kN)
            assert fpmod.k_dimension(fpmod.dual(M).module) == oracle.dual(kM).dim
            assert fpmod.k_dimension(fpmod.tl(M).module) == oracle.bidual_image_dim(kM)


def _random_univariate(rng, ring):
    g = rng.randint(1, 3)
    r = rng.randint(0, 3)
    cols = []
    for _ in range(r):
        cols.append(tuple(random_element(rng, ring, max_deg=2, density=0.6) for _ in range(g)))
    return FpModule(ring, g, cols)


class TestSmithOracle:
    def test_examples(self, qx):
        x = qx.var("x")
        diag = FpModule(qx, 2, [(x, qx.zero), (qx.zero, x * x)])
        assert snf_oracle(diag).strings() == ["x", "x^2"]
        M = FpModule(qx, 2, [(x, qx.zero), (qx.one, x)])
        s = snf_oracle(M)
        assert s.strings() == ["x^2"] and s.free_rank == 0
        assert snf_oracle(FpModule(qx, 2)).free_rank == 2

    def test_elimination_matches_determinantal_divisors(self, rng):
        import sympy

        from reesalg.snf import smith_factors, snf_of_matrix

        x = sympy.Symbol("x")
        for _ in range(60):
            m, n = rng.randint(1, 3), rng.randint(1, 3)
            rows = [[sympy.Poly(sum(rng.randint(-2, 2) * x**k for k in range(rng.randint(0, 3))), x, domain=sympy.QQ) for _ in range(n)] for _ in range(m)]
            assert smith_factors(rows, x, sympy.QQ) == snf_of_matrix(rows, x, sympy.QQ)

    def test_matches_sympy_smith_form(self, qx, rng):
        import sympy
        from sympy.matrices.normalforms import smith_normal_form

        X = sympy.Symbol("x")
        for _ in range(10):
            M = _random_univariate(rng, qx)
            if not M.nrels:
                continue
            mat = sympy.Matrix([[sympy.sympify(str(e).replace("^", "**")) for e in row] for row in M.relations.rows])
            d = smith_normal_form(mat, domain=sympy.QQ[X])
            diag = [d[i, i] for i in range(min(d.shape)) if d[i, i] != 0]
            ref = sorted(sympy.Poly(e, X).degree() for e in diag if sympy.Poly(e, X).degree() > 0)
            assert sorted(f.degree() for f in snf_oracle(M).factors) == ref

    def test_module_operations_against_smith(self, qx):
        rng = random.Random(77)
        for _ in range(100):
            M, N = _random_univariate(rng, qx), _random_univariate(rng, qx)
            sM, sN = snf_oracle(M), snf_oracle(N)
            assert fpmod.k_dimension(M) == sM.k_dimension()
            H = snf_oracle(fpmod.hom_module(M, N).module)
            assert (H.free_rank, torsion_dimension(H)) == hom_invariants(sM, sN)
            T = snf_oracle(fpmod.tensor(M, N))
            assert (T.free_rank, torsion_dimension(T)) == tensor_invariants(sM, sN)
            D = snf_oracle(fpmod.dual(M).module)
            assert (D.free_rank, D.factors) == (sM.free_rank, ())
            DD = snf_oracle(fpmod.dual(fpmod.dual(M).module).module)
            assert (DD.free_rank, DD.factors) == (sM.free_rank, ())
            TL = snf_oracle(fpmod.tl(M).module)
            assert (TL.free_rank, TL.factors) == (sM.free_rank, ())


class TestMinimize:
    def test_drops_redundant_generators(self, qx):
        x = qx.var("x")
        M = FpModule(qx, 2, [(qx.one, -x)])
        mn = fpmod.minimize(M)
        assert mn.module.ngens == 1
        assert fpmod.is_isomorphism(mn.to_min)
        assert (mn.from_min @ mn.to_min).equals(ModuleMap.identity(M))
