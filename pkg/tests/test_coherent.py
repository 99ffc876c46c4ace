import pytest

from reesalg import coherent as coh
from reesalg import fpmod, rees
from reesalg.fpmod import FpModule, ModuleMap, free_module
from reesalg.ring import Matrix
from reesalg.snf import snf_oracle
from reesalg.suite import FiniteOracle, random_functor, random_functor_morphism, random_hom, random_module

from helpers import cyclic, ideal, inclusion


@pytest.fixture(scope="module")
def fo(fin):
    return FiniteOracle(fin)


def kdim(F, P):
    return fpmod.k_dimension(coh.evaluate(F, P))


def points(ring, rng):
    A = free_module(ring, 1)
    k = FpModule(ring, 1, [(ring.var(i),) for i in range(ring.nvars)])
    return [A, k, random_module(rng, ring, small=True)]


def snf_key(M):
    s = snf_oracle(M)
    return s.free_rank, tuple(s.strings())


class TestRepresentables:
    def test_h_and_t_of_A_agree(self, fin, fo, rng):
        A = free_module(fin, 1)
        for P in points(fin, rng):
            assert kdim(coh.h_of(A), P) == kdim(coh.t_of(A), P) == fo.module(P).dim

    def test_t_of_cyclic_datum(self, qx):
        T = coh.t_of(cyclic(qx, "x"))
        assert T.gen == free_module(qx, 1) and T.rel == free_module(qx, 1)
        assert T.datum.matrix.to_strings() == [["x"]]

    def test_t_at_A_is_module(self, qxy):
        m = ideal(qxy, "x", "y")
        E = coh.evaluate(coh.t_of(m), free_module(qxy, 1))
        assert fpmod.is_isomorphism(ModuleMap(m, E, Matrix.identity(qxy, 2)))

    def test_h_at_A_is_dual(self, fin, rng):
        for _ in range(4):
            M = random_module(rng, fin, small=True)
            assert coh.evaluate(coh.h_of(M), free_module(fin, 1)) == fpmod.dual(M).module

    def test_t_is_tensor(self, fin, rng):
        for _ in range(4):
            M = random_module(rng, fin, small=True)
            for P in points(fin, rng):
                assert kdim(coh.t_of(M), P) == fpmod.k_dimension(fpmod.tensor(M, P))

    def test_ring_mismatch(self, qx, qxy):
        with pytest.raises(ValueError):
            coh.evaluate(coh.h_of(free_module(qx, 1)), free_module(qxy, 1))


class TestMorphisms:
    def test_identity(self, fin, rng):
        F = random_functor(rng, fin)
        m = coh.morphism(F, F, ModuleMap.identity(F.gen))
        assert coh.morphisms_equal(m, coh.identity(F))

    def test_canonical_certificate(self, qxy):
        c = coh.canonical_t_to_h(ideal(qxy, "x", "y"))
        assert c.source.gen.ngens == 2

    def test_rejected(self, qx):
        F = coh.t_of(cyclic(qx, "x"))
        G = coh.h_of(free_module(qx, 1))
        with pytest.raises(coh.NoCertificate):
            coh.morphism(F, G, ModuleMap.identity(free_module(qx, 1)))

    def test_yoneda_roundtrip(self, fin, rng):
        for _ in range(4):
            M, N = random_module(rng, fin, small=True), random_module(rng, fin, small=True)
            f = random_hom(rng, M, N)
            assert coh.h_map(f).lift.equals(f)
            other = random_hom(rng, M, N)
            assert coh.morphisms_equal(coh.h_map(f), coh.h_map(other)) == f.equals(other)


class TestKernelCokernelImage:
    def test_cokernel_of_identity(self, fin, rng):
        F = random_functor(rng, fin)
        assert coh.is_zero(coh.cokernel(coh.identity(F))[0])

    def test_kernel_of_identity(self, fin, rng):
        F = random_functor(rng, fin)
        assert coh.is_zero(coh.kernel(coh.identity(F))[0])

    def test_zero_morphism(self, fin, fo, rng):
        F, G = random_functor(rng, fin), random_functor(rng, fin)
        z = coh.zero_morphism(F, G)
        C = coh.cokernel(z)[0]
        K = coh.kernel(z)[0]
        I = coh.image(z)[0]
        for P in points(fin, rng):
            assert kdim(C, P) == kdim(G, P)
            assert kdim(K, P) == kdim(F, P)
            assert kdim(I, P) == 0

    def test_image_of_identity(self, fin, fo, rng):
        F = random_functor(rng, fin)
        I, surj, inc = coh.image(coh.identity(F))
        assert coh.is_iso(surj) and coh.is_iso(inc)

    def test_versal_embedding_pointwise(self, fin, fo):
        m = ideal(fin, "x", "y")
        phi = coh.t_map(rees.versal_map(m).map)
        K = coh.kernel(phi)[0]
        C = coh.cokernel(phi)[0]
        I, surj, inc = coh.image(phi)
        assert coh.morphisms_equal(inc @ surj, phi)
        for P in (free_module(fin, 1), cyclic(fin, "x", "y"), m):
            dims = fo.morphism_dims(phi, P)
            assert kdim(K, P) == dims["kernel"]
            assert kdim(C, P) == dims["cokernel"]
            assert kdim(I, P) == dims["image"]

    def test_random_pointwise_finite(self, fin, fo, rng):
        for _ in range(6):
            phi, _ = random_functor_morphism(rng, fin)
            K, C = coh.kernel(phi)[0], coh.cokernel(phi)[0]
            I = coh.image(phi)[0]
            for P in points(fin, rng):
                dims = fo.morphism_dims(phi, P)
                assert (kdim(K, P), kdim(I, P), kdim(C, P)) == (dims["kernel"], dims["image"], dims["cokernel"])

    def test_random_pointwise_univariate(self, qx, rng):
        for _ in range(6):
            phi, _ = random_functor_morphism(rng, qx)
            K, C = coh.kernel(phi)[0], coh.cokernel(phi)[0]
            for P in points(qx, rng):
                ev = coh.evaluate_morphism(phi, P)
                assert snf_key(coh.evaluate(K, P)) == snf_key(fpmod.kernel(ev).module)
                assert snf_key(coh.evaluate(C, P)) == snf_key(fpmod.cokernel(ev).module)


class TestDuality:
    def test_dual_of_h_A(self, fin, rng):
        A = free_module(fin, 1)
        D = coh.dual(coh.h_of(A))
        for P in points(fin, rng):
            assert kdim(D, P) == kdim(coh.t_of(A), P)

    def test_dual_of_t_at_A(self, fin, rng):
        for _ in range(3):
            M = random_module(rng, fin, small=True)
            D = coh.dual(coh.t_of(M))
            assert kdim(D, free_module(fin, 1)) == fpmod.k_dimension(fpmod.dual(M).module)

    def test_double_dual_dimensions(self, fin, fo, rng):
        for _ in range(4):
            F = random_functor(rng, fin)
            DD = coh.dual(coh.dual(F))
            for P in points(fin, rng):
                assert kdim(DD, P) == kdim(F, P) == fo.functor_dim(F, P)

    def test_dual_against_oracle(self, fin, fo, rng):
        for _ in range(4):
            F = random_functor(rng, fin)
            for P in points(fin, rng):
                assert kdim(coh.dual(F), P) == fo.dual_dim(F, P)

    def test_exactness(self, fin, rng):
        for _ in range(4):
            phi, _ = random_functor_morphism(rng, fin)
            DC = coh.dual(coh.cokernel(phi)[0])
            KD = coh.kernel(coh.dual_morphism(phi))[0]
            for P in points(fin, rng):
                assert kdim(DC, P) == kdim(KD, P)

    def test_zero_iff_dual_zero(self, fin, rng):
        for _ in range(6):
            F = random_functor(rng, fin)
            assert coh.is_zero(F) == coh.is_zero(coh.dual(F))


class TestZeroMonoEpi:
    def test_h_of_zero(self, qx):
        assert coh.is_zero(coh.h_of(FpModule(qx, 0)))

    def test_t_of_torsion_nonzero(self, qx):
        assert not coh.is_zero(coh.t_of(cyclic(qx, "x")))

    def test_torsionless_into_free_is_mono(self, qxy):
        m = ideal(qxy, "x", "y")
        v = rees.versal_map(m).map
        assert coh.is_mono(coh.g_on_map(v))
        assert fpmod.is_surjective(fpmod.dual_map(v))


class TestCanonicalMaps:
    def test_alpha_on_t(self, fin, fo, rng):
        M = random_module(rng, fin, small=True)
        a = coh.alpha(coh.t_of(M))
        for P in points(fin, rng):
            dims = fo.morphism_dims(a, P)
            assert dims["kernel"] == dims["cokernel"] == 0

    def test_canonical_iso_for_free(self, qxy):
        assert coh.is_iso(coh.canonical_t_to_h(free_module(qxy, 2)))

    def test_alpha_on_h_not_onto_at_k(self, fin, fo):
        m = ideal(fin, "x", "y")
        a = coh.alpha(coh.h_of(m))
        k = cyclic(fin, "x", "y")
        dims = fo.morphism_dims(a, k)
        assert dims["cokernel"] > 0
        assert not coh.is_epi(a)


class TestTorsionlessFunctor:
    def test_free(self, qxy, rng):
        F = free_module(qxy, 2)
        G = coh.torsionless_functor(F)
        assert coh.is_iso(G.surjection)

    def test_global_sections(self, fin):
        m = ideal(fin, "x", "y")
        G = coh.torsionless_functor(m).functor
        assert kdim(G, free_module(fin, 1)) == 2
        assert fpmod.k_dimension(fpmod.tl(m).module) == 2

    def test_is_image_of_canonical(self, fin, rng):
        M = random_module(rng, fin, small=True)
        T = coh.torsionless_functor(M)
        _, _, inc = coh.image(coh.canonical_t_to_h(M))
        assert coh.subfunctor_equal(T.inclusion, inc)

    def test_same_as_torsionless_quotient(self, fin, rng):
        for _ in range(4):
            M = random_module(rng, fin, small=True)
            G1 = coh.torsionless_functor(M).functor
            G2 = coh.torsionless_functor(fpmod.tl(M).module).functor
            for P in points(fin, rng):
                assert kdim(G1, P) == kdim(G2, P)

    def test_functoriality(self, fin, rng):
        M = random_module(rng, fin, small=True)
        assert coh.morphisms_equal(coh.g_on_map(ModuleMap.identity(M)), coh.identity(coh.torsionless_functor(M).functor))
        N, L = random_module(rng, fin, small=True), random_module(rng, fin, small=True)
        f, g = random_hom(rng, M, N), random_hom(rng, N, L)
        assert coh.morphisms_equal(coh.g_on_map(g @ f), coh.g_on_map(g) @ coh.g_on_map(f))

    def test_mono_iff_dual_onto(self, fin, rng):
        for _ in range(6):
            M, N = random_module(rng, fin, small=True), random_module(rng, fin, small=True)
            f = random_hom(rng, M, N)
            assert coh.is_mono(coh.g_on_map(f)) == fpmod.is_surjective(fpmod.dual_map(f))


class TestSubfunctors:
    def test_reflexive(self, fin):
        inc = coh.torsionless_functor(ideal(fin, "x", "y")).inclusion
        assert coh.subfunctor_equal(inc, inc)

    def _compare(self, phi_):
        M = phi_.source
        _, _, a = coh.image(coh.h_map(phi_))
        _, _, b = coh.image(coh.alpha(coh.h_of(M)))
        return coh.subfunctor_equal(a, b)

    def test_versal(self, qxy):
        m = ideal(qxy, "x", "y")
        assert self._compare(rees.versal_map(m).map)

    def test_not_versal(self, fin):
        m = ideal(fin, "x", "y")
        assert not self._compare(inclusion(m, fin, "x", "y"))
