"""The brute-force oracle checked on values small enough to work out by hand."""
import numpy as np
import pytest

from reesalg import oracle
from reesalg.oracle import FiniteRing, KModule


@pytest.fixture(scope="module")
def A():
    return FiniteRing(5, ["x", "y"], ["x^2", "x*y", "y^2"])


@pytest.fixture(scope="module")
def mods(A):
    k = KModule.presented(A, 1, [["x"], ["y"]])
    # m = (x, y) is killed by both variables
    m = KModule.presented(A, 2, [["x", "0"], ["y", "0"], ["0", "x"], ["0", "y"]])
    return {"A": oracle.free(A, 1), "k": k, "m": m, "A2": oracle.free(A, 2), "A1": KModule.presented(A, 1, [])}


def test_ring_structure(A):
    assert A.dim == 3
    assert A.basis == [(0, 0), (0, 1), (1, 0)]
    # x * 1 = x, x * x = 0, x * y = 0
    assert A.mult[0][:, 0].tolist() == [0, 0, 1]
    assert not A.mult[0][:, 1:].any()
    assert A.vector("x^2 + 3*y").tolist() == [0, 3, 0]


def test_infinite_ring_rejected():
    with pytest.raises(ValueError):
        FiniteRing(5, ["x", "y"], ["x^2"])


def test_rank_and_nullspace(rng):
    for _ in range(20):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        mat = np.array([[rng.randrange(7) for _ in range(c)] for _ in range(r)])
        ns = oracle.nullspace_mod_p(mat, 7)
        assert oracle.rank_mod_p(mat, 7) + len(ns) == c
        for v in ns:
            assert not (mat @ v % 7).any()


def test_rank_is_field_dependent():
    mat = [[1, 2], [3, 1]]
    # determinant -5 vanishes mod 5 only
    assert oracle.rank_mod_p(mat, 5) == 1
    assert oracle.rank_mod_p(mat, 7) == 2


def test_module_dimensions(mods):
    assert [mods[n].dim for n in ("A", "k", "m", "A2")] == [3, 1, 2, 6]


def test_hom_dimensions(mods):
    # Hom(k, A) is the socle (x, y)
    assert len(oracle.hom_space(mods["k"], mods["A"])) == 2
    assert oracle.dual(mods["m"]).dim == 4
    assert oracle.hom_module(mods["A"], mods["m"]).dim == 2
    assert oracle.dual(mods["k"]).dim == 2


def test_hom_elements_commute(mods):
    M, N = mods["m"], mods["A"]
    for T in oracle.hom_space(M, N):
        for XM, XN in zip(M.actions, N.actions):
            assert not ((T @ XM - XN @ T) % 5).any()


def test_tensor_dimensions(mods):
    assert oracle.tensor_dim(mods["k"], mods["k"]) == 1
    assert oracle.tensor_dim(mods["m"], mods["k"]) == 2
    assert oracle.tensor_dim(mods["m"], mods["m"]) == 4
    assert oracle.tensor_dim(mods["A"], mods["m"]) == 2


def test_bidual_image(mods):
    assert oracle.bidual_image_dim(mods["A"]) == 3
    assert oracle.bidual_image_dim(mods["k"]) == 1
    assert oracle.bidual_image_dim(mods["m"]) == 2


def test_functor_dim_of_representable(mods):
    # datum M -> 0 gives Hom(M, P)
    M, P = mods["m"], mods["k"]
    zero = KModule(M.ring, 0, [np.zeros((0, 0))] * 2)
    fmat = np.zeros((0, M.dim), dtype=np.int64)
    assert oracle.functor_dim(fmat, M, zero, P) == len(oracle.hom_space(M, P))


def test_generator_map(A, mods):
    # m -> A sending the generators to x and y
    f = mods["m"].lift_generator_map(mods["A1"], [["x", "y"]])
    assert oracle.rank_mod_p(f, 5) == 2


def test_tensor_kernel(A, mods):
    # m (x) k -> A (x) k is zero, so its kernel is all of m (x) k
    f = mods["m"].lift_generator_map(mods["A1"], [["x", "y"]])
    assert oracle.tensor_kernel_dim(f, mods["m"], mods["A1"], mods["k"]) == 2
    assert oracle.tensor_kernel_dim(f, mods["m"], mods["A1"], mods["A"]) == 0


def test_graded_image(A):
    cols = [["x"], ["y"]]
    assert [oracle.graded_image_dim(A, cols, d) for d in range(4)] == [3, 2, 0, 0]
    assert [oracle.graded_image_dim(A, [["1"]], d) for d in range(3)] == [3, 3, 3]
