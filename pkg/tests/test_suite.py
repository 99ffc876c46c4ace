import pytest

from reesalg import fpmod, suite
from reesalg.ring import parse_ring
from reesalg.suite import DEFAULT_BATTERY, SUITES, Tally, random_functor_morphism, random_module, random_morphism, run_suite


def test_tally_records_failures():
    t = Tally()
    assert t.check("a", True)
    assert not t.check("a", False, {"x": 1})
    t.check("b", 1)
    t.count("seen", 2)
    rep = t.report()
    assert rep["assertions"] == {"a": {"passed": 1, "failed": 1}, "b": {"passed": 1, "failed": 0}}
    assert rep["failures"] == [{"assertion": "a", "instance": {"x": 1}}]
    assert rep["facts"] == {"seen": 2} and not rep["ok"]


def test_instance_streams_are_independent():
    a = suite._rng(0, "versal", "QQ[x]", 5).random()
    assert a == suite._rng(0, "versal", "QQ[x]", 5).random()
    assert a != suite._rng(0, "versal", "QQ[x]", 6).random()
    assert a != suite._rng(1, "versal", "QQ[x]", 5).random()


@pytest.mark.parametrize("text", DEFAULT_BATTERY)
def test_random_objects_are_valid(text):
    ring = parse_ring(text)
    rng = suite._rng(0, "objects", text, 0)
    for _ in range(5):
        M = random_module(rng, ring)
        assert M.ring == ring
        f, kind = random_morphism(rng, ring)
        assert isinstance(kind, str)
        # construction with check=True would raise on an ill-defined map
        fpmod.ModuleMap(f.source, f.target, f.matrix)
        phi, _ = random_functor_morphism(rng, ring)
        assert phi.source.ring == ring


def test_module_record():
    ring = parse_ring("QQ[x]")
    M = fpmod.FpModule(ring, 2, [(ring.parse("x"), ring.zero)])
    assert suite.module_record(M) == {"gens": 2, "relations": [["x", "0"]]}


@pytest.mark.parametrize("name", list(SUITES))
def test_each_suite_small(name):
    rep = run_suite(name, seed=5, counts={k: 2 for k in SUITES})
    assert list(rep["suites"]) == [name]
    assert rep["ok"], rep["suites"][name]["failures"]
    assert sum(a["passed"] for a in rep["suites"][name]["assertions"].values()) > 0


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")


def test_same_seed_same_report():
    a = run_suite("theorem-a", seed=9, counts={"theorem-a": 3})
    b = run_suite("theorem-a", seed=9, counts={"theorem-a": 3})
    assert a == b
