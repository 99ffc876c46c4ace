import json
from pathlib import Path

import pytest

from reesalg import session as sess
from reesalg.cli import dumps

GOLDEN = Path(__file__).parent / "golden"

MINIMAL = """\
ring QQ[x,y];
module M { gens = [s, t]; rels = [[y, -x]]; }
module A { gens = 1 }   # trailing semicolon is optional
map iota { from = M; to = A; matrix = [[x, y]]; }
rees M;
coh is-mono G(iota);
coh eval t(M) at A;
"""


def results(text):
    return sess.run(sess.parse_text(text))


class TestParse:
    def test_empty(self):
        s = sess.parse_text("")
        assert s.ring is None and s.commands == ()
        assert sess.run(s) == []

    def test_ring_only(self):
        assert sess.run(sess.parse_text("ring QQ[x];")) == []

    def test_structure(self):
        s = sess.parse_text(MINIMAL)
        assert [d.name for d in s.modules] == ["M", "A"]
        assert s.modules[0].gen_names == ("s", "t")
        assert [c.text() for c in s.commands] == ["rees M", "coh is-mono G(iota)", "coh eval t(M) at A"]

    def test_round_trip(self):
        s = sess.parse_text(MINIMAL)
        again = sess.parse_text(str(s))
        assert again == s
        assert str(again) == str(s)

    def test_bundled_round_trip(self):
        s = sess.parse(sess.bundled_path())
        assert sess.parse_text(sess.format_session(s)) == s

    def test_parse_command(self):
        s = sess.parse_text(MINIMAL)
        c = sess.parse_command(s, "versal iota")
        assert c.words == ("versal",) and c.text() == "versal iota"
        with pytest.raises(sess.SessionError):
            sess.parse_command(s, "versal nope")


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ("ring QQ[x,y]; module M {gens=2; rels=[[x],[y]] }", 1, 39, "shape mismatch"),
        ("ring Q[x,y]; module M {gens=2; rels=[[x],[y]] }", 1, 38, "shape mismatch"),
        ("ring QQ[x];\nrees N;", 2, 1, "undefined name 'N'"),
        ("ring QQ[x];\nmodule M { gens = ; }", 2, 19, "missing value"),
        ("ring QQ[x];\nring QQ[y];", 2, 1, "only one ring"),
        ("ring QQ[x];\nmodule M {gens=1;}\nmodule M {gens=1;}", 3, 8, "already defined"),
        ("ring QQ[x];\nmodule M {gens=1; rels=[[x]];}\nmodule A {gens=1;}\nmap f {from=M; to=A; matrix=[[1]];}", 4, 5, "invalid relation matrix"),
        ("module M {gens=1;}", 1, 1, "ring declaration must come first"),
        ("ring QQ[x];\nmodule M {gens=1;}\nfrobnicate M;", 3, 1, "unknown command"),
        ("ring QQ[x];\nmodule M {gens=1; rels=[[z]];}", 2, 26, "unknown variable"),
        ("ring QQ[x];\nmodule M {gens=1;}\nkernel M;", 3, 1, "is not a map"),
        ("ring QQ[x];\nmodule M {gens=1;}\ncoh eval t(M);", 3, 1, "needs 'at"),
    ],
)
def test_diagnostics(text, line, col, fragment):
    with pytest.raises(sess.SessionError) as info:
        sess.parse_text(text, path="in.session")
    e = info.value
    assert (e.line, e.col) == (line, col)
    assert fragment in e.message
    assert str(e).startswith(f"in.session:{line}:{col}: ")


class TestRun:
    def test_rees_of_maximal_ideal(self):
        out = results(MINIMAL)
        assert out[0]["result"]["relations"] == ["x*t - y*s"]
        assert out[1]["result"] == {"mono": True}

    def test_tl_of_torsion_is_zero(self):
        out = results("ring QQ[x];\nmodule M { gens = 1; rels = [[x]]; }\ntl M;")
        assert out[0]["result"]["module"]["is_zero"]

    def test_finite_dimensions_reported(self):
        text = """\
ring GF(5)[x,y]/(x^2, x*y, y^2);
module m { gens = 2; rels = [[x, 0], [y, 0], [0, x], [0, y]]; }
module A { gens = 1; }
map iota { from = m; to = A; matrix = [[x, y]]; }
versal iota;
dual m;
"""
        out = results(text)
        v = out[0]["result"]
        assert not v["versal"] and v["conditions_agree"]
        assert (v["dual_image_k_dimension"], v["dual_k_dimension"]) == (1, 4)
        assert out[1]["result"]["module"]["k_dimension"] == 4

    def test_every_verb_runs(self):
        text = """\
ring QQ[x];
module M { gens = 2; rels = [[x, 0]]; }
module N { gens = 1; rels = [[x^2]]; }
map f { from = M; to = N; matrix = [[x, 1]]; }
rees M; gamma M; sym M; tl M; dual M; minimize M; hom M N; tensor M N;
kernel f; image f; cokernel f; versal M; phi G(M);
coh eval h(M) at N; coh dual t(N) at M; coh is-zero t(N);
coh kernel t(f) at N; coh cokernel h(f); coh image G(f) at M;
coh is-mono can(M); coh is-epi t(f); coh is-iso G(f);
"""
        out = results(text)
        assert len(out) == 22
        assert [r["index"] for r in out] == list(range(22))

    def test_command_error_carries_index(self, monkeypatch):
        s = sess.parse_text(MINIMAL)

        def boom(*a, **k):
            raise ValueError("broken")

        monkeypatch.setattr(sess, "run_command", boom)
        with pytest.raises(sess.CommandError) as info:
            sess.run(s)
        assert info.value.index == 0 and info.value.command == "rees M"

    def test_deterministic(self):
        a = dumps(results(MINIMAL))
        b = dumps(results(MINIMAL))
        assert a == b


def test_bundled_golden():
    s = sess.parse(sess.bundled_path())
    got = {"ring": s.ring.describe(), "results": sess.run(s)}
    want = json.loads((GOLDEN / "rees_of_maximal_ideal.json").read_text(encoding="utf-8"))
    assert dumps(got) + "\n" == dumps(want) + "\n"
    by_cmd = {r["command"]: r["result"] for r in got["results"]}
    assert by_cmd["rees M"]["relations"] == ["x*t - y*s"]
    assert by_cmd["phi t(M)"]["relations"] == by_cmd["sym M"]["relations"]
    assert by_cmd["versal iota"]["versal"]
