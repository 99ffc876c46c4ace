import io
import json

import pytest

from reesalg import session as sess
from reesalg.cli import main


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def session_file(tmp_path):
    p = tmp_path / "a.session"
    p.write_text(
        """\
ring QQ[x];
module M { gens = 1; rels = [[x]]; }
module A { gens = 1; }
map q { from = A; to = M; matrix = [[1]]; }
tl M;
""",
        encoding="utf-8",
    )
    return str(p)


@pytest.fixture
def battery(tmp_path):
    p = tmp_path / "rings.txt"
    p.write_text("QQ[x]   # univariate\n\nGF(5)[x,y]/(x^2,x*y,y^2)\n", encoding="utf-8")
    return str(p)


def test_run_bundled():
    code, out, _ = call("run", str(sess.bundled_path()))
    assert code == 0
    data = json.loads(out)
    assert data["ring"] == "QQ[x,y]"
    assert data["results"][0]["result"]["relations"] == ["x*t - y*s"]


def test_run_session(session_file):
    code, out, _ = call("run", session_file)
    assert code == 0
    assert json.loads(out)["results"][0]["result"]["module"]["is_zero"]


def test_print_round_trips(session_file):
    code, out, _ = call("print", session_file)
    assert code == 0
    assert sess.parse_text(out) == sess.parse(session_file)


def test_single_verbs(session_file):
    path = str(sess.bundled_path())
    code, out, _ = call("rees", path, "M")
    assert code == 0 and json.loads(out)["results"][0]["command"] == "rees M"
    assert json.loads(call("gamma", path, "M")[1])["results"][0]["result"]["generators"] == ["s"]
    assert json.loads(call("phi", path, "t(M)")[1])["results"][0]["result"]["relations"] == ["x*t - y*s"]
    assert json.loads(call("versal", path, "iota")[1])["results"][0]["result"]["versal"]
    assert json.loads(call("tl", session_file, "M")[1])["results"][0]["result"]["module"]["is_zero"]


def test_coh_verbs():
    path = str(sess.bundled_path())
    code, out, _ = call("coh", "eval", path, "t(M)", "A")
    assert code == 0 and json.loads(out)["results"][0]["command"] == "coh eval t(M) at A"
    code, out, _ = call("coh", "kernel", path, "t(iota)", "A")
    assert code == 0 and "functor" in json.loads(out)["results"][0]["result"]
    code, out, _ = call("coh", "dual", path, "h(M)")
    assert code == 0
    code, out, _ = call("coh", "is-mono", path, "can(M)")
    assert code == 0 and json.loads(out)["results"][0]["result"] == {"mono": False}


def test_text_format():
    code, out, _ = call("rees", str(sess.bundled_path()), "M", "--format", "text")
    assert code == 0
    assert "relations: [x*t - y*s]" in out
    assert not out.lstrip().startswith("{")


def test_max_degree():
    path = str(sess.bundled_path())
    table = json.loads(call("rees", path, "M", "--max-degree", "1")[1])["results"][0]["result"]["degree_table"]
    assert [row["degree"] for row in table] == [0, 1]
    code, _, err = call("rees", path, "M", "--max-degree", "-1")
    assert code == 2 and "non-negative" in err


def test_bad_session(tmp_path):
    p = tmp_path / "bad.session"
    p.write_text("ring QQ[x,y]; module M {gens=2; rels=[[x],[y]] }\n", encoding="utf-8")
    code, out, err = call("run", str(p))
    assert code == 2 and out == ""
    assert f"{p}:1:39: shape mismatch" in err


def test_missing_file(tmp_path):
    code, _, err = call("run", str(tmp_path / "nope.session"))
    assert code == 2 and err.startswith("error:")


def test_unknown_name():
    code, _, err = call("rees", str(sess.bundled_path()), "Q")
    assert code == 2 and "undefined name" in err


def test_verify_small(battery):
    code, out, _ = call("verify", "--count", "2", "--seed", "3", "--ring-battery", battery)
    assert code == 0
    report = json.loads(out)
    assert report["ok"] and report["seed"] == 3
    assert report["battery"] == ["QQ[x]", "GF(5)[x,y]/(x^2,x*y,y^2)"]
    for name, suite in report["suites"].items():
        assert suite["ok"] and not suite["failures"], name
        assert all(a["failed"] == 0 for a in suite["assertions"].values())


def test_verify_deterministic(battery):
    a = call("verify", "--suite", "versal", "--count", "3", "--seed", "11", "--ring-battery", battery)[1]
    b = call("verify", "--suite", "versal", "--count", "3", "--seed", "11", "--ring-battery", battery)[1]
    assert a == b


def test_empty_battery(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("# nothing\n", encoding="utf-8")
    code, _, err = call("verify", "--ring-battery", str(p))
    assert code == 2 and "empty" in err


def test_verify_failure_exit_code(monkeypatch):
    from reesalg import cli

    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: {"ok": False, "suites": {}})
    code, out, _ = call("verify", "--suite", "classical")
    assert code == 1 and json.loads(out)["ok"] is False
