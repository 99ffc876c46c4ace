"""Session files: one ring, named modules and maps, then a list of commands.

Grammar::

    ring GF(5)[x,y]/(x^2, x*y, y^2);
    module M { gens = 2; rels = [[x, y]]; }
    module N { gens = [s, t]; }
    map f { from = M; to = N; matrix = [[x, 0], [0, y]]; }
    rees M;
    coh eval t(M) at N;

``rels`` lists relation columns, each with one entry per generator.  ``matrix``
is row-major with one row per target generator.  ``#`` starts a comment.  The
semicolon closing the last field of a block may be omitted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import coherent as coh
from . import fpmod, graded
from . import rees as rees_mod
from .fpmod import FpModule, InvalidMap, ModuleMap
from .poly import ParseError
from .ring import Matrix, Ring, parse_ring

__all__ = [
    "SessionError",
    "CommandError",
    "ModuleDecl",
    "MapDecl",
    "Command",
    "Session",
    "parse",
    "parse_text",
    "parse_command",
    "format_session",
    "run",
    "run_command",
    "bundled_path",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_EXPR = re.compile(r"^(?:(h|t|G|can)\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)|([A-Za-z_][A-Za-z0-9_]*))$")
_KEYWORDS = {"ring", "module", "map", "at", "h", "t", "G", "can"}


class SessionError(ValueError):
    """Parse or validation failure located at ``line``:``col`` (1-based)."""

    def __init__(self, message, line, col, path=None):
        self.message, self.line, self.col, self.path = message, line, col, path
        super().__init__(f"{path or '<session>'}:{line}:{col}: {message}")


class CommandError(RuntimeError):
    def __init__(self, index, command, message):
        self.index, self.command, self.message = index, command, message
        super().__init__(f"command {index} ({command}): {message}")


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    module: FpModule
    gen_names: tuple | None = None


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    matrix: Matrix
    map: ModuleMap = field(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class Command:
    """``words`` is the verb (one or two words); ``args`` are (op, name) pairs."""

    words: tuple
    args: tuple
    at: str | None = None

    def text(self):
        parts = list(self.words) + [f"{op}({n})" if op else n for op, n in self.args]
        if self.at:
            parts += ["at", self.at]
        return " ".join(parts)


@dataclass(frozen=True)
class Session:
    ring: Ring | None
    modules: tuple = ()
    maps: tuple = ()
    commands: tuple = ()

    def names(self):
        out = {d.name: d for d in self.modules}
        out.update({d.name: d for d in self.maps})
        return out

    def __str__(self):
        return format_session(self)


# -- command table ------------------------------------------------------------------
# kinds: "M" module, "f" map, "F" functor expression, "m" functor morphism, "X" module or map

_COMMANDS = {
    ("rees",): ("M",),
    ("gamma",): ("M",),
    ("sym",): ("M",),
    ("tl",): ("M",),
    ("dual",): ("M",),
    ("minimize",): ("M",),
    ("hom",): ("M", "M"),
    ("tensor",): ("M", "M"),
    ("kernel",): ("f",),
    ("image",): ("f",),
    ("cokernel",): ("f",),
    ("versal",): ("X",),
    ("phi",): ("F",),
    ("coh", "eval"): ("F",),
    ("coh", "dual"): ("F",),
    ("coh", "is-zero"): ("F",),
    ("coh", "kernel"): ("m",),
    ("coh", "cokernel"): ("m",),
    ("coh", "image"): ("m",),
    ("coh", "is-mono"): ("m",),
    ("coh", "is-epi"): ("m",),
    ("coh", "is-iso"): ("m",),
}
_NEEDS_AT = {("coh", "eval")}
_ALLOWS_AT = {("coh", "eval"), ("coh", "dual"), ("coh", "kernel"), ("coh", "cokernel"), ("coh", "image")}


# -- scanning -----------------------------------------------------------------------


class _Scanner:
    def __init__(self, text, path=None):
        self.text, self.pos, self.path = text, 0, path

    def loc(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self.loc(self.pos if pos is None else pos)
        return SessionError(message, line, col, self.path)

    def skip(self):
        t, n = self.text, len(self.text)
        while self.pos < n:
            if t[self.pos].isspace():
                self.pos += 1
            elif t[self.pos] == "#":
                while self.pos < n and t[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self):
        return self.peek() == ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected '{ch}', found {found!r}")
        self.pos += 1

    def accept(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def word(self, what="a name", pattern=_WORD):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0), m.start()

    def raw(self, stops):
        """Text up to a stop character outside parentheses; returns (stripped text, start)."""
        self.skip()
        start, depth, t = self.pos, 0, self.text
        while self.pos < len(t):
            ch = t[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif depth == 0 and ch in stops:
                break
            self.pos += 1
        if self.pos >= len(t):
            raise self.error(f"unterminated input, expected one of {sorted(stops)}", start)
        chunk = t[start:self.pos]
        lead = len(chunk) - len(chunk.lstrip())
        return chunk.strip(), start + lead

    def value(self):
        if self.peek() == "[":
            return self.listing()
        text, pos = self.raw(";}")
        if not text:
            raise self.error("missing value", pos)
        return (text, pos)

    def listing(self):
        start = self.pos
        self.expect("[")
        items = []
        if self.accept("]"):
            return ("list", items, start)
        while True:
            if self.peek() == "[":
                items.append(self.listing())
            else:
                text, pos = self.raw(",]")
                if not text:
                    raise self.error("empty list entry", pos)
                items.append((text, pos))
            if self.accept("]"):
                return ("list", items, start)
            self.expect(",")


def _is_list(v):
    return isinstance(v, tuple) and len(v) == 3 and v[0] == "list"


def _pos(v):
    return v[2] if _is_list(v) else v[1]


# -- parsing ------------------------------------------------------------------------


class _Parser:
    def __init__(self, text, path=None):
        self.s = _Scanner(text, path)
        self.ring = None
        self.modules, self.maps, self.commands = [], [], []
        self.defined = {}

    def parse(self):
        s = self.s
        while not s.at_end():
            kw, pos = s.word("a statement")
            if kw == "ring":
                self._ring(pos)
            elif kw == "module":
                self._need_ring(pos)
                self._module()
            elif kw == "map":
                self._need_ring(pos)
                self._map()
            else:
                self._need_ring(pos)
                self.commands.append(self._command(kw, pos))
        return Session(self.ring, tuple(self.modules), tuple(self.maps), tuple(self.commands))

    def _need_ring(self, pos):
        if self.ring is None:
            raise self.s.error("a ring declaration must come first", pos)

    def _ring(self, pos):
        if self.ring is not None:
            raise self.s.error("only one ring per session", pos)
        text, tpos = self.s.raw(";")
        self.s.expect(";")
        try:
            self.ring = parse_ring(text)
        except (ParseError, ValueError) as e:
            raise self.s.error(f"invalid ring: {e}", tpos) from None

    def _fields(self, allowed):
        s = self.s
        s.expect("{")
        out = {}
        while not s.accept("}"):
            key, kpos = s.word("a field name", _IDENT)
            if key not in allowed:
                raise s.error(f"unknown field {key!r}, expected one of {', '.join(allowed)}", kpos)
            if key in out:
                raise s.error(f"field {key!r} given twice", kpos)
            s.expect("=")
            out[key] = (s.value(), kpos)
            if s.peek() != "}":
                s.expect(";")
        s.accept(";")
        return out

    def _new_name(self):
        name, pos = self.s.word("a name", _IDENT)
        if name in _KEYWORDS:
            raise self.s.error(f"{name!r} is reserved", pos)
        if name in self.defined:
            raise self.s.error(f"{name!r} is already defined", pos)
        return name, pos

    def _element(self, item):
        if _is_list(item):
            raise self.s.error("expected a ring element, found a list", _pos(item))
        text, pos = item
        try:
            return self.ring.reduce(self.ring.parse(text))
        except (ParseError, ValueError) as e:
            off = getattr(e, "pos", None)
            raise self.s.error(f"invalid ring element {text!r}: {getattr(e, 'msg', e)}", pos + (off or 0)) from None

    def _module(self):
        s = self.s
        name, npos = self._new_name()
        f = self._fields(("gens", "rels"))
        if "gens" not in f:
            raise s.error(f"module {name} needs a 'gens' field", npos)
        gv, gpos = f["gens"]
        gen_names = None
        if _is_list(gv):
            gen_names = []
            for it in gv[1]:
                if _is_list(it) or not _IDENT.fullmatch(it[0]):
                    raise s.error("generator names must be identifiers", _pos(it))
                if it[0] in self.ring.names or it[0] in gen_names:
                    raise s.error(f"generator name {it[0]!r} clashes", _pos(it))
                gen_names.append(it[0])
            ngens = len(gen_names)
            gen_names = tuple(gen_names)
        else:
            if not gv[0].isdigit():
                raise s.error("'gens' must be a count or a list of names", gv[1])
            ngens = int(gv[0])
        cols = []
        if "rels" in f:
            rv, rpos = f["rels"]
            if not _is_list(rv):
                raise s.error("'rels' must be a list of relation columns", _pos(rv))
            for k, col in enumerate(rv[1], 1):
                if not _is_list(col):
                    raise s.error("each relation must be a bracketed column", _pos(col))
                if len(col[1]) != ngens:
                    raise s.error(
                        f"shape mismatch: relation {k} of module {name} has {len(col[1])} entries, expected {ngens}",
                        _pos(col),
                    )
                cols.append(tuple(self._element(x) for x in col[1]))
        try:
            M = FpModule(self.ring, ngens, cols)
        except ValueError as e:
            raise s.error(f"invalid relation matrix: {e}", npos) from None
        decl = ModuleDecl(name, M, gen_names)
        self.modules.append(decl)
        self.defined[name] = decl

    def _ref(self, value, kind, what):
        if _is_list(value):
            raise self.s.error(f"{what} must be a name", _pos(value))
        text, pos = value
        d = self.defined.get(text)
        if d is None:
            raise self.s.error(f"undefined name {text!r}", pos)
        if not isinstance(d, kind):
            raise self.s.error(f"{text!r} is not a {'module' if kind is ModuleDecl else 'map'}", pos)
        return d

    def _map(self):
        s = self.s
        name, npos = self._new_name()
        f = self._fields(("from", "to", "matrix"))
        for key in ("from", "to", "matrix"):
            if key not in f:
                raise s.error(f"map {name} needs a '{key}' field", npos)
        src = self._ref(f["from"][0], ModuleDecl, "'from'")
        tgt = self._ref(f["to"][0], ModuleDecl, "'to'")
        mv = f["matrix"][0]
        if not _is_list(mv):
            raise s.error("'matrix' must be a list of rows", _pos(mv))
        rows_in = mv[1]
        m, n = tgt.module.ngens, src.module.ngens
        if len(rows_in) != m:
            raise s.error(f"shape mismatch: matrix of map {name} has {len(rows_in)} rows, expected {m}", _pos(mv))
        rows = []
        for k, r in enumerate(rows_in, 1):
            if not _is_list(r):
                raise s.error("each matrix row must be a bracketed list", _pos(r))
            if len(r[1]) != n:
                raise s.error(f"shape mismatch: row {k} of map {name} has {len(r[1])} entries, expected {n}", _pos(r))
            rows.append([self._element(x) for x in r[1]])
        mat = Matrix(self.ring, rows, nrows=m, ncols=n)
        try:
            fm = ModuleMap(src.module, tgt.module, mat, check=True)
        except InvalidMap as e:
            raise s.error(f"invalid relation matrix: map {name} is not well defined ({e})", npos) from None
        decl = MapDecl(name, src.name, tgt.name, mat, fm)
        self.maps.append(decl)
        self.defined[name] = decl

    def _command(self, first, pos):
        s = self.s
        text, tpos = s.raw(";")
        s.expect(";")
        return _build_command(([first] + text.split()) if text else [first], pos, self.defined, s)


def _build_command(tokens, pos, defined, scanner):
    words = tuple(tokens[:2]) if tokens[0] == "coh" else (tokens[0],)
    if words not in _COMMANDS:
        raise scanner.error(f"unknown command {' '.join(words)!r}", pos)
    rest = tokens[len(words):]
    at = None
    if "at" in rest:
        i = rest.index("at")
        if words not in _ALLOWS_AT or len(rest) != i + 2:
            raise scanner.error("'at' takes exactly one module and is only allowed after coh eval/dual/kernel/cokernel/image", pos)
        at = rest[i + 1]
        rest = rest[:i]
        d = defined.get(at)
        if not isinstance(d, ModuleDecl):
            raise scanner.error(f"undefined module {at!r}" if d is None else f"{at!r} is not a module", pos)
    elif words in _NEEDS_AT:
        raise scanner.error("coh eval needs 'at <module>'", pos)
    kinds = _COMMANDS[words]
    if len(rest) != len(kinds):
        raise scanner.error(f"{' '.join(words)} takes {len(kinds)} argument(s), got {len(rest)}", pos)
    args = tuple(_check_arg(tok, kind, defined, scanner, pos) for tok, kind in zip(rest, kinds))
    return Command(words, args, at)


def _check_arg(tok, kind, defined, scanner, pos):
    m = _EXPR.match(tok)
    if not m:
        raise scanner.error(f"cannot read argument {tok!r}", pos)
    op, name = (m.group(1), m.group(2)) if m.group(1) else (None, m.group(3))
    d = defined.get(name)
    if d is None:
        raise scanner.error(f"undefined name {name!r}", pos)
    is_mod = isinstance(d, ModuleDecl)
    ok = {
        "M": op is None and is_mod,
        "f": op is None and not is_mod,
        "X": op is None,
        # functors: h(M), t(M), G(M), or a map name used as a datum
        "F": (op in ("h", "t", "G") and is_mod) or (op is None and not is_mod),
        # morphisms: h(f), t(f), G(f) on maps, can(M) on modules
        "m": (op in ("h", "t", "G") and not is_mod) or (op == "can" and is_mod),
    }[kind]
    if not ok:
        want = {"M": "a module", "f": "a map", "X": "a module or map", "F": "a functor", "m": "a functor morphism"}[kind]
        raise scanner.error(f"argument {tok!r} is not {want}", pos)
    return (op, name)


def parse_text(text, path=None) -> Session:
    return _Parser(text, path).parse()


def parse(path) -> Session:
    p = Path(path)
    return parse_text(p.read_text(encoding="utf-8"), str(p))


def parse_command(session: Session, text: str) -> Command:
    """Read one command against the definitions of ``session``."""
    tokens = text.replace(";", " ").split()
    if not tokens:
        raise SessionError("empty command", 1, 1)
    return _build_command(tokens, 0, session.names(), _Scanner(text))


def bundled_path(name="rees_of_maximal_ideal.session"):
    return resources.files("reesalg") / "data" / name


# -- printing -----------------------------------------------------------------------


def _list(items):
    return "[" + ", ".join(items) + "]"


def format_session(session: Session) -> str:
    lines = []
    if session.ring is not None:
        lines.append(f"ring {session.ring.describe()};")
    if session.modules or session.maps:
        lines.append("")
    for d in session.modules:
        gens = _list(d.gen_names) if d.gen_names is not None else str(d.module.ngens)
        body = f"gens = {gens};"
        if d.module.nrels:
            cols = [_list([str(x) for x in c]) for c in d.module.relations.columns()]
            body += f" rels = {_list(cols)};"
        lines.append(f"module {d.name} {{ {body} }}")
    for d in session.maps:
        rows = _list([_list([str(x) for x in r]) for r in d.matrix.rows])
        lines.append(f"map {d.name} {{ from = {d.source}; to = {d.target}; matrix = {rows}; }}")
    if session.commands:
        lines.append("")
    lines.extend(c.text() + ";" for c in session.commands)
    return "\n".join(lines) + "\n"


# -- running ------------------------------------------------------------------------


def module_json(M: FpModule, names=None):
    out = {
        "gens": M.ngens,
        "relations": [[str(x) for x in c] for c in M.relations.columns()],
        "k_dimension": fpmod.k_dimension(M),
        "is_zero": M.is_zero(),
    }
    if names is not None:
        out["generators"] = list(names)
    return out


def _degree_table(R, max_degree):
    rows = []
    for d in range(max_degree + 1):
        comp = graded.degree_component(R, d)
        rows.append({
            "degree": d,
            "monomials": comp.ngens,
            "k_dimension": fpmod.k_dimension(comp),
            "min_generators": fpmod.minimize(comp).module.ngens,
        })
    return rows


def algebra_json(R, max_degree):
    return {
        "base": R.base.describe(),
        "generators": list(R.ynames),
        "relations": R.relation_strings(),
        "degree_table": _degree_table(R, max_degree),
    }


def functor_json(F: coh.CoherentFunctor):
    return {
        "datum": {
            "from": module_json(F.gen),
            "to": module_json(F.rel),
            "matrix": F.datum.matrix.to_strings(),
        }
    }


class _Env:
    def __init__(self, session):
        self.session = session
        self.defs = session.names()

    def module(self, name):
        return self.defs[name].module

    def gen_names(self, name):
        return self.defs[name].gen_names

    def map(self, name):
        return self.defs[name].map

    def functor(self, arg):
        op, name = arg
        if op is None:
            return coh.CoherentFunctor(self.map(name))
        M = self.module(name)
        if op == "h":
            return coh.h_of(M)
        if op == "t":
            return coh.t_of(M)
        return coh.torsionless_functor(M).functor

    def morphism(self, arg):
        op, name = arg
        if op == "can":
            return coh.canonical_t_to_h(self.module(name))
        f = self.map(name)
        return {"h": coh.h_map, "t": coh.t_map, "G": coh.g_on_map}[op](f)


def _versal_json(env, arg, max_degree):
    _, name = arg
    d = env.defs[name]
    if isinstance(d, ModuleDecl):
        vd = rees_mod.versal_map(d.module)
        phi_ = vd.map
        out = {"target_rank": vd.free.ngens, "matrix": phi_.matrix.to_strings()}
    else:
        phi_ = d.map
        if phi_.target.nrels:
            raise ValueError("versality is only defined for maps into free modules")
        out = {"target_rank": phi_.target.ngens, "matrix": phi_.matrix.to_strings()}
    rep = rees_mod.mainversal_report(phi_)
    dm = fpmod.dual_map(phi_)
    out.update({
        "versal": rep["versal"],
        "conditions": rep["items"],
        "conditions_agree": rep["agree"],
        "dual_image_k_dimension": fpmod.k_dimension(fpmod.image(dm).module),
        "dual_k_dimension": fpmod.k_dimension(dm.target),
    })
    return out


def _at(env, cmd, F):
    return {"value": module_json(coh.evaluate(F, env.module(cmd.at)))} if cmd.at else {}


def run_command(session: Session, cmd: Command, max_degree=3):
    env = _Env(session)
    verb, a = cmd.words, cmd.args
    if verb == ("rees",):
        return algebra_json(rees_mod.rees(env.module(a[0][1]), names=env.gen_names(a[0][1])), max_degree)
    if verb == ("gamma",):
        return algebra_json(rees_mod.gamma(env.module(a[0][1])), max_degree)
    if verb == ("sym",):
        return algebra_json(graded.sym(env.module(a[0][1]), names=env.gen_names(a[0][1])), max_degree)
    if verb == ("phi",):
        return algebra_json(rees_mod.phi(env.functor(a[0])), max_degree)
    if verb == ("versal",):
        return _versal_json(env, a[0], max_degree)
    if verb == ("tl",):
        t = fpmod.tl(env.module(a[0][1]))
        return {"module": module_json(t.module), "surjection": t.surjection.matrix.to_strings()}
    if verb == ("dual",):
        return {"module": module_json(fpmod.dual(env.module(a[0][1])).module)}
    if verb == ("minimize",):
        mn = fpmod.minimize(env.module(a[0][1]))
        return {"module": module_json(mn.module), "to_min": mn.to_min.matrix.to_strings()}
    if verb == ("hom",):
        return {"module": module_json(fpmod.hom_module(env.module(a[0][1]), env.module(a[1][1])).module)}
    if verb == ("tensor",):
        return {"module": module_json(fpmod.tensor(env.module(a[0][1]), env.module(a[1][1])))}
    if verb == ("kernel",):
        k = fpmod.kernel(env.map(a[0][1]))
        return {"module": module_json(k.module), "inclusion": k.inclusion.matrix.to_strings()}
    if verb == ("image",):
        im = fpmod.image(env.map(a[0][1]))
        return {"module": module_json(im.module), "inclusion": im.inclusion.matrix.to_strings()}
    if verb == ("cokernel",):
        c = fpmod.cokernel(env.map(a[0][1]))
        return {"module": module_json(c.module), "projection": c.projection.matrix.to_strings()}
    if verb == ("coh", "eval"):
        return _at(env, cmd, env.functor(a[0]))
    if verb == ("coh", "dual"):
        D = coh.dual(env.functor(a[0]))
        return {"functor": functor_json(D), **_at(env, cmd, D)}
    if verb == ("coh", "is-zero"):
        return {"zero": coh.is_zero(env.functor(a[0]))}
    if verb in (("coh", "kernel"), ("coh", "cokernel"), ("coh", "image")):
        m = env.morphism(a[0])
        if verb[1] == "kernel":
            F, incl = coh.kernel(m)
            extra = {"inclusion_lift": incl.lift.matrix.to_strings()}
        elif verb[1] == "cokernel":
            F, proj = coh.cokernel(m)
            extra = {"projection_lift": proj.lift.matrix.to_strings()}
        else:
            F, _, incl = coh.image(m)
            extra = {"inclusion_lift": incl.lift.matrix.to_strings()}
        return {"functor": functor_json(F), **extra, **_at(env, cmd, F)}
    if verb == ("coh", "is-mono"):
        return {"mono": coh.is_mono(env.morphism(a[0]))}
    if verb == ("coh", "is-epi"):
        return {"epi": coh.is_epi(env.morphism(a[0]))}
    if verb == ("coh", "is-iso"):
        return {"iso": coh.is_iso(env.morphism(a[0]))}
    raise ValueError(f"unhandled command {cmd.text()!r}")


def run(session: Session, max_degree=3):
    """One JSON-ready object per command, in order."""
    out = []
    for i, cmd in enumerate(session.commands):
        try:
            result = run_command(session, cmd, max_degree)
        except (ValueError, ArithmeticError, coh.NoCertificate, InvalidMap) as e:
            raise CommandError(i, cmd.text(), str(e)) from e
        out.append({"index": i, "command": cmd.text(), "result": result})
    return out
