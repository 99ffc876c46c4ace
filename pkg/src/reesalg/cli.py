"""Command line front end: ``reesalg run FILE``, single verbs, and ``verify``."""
from __future__ import annotations

import argparse
import json
import sys

from . import session as sess
from .suite import DEFAULT_BATTERY, DEFAULT_COUNTS, SUITES, run_suite

_SINGLE = {
    "rees": "M",
    "gamma": "M",
    "phi": "FUNCTOR",
    "versal": "NAME",
    "tl": "M",
}
_COH = {
    "eval": ("FUNCTOR", True),
    "kernel": ("MORPHISM", False),
    "dual": ("FUNCTOR", False),
    "is-mono": ("MORPHISM", None),
}


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v)


def _scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def emit(obj, fmt, out):
    if fmt == "json":
        out.write(dumps(obj) + "\n")
    else:
        out.write("\n".join(_text(obj)) + "\n")


def _read_battery(path):
    rings = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                rings.append(line)
    if not rings:
        raise ValueError(f"ring battery {path} is empty")
    return rings


def _common(p):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--max-degree", type=int, default=3, metavar="D", help="degree cutoff for dimension tables")
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; sessions are deterministic")


def build_parser():
    ap = argparse.ArgumentParser(prog="reesalg", description="Rees algebras, torsionless quotients and coherent functors.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run every command of a session file")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("print", help="parse a session file and print it in canonical form")
    p.add_argument("file")

    for verb, arg in _SINGLE.items():
        p = sub.add_parser(verb, help=f"run '{verb}' on a name defined in a session file")
        p.add_argument("file")
        p.add_argument("arg", metavar=arg)
        _common(p)

    coh = sub.add_parser("coh", help="coherent functor operations")
    csub = coh.add_subparsers(dest="coh_verb", required=True)
    for verb, (arg, at) in _COH.items():
        p = csub.add_parser(verb)
        p.add_argument("file")
        p.add_argument("arg", metavar=arg)
        if at is not None:
            p.add_argument("at", metavar="P", nargs=None if at else "?", help="module to evaluate at")
        _common(p)

    p = sub.add_parser("verify", help="run the randomized verification suites")
    p.add_argument("--suite", default="all", choices=["all"] + list(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ring-battery", metavar="FILE", help="one ring per line; '#' starts a comment")
    p.add_argument("--count", type=int, help="instances per ring for every selected suite")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return ap


def _verify(args, out):
    battery = _read_battery(args.ring_battery) if args.ring_battery else list(DEFAULT_BATTERY)
    counts = {k: args.count for k in DEFAULT_COUNTS} if args.count else None
    report = run_suite(args.suite, seed=args.seed, battery=battery, counts=counts)
    emit(report, args.format, out)
    return 0 if report["ok"] else 1


def _single(args, out):
    session = sess.parse(args.file)
    if args.verb == "run":
        commands = session.commands
    else:
        words = ["coh", args.coh_verb] if args.verb == "coh" else [args.verb]
        text = " ".join(words + [args.arg])
        if getattr(args, "at", None):
            text += f" at {args.at}"
        commands = (sess.parse_command(session, text),)
    target = sess.Session(session.ring, session.modules, session.maps, tuple(commands))
    results = sess.run(target, max_degree=args.max_degree)
    emit({"ring": session.ring.describe(), "results": results}, args.format, out)
    return 0


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "verify":
            return _verify(args, out)
        if args.verb == "print":
            out.write(sess.format_session(sess.parse(args.file)))
            return 0
        if args.max_degree < 0:
            raise ValueError("--max-degree must be non-negative")
        return _single(args, out)
    except sess.SessionError as e:
        err.write(f"error: {e}\n")
        return 2
    except sess.CommandError as e:
        err.write(f"error: {e}\n")
        return 1
    except (OSError, ValueError) as e:
        err.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
