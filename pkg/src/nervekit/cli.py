"""Command-line interface.

Batch commands operate on a session file; ``repl`` runs the same verbs
interactively against one file. Exit codes: 0 success or true, 1 false,
2 usage error, 3 state error (parse, unknown atom, guard, schema, I/O).
"""
from __future__ import annotations

import argparse
import os
import shlex
import sys
import warnings

from .errors import GuardExceeded, NerveKitError
from .formula import parse_formula, to_text
from .nerve import facets, minimal_inconsistent_sets
from .reasoner import (
    ExplosionWarning,
    asserted_worlds,
    consistent,
    entails,
    enumerate_consequences,
    inconsistency_witness,
    rank_consequences,
)
from .session import assert_utterance, dumps, load_session, new_state, save_session

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_STATE = 0, 1, 2, 3
DEFAULT_MAX_WORLDS = 4096


def _indices(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated utterance indices, got {text!r}") from None


def _pairs(text: str) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def _atom(text: str) -> tuple[str, list[str]]:
    name, sep, worlds = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=w1,w2,..., got {text!r}")
    labels = [w.strip() for w in worlds.split(",") if w.strip()]
    return name.strip(), labels


def _fmt(simplex) -> str:
    return "{" + ",".join(map(str, simplex)) + "}"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting when used by the REPL."""

    def __init__(self, *args, raise_errors=False, **kwargs):
        super().__init__(*args, **kwargs)
        self.raise_errors = raise_errors

    def error(self, message):
        if self.raise_errors:
            raise _UsageError(message)
        super().error(message)


class _UsageError(Exception):
    pass


def _add_commands(sub, with_file: bool, **extra):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structured", action="store_true", help="emit canonical structured output")

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common], **extra)
        if with_file:
            p.add_argument("file", metavar="FILE", help="session file")
        return p

    p = command("assert", "append an utterance to the dialogue")
    p.add_argument("formula")
    p.set_defaults(handler=cmd_assert)

    p = command("consistent", "test joint consistency of utterances")
    p.add_argument("indices", type=_indices, help="comma-separated indices, e.g. 1,3")
    p.set_defaults(handler=cmd_consistent)

    p = command("entails", "test whether premises entail a formula")
    p.add_argument("--premises", type=_indices, default=None, help="default: all utterances")
    p.add_argument("formula")
    p.set_defaults(handler=cmd_entails)

    p = command("rank", "rank entailed consequences by improbability")
    p.add_argument("--premises", type=_indices, default=None, help="default: all utterances")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--candidates", help="semicolon-separated formulas")
    group.add_argument("--enumerate", action="store_true", help="enumerate every consequence extension")
    p.add_argument("--max-atoms", type=int, default=None)
    p.set_defaults(handler=cmd_rank)

    p = command("nerve", "print the dialogue nerve")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--facets", dest="mode", action="store_const", const="facets")
    mode.add_argument("--full", dest="mode", action="store_const", const="full")
    mode.add_argument("--minimal-inconsistent", dest="mode", action="store_const", const="minimal")
    p.set_defaults(handler=cmd_nerve, mode="facets")

    p = command("show", "list utterances and their extensions")
    p.set_defaults(handler=cmd_show)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nervekit", description="Incremental dialogue nerves over finite spaces.")
    parser.add_argument("--simplex-cap", type=int, default=None, help="override the nerve growth guard")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a session file")
    p.add_argument("file", metavar="FILE")
    p.add_argument("--worlds", required=True, help="comma-separated world labels")
    p.add_argument("--atom", type=_atom, action="append", default=[], help="NAME=w1,w2 (repeatable)")
    p.add_argument("--measure", type=_pairs, default=None, help="w1=0.2,w2=0.8")
    p.add_argument("--max-worlds", type=int, default=DEFAULT_MAX_WORLDS)
    p.add_argument("--force", action="store_true", help="overwrite an existing file")
    p.add_argument("--structured", action="store_true")
    p.set_defaults(handler=None)

    _add_commands(sub, True)

    p = sub.add_parser("repl", help="interactive session on FILE")
    p.add_argument("file", metavar="FILE")
    p.set_defaults(handler=None)
    return parser


def build_repl_parser() -> _Parser:
    parser = _Parser(prog="", add_help=False, raise_errors=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_commands(sub, False, raise_errors=True)
    return parser


# -- command handlers --------------------------------------------------------
# Each handler returns (exit_code, payload, text_lines, mutated); the payload
# dict is rendered in structured mode, text_lines otherwise.

def _premises(state, given):
    return list(range(1, state.n + 1)) if given is None else given


def cmd_assert(state, args):
    report = assert_utterance(state, args.formula)
    ext = state.utterances[-1].extension
    payload = {
        "index": report.index,
        "formula": to_text(state.utterances[-1].formula),
        "extension": ext.labels(),
        "simplices": report.simplex_count,
        "consistent": report.consistent,
        "broken_groups": [list(s) for s in report.broken_groups],
        "warnings": report.warnings,
    }
    lines = [f"asserted {report.index}: {payload['formula']}  extension {ext!r}  simplices {report.simplex_count}"]
    for s in report.broken_groups:
        lines.append(f"  breaks consistent group {_fmt(s)}")
    return EXIT_OK, payload, lines, True


def cmd_consistent(state, args):
    ok = consistent(state, args.indices)
    witness = None if ok else inconsistency_witness(state, args.indices)
    payload = {
        "premises": sorted(set(args.indices)),
        "consistent": ok,
        "witness": list(witness) if witness is not None else None,
    }
    text = "consistent" if ok else f"inconsistent (minimal witness {_fmt(witness)})"
    return (EXIT_OK if ok else EXIT_FALSE), payload, [text], False


def cmd_entails(state, args):
    premises = _premises(state, args.premises)
    formula = parse_formula(args.formula)
    holds = entails(state, premises, formula)
    payload = {"premises": sorted(set(premises)), "formula": to_text(formula), "entailed": holds}
    return (EXIT_OK if holds else EXIT_FALSE), payload, ["entailed" if holds else "not entailed"], False


def cmd_rank(state, args):
    premises = _premises(state, args.premises)
    if args.enumerate:
        candidates = enumerate_consequences(state, premises, args.max_atoms)
    else:
        texts = [t for t in (args.candidates or "").split(";") if t.strip()]
        candidates = [parse_formula(t) for t in texts]
    ranked = rank_consequences(state, premises, candidates)
    rows = [
        {
            "formula": r.text,
            "extension": r.extension.labels(),
            "probability": r.probability,
            "improbability": r.improbability if r.improbability != float("inf") else "inf",
        }
        for r in ranked
    ]
    payload = {
        "premises": sorted(set(premises)),
        "asserted_worlds": asserted_worlds(state, premises).labels(),
        "consequences": rows,
    }
    lines = [f"{'improbability':>13}  {'probability':>11}  formula"]
    for r in ranked:
        lines.append(f"{r.improbability:13.4f}  {r.probability:11.4f}  {r.text}")
    return EXIT_OK, payload, lines, False


def cmd_nerve(state, args):
    nerve = state.nerve
    if args.mode == "full":
        simplices = nerve.simplices()
    elif args.mode == "minimal":
        simplices = minimal_inconsistent_sets(nerve)
    else:
        simplices = facets(nerve)
    payload = {"n": nerve.n, "simplex_count": len(nerve), args.mode: [list(s) for s in simplices]}
    return EXIT_OK, payload, [" ".join(_fmt(s) for s in simplices)], False


def cmd_show(state, args):
    rows = [
        {"index": i, "text": u.text, "extension": u.extension.labels()}
        for i, u in enumerate(state.utterances, start=1)
    ]
    lines = [f"{r['index']:>3}  {r['text']}  {{{', '.join(r['extension'])}}}" for r in rows]
    return EXIT_OK, {"utterances": rows}, lines, False


def run_handler(state, args, out, err) -> tuple[int, bool]:
    """Run one command against ``state``; returns (exit code, mutated)."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ExplosionWarning)
        code, payload, lines, mutated = args.handler(state, args)
    notes = list(payload.get("warnings", []))
    notes += [str(w.message) for w in caught if issubclass(w.category, ExplosionWarning)]
    if notes:
        payload["warnings"] = notes
    if args.structured:
        out.write(dumps(payload) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
    for note in notes:
        err.write(f"warning: {note}\n")
    return code, mutated


def _init(args, out) -> int:
    if os.path.exists(args.file) and not args.force:
        raise FileExistsError(f"{args.file} exists (use --force to overwrite)")
    worlds = [w.strip() for w in args.worlds.split(",") if w.strip()]
    if len(worlds) > args.max_worlds:
        raise GuardExceeded("worlds", len(worlds), args.max_worlds)
    atoms = dict(args.atom)
    measure = None
    if args.measure is not None:
        try:
            measure = {k: float(v) for k, v in args.measure.items()}
        except ValueError as exc:
            raise NerveKitError(f"bad measure weight: {exc}") from None
    state = new_state(worlds, atoms, measure)
    save_session(state, args.file)
    summary = {"file": args.file, "worlds": len(worlds), "atoms": sorted(atoms)}
    if args.structured:
        out.write(dumps(summary) + "\n")
    else:
        out.write(f"initialized {args.file}: {len(worlds)} worlds, atoms {', '.join(sorted(atoms)) or '-'}\n")
    return EXIT_OK


def _prompt(state) -> str:
    flag = "consistent" if state.all_consistent() else "INCONSISTENT"
    return f"[n={state.n} simplices={len(state.nerve)} {flag}]> "


REPL_HELP = """\
verbs: assert FORMULA | consistent 1,3 | entails [--premises 1,2] FORMULA
       rank [--premises 1,2] (--candidates 'f1;f2' | --enumerate) | nerve [--facets|--full|--minimal-inconsistent]
       show | help | quit
"""


def repl(path: str, cap, stdin, out, err) -> int:
    state = load_session(path, cap=cap)
    parser = build_repl_parser()
    last = EXIT_OK
    while True:
        out.write(_prompt(state))
        out.flush()
        line = stdin.readline()
        if not line:
            out.write("\n")
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("quit", "exit"):
            break
        if line == "help":
            out.write(REPL_HELP)
            continue
        try:
            words = shlex.split(line)
            if words and words[0] == "assert" and len(words) > 2:
                words = ["assert", " ".join(words[1:])]
            args = parser.parse_args(words)
        except (ValueError, _UsageError) as exc:
            err.write(f"usage error: {exc}\n")
            last = EXIT_USAGE
            continue
        try:
            last, mutated = run_handler(state, args, out, err)
            if mutated:
                save_session(state, path)
        except (NerveKitError, OSError) as exc:
            err.write(f"error: {exc}\n")
            last = EXIT_STATE
    return last


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    cap = args.simplex_cap
    try:
        if args.command == "init":
            return _init(args, out)
        if args.command == "repl":
            return repl(args.file, cap, stdin, out, err)
        state = load_session(args.file, cap=cap)
        code, mutated = run_handler(state, args, out, err)
        if mutated:
            save_session(state, args.file)
        return code
    except (NerveKitError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_STATE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
