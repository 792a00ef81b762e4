"""REPL and batch front end with golden-trace output.

Batch mode reads whitespace-separated words from standard input ("." is
the sentence boundary) and prints one snapshot section per word.  Exit
codes: 0 completion, 2 parser dead end or unknown word, 3 blocked state
(every reading implausible).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from incsem.lexicon import UnknownWordError, load_lexicon_file
from incsem.parser import DeadEndError, NothingToUndoError
from incsem.session import (
    BlockedSessionError, NoCompleteParseError, SessionState, feed_word,
    new_session, snapshot, undo_word,
)
from incsem.world import load_world_file

EXIT_OK = 0
EXIT_DEAD_END = 2
EXIT_BLOCKED = 3


def data_path(name: str) -> str:
    return str(resources.files("incsem").joinpath("data", name))


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="incsem",
        description="incremental word-by-word semantic interpretation")
    p.add_argument("--lexicon", default=data_path("demo.lex"),
                   help="lexicon file (default: bundled demo lexicon)")
    p.add_argument("--world", default=data_path("london.world"),
                   help="world file (default: bundled london world)")
    p.add_argument("--domain-k", type=int, default=3,
                   help="entailment domain-size bound (default 3)")
    p.add_argument("--s-modifiers", action="store_true",
                   help="predict sentence-modifier slots")
    p.add_argument("--trace", choices=["min", "full"], default="full",
                   help="per-word trace verbosity")
    p.add_argument("--repl", action="store_true",
                   help="interactive prompt instead of batch stdin")
    return p


def format_step(snap: dict, word: str, trace: str) -> str:
    lines = [f"== word: {word}"]
    lines.append("HYPS")
    for h in snap["hypotheses"]:
        lines.append(f"  {h['type']}\t{h['lf']}")
    if trace == "full":
        lines.append("PROPS")
        for p in snap["propositions"]:
            src = ",".join(p["sources"])
            lines.append(f"  {p['id']} {p['lf']} sources={{{src}}}")
        lines.append("READINGS")
        for r in snap["readings"]:
            verdict = r["verdict"]
            if r["constraint"]:
                verdict += f" constraint={r['constraint']}"
            lines.append(f"  {r['scoped']} {verdict}")
            for c in r["context_lfs"]:
                lines.append(f"    ctx: {c}")
        if snap["referents"]:
            lines.append("REFERENTS")
            for ref in snap["referents"]:
                ents = ",".join(ref["entities"])
                lines.append(f"  {ref['marker']} {{{ents}}}")
    lines.append("EVENTS")
    for e in snap["events"]:
        lines.append(f"  {e}")
    return "\n".join(lines)


def run_batch(session: SessionState, words: list[str], trace: str,
              out=sys.stdout, err=sys.stderr) -> int:
    for word in words:
        try:
            session = feed_word(session, word)
        except (UnknownWordError, DeadEndError, NoCompleteParseError) as e:
            print(f"error: {e}", file=err)
            return EXIT_DEAD_END
        except BlockedSessionError as e:
            print(f"error: {e}", file=err)
            return EXIT_BLOCKED
        snap = snapshot(session)
        print(format_step(snap, word, trace), file=out)
        if snap["blocked"]:
            print("blocked: all readings implausible", file=err)
            return EXIT_BLOCKED
    return EXIT_OK


def run_repl(session: SessionState, trace: str, stdin=sys.stdin,
             out=sys.stdout, err=sys.stderr) -> int:
    print("incsem repl: words advance; :undo :state :scopings :context :quit",
          file=out)
    for raw in stdin:
        line = raw.strip()
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":undo":
            try:
                session = undo_word(session)
                print("ok: undone", file=out)
            except NothingToUndoError as e:
                print(f"error: {e}", file=err)
            continue
        if line == ":state":
            print(format_step(snapshot(session), "(state)", trace), file=out)
            continue
        if line == ":scopings":
            for r in snapshot(session)["readings"]:
                print(f"  {r['scoped']} {r['verdict']}", file=out)
            continue
        if line == ":context":
            ctx = snapshot(session)["context"]
            print(f"  {ctx or '(empty)'}", file=out)
            continue
        for word in line.split():
            try:
                session = feed_word(session, word)
                print(format_step(snapshot(session), word, trace), file=out)
            except (UnknownWordError, DeadEndError, NoCompleteParseError,
                    BlockedSessionError) as e:
                print(f"error: {e}", file=err)
                break
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        lexicon = load_lexicon_file(args.lexicon)
        world = load_world_file(args.world)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DEAD_END
    session = new_session(lexicon, world, domain_k=args.domain_k,
                          s_modifiers=args.s_modifiers)
    if args.repl or sys.stdin.isatty():
        return run_repl(session, args.trace)
    words = sys.stdin.read().split()
    return run_batch(session, words, args.trace)


if __name__ == "__main__":
    sys.exit(main())
