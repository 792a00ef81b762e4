"""CLI batch and REPL front end."""

import io
import os
import subprocess
import sys

import pytest

from incsem.cli import (
    EXIT_BLOCKED, EXIT_DEAD_END, EXIT_OK, build_arg_parser, data_path,
    run_batch, run_repl,
)
from incsem.lexicon import load_lexicon_file
from incsem.session import new_session
from incsem.world import load_world_file


@pytest.fixture(scope="module")
def lex():
    return load_lexicon_file(data_path("demo.lex"))


@pytest.fixture(scope="module")
def london():
    return load_world_file(data_path("london.world"))


@pytest.fixture(scope="module")
def workshop():
    return load_world_file(data_path("workshop.world"))


def batch(lex, world, text, trace="full"):
    out, err = io.StringIO(), io.StringIO()
    code = run_batch(new_session(lex, world), text.split(), trace, out, err)
    return code, out.getvalue(), err.getvalue()


def test_worked_example_trace_contains_outputs(lex, london):
    code, out, _ = batch(lex, london, "london has a tower . every parent shows it")
    assert code == EXIT_OK
    assert "lam(z,show(q(forall,x,parent(x)),pro(y),z))" in out
    assert ("exists(w,true,and(tower(w),and(has(london,w),"
            "forall(x,parent(x),exists(z,true,show(x,w,z))))))") in out
    assert ("exists(w,true,exists(z,true,and(tower(w),and(has(london,w),"
            "forall(x,parent(x),show(x,w,z))))))") in out


def test_unknown_word_exit_code(lex, london):
    code, _, err = batch(lex, london, "mary introduced zebra")
    assert code == EXIT_DEAD_END
    assert "unknown word" in err


def test_punch_script_blocks_with_named_constraint(lex, workshop):
    code, out, err = batch(lex, workshop, "put the punch onto")
    assert code == EXIT_BLOCKED
    assert "BLOCKED constraint=bolted" in out


def test_trace_byte_stable(lex, london):
    one = batch(lex, london, "mary introduced john to sue")
    two = batch(lex, london, "mary introduced john to sue")
    assert one == two


GOLDENS = os.path.join(os.path.dirname(__file__), "goldens")


def test_worked_example_golden_file(lex, london):
    _, out, _ = batch(lex, london, "london has a tower . every parent shows it")
    with open(os.path.join(GOLDENS, "worked_example.trace"), encoding="utf-8") as f:
        assert out == f.read()


def test_table_golden_file(lex, london):
    _, out, _ = batch(lex, london, "mary introduced john to sue", trace="min")
    with open(os.path.join(GOLDENS, "table.trace"), encoding="utf-8") as f:
        assert out == f.read()


def test_trace_min_omits_sections(lex, london):
    _, full, _ = batch(lex, london, "mary likes john")
    _, minimal, _ = batch(lex, london, "mary likes john", trace="min")
    assert "READINGS" in full and "READINGS" not in minimal
    assert "EVENTS" in minimal


def test_repl_commands(lex, london):
    stdin = io.StringIO(
        "mary\nlikes\n:state\n:scopings\n:context\n:undo\n:undo\n:undo\n:quit\n")
    out, err = io.StringIO(), io.StringIO()
    code = run_repl(new_session(lex, london), "min", stdin, out, err)
    assert code == EXIT_OK
    text = out.getvalue()
    assert "lam(P,P(mary))" in text
    assert "(empty)" in text  # :context before any boundary
    assert "ok: undone" in text
    assert "nothing to undo" in err.getvalue()


def test_cli_subprocess_end_to_end():
    proc = subprocess.run(
        [sys.executable, "-m", "incsem.cli", "--trace", "min",
         "--world", data_path("workshop.world")],
        input="put the punch onto", capture_output=True, text=True, timeout=120)
    assert proc.returncode == EXIT_BLOCKED


def test_arg_parser_defaults():
    args = build_arg_parser().parse_args([])
    assert args.domain_k == 3
    assert args.trace == "full"
    assert not args.s_modifiers
