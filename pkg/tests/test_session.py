"""Session orchestration: pipeline, boundaries, undo, replay."""

import random

import pytest

from incsem.cli import data_path
from incsem.lexicon import load_lexicon_file
from incsem.session import (
    BlockedSessionError, NoCompleteParseError, canonical_snapshot, feed_word,
    new_session, replay, snapshot, undo_word,
)
from incsem.parser import NothingToUndoError
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


@pytest.fixture(scope="module")
def rabbits():
    return load_world_file(data_path("rabbits.world"))


def run(lex, world, text, **kw):
    s = new_session(lex, world, **kw)
    for w in text.split():
        s = feed_word(s, w)
    return s


# ---------------------------------------------------------------------------
# feed_word
# ---------------------------------------------------------------------------

def test_worked_example_reproduces_module_outputs(lex, london):
    s = run(lex, london, "london has a tower . every parent shows it")
    snap = snapshot(s)
    assert snap["hypotheses"] == [
        {"type": "e->t", "lf": "lam(z,show(q(forall,x,parent(x)),pro(y),z))"}]
    assert snap["context"] == "exists(w,true,and(tower(w),has(london,w)))"
    w_readings = [r for r in snap["readings"]
                  if r["coindexed"] == "show(q(forall,x,parent(x)),w,q(exists,z,true))"]
    assert [r["scoped"] for r in w_readings] == [
        "forall(x,parent(x),exists(z,true,show(x,w,z)))",
        "exists(z,true,forall(x,parent(x),show(x,w,z)))",
    ]
    assert [r["context_lfs"] for r in w_readings] == [
        ["exists(w,true,and(tower(w),and(has(london,w),"
         "forall(x,parent(x),exists(z,true,show(x,w,z))))))"],
        ["exists(w,true,exists(z,true,and(tower(w),and(has(london,w),"
         "forall(x,parent(x),show(x,w,z))))))"],
    ]


def test_table_sentence_props(lex, london):
    from incsem.lf import alpha_eq, parse_lf
    s = run(lex, london, "mary introduced john to sue")
    props = [p["lf"] for p in snapshot(s)["propositions"]]
    assert props[-1] == "intr(mary,john,sue)"
    want = parse_lf("exists(x,true,exists(y,true,intr(mary,x,y)))")
    assert any(alpha_eq(parse_lf(p), want) for p in props)


def test_snapshot_after_init(lex, london):
    snap = snapshot(new_session(lex, london))
    assert len(snap["hypotheses"]) == 1
    assert snap["propositions"] == []
    assert snap["events"] == []
    assert snap["context"] is None


def test_punch_blocks_before_vp_completes(lex, workshop):
    s = new_session(lex, workshop)
    s = feed_word(s, "put")
    s = feed_word(s, "the")
    s = feed_word(s, "punch")
    snap = snapshot(s)
    assert snap["blocked"] is True
    assert any("BLOCKED constraint=bolted" in e for e in snap["events"])
    # the blocked derivation's prefix propositions are retracted
    assert any(e.endswith("REASON plausibility") for e in snap["events"])
    assert snap["propositions"] == []
    with pytest.raises(BlockedSessionError):
        feed_word(s, "onto")


def test_blocking_is_semantic_not_syntactic(lex, workshop):
    s = new_session(lex, workshop)
    from incsem.lexicon import UnknownWordError
    with pytest.raises(UnknownWordError):
        feed_word(s, "zebra")  # syntactic problems raise, never block


def test_boundary_requires_complete_parse(lex, london):
    s = new_session(lex, london)
    s = feed_word(s, "mary")
    s = feed_word(s, "introduced")
    with pytest.raises(NoCompleteParseError):
        feed_word(s, ".")


def test_referents_in_snapshot(lex, rabbits):
    s = run(lex, rabbits, "the rabbit in the hat")
    snap = snapshot(s)
    markers = {r["marker"]: r["entities"] for r in snap["referents"]}
    assert markers["the:0"] == ["r1"]


# ---------------------------------------------------------------------------
# undo / replay determinism
# ---------------------------------------------------------------------------

def test_undo_restores_previous_snapshot_exactly(lex, london):
    s1 = run(lex, london, "every parent")
    s2 = feed_word(s1, "shows")
    assert canonical_snapshot(undo_word(s2)) == canonical_snapshot(s1)


def test_undo_nothing(lex, london):
    with pytest.raises(NothingToUndoError):
        undo_word(new_session(lex, london))


def test_replay_matches_live(lex, london):
    words = "london has a tower . every parent shows it".split()
    live = new_session(lex, london)
    for w in words:
        live = feed_word(live, w)
    replayed = replay(lex, london, words)
    assert canonical_snapshot(live) == canonical_snapshot(replayed)


def test_random_feed_undo_sequences_match_replay(lex, london):
    """Random walks of feeds and undos always equal a from-scratch replay
    of the surviving word list."""
    corpus = ["mary introduced john to sue", "london has a tower",
              "every parent shows it", "mary thinks john sleeps"]
    rng = random.Random(17)
    for _trial in range(25):
        sentence = rng.choice(corpus).split()
        s = new_session(lex, london, domain_k=1)
        fed: list[str] = []
        i = 0
        for _step in range(10):
            if fed and rng.random() < 0.35:
                s = undo_word(s)
                fed.pop()
                i -= 1
            elif i < len(sentence):
                s = feed_word(s, sentence[i])
                fed.append(sentence[i])
                i += 1
            else:
                break
        fresh = replay(lex, london, fed, domain_k=1)
        assert canonical_snapshot(s) == canonical_snapshot(fresh)


def test_preference_persists_across_words(lex, london):
    s = run(lex, london, "every man gave a book")
    # committed: forall(man) wide; extending keeps it wide
    s = feed_word(s, "to")
    s = feed_word(s, "a")
    s = feed_word(s, "child")
    for r in snapshot(s)["readings"]:
        order = r["order"]
        man = next(v for v in order if v == "x")
        book = next(v for v in order if v.startswith("w"))
        assert order.index(man) < order.index(book)
