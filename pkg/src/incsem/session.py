"""Per-word pipeline orchestration and the session state snapshot.

feed_word runs parse -> existential closure -> pronoun coindexing ->
quantifier scoping -> plausibility per reading -> assertion of the
preferred reading with entailment-gated retraction.  The sentence
boundary token "." commits the preferred reading of the completed
sentence to the discourse context.  Sessions are immutable snapshots;
undo restores the exact previous state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from incsem.closure import UnsupportedArgumentType, close_existentially
from incsem.evaluate import (
    ContextLF, EvalError, PlausibilityVerdict, plausible, update_context,
)
from incsem.lexicon import Lexicon
from incsem.lf import Scoped, Term, TRUE, Var, free_vars, print_lf
from incsem.parser import (
    NothingToUndoError, ParserState, init_session as parser_init,
    ranked_hyps, step_word as parser_step,
)
from incsem.resolve import (
    ContextVars, best_referent_hypothesis, coindex_candidates,
    definite_markers, referent_set,
)
from incsem.scoping import ScopeRecord, ScopedReading, enumerate_scopings, persist_preference
from incsem.tms import PropRecord, TmsDb, assert_prop
from incsem.world import WorldModel


class BlockedSessionError(Exception):
    """Feeding a session whose every reading was implausible."""


class NoCompleteParseError(Exception):
    """Sentence boundary reached without a type-t hypothesis."""


@dataclass(frozen=True)
class Reading:
    hyp_index: int
    unscoped: str
    coindexed: str
    scoped: Term
    order: tuple[str, ...]
    verdict: PlausibilityVerdict
    context_lfs: tuple[str, ...]
    introduced: tuple[str, ...] = ()

    @property
    def scoped_print(self) -> str:
        return print_lf(self.scoped)


@dataclass(frozen=True)
class SessionState:
    lexicon: Lexicon
    world: WorldModel
    parser: ParserState
    db: TmsDb = TmsDb()
    prefs: tuple[ScopeRecord, ...] = ()
    ctx: ContextLF = ContextLF()
    readings: tuple[Reading, ...] = ()
    events: tuple[str, ...] = ()
    words: tuple[str, ...] = ()
    last_prop: PropRecord | None = None
    sentence_props: tuple[str, ...] = ()
    blocked: bool = False
    sentence_index: int = 0
    domain_k: int = 3
    s_modifiers: bool = False
    history: tuple["SessionState", ...] = ()


def new_session(lexicon: Lexicon, world: WorldModel, domain_k: int = 3,
                s_modifiers: bool = False) -> SessionState:
    return SessionState(
        lexicon=lexicon,
        world=world,
        parser=parser_init(lexicon, s_modifiers=s_modifiers),
        domain_k=domain_k,
        s_modifiers=s_modifiers,
    )


def _context_vars(s: SessionState) -> ContextVars:
    """Context antecedents for pronoun coindexing, most recent first."""
    variables = list(reversed(s.ctx.prefix))
    consts: list[str] = []
    from incsem.resolve import entity_constants
    for c in s.ctx.conjuncts:
        for name in entity_constants(c):
            if name not in consts:
                consts.append(name)
    return ContextVars.from_lists(variables, consts)


def _close_free(t: Term, recency: list[str]) -> Term:
    """Existentially close deliberately free context variables and take
    the first-order shadow so the proposition can be asserted and judged."""
    from incsem.evaluate import first_order_shadow
    from incsem.lf import simplify_true
    out = simplify_true(first_order_shadow(t))
    for v in sorted(free_vars(out), key=lambda n: (recency.index(n) if n in recency else 999, n)):
        out = Scoped("exists", Var(v), TRUE, out)
    return out


def _node(s: SessionState) -> str:
    return f"s{s.sentence_index}"


def _compute_readings(s: SessionState, parser: ParserState) -> list[Reading]:
    ctx_vars = _context_vars(s)
    readings: list[Reading] = []
    seen: set[str] = set()
    for idx, hyp in enumerate(ranked_hyps(parser)):
        try:
            prop = close_existentially(hyp)
        except UnsupportedArgumentType:
            continue
        unscoped_print = print_lf(prop.body)
        for cand in coindex_candidates(prop, ctx_vars):
            cand_print = print_lf(cand.body)
            for reading in enumerate_scopings(cand, list(s.prefs), node=_node(s)):
                key = print_lf(reading.formula)
                if key in seen:
                    continue
                seen.add(key)
                closed = _close_free(reading.formula, list(reversed(s.ctx.prefix)))
                verdict = plausible(closed, s.world)
                try:
                    ctx_lfs = tuple(c.print() for c in update_context(s.ctx, reading))
                except EvalError:
                    ctx_lfs = ()
                readings.append(Reading(
                    hyp_index=idx,
                    unscoped=unscoped_print,
                    coindexed=cand_print,
                    scoped=reading.formula,
                    order=reading.order,
                    verdict=verdict,
                    context_lfs=ctx_lfs,
                    introduced=cand.introduced,
                ))
    return readings


def feed_word(s: SessionState, word: str) -> SessionState:
    """Run the per-word pipeline; sentence boundary '.' finalizes."""
    if s.blocked:
        raise BlockedSessionError(
            "session blocked: every reading was implausible; undo first")
    if word.strip() == ".":
        return _finalize_sentence(s)

    parser = parser_step(s.parser, word)
    readings = _compute_readings(s, parser)
    events: list[str] = []

    db = s.db
    last_prop = s.last_prop
    sentence_props = s.sentence_props
    prefs = s.prefs
    blocked = False

    preferred = next((r for r in readings if r.verdict.plausible), None)
    if readings and preferred is None:
        names = sorted({r.verdict.constraint for r in readings if r.verdict.constraint})
        blocked = True
        events.append("BLOCKED constraint=" + (",".join(names) if names else "?"))
        # blocking kills the derivation: its prefix propositions go too
        from incsem.tms import retract
        for rid in sentence_props:
            if db.get(rid) is not None:
                db = retract(db, rid)
                events.append(f"RETRACT {rid} REASON plausibility")
        sentence_props = ()
        last_prop = None
    elif preferred is not None:
        prop = _close_free(preferred.scoped, list(reversed(s.ctx.prefix)))
        db, outcome = assert_prop(db, prop, prev=last_prop, domain_k=s.domain_k)
        for rid in outcome.retracted:
            events.append(f"RETRACT {rid} REASON entailment-failure")
        events.append(f"ASSERT {outcome.id} {print_lf(prop)}")
        last_prop = db.get(outcome.id)
        sentence_props = tuple(p for p in sentence_props if db.get(p) is not None)
        sentence_props += (outcome.id,)
        # scope preferences track genuine noun-phrase quantifiers only;
        # closure-introduced placeholders are refreshed every word
        genuine = tuple(v for v in preferred.order if v not in preferred.introduced)
        if genuine:
            prefs = tuple(persist_preference(
                list(prefs),
                ScopedReading(formula=preferred.scoped, order=genuine,
                              node=_node(s))))

    return replace(
        s,
        parser=parser,
        db=db,
        prefs=prefs,
        readings=tuple(readings),
        events=s.events + tuple(events),
        words=s.words + (word,),
        last_prop=last_prop,
        sentence_props=sentence_props,
        blocked=blocked,
        history=s.history + (s,),
    )


def _finalize_sentence(s: SessionState) -> SessionState:
    complete = [h for h in ranked_hyps(s.parser) if not h.pending()]
    if not complete:
        raise NoCompleteParseError(
            f"no complete parse at sentence boundary after '{' '.join(s.parser.words)}'")
    events: list[str] = []
    ctx = s.ctx
    prefs = s.prefs
    # non-t hypotheses are discarded at the boundary: the committed
    # reading comes from the completed (type t) hypothesis
    chosen = next((r for r in s.readings
                   if r.verdict.plausible and r.hyp_index == 0), None)
    if chosen is None:
        chosen = next((r for r in s.readings if r.verdict.plausible), None)
    if chosen is not None:
        new_ctxs = update_context(ctx, ScopedReading(
            formula=chosen.scoped, order=chosen.order, node=_node(s)))
        ctx = new_ctxs[0]
        events.append(f"CONTEXT {ctx.print()}")
    return replace(
        s,
        parser=parser_init(s.lexicon, s_modifiers=s.s_modifiers),
        ctx=ctx,
        prefs=prefs,
        readings=(),
        events=s.events + tuple(events),
        words=s.words + (".",),
        sentence_index=s.sentence_index + 1,
        blocked=False,
        last_prop=None,  # prefix-entailment gating is per sentence
        sentence_props=(),
        history=s.history + (s,),
    )


def undo_word(s: SessionState) -> SessionState:
    if not s.history:
        raise NothingToUndoError("nothing to undo")
    return s.history[-1]


def replay(lexicon: Lexicon, world: WorldModel, words: list[str],
           domain_k: int = 3, s_modifiers: bool = False) -> SessionState:
    s = new_session(lexicon, world, domain_k=domain_k, s_modifiers=s_modifiers)
    for w in words:
        s = feed_word(s, w)
    return s


# ---------------------------------------------------------------------------
# Snapshot
# ---------------------------------------------------------------------------

def snapshot(s: SessionState) -> dict:
    """Serializable report of the full session state."""
    hyps = [
        {"type": str(h.ty), "lf": print_lf(h.sem)}
        for h in ranked_hyps(s.parser)
    ]
    props = [
        {"id": r.id, "lf": print_lf(r.prop), "sources": sorted(r.sources),
         "derived": r.derived}
        for r in s.db
    ]
    readings = [
        {
            "unscoped": r.unscoped,
            "coindexed": r.coindexed,
            "scoped": r.scoped_print,
            "order": list(r.order),
            "verdict": r.verdict.status,
            "constraint": r.verdict.constraint,
            "context_lfs": list(r.context_lfs),
        }
        for r in s.readings
    ]
    referents = []
    best = best_referent_hypothesis(list(s.parser.hyps))
    if best is not None:
        for marker, var, restr in definite_markers(best):
            try:
                ents = sorted(referent_set(best, marker, s.world))
            except Exception:
                continue
            referents.append({
                "marker": f"the:{marker}",
                "var": var,
                "restrictor": print_lf(restr),
                "entities": ents,
            })
    return {
        "words": list(s.words),
        "blocked": s.blocked,
        "hypotheses": hyps,
        "propositions": props,
        "readings": readings,
        "context": s.ctx.print() if not s.ctx.is_empty() else None,
        "context_vars": list(reversed(s.ctx.prefix)),
        "referents": referents,
        "events": list(s.events),
        "world": {
            "name": s.world.name,
            "entities": list(s.world.entities),
            "facts": sorted(
                f"{p}({','.join(t)})"
                for (p, _a), tuples in s.world.predicates.items()
                for t in tuples
            ),
            "constraints": [n for n, _ in s.world.constraints],
        },
    }


def canonical_snapshot(s: SessionState) -> str:
    return json.dumps(snapshot(s), separators=(",", ":"), sort_keys=True)
