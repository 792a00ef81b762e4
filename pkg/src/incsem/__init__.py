"""Incremental word-by-word semantic interpretation.

Maps sentence fragments, word by word, to fully scoped and
context-evaluated logical forms, filtering readings by plausibility
against a finite world model.
"""

from incsem.lf import (
    Term, Const, Var, App, Lam, QTerm, Pro, Scoped, And, Impl, TrueConst,
    TRUE, SemType, E, T, fn, parse_lf, print_lf, beta_reduce, free_vars,
    alpha_eq,
)
from incsem.lexicon import Lexicon, LexEntry, Category, load_lexicon, load_lexicon_file, lookup
from incsem.world import WorldModel, load_world, load_world_file
from incsem.parser import init_session, step_word, undo_word, hypotheses
from incsem.closure import UnscopedProp, close_existentially
from incsem.scoping import enumerate_scopings, persist_preference
from incsem.resolve import coindex_candidates, referent_set
from incsem.evaluate import evaluate, update_context, plausible
from incsem.tms import TmsDb, assert_prop, entails, retract
from incsem.session import new_session, feed_word, snapshot

__all__ = [
    "Term", "Const", "Var", "App", "Lam", "QTerm", "Pro", "Scoped", "And",
    "Impl", "TrueConst", "TRUE", "SemType", "E", "T", "fn", "parse_lf",
    "print_lf", "beta_reduce", "free_vars", "alpha_eq", "Lexicon",
    "LexEntry", "Category", "load_lexicon", "load_lexicon_file", "lookup",
    "WorldModel", "load_world", "load_world_file", "init_session",
    "step_word", "undo_word", "hypotheses", "UnscopedProp",
    "close_existentially", "enumerate_scopings", "persist_preference",
    "coindex_candidates", "referent_set", "evaluate", "update_context",
    "plausible", "TmsDb", "assert_prop", "entails", "retract",
    "new_session", "feed_word", "snapshot",
]
