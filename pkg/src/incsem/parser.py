"""Word-by-word incremental parser.

Every hypothesis is a typed lambda expression T1 -> ... -> Tk -> t whose
pending arguments stand for material still to arrive, in arrival order.
A new word combines with each hypothesis through a small set of schemas:

  APPLY    the word is the next expected argument.
  SPLIT    generalised composition: the word's trailing arguments are
           bound by the expectation, its leading arguments are deferred
           as new pending arguments (subsumes plain function composition
           when the expectation has no arguments of its own).
  PREDICT  at an expectation of type t, an entity-denoting word is
           raised to a continuation taker: mary |-> lam(P, P(mary)).
           Words whose type ends in e (e.g. determiners) raise through
           their own arguments: every |-> lam(P, lam(k, k(<forall..>))).
  NMOD     when a noun fills an (e->t) expectation, an extra hypothesis
           anticipates a postnominal modifier: lam(m, S(m(noun))).
  SMOD     optional sentence-modifier prediction: wraps a state's final
           t in a fresh (t->t) abstraction, at most once per sentence.

States are immutable; step_word returns a new state and pushes the old
one onto the history for undo.
"""

from __future__ import annotations

from dataclasses import dataclass

from incsem.lf import (
    E, T, Lam, Pro, QTerm, SemType, Term, Var, all_names, app, beta_reduce,
    fn, fn_chain, free_vars, fresh_name, print_lf, rename_apart,
)
from incsem.lexicon import LexEntry, Lexicon


class ParserError(Exception):
    pass


class DeadEndError(ParserError):
    """No hypothesis survived a word: syntactic filtering, not semantic."""

    def __init__(self, word: str, words_so_far: list[str]):
        super().__init__(
            f"dead end at '{word}' after '{' '.join(words_so_far)}'"
        )
        self.word = word


class NothingToUndoError(ParserError):
    pass


@dataclass(frozen=True)
class Hypothesis:
    sem: Term
    ty: SemType
    trace: tuple[str, ...] = ()
    smod_used: bool = False

    def pending(self) -> list[SemType]:
        return self.ty.args_result()[0]

    def key(self) -> tuple[str, str]:
        return (str(self.ty), print_lf(self.sem))


@dataclass(frozen=True)
class ParserState:
    lexicon: Lexicon
    words: tuple[str, ...] = ()
    hyps: tuple[Hypothesis, ...] = ()
    history: tuple["ParserState", ...] = ()
    s_modifiers: bool = False


def init_session(lex: Lexicon, s_modifiers: bool = False) -> ParserState:
    """Fresh state awaiting a sentence: the identity function over t."""
    ident = Hypothesis(sem=Lam(Var("p"), Var("p")), ty=fn(T, T), trace=("init",))
    return ParserState(lexicon=lex, hyps=(ident,), s_modifiers=s_modifiers)


def qterm_vars(t: Term) -> set[str]:
    out: set[str] = set()

    def go(t: Term) -> None:
        if isinstance(t, QTerm):
            out.add(t.var.name)
        from incsem.lf import children
        for c in children(t):
            go(c)

    go(t)
    return out


def pro_vars(t: Term) -> set[str]:
    out: set[str] = set()

    def go(t: Term) -> None:
        if isinstance(t, Pro):
            out.add(t.var.name)
            return
        from incsem.lf import children
        for c in children(t):
            go(c)

    go(t)
    return out


def _freshen_pros(w: Term, avoid: set[str]) -> Term:
    """Give each pronoun placeholder a variable not already in use."""
    taken = set(avoid)
    mapping: dict[str, str] = {}

    def go(t: Term) -> Term:
        from incsem.lf import children, App, Lam, QTerm, Scoped, And, Impl
        match t:
            case Pro(v):
                if v.name in taken and v.name not in mapping:
                    mapping[v.name] = fresh_name(v.name, taken | set(mapping.values()))
                new = mapping.get(v.name, v.name)
                taken.add(new)
                return Pro(Var(new))
            case App(f, args):
                return app(go(f), *[go(a) for a in args])
            case Lam(v, b):
                return Lam(v, go(b))
            case QTerm(q, v, r):
                return QTerm(q, v, go(r))
            case Scoped(q, v, r, b):
                return Scoped(q, v, go(r), go(b))
            case And(a, b):
                return And(go(a), go(b))
            case Impl(a, b):
                return Impl(go(a), go(b))
            case _:
                return t

    return go(w)


def _lambda_names(t: Term, count: int, taken: set[str]) -> list[str]:
    """Binder names for deferred arguments, reusing the word's own
    lambda names where available."""
    names: list[str] = []
    used = set(taken)
    cur = t
    for i in range(count):
        if isinstance(cur, Lam):
            base = cur.var.name
            cur = cur.body
        else:
            base = "v"
        name = fresh_name(base, used) if (base in used or not base) else base
        names.append(name)
        used.add(name)
    return names


def _abstract(body: Term, names: list[str]) -> Term:
    for n in reversed(names):
        body = Lam(Var(n), body)
    return body


def combine(hyp: Hypothesis, entry: LexEntry, s_modifiers: bool) -> list[Hypothesis]:
    """All ways of absorbing one lexical entry into one hypothesis."""
    pend, final = hyp.ty.args_result()
    if final != T or not pend:
        return []  # saturated or malformed state: nothing can attach
    c = pend[0]
    rest_ty = fn_chain(pend[1:], T)

    s = hyp.sem
    taken = all_names(s)
    w = rename_apart(entry.sem, taken)
    w = _freshen_pros(w, free_vars(s) | pro_vars(s) | qterm_vars(s))
    u = entry.sem_type

    out: list[Hypothesis] = []

    def emit(sem: Term, ty: SemType, rule: str) -> None:
        sem = beta_reduce(sem)
        h = Hypothesis(sem=sem, ty=ty, trace=hyp.trace + (rule,), smod_used=hyp.smod_used)
        out.append(h)
        if s_modifiers and not hyp.smod_used:
            out.append(_smod_wrap(h))

    # APPLY
    if u == c:
        emit(app(s, w), rest_ty, "apply")
        # NMOD: a noun may still pick up a postnominal modifier
        if c == fn(E, T) and entry.cat.atom == "n":
            mod_ty = fn(fn(E, T), fn(E, T))
            m = Var(fresh_name("m", taken | all_names(w)))
            emit(Lam(m, app(s, app(m, w))), fn(mod_ty, rest_ty), "nmod")

    # SPLIT / COMPOSE
    c_args, c_res = c.args_result()
    u_args, u_res = u.args_result()
    m = len(c_args)
    n = len(u_args)
    if u != c and u_res == c_res and n > m and (m == 0 or u_args[n - m:] == c_args):
        defer = u_args[: n - m]
        names = _lambda_names(w, n, taken)
        d_names, a_names = names[: n - m], names[n - m:]
        inner = app(w, *[Var(x) for x in names])
        lifted = _abstract(inner, a_names) if m else inner
        body = app(s, lifted)
        emit(_abstract(body, d_names), fn_chain(defer, rest_ty), "split")

    # PREDICT (only at a t expectation, for words whose type ends in e)
    if c == T and u_res == E:
        names = _lambda_names(w, n, taken)
        k = Var(fresh_name("P", taken | set(names) | all_names(w)))
        core = app(w, *[Var(x) for x in names]) if names else w
        body = app(s, app(k, core))
        emit(_abstract(Lam(k, body), names),
             fn_chain(u_args, fn(fn(E, T), rest_ty)), "predict")

    return out


def _smod_wrap(h: Hypothesis) -> Hypothesis:
    """Reserve a slot for a sentence-final t->t modifier:
    lam(x1..xk, body)  ->  lam(x1..xk, lam(Q, Q(body)))."""
    pend, _ = h.ty.args_result()
    sem = h.sem
    binders: list[Var] = []
    for _ in pend:
        if isinstance(sem, Lam):
            binders.append(sem.var)
            sem = sem.body
        else:
            v = Var(fresh_name("v", all_names(sem) | {b.name for b in binders}))
            sem = app(sem, v)
            binders.append(v)
    q = Var(fresh_name("Q", all_names(h.sem) | {b.name for b in binders}))
    wrapped: Term = Lam(q, app(q, sem))
    for b in reversed(binders):
        wrapped = Lam(b, wrapped)
    new_ty = fn_chain(pend + [fn(T, T)], T)
    return Hypothesis(sem=beta_reduce(wrapped), ty=new_ty,
                      trace=h.trace + ("smod",), smod_used=True)


def step_word(st: ParserState, word: str) -> ParserState:
    """Absorb one word; raises on unknown words and on dead ends."""
    if not word or not word.strip():
        raise ParserError("empty word")
    if not any(ch.isalnum() for ch in word):
        return st  # punctuation tokens are ignored
    if not st.hyps:
        raise DeadEndError(word, list(st.words))
    entries = st.lexicon.lookup(word)

    new_hyps: list[Hypothesis] = []
    seen: set[tuple[str, str]] = set()
    for hyp in st.hyps:
        for entry in entries:
            for h in combine(hyp, entry, st.s_modifiers):
                key = h.key()
                if key not in seen:
                    seen.add(key)
                    new_hyps.append(h)
    if not new_hyps:
        raise DeadEndError(word, list(st.words))
    return ParserState(
        lexicon=st.lexicon,
        words=st.words + (word,),
        hyps=tuple(new_hyps),
        history=st.history + (st,),
        s_modifiers=st.s_modifiers,
    )


def undo_word(st: ParserState) -> ParserState:
    if not st.history:
        raise NothingToUndoError("nothing to undo")
    return st.history[-1]


def hypotheses(st: ParserState) -> list[tuple[SemType, Term]]:
    """Current hypotheses, ordered by type size then canonical print."""
    ranked = sorted(st.hyps, key=lambda h: (h.ty.size(), print_lf(h.sem)))
    return [(h.ty, h.sem) for h in ranked]


def ranked_hyps(st: ParserState) -> list[Hypothesis]:
    return sorted(st.hyps, key=lambda h: (h.ty.size(), print_lf(h.sem)))
