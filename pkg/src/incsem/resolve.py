"""Pronoun coindexing and word-by-word referent sets for definites.

Coindexing is the naive procedure: a pronoun may be identified with any
quantified variable or proper noun from the preceding context or the
current sentence, context candidates first (most recent outward).
Referent sets are recomputed from scratch against the world on every
call; they are never refined in place, so a set may grow back after
shrinking (the non-eliminative behaviour).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from incsem.closure import UnscopedProp
from incsem.lf import (
    And, App, Const, Impl, Lam, Pro, QTerm, Scoped, Term, Var, app,
    substitute,
)
from incsem.parser import Hypothesis
from incsem.scoping import scope_restrictor, top_level_qterms
from incsem.world import WorldModel


class UnknownMarkerError(Exception):
    pass


@dataclass(frozen=True)
class ContextVars:
    """Candidate antecedents, most recent first.

    Each entry is (name, is_constant, sortal_hint, source)."""

    entries: tuple[tuple[str, bool, str | None, str], ...] = ()

    @staticmethod
    def from_lists(variables: list[str], constants: list[str] | None = None) -> "ContextVars":
        rows = [(v, False, None, "context") for v in variables]
        rows += [(c, True, None, "context") for c in (constants or [])]
        return ContextVars(entries=tuple(rows))


def pro_occurrences(t: Term) -> list[str]:
    """Pronoun placeholder variable names in surface order."""
    out: list[str] = []

    def go(t: Term) -> None:
        match t:
            case Pro(v):
                if v.name not in out:
                    out.append(v.name)
            case App(f, args):
                go(f)
                for a in args:
                    go(a)
            case Lam(_, b):
                go(b)
            case QTerm(_, _, r):
                go(r)
            case Scoped(_, _, r, b):
                go(r)
                go(b)
            case And(a, b) | Impl(a, b):
                go(a)
                go(b)
            case _:
                return

    go(t)
    return out


def entity_constants(t: Term) -> list[str]:
    """Constants in argument position (proper nouns), surface order."""
    out: list[str] = []

    def go(t: Term) -> None:
        match t:
            case App(f, args):
                for a in args:
                    if isinstance(a, Const) and a.name not in out:
                        out.append(a.name)
                    else:
                        go(a)
            case Lam(_, b):
                go(b)
            case QTerm(_, _, r):
                go(r)
            case Scoped(_, _, r, b):
                go(r)
                go(b)
            case And(a, b) | Impl(a, b):
                go(a)
                go(b)
            case _:
                return

    go(t)
    return out


def replace_pro(t: Term, name: str, replacement: Term) -> Term:
    def go(t: Term) -> Term:
        match t:
            case Pro(v) if v.name == name:
                return replacement
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

    return go(t)


def coindex_candidates(p: UnscopedProp, ctx: ContextVars,
                       sortal: dict[str, str] | None = None) -> list[UnscopedProp]:
    """One output per total assignment of pronouns to antecedents;
    context candidates first, then sentence-internal ones.

    The baseline is the naive procedure (no filtering).  When `sortal`
    maps a pronoun variable to a predicate name, context candidates
    carrying a different sortal hint are skipped."""
    pros = pro_occurrences(p.body)
    if not pros:
        return [p]

    sentence_vars = [q.var.name for q in top_level_qterms(p.body)]
    sentence_consts = entity_constants(p.body)

    def candidates_for(pro_name: str) -> list[Term]:
        want = (sortal or {}).get(pro_name)
        out: list[Term] = []
        for name, is_const, hint, _src in ctx.entries:
            if want is not None and hint is not None and hint != want:
                continue
            out.append(Const(name) if is_const else Var(name))
        out.extend(Var(v) for v in sentence_vars)
        out.extend(Const(c) for c in sentence_consts)
        return out

    spaces = [candidates_for(name) for name in pros]
    if any(not space for space in spaces):
        return []

    out: list[UnscopedProp] = []
    for assignment in product(*spaces):
        body = p.body
        for pro_name, repl in zip(pros, assignment):
            body = replace_pro(body, pro_name, repl)
        out.append(UnscopedProp(body=body, introduced=p.introduced))
    return out


# ---------------------------------------------------------------------------
# Referent sets for definite descriptions
# ---------------------------------------------------------------------------

HOLE_PRED = "_hole"


def close_permissive(h: Hypothesis) -> Term:
    """Close a hypothesis for referent inspection.

    Entity arguments become in-situ existentials as usual, but predicate
    arguments are filled with a reserved always-true hole predicate, so
    a definite description sitting in an argument position survives with
    its restrictor intact."""
    from incsem.closure import E, ET, ETET, TT
    from incsem.lf import (
        Lam as LamNode, QTerm as QTermNode, TRUE, all_names, app,
        beta_reduce, fresh_name, simplify_true,
    )

    pending, final = h.ty.args_result()
    body = h.sem
    binders: list[Var] = []
    for _ in pending:
        if isinstance(body, LamNode):
            binders.append(body.var)
            body = body.body
        else:
            v = Var(fresh_name("v", all_names(body) | {b.name for b in binders}))
            body = app(body, v)
            binders.append(v)

    used = all_names(body)
    result = body
    for v, ty in zip(binders, pending):
        if ty == E:
            name = v.name
            value: Term = QTermNode("exists", Var(name), TRUE)
        elif ty == ET:
            x = Var(fresh_name("x", used))
            value = Lam(x, app(Const(HOLE_PRED), x))
        elif ty in (TT, ETET):
            p = Var(fresh_name("P", used))
            value = Lam(p, Var(p.name))
        else:
            return h.sem  # unsupported slot: inspect the raw term
        result = beta_reduce(app(Lam(Var(v.name), result), value))
    return simplify_true(result)


def definite_markers(h: Hypothesis | Term) -> list[tuple[int, str, Term]]:
    """Definite descriptions in a hypothesis (or bare term), traversal
    order: (marker, bound variable name, restrictor)."""
    term = close_permissive(h) if isinstance(h, Hypothesis) else h
    out: list[tuple[int, str, Term]] = []

    def go(t: Term) -> None:
        match t:
            case QTerm(q, v, r):
                if q == "the":
                    out.append((len(out), v.name, r))
                go(r)
            case App(f, args):
                go(f)
                for a in args:
                    go(a)
            case Lam(_, b):
                go(b)
            case Scoped(_, _, r, b):
                go(r)
                go(b)
            case And(a, b) | Impl(a, b):
                go(a)
                go(b)
            case _:
                return

    go(term)
    return out


def best_referent_hypothesis(hyps: list[Hypothesis]) -> Hypothesis | None:
    """The hypothesis whose definite description is richest: the NP
    reading under construction, rather than a junk parse that froze the
    restrictor early."""
    best: Hypothesis | None = None
    best_size = -1
    for h in hyps:
        for _, _, restr in definite_markers(h):
            size = _term_size(restr)
            if size > best_size:
                best, best_size = h, size
    return best


def _term_size(t: Term) -> int:
    from incsem.lf import children
    return 1 + sum(_term_size(c) for c in children(t))


def referent_set(h: Hypothesis | Term, np_marker: int, world: WorldModel) -> set[str]:
    """Entities satisfying the marked definite's restrictor as currently
    built, evaluated from scratch against the world.  Pending-argument
    variables still free in the restrictor count as "something": they
    are closed existentially for the check."""
    from incsem.evaluate import evaluate
    from incsem.lf import Scoped as ScopedNode, TRUE, free_vars

    markers = definite_markers(h)
    if np_marker >= len(markers):
        raise UnknownMarkerError(f"no definite description #{np_marker}")
    _, var, restrictor = markers[np_marker]
    scoped = scope_restrictor(restrictor)
    out: set[str] = set()
    for entity in world.entities:
        formula = substitute(scoped, {var: Const(entity)})
        for residual in sorted(free_vars(formula)):
            formula = ScopedNode("exists", Var(residual), TRUE, formula)
        try:
            if evaluate(formula, world, {}, strict=False):
                out.add(entity)
        except Exception:
            continue
    return out
