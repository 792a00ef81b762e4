"""Quantifier scoping: discharge in-situ quantifier terms in all
admissible orders, persisting relative-order preferences incrementally.

Discharge orders respect the free-variable constraint (a quantifier
whose restrictor mentions another quantifier's variable must stay
inside that quantifier's scope) and any preferences recorded so far.
Quantifier terms nested inside another term's restrictor are discharged
locally within that restrictor, in surface order.
"""

from __future__ import annotations

from itertools import permutations
from dataclasses import dataclass

from incsem.closure import UnscopedProp
from incsem.lf import (
    And, App, Impl, Lam, QTerm, Scoped, Term, app, free_vars,
)


class InconsistentPreference(Exception):
    pass


@dataclass(frozen=True)
class ScopeRecord:
    """Discharge order committed at a node, outermost first."""

    node: str
    discharged: tuple[str, ...]


@dataclass(frozen=True)
class ScopedReading:
    formula: Term
    order: tuple[str, ...]
    node: str = "s0"


def top_level_qterms(t: Term) -> list[QTerm]:
    """Quantifier terms in surface order, not descending into the
    restrictors of other quantifier terms."""
    out: list[QTerm] = []

    def go(t: Term) -> None:
        match t:
            case QTerm():
                out.append(t)
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

    go(t)
    return out


def _replace_qterm_once(t: Term, target: QTerm, replacement: Term) -> Term:
    """Replace the first occurrence of an exact quantifier term."""
    done = False

    def go(t: Term) -> Term:
        nonlocal done
        if done:
            return t
        if t is target or t == target:
            done = True
            return replacement
        match t:
            case App(f, args):
                f2 = go(f)
                return app(f2, *[go(a) for a in args])
            case Lam(v, b):
                return Lam(v, go(b))
            case Scoped(q, v, r, b):
                return Scoped(q, v, go(r), go(b))
            case And(a, b):
                return And(go(a), go(b))
            case Impl(a, b):
                return Impl(go(a), go(b))
            case _:
                return t

    return go(t)


def scope_restrictor(r: Term) -> Term:
    """Discharge a restrictor's own quantifier terms at the smallest
    containing conjunct, in surface order.

    Low attachment keeps a negative quantifier from swallowing sibling
    conjuncts: the rabbit restrictor and(rabbit(v), in(v, <no,u,box(u)>))
    becomes and(rabbit(v), no(u, box(u), in(v,u))), not a vacuous
    no-wrapped conjunction."""
    match r:
        case And(a, b) | Impl(a, b):
            qa = top_level_qterms(a)
            qb = top_level_qterms(b)
            crossing = any(q.var.name in free_vars(b) for q in qa) or any(
                q.var.name in free_vars(a) for q in qb)
            if not crossing:
                kind = And if isinstance(r, And) else Impl
                return kind(scope_restrictor(a), scope_restrictor(b))
        case Scoped(q, v, restr, body):
            return Scoped(q, v, scope_restrictor(restr), scope_restrictor(body))
        case Lam(v, body):
            return Lam(v, scope_restrictor(body))
    qs = top_level_qterms(r)
    if not qs:
        return r
    body = r
    for q in qs:
        body = _replace_qterm_once(body, q, q.var)
    for q in reversed(qs):
        body = Scoped(q.quant, q.var, scope_restrictor(q.restrictor), body)
    return body


def _violates_free_var_constraint(order: list[QTerm]) -> bool:
    for i, outer in enumerate(order):
        for inner in order[i + 1:]:
            # outer discharged before inner: if outer's restrictor uses
            # inner's variable, inner must outscope outer instead
            if inner.var.name in free_vars(outer.restrictor):
                return True
    return False


def _consistent_with_prefs(order: list[QTerm], prefs: list[ScopeRecord], node: str) -> bool:
    names = [q.var.name for q in order]
    for rec in prefs:
        if rec.node != node:
            continue
        recorded = [v for v in rec.discharged if v in names]
        present = [v for v in names if v in rec.discharged]
        if present != recorded:
            return False
    return True


def enumerate_scopings(p: UnscopedProp | Term, prefs: list[ScopeRecord] | None = None,
                       node: str = "s0") -> list[ScopedReading]:
    """All discharge orders extending the recorded preferences, preferred
    (leftmost quantifier widest) first."""
    body = p.body if isinstance(p, UnscopedProp) else p
    prefs = prefs or []
    qs = top_level_qterms(body)
    if not qs:
        return [ScopedReading(formula=body, order=(), node=node)]

    # matrix: every top-level quantifier term replaced by its variable
    matrix = body
    for q in qs:
        matrix = _replace_qterm_once(matrix, q, q.var)

    readings: list[ScopedReading] = []
    index = {id(q): i for i, q in enumerate(qs)}
    for perm in permutations(qs):
        order = list(perm)
        if _violates_free_var_constraint(order):
            continue
        if not _consistent_with_prefs(order, prefs, node):
            continue
        formula = matrix
        for q in reversed(order):
            formula = Scoped(q.quant, q.var, scope_restrictor(q.restrictor), formula)
        readings.append(ScopedReading(
            formula=formula,
            order=tuple(q.var.name for q in order),
            node=node,
        ))

    # leftmost-widest first: lexicographic on surface positions
    def surface_key(r: ScopedReading) -> tuple[int, ...]:
        pos = {q.var.name: i for i, q in enumerate(qs)}
        return tuple(pos[v] for v in r.order)

    readings.sort(key=surface_key)
    return readings


def persist_preference(prefs: list[ScopeRecord], chosen: ScopedReading) -> list[ScopeRecord]:
    """Record the chosen reading's relative order for its node."""
    existing = [rec for rec in prefs if rec.node == chosen.node]
    for rec in existing:
        recorded = [v for v in rec.discharged if v in chosen.order]
        present = [v for v in chosen.order if v in rec.discharged]
        if present != recorded:
            raise InconsistentPreference(
                f"reading order {chosen.order} conflicts with recorded {rec.discharged}"
            )
    out = [rec for rec in prefs if rec.node != chosen.node]
    merged: list[str] = list(chosen.order)
    for rec in existing:
        for v in rec.discharged:
            if v not in merged:
                merged.append(v)
    out.append(ScopeRecord(node=chosen.node, discharged=tuple(merged)))
    return out
