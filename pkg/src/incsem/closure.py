"""Existential closure: prefix meanings to judgeable propositions.

A hypothesis lam(x, lam(y, intr(mary,x,y))) closes to the proposition
intr(mary, <exists,x,true>, <exists,y,true>): each entity argument
becomes an empty existential quantifier term left in situ.  Functional
arguments cannot be quantified over in a first-order model, so they are
instantiated trivially instead: e->t slots become lam(_, true) (which
makes lam(P, P(mary)) close to the trivially true proposition, a known
simplification), and (t->t) or ((e->t)->(e->t)) modifier slots become
identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from incsem.lf import (
    E, T, TRUE, Lam, SemType, Term, Var, all_names, app, beta_reduce, fn,
    fresh_name, simplify_true,
)
from incsem.parser import Hypothesis, qterm_vars


class UnsupportedArgumentType(Exception):
    def __init__(self, ty: SemType):
        super().__init__(f"cannot close over argument of type {ty}")
        self.ty = ty


ET = fn(E, T)
TT = fn(T, T)
ETET = fn(ET, ET)

SUPPORTED = (E, ET, TT, ETET)


@dataclass(frozen=True)
class UnscopedProp:
    """Type-t formula with quantifier terms and pronouns in situ."""

    body: Term
    introduced: tuple[str, ...] = ()


def close_existentially(h: Hypothesis) -> UnscopedProp:
    from incsem.lf import QTerm

    pending, final = h.ty.args_result()
    if final != T:
        raise UnsupportedArgumentType(h.ty)
    for ty in pending:
        if ty not in SUPPORTED:
            raise UnsupportedArgumentType(ty)

    body = h.sem
    # peel the syntactic lambda prefix, eta-expanding if needed
    binders: list[Var] = []
    for ty in pending:
        if isinstance(body, Lam):
            binders.append(body.var)
            body = body.body
        else:
            v = Var(fresh_name("v", all_names(body) | {b.name for b in binders}))
            body = app(body, v)
            binders.append(v)

    used = all_names(body) | qterm_vars(body)
    introduced: list[str] = []
    result = body
    subst_pairs: list[tuple[str, Term]] = []
    for v, ty in zip(binders, pending):
        if ty == E:
            # reuse the binder name unless it collides with a quantifier
            # variable, another free variable, or a constant in the body
            from incsem.lf import constant_names, free_vars
            taken = (qterm_vars(body) | set(introduced)
                     | (free_vars(body) - {v.name}) | constant_names(body))
            name = v.name if v.name not in taken else fresh_name(v.name, used | taken)
            subst_pairs.append((v.name, QTerm("exists", Var(name), TRUE)))
            introduced.append(name)
            used.add(name)
        elif ty == ET:
            x = Var(fresh_name("x", used))
            subst_pairs.append((v.name, Lam(x, TRUE)))
        elif ty == TT:
            p = Var(fresh_name("p", used))
            subst_pairs.append((v.name, Lam(p, Var(p.name))))
        elif ty == ETET:
            p = Var(fresh_name("P", used))
            subst_pairs.append((v.name, Lam(p, Var(p.name))))

    for name, value in subst_pairs:
        result = beta_reduce(app(Lam(Var(name), result), value))
    result = simplify_true(beta_reduce(result))
    return UnscopedProp(body=result, introduced=tuple(introduced))
