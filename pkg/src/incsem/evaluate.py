"""Dynamic-semantics evaluation, context update, plausibility.

Binding states thread through SEMANTIC structure, never left to right
through the surface string: existentials extend assignments, the
antecedent of a conditional threads into its consequent, and a
quantifier's restrictor threads into its body.  Every formula is
evaluated independently against the context and world, so re-evaluating
never depends on what was computed for an earlier prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from incsem.lf import (
    And, App, Const, Impl, Lam, Pro, QTerm, Scoped, Term, TrueConst, Var,
    free_vars, print_lf, rename_apart,
)
from incsem.scoping import ScopedReading
from incsem.world import WorldModel


class EvalError(Exception):
    pass


class UnboundVariableError(EvalError):
    pass


class UnknownPredicateError(EvalError):
    pass


class UnresolvableFreeVariable(EvalError):
    pass


Assignment = dict[str, str]


def _atom_args(args: tuple[Term, ...], g: Assignment, world: WorldModel,
               strict: bool) -> tuple[str, ...] | None:
    vals: list[str] = []
    for a in args:
        match a:
            case Var(name):
                if name not in g:
                    raise UnboundVariableError(f"unbound variable '{name}'")
                vals.append(g[name])
            case Const(name):
                if name in world.denotations:
                    vals.append(world.denotations[name])
                    continue
                if strict and not world.has_entity(name):
                    raise UnboundVariableError(f"constant '{name}' is not a world entity")
                vals.append(name)
            case _:
                raise EvalError(f"non-entity argument {a!r} in atom")
    return tuple(vals)


def evaluate(f: Term, world: WorldModel, g: Assignment | None = None,
             strict: bool = True) -> bool:
    """Truth under dynamic threading; definites evaluate existentially.

    A variable unbound at use time raises; donkey-style variables that
    the antecedent of a conditional binds dynamically are fine."""
    g = dict(g or {})
    known = world.known_preds()
    entities = list(world.entities)

    def dedup(gs: list[Assignment]) -> list[Assignment]:
        seen = set()
        out = []
        for h in gs:
            key = tuple(sorted(h.items()))
            if key not in seen:
                seen.add(key)
                out.append(h)
        return out

    def dyn(f: Term, gs: list[Assignment]) -> list[Assignment]:
        if not gs:
            return []
        match f:
            case TrueConst():
                return gs
            case App(Const(pred), args):
                if pred == "_hole":
                    return gs  # unfilled predicate slot: no information
                if pred not in known:
                    if strict:
                        raise UnknownPredicateError(f"predicate '{pred}' not declared in world")
                    return []
                if known[pred] != len(args):
                    raise UnknownPredicateError(
                        f"predicate '{pred}' used with {len(args)} args, declared {known[pred]}")
                out = []
                for h in gs:
                    tup = _atom_args(args, h, world, strict)
                    if world.holds(pred, tup):
                        out.append(h)
                return out
            case Const(name):
                # zero-ary proposition constant
                if (name, 0) in world.predicates:
                    holds = world.holds(name, ())
                    return gs if holds else []
                if strict:
                    raise UnknownPredicateError(f"proposition '{name}' not declared in world")
                return []
            case And(a, b):
                return dyn(b, dyn(a, gs))
            case Impl(a, b):
                out = []
                for h in gs:
                    if all(dyn(b, [h2]) for h2 in dyn(a, [h])):
                        out.append(h)
                return out
            case Scoped(quant, v, restr, body):
                if quant in ("exists", "the"):
                    out = []
                    for h in gs:
                        for d in entities:
                            h2 = {**h, v.name: d}
                            out.extend(dyn(body, dyn(restr, [h2])))
                    return dedup(out)
                if quant == "forall":
                    out = []
                    for h in gs:
                        ok = True
                        for d in entities:
                            h2 = {**h, v.name: d}
                            for mid in dyn(restr, [h2]):
                                if not dyn(body, [mid]):
                                    ok = False
                                    break
                            if not ok:
                                break
                        if ok:
                            out.append(h)
                    return out
                if quant == "no":
                    out = []
                    for h in gs:
                        witness = False
                        for d in entities:
                            h2 = {**h, v.name: d}
                            for mid in dyn(restr, [h2]):
                                if dyn(body, [mid]):
                                    witness = True
                                    break
                            if witness:
                                break
                        if not witness:
                            out.append(h)
                    return out
                raise EvalError(f"unknown quantifier '{quant}'")
            case Var(name):
                raise EvalError(f"variable '{name}' in propositional position")
            case Pro(v):
                raise EvalError(f"unresolved pronoun '{v.name}' in formula")
            case App(_, _):
                raise EvalError(f"non-constant predicate head in {f!r}")
            case _:
                raise EvalError(f"cannot evaluate {f!r}")

    return bool(dyn(f, [g]))


# ---------------------------------------------------------------------------
# Context update
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContextLF:
    """Context normal form: a prefix of trivial existentials over a
    right-nested conjunction of everything said so far."""

    prefix: tuple[str, ...] = ()
    conjuncts: tuple[Term, ...] = ()

    def formula(self) -> Term:
        if not self.conjuncts:
            body: Term = TrueConst()
        else:
            body = self.conjuncts[-1]
            for c in reversed(self.conjuncts[:-1]):
                body = And(c, body)
        for v in reversed(self.prefix):
            body = Scoped("exists", Var(v), TrueConst(), body)
        return body

    def binder_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.prefix)}

    def is_empty(self) -> bool:
        return not self.prefix and not self.conjuncts

    def print(self) -> str:
        return print_lf(self.formula())


def _flatten_and(t: Term) -> list[Term]:
    if isinstance(t, And):
        return _flatten_and(t.left) + _flatten_and(t.right)
    return [t]


def _hoist_existentials(t: Term) -> tuple[list[str], list[Term]]:
    """Peel the outermost chain of existentials into a trivial prefix,
    turning nontrivial restrictors into conjuncts."""
    prefix: list[str] = []
    conjuncts: list[Term] = []
    while isinstance(t, Scoped) and t.quant == "exists":
        prefix.append(t.var.name)
        if not isinstance(t.restrictor, TrueConst):
            conjuncts.extend(_flatten_and(t.restrictor))
        t = t.body
    conjuncts.extend(c for c in _flatten_and(t) if not isinstance(c, TrueConst))
    return prefix, conjuncts


def update_context(ctx: ContextLF, sentence: ScopedReading | Term) -> list[ContextLF]:
    """Insert a sentence reading into the context.

    The sentence lands inside the scope of the context existentials that
    bind its free variables; its own wide existentials are promoted into
    the context prefix, innermost.  Returns one context per admissible
    insertion (a single canonical one at desk scale)."""
    formula = sentence.formula if isinstance(sentence, ScopedReading) else sentence
    unresolved = free_vars(formula) - set(ctx.prefix)
    if unresolved:
        raise UnresolvableFreeVariable(
            f"free variables {sorted(unresolved)} name no context binder")
    formula = rename_apart(formula, set(ctx.prefix) | {v for c in ctx.conjuncts for v in free_vars(c)})
    new_prefix, new_conjuncts = _hoist_existentials(formula)
    clash = [v for v in new_prefix if v in ctx.prefix]
    if clash:
        formula = rename_apart(formula, set(ctx.prefix))
        new_prefix, new_conjuncts = _hoist_existentials(formula)
    return [ContextLF(prefix=ctx.prefix + tuple(new_prefix),
                      conjuncts=ctx.conjuncts + tuple(new_conjuncts))]


# ---------------------------------------------------------------------------
# Plausibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlausibilityVerdict:
    plausible: bool
    constraint: str | None = None

    @property
    def status(self) -> str:
        return "PLAUSIBLE" if self.plausible else "IMPLAUSIBLE"


def first_order_shadow(t: Term) -> Term:
    """Replace atoms with propositional arguments (intensional verbs like
    thinks) by `true`: the finite world model is first order, so such
    claims are treated as unconstrained."""
    def entityish(a: Term) -> bool:
        return isinstance(a, (Var, Const, QTerm, Pro))

    match t:
        case App(Const(_), args):
            if all(entityish(a) for a in args):
                return t
            return TrueConst()
        case And(a, b):
            return And(first_order_shadow(a), first_order_shadow(b))
        case Impl(a, b):
            return Impl(first_order_shadow(a), first_order_shadow(b))
        case Scoped(q, v, r, b):
            return Scoped(q, v, first_order_shadow(r), first_order_shadow(b))
        case QTerm(q, v, r):
            return QTerm(q, v, first_order_shadow(r))
        case Lam(v, b):
            return Lam(v, first_order_shadow(b))
        case _:
            return t


def _collect_preds(t: Term, out: dict[str, int], head: bool = True) -> None:
    match t:
        case App(Const(name), args):
            prev = out.get(name)
            if prev is not None and prev != len(args):
                raise UnknownPredicateError(f"predicate '{name}' used at mixed arities")
            out[name] = len(args)
            for a in args:
                _collect_preds(a, out, head=False)
        case Const(name):
            if head:  # zero-ary proposition constant; entity args are not predicates
                out.setdefault(name, 0)
        case QTerm(_, _, r):
            _collect_preds(r, out, head=True)
        case Lam(_, b):
            _collect_preds(b, out, head=True)
        case _:
            from incsem.lf import children
            for c in children(t):
                _collect_preds(c, out, head=True)


def _collect_entity_consts(t: Term, out: list[str]) -> None:
    match t:
        case App(_, args):
            for a in args:
                if isinstance(a, Const) and a.name not in out:
                    out.append(a.name)
                else:
                    _collect_entity_consts(a, out)
        case _:
            from incsem.lf import children
            for c in children(t):
                _collect_entity_consts(c, out)


def _extended_world(world: WorldModel, preds: dict[str, int],
                    extra_entities: list[str],
                    open_ext: dict[tuple[str, int], set[tuple[str, ...]]]) -> WorldModel:
    w = WorldModel(name=world.name + "+",
                   entities=list(world.entities) + [e for e in extra_entities
                                                    if e not in world.entities],
                   predicates={**{k: set(v) for k, v in world.predicates.items()},
                               **{k: set(v) for k, v in open_ext.items()}},
                   constraints=list(world.constraints))
    return w


_PLAUSIBLE_CACHE: dict[tuple[int, str, int], PlausibilityVerdict] = {}


def plausible(p: Term, world: WorldModel, max_open_bits: int = 14) -> PlausibilityVerdict:
    """IMPLAUSIBLE iff p together with the world's hard constraints is
    unsatisfiable over the world's entities.

    Predicates fixed by facts keep their closed extensions; predicates
    the world says nothing about may take any extension.  When the open
    search space is small the check is exact; otherwise extreme
    candidate extensions (maximal-consistent and empty) are tried, which
    covers monotone and negative formulas."""
    cache_key = (id(world), print_lf(p), max_open_bits)
    hit = _PLAUSIBLE_CACHE.get(cache_key)
    if hit is not None:
        return hit
    verdict = _plausible_uncached(p, world, max_open_bits)
    _PLAUSIBLE_CACHE[cache_key] = verdict
    return verdict


def _plausible_uncached(p: Term, world: WorldModel, max_open_bits: int) -> PlausibilityVerdict:
    from incsem.lf import simplify_true
    p = simplify_true(first_order_shadow(p))
    preds: dict[str, int] = {}
    _collect_preds(p, preds)
    for _, c in world.constraints:
        _collect_preds(c, preds)
    consts: list[str] = []
    _collect_entity_consts(p, consts)
    extra = [c for c in consts if not world.has_entity(c)]

    entities = list(world.entities) + extra
    if not entities:
        entities = ["d0"]
        extra = extra + ["d0"]

    known = world.known_preds()
    open_preds: list[tuple[str, int]] = []
    for name, arity in preds.items():
        if name in known:
            if known[name] != arity:
                raise UnknownPredicateError(
                    f"predicate '{name}' used with {arity} args, declared {known[name]}")
        else:
            open_preds.append((name, arity))

    def candidate_worlds():
        bits = sum(len(entities) ** a for _, a in open_preds)
        all_tuples = {
            (nm, a): [tuple(c) for c in product(entities, repeat=a)]
            for nm, a in open_preds
        }
        if bits <= max_open_bits:
            # exact: every open extension combination
            keys = list(all_tuples)
            spaces = []
            for k in keys:
                tuples = all_tuples[k]
                spaces.append([set(sub) for sub in _subsets(tuples)])
            for combo in product(*spaces) if keys else [()]:
                yield dict(zip(keys, combo))
        else:
            yield {k: set(v) for k, v in all_tuples.items()}   # maximal
            yield {k: set() for k in all_tuples}               # minimal
            yield _repaired_maximal(world, all_tuples, entities, extra)

    def satisfiable(constraints: list[tuple[str, Term]]) -> bool:
        for open_ext in candidate_worlds():
            w = _extended_world(world, preds, extra, open_ext)
            try:
                if not evaluate(p, w, {}, strict=False):
                    continue
                if all(evaluate(c, w, {}, strict=False) for _, c in constraints):
                    return True
            except EvalError:
                continue
        return False

    if satisfiable(world.constraints):
        return PlausibilityVerdict(plausible=True)
    # name the violated constraint: the one whose removal restores satisfiability
    for i, (name, _c) in enumerate(world.constraints):
        rest = world.constraints[:i] + world.constraints[i + 1:]
        if satisfiable(rest):
            return PlausibilityVerdict(plausible=False, constraint=name)
    first = world.constraints[0][0] if world.constraints else None
    return PlausibilityVerdict(plausible=False, constraint=first)


def _subsets(items: list) -> list[list]:
    out = [[]]
    for x in items:
        out += [s + [x] for s in out]
    return out


def _repaired_maximal(world: WorldModel, all_tuples, entities, extra):
    """Maximal open extensions minus tuples directly forbidden by
    no-shaped constraints."""
    ext = {k: set(v) for k, v in all_tuples.items()}
    for _name, c in world.constraints:
        if isinstance(c, Scoped) and c.quant == "no" and isinstance(c.body, App):
            body = c.body
            if not isinstance(body.fun, Const):
                continue
            key = (body.fun.name, len(body.args))
            if key not in ext:
                continue
            for d in entities:
                tup = []
                ok = True
                for a in body.args:
                    if isinstance(a, Var) and a.name == c.var.name:
                        tup.append(d)
                    elif isinstance(a, Const):
                        tup.append(a.name)
                    else:
                        ok = False
                        break
                if ok:
                    ext[key].discard(tuple(tup))
    return ext
