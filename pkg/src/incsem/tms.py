"""Source-tagged proposition store with entailment-gated retraction.

Each asserted proposition gets a fresh source id; conclusions derived by
forward chaining carry the union of their premises' sources, so
retracting a source removes everything that depended on it.  Entailment
is decided over all finite models of domain size 1..k built from the two
formulas' own signature; when it fails, a concrete countermodel is
attached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product

from incsem.lf import (
    And, App, Const, Impl, Scoped, Term, TrueConst, alpha_eq, free_vars,
    print_lf,
)
from incsem.world import WorldModel


class TmsError(Exception):
    pass


class UnknownSourceError(TmsError):
    pass


class SignatureTooLarge(TmsError):
    pass


class IllTypedProposition(TmsError):
    pass


@dataclass(frozen=True)
class PropRecord:
    id: str
    prop: Term
    sources: frozenset[str]
    derived: bool = False


@dataclass(frozen=True)
class TmsDb:
    records: tuple[PropRecord, ...] = ()
    counter: int = 0

    def get(self, src: str) -> PropRecord | None:
        for r in self.records:
            if r.id == src:
                return r
        return None

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class AssertOutcome:
    id: str
    retained: tuple[str, ...]
    retracted: tuple[str, ...]
    entailed_prev: bool | None
    used_domain_k: int | None = None


# ---------------------------------------------------------------------------
# Finite-model entailment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntailmentResult:
    entailed: bool
    countermodel: WorldModel | None = None

    def __bool__(self) -> bool:
        return self.entailed


def _signature(*terms: Term) -> tuple[dict[str, int], list[str]]:
    preds: dict[str, int] = {}
    consts: list[str] = []

    def go(t: Term, head: bool) -> None:
        match t:
            case App(Const(name), args):
                prev = preds.get(name)
                if prev is not None and prev != len(args):
                    raise IllTypedProposition(f"'{name}' used at mixed arities")
                preds[name] = len(args)
                for a in args:
                    go(a, False)
            case Const(name):
                if head:
                    preds.setdefault(name, 0)
                elif name not in consts:
                    consts.append(name)
            case And(a, b) | Impl(a, b):
                go(a, True)
                go(b, True)
            case Scoped(_, _, r, b):
                go(r, True)
                go(b, True)
            case App(f, args):
                go(f, True)
                for a in args:
                    go(a, False)
            case _:
                from incsem.lf import children
                for c in children(t):
                    go(c, True)

    for t in terms:
        go(t, True)
    return preds, consts


def _closed(t: Term) -> bool:
    return not free_vars(t)


_ENTAILS_CACHE: dict[tuple[str, str, int, int], "EntailmentResult"] = {}


def entails(a: Term, b: Term, domain_k: int = 3, max_bits: int = 16) -> EntailmentResult:
    """True iff every model of domain size 1..domain_k over the formulas'
    own signature verifying a also verifies b."""
    from incsem.evaluate import evaluate

    if not _closed(a) or not _closed(b):
        raise IllTypedProposition("entailment inputs must be closed formulas")
    if isinstance(b, TrueConst) or alpha_eq(a, b):
        return EntailmentResult(True)

    cache_key = (print_lf(a), print_lf(b), domain_k, max_bits)
    hit = _ENTAILS_CACHE.get(cache_key)
    if hit is not None:
        return hit

    preds, consts = _signature(a, b)

    result = EntailmentResult(True)
    done = False
    for n in range(1, domain_k + 1):
        if done:
            break
        bits = sum(n ** arity for arity in preds.values())
        if bits > max_bits:
            raise SignatureTooLarge(
                f"domain size {n}: {bits} extension bits exceed budget {max_bits}")
        domain = [f"d{i}" for i in range(n)]
        pred_keys = list(preds.items())
        tuple_spaces = [
            [tuple(c) for c in product(domain, repeat=arity)]
            for _name, arity in pred_keys
        ]
        model = WorldModel(name=f"m{n}", entities=list(domain))
        for const_assign in product(domain, repeat=len(consts)):
            model.denotations = dict(zip(consts, const_assign))
            extension_choices = [range(2 ** len(space)) for space in tuple_spaces]
            for choice in product(*extension_choices):
                for (name, arity), space, mask in zip(pred_keys, tuple_spaces, choice):
                    ext = {space[i] for i in range(len(space)) if mask >> i & 1}
                    model.predicates[(name, arity)] = ext
                if evaluate(a, model, {}, strict=False) and \
                        not evaluate(b, model, {}, strict=False):
                    counter = WorldModel(
                        name=f"m{n}", entities=list(domain),
                        predicates={k: set(v) for k, v in model.predicates.items()},
                        denotations=dict(model.denotations))
                    result = EntailmentResult(False, countermodel=counter)
                    done = True
                    break
            if done:
                break
    _ENTAILS_CACHE[cache_key] = result
    return result


# ---------------------------------------------------------------------------
# Store operations
# ---------------------------------------------------------------------------

def _next_id(db: TmsDb) -> tuple[TmsDb, str]:
    n = db.counter + 1
    return replace(db, counter=n), f"u{n}"


def retract(db: TmsDb, src: str) -> TmsDb:
    """Remove every record whose source set contains src."""
    if all(src not in r.sources and r.id != src for r in db.records):
        raise UnknownSourceError(f"unknown source '{src}'")
    kept = tuple(r for r in db.records if src not in r.sources)
    return replace(db, records=kept)


def _forward_chain(db: TmsDb) -> TmsDb:
    """Close the store under modus ponens over stored implications."""
    records = list(db.records)
    changed = True
    while changed:
        changed = False
        for impl_rec in list(records):
            if not isinstance(impl_rec.prop, Impl):
                continue
            for prem_rec in list(records):
                if prem_rec.id == impl_rec.id:
                    continue
                if alpha_eq(prem_rec.prop, impl_rec.prop.ante):
                    conclusion = impl_rec.prop.cons
                    if any(alpha_eq(r.prop, conclusion) for r in records):
                        continue
                    db2, rid = _next_id(replace(db, records=tuple(records)))
                    records = list(db2.records)
                    db = db2
                    records.append(PropRecord(
                        id=rid, prop=conclusion,
                        sources=impl_rec.sources | prem_rec.sources,
                        derived=True))
                    changed = True
    return replace(db, records=tuple(records))


def assert_prop(db: TmsDb, prop: Term, prev: PropRecord | None = None,
                domain_k: int = 3) -> tuple[TmsDb, AssertOutcome]:
    """Store prop with a fresh source; if it fails to entail the previous
    proposition, retract that proposition and all its conclusions.

    Entailment checks whose signature exceeds the model budget fall back
    to smaller domain bounds (recorded in the outcome)."""
    if not _closed(prop):
        raise IllTypedProposition(
            f"proposition must be closed: free {sorted(free_vars(prop))}")

    entailed: bool | None = None
    used_k: int | None = None
    if prev is not None:
        k = domain_k
        while k >= 1:
            try:
                entailed = bool(entails(prop, prev.prop, domain_k=k))
                used_k = k
                break
            except SignatureTooLarge:
                k -= 1
        if entailed is None:
            entailed = True  # vacuous signature budget even at k=1
            used_k = 0

    retracted: tuple[str, ...] = ()
    if prev is not None and not entailed:
        doomed = set(prev.sources)
        retracted = tuple(r.id for r in db.records if r.sources & doomed)
        db = replace(db, records=tuple(
            r for r in db.records if not (r.sources & doomed)))

    db, rid = _next_id(db)
    record = PropRecord(id=rid, prop=prop, sources=frozenset({rid}))
    db = replace(db, records=db.records + (record,))
    db = _forward_chain(db)
    retained = tuple(r.id for r in db.records)
    return db, AssertOutcome(id=rid, retained=retained, retracted=retracted,
                             entailed_prev=entailed, used_domain_k=used_k)
