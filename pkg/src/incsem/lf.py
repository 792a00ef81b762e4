"""Logical forms: typed lambda terms with in-situ quantifier terms.

Terms are immutable values; every operation here is pure.  The concrete
text format is the canonical ASCII rendering used throughout (golden
traces, lexicon files, world constraints): ``lam(x,body)``,
``q(forall,x,restr)``, ``pro(y)``, ``forall(x,restr,body)``,
``and(a,b)``, ``impl(a,b)``, ``true``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator


class LfError(Exception):
    """Base error for logical-form operations."""


class LfSyntaxError(LfError):
    """Raised by parse_lf with a position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class TypeClashError(LfError):
    """An application whose argument type does not fit the function."""


# ---------------------------------------------------------------------------
# Simple types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemType:
    """Simple type over the atoms e and t.

    Either an atom (``arg is None``) or a function type arg -> result.
    """

    atom: str | None = None
    arg: "SemType | None" = None
    result: "SemType | None" = None

    def is_atom(self) -> bool:
        return self.atom is not None

    def size(self) -> int:
        if self.is_atom():
            return 1
        return 1 + self.arg.size() + self.result.size()

    def args_result(self) -> tuple[list["SemType"], "SemType"]:
        """Split T1->...->Tk->A into ([T1..Tk], A) with A an atom."""
        args = []
        ty = self
        while not ty.is_atom():
            args.append(ty.arg)
            ty = ty.result
        return args, ty

    def __str__(self) -> str:
        if self.is_atom():
            return self.atom
        left = str(self.arg)
        if not self.arg.is_atom():
            left = f"({left})"
        return f"{left}->{self.result}"


E = SemType(atom="e")
T = SemType(atom="t")


def fn(arg: SemType, result: SemType) -> SemType:
    return SemType(arg=arg, result=result)


def fn_chain(args: list[SemType], result: SemType) -> SemType:
    ty = result
    for a in reversed(args):
        ty = fn(a, ty)
    return ty


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    fun: Term
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Lam(Term):
    var: Var
    body: Term


@dataclass(frozen=True)
class QTerm(Term):
    """In-situ quantifier term: quantifier, variable, restrictor, no body."""

    quant: str
    var: Var
    restrictor: Term


@dataclass(frozen=True)
class Pro(Term):
    """Pronoun placeholder; its variable is free until coindexed."""

    var: Var


@dataclass(frozen=True)
class Scoped(Term):
    """Discharged quantifier: Quantifier(Variable, Restrictor, Body)."""

    quant: str
    var: Var
    restrictor: Term
    body: Term


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Impl(Term):
    ante: Term
    cons: Term


@dataclass(frozen=True)
class TrueConst(Term):
    pass


TRUE = TrueConst()

QUANT_NAMES = ("forall", "exists", "no", "the")


def app(f: Term, *args: Term) -> Term:
    """Build an application, flattening nested App spines."""
    if not args:
        return f
    if isinstance(f, App):
        return App(f.fun, f.args + tuple(args))
    return App(f, tuple(args))


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def children(t: Term) -> Iterator[Term]:
    match t:
        case App(fun, args):
            yield fun
            yield from args
        case Lam(_, body):
            yield body
        case QTerm(_, _, restr):
            yield restr
        case Scoped(_, _, restr, body):
            yield restr
            yield body
        case And(a, b) | Impl(a, b):
            yield a
            yield b
        case _:
            return


def free_vars(t: Term) -> set[str]:
    """Free variable names.  QTerm and Scoped bind their variable; a
    pronoun's placeholder variable counts as free until coindexed."""
    match t:
        case Var(name):
            return {name}
        case Pro(Var(name)):
            return {name}
        case Const() | TrueConst():
            return set()
        case Lam(v, body):
            return free_vars(body) - {v.name}
        case QTerm(_, v, restr):
            return free_vars(restr) - {v.name}
        case Scoped(_, v, restr, body):
            return (free_vars(restr) | free_vars(body)) - {v.name}
        case _:
            out: set[str] = set()
            for c in children(t):
                out |= free_vars(c)
            return out


def all_names(t: Term) -> set[str]:
    """Every variable or constant name occurring anywhere in t."""
    match t:
        case Var(name) | Const(name):
            return {name}
        case Pro(v):
            return {v.name}
        case Lam(v, body):
            return {v.name} | all_names(body)
        case QTerm(_, v, restr):
            return {v.name} | all_names(restr)
        case Scoped(_, v, restr, body):
            return {v.name} | all_names(restr) | all_names(body)
        case TrueConst():
            return set()
        case _:
            out: set[str] = set()
            for c in children(t):
                out |= all_names(c)
            return out


_SUFFIX_RE = re.compile(r"^(.*?)(\d+)$")


def base_name(name: str) -> str:
    m = _SUFFIX_RE.match(name)
    return m.group(1) if m and m.group(1) else name


def fresh_name(base: str, used: set[str]) -> str:
    base = base_name(base)
    if base and base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# Substitution (capture-avoiding)
# ---------------------------------------------------------------------------

def substitute(t: Term, subst: dict[str, Term]) -> Term:
    """Capture-avoiding simultaneous substitution of free variables."""
    if not subst:
        return t

    def free_in_images() -> set[str]:
        out: set[str] = set()
        for v in subst.values():
            out |= free_vars(v) | all_names(v)
        return out

    capture_risk = free_in_images()

    def go(t: Term, sub: dict[str, Term]) -> Term:
        if not sub:
            return t
        match t:
            case Var(name):
                return sub.get(name, t)
            case Pro(Var(name)):
                repl = sub.get(name)
                if repl is None:
                    return t
                # Coindexing replaces the whole placeholder.
                return repl
            case Const() | TrueConst():
                return t
            case App(fun, args):
                return app(go(fun, sub), *[go(a, sub) for a in args])
            case And(a, b):
                return And(go(a, sub), go(b, sub))
            case Impl(a, b):
                return Impl(go(a, sub), go(b, sub))
            case Lam(v, body):
                v2, body = rename_binder(v, body, sub)
                return Lam(v2, go(body, prune(sub, v2)))
            case QTerm(q, v, restr):
                v2, restr = rename_binder(v, restr, sub)
                return QTerm(q, v2, go(restr, prune(sub, v2)))
            case Scoped(q, v, restr, body):
                v2, pair = rename_binder2(v, restr, body, sub)
                restr, body = pair
                sub2 = prune(sub, v2)
                return Scoped(q, v2, go(restr, sub2), go(body, sub2))
            case _:
                raise LfError(f"substitute: unhandled term {t!r}")

    def prune(sub: dict[str, Term], v: Var) -> dict[str, Term]:
        if v.name in sub:
            sub = {k: x for k, x in sub.items() if k != v.name}
        return sub

    def rename_binder(v: Var, body: Term, sub: dict[str, Term]):
        relevant = {k for k in sub if k != v.name}
        if v.name in capture_risk and any(k in free_vars(body) for k in relevant):
            used = capture_risk | all_names(body) | set(sub)
            nv = Var(fresh_name(v.name, used))
            body = substitute(body, {v.name: nv})
            return nv, body
        return v, body

    def rename_binder2(v: Var, restr: Term, body: Term, sub: dict[str, Term]):
        relevant = {k for k in sub if k != v.name}
        occ = free_vars(restr) | free_vars(body)
        if v.name in capture_risk and any(k in occ for k in relevant):
            used = capture_risk | all_names(restr) | all_names(body) | set(sub)
            nv = Var(fresh_name(v.name, used))
            restr = substitute(restr, {v.name: nv})
            body = substitute(body, {v.name: nv})
            return nv, (restr, body)
        return v, (restr, body)

    return go(t, dict(subst))


# ---------------------------------------------------------------------------
# Beta reduction
# ---------------------------------------------------------------------------

def beta_reduce(t: Term, fuel: int = 10000) -> Term:
    """Normal-order reduction to beta-normal form.

    Terminates for simply typed input; the fuel guard turns accidental
    divergence (ill-typed input) into an error rather than a hang.
    """
    steps = 0

    def go(t: Term) -> Term:
        nonlocal steps
        while True:
            steps += 1
            if steps > fuel:
                raise LfError("beta_reduce: out of fuel (term not simply typed?)")
            match t:
                case App(Lam(v, body), args):
                    first, rest = args[0], args[1:]
                    t = app(substitute(body, {v.name: first}), *rest)
                    continue
                case App(App(f, inner), outer):
                    t = App(f, inner + outer)
                    continue
                case _:
                    break
        match t:
            case App(fun, args):
                fun2 = go(fun)
                if isinstance(fun2, Lam):
                    return go(app(fun2, *args))
                return app(fun2, *[go(a) for a in args])
            case Lam(v, body):
                return Lam(v, go(body))
            case QTerm(q, v, restr):
                return QTerm(q, v, go(restr))
            case Scoped(q, v, restr, body):
                return Scoped(q, v, go(restr), go(body))
            case And(a, b):
                return And(go(a), go(b))
            case Impl(a, b):
                return Impl(go(a), go(b))
            case _:
                return t

    return go(t)


def simplify_true(t: Term) -> Term:
    """Drop vacuous `true` conjuncts (used after closure instantiation)."""
    match t:
        case And(a, b):
            a2, b2 = simplify_true(a), simplify_true(b)
            if isinstance(a2, TrueConst):
                return b2
            if isinstance(b2, TrueConst):
                return a2
            return And(a2, b2)
        case Impl(a, b):
            return Impl(simplify_true(a), simplify_true(b))
        case Lam(v, body):
            return Lam(v, simplify_true(body))
        case QTerm(q, v, restr):
            return QTerm(q, v, simplify_true(restr))
        case Scoped(q, v, restr, body):
            return Scoped(q, v, simplify_true(restr), simplify_true(body))
        case App(f, args):
            return app(simplify_true(f), *[simplify_true(a) for a in args])
        case _:
            return t


# ---------------------------------------------------------------------------
# Alpha equivalence and canonical renaming
# ---------------------------------------------------------------------------

def alpha_eq(a: Term, b: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
        match a, b:
            case Var(na), Var(nb):
                if na in env_a or nb in env_b:
                    return env_a.get(na) == env_b.get(nb)
                return na == nb
            case Pro(va), Pro(vb):
                return go(va, vb, env_a, env_b, depth)
            case Const(na), Const(nb):
                return na == nb
            case TrueConst(), TrueConst():
                return True
            case App(fa, xs), App(fb, ys):
                if len(xs) != len(ys):
                    return False
                return go(fa, fb, env_a, env_b, depth) and all(
                    go(x, y, env_a, env_b, depth) for x, y in zip(xs, ys)
                )
            case Lam(va, ba), Lam(vb, bb):
                return go(ba, bb, {**env_a, va.name: depth}, {**env_b, vb.name: depth}, depth + 1)
            case QTerm(qa, va, ra), QTerm(qb, vb, rb):
                if qa != qb:
                    return False
                return go(ra, rb, {**env_a, va.name: depth}, {**env_b, vb.name: depth}, depth + 1)
            case Scoped(qa, va, ra, ba), Scoped(qb, vb, rb, bb):
                if qa != qb:
                    return False
                ea = {**env_a, va.name: depth}
                eb = {**env_b, vb.name: depth}
                return go(ra, rb, ea, eb, depth + 1) and go(ba, bb, ea, eb, depth + 1)
            case And(xa, ya), And(xb, yb):
                return go(xa, xb, env_a, env_b, depth) and go(ya, yb, env_a, env_b, depth)
            case Impl(xa, ya), Impl(xb, yb):
                return go(xa, xb, env_a, env_b, depth) and go(ya, yb, env_a, env_b, depth)
            case _:
                return False

    return go(a, b, {}, {}, 0)


def constant_names(t: Term) -> set[str]:
    match t:
        case Const(name):
            return {name}
        case Var() | TrueConst():
            return set()
        case Lam(_, body):
            return constant_names(body)
        case QTerm(_, _, restr):
            return constant_names(restr)
        case Scoped(_, _, restr, body):
            return constant_names(restr) | constant_names(body)
        case Pro(_):
            return set()
        case _:
            out: set[str] = set()
            for c in children(t):
                out |= constant_names(c)
            return out


def canonical_names(t: Term) -> Term:
    """Rename binders so printing is deterministic and unambiguous.

    Binder names are globally unique across the term: each binder keeps
    its own name when free, otherwise it is numbered in traversal order.
    Free variables and constants are never touched.
    """
    used = free_vars(t) | constant_names(t)

    def take(name: str) -> Var:
        fresh = name if name not in used else fresh_name(name, used)
        used.add(fresh)
        return Var(fresh)

    def go(t: Term, env: dict[str, Var]) -> Term:
        match t:
            case Var(name):
                return env.get(name, t)
            case Pro(v):
                return Pro(go(v, env))
            case Const() | TrueConst():
                return t
            case App(f, args):
                return app(go(f, env), *[go(a, env) for a in args])
            case And(a, b):
                return And(go(a, env), go(b, env))
            case Impl(a, b):
                return Impl(go(a, env), go(b, env))
            case Lam(v, body):
                nv = take(v.name)
                return Lam(nv, go(body, {**env, v.name: nv}))
            case QTerm(q, v, restr):
                nv = take(v.name)
                return QTerm(q, nv, go(restr, {**env, v.name: nv}))
            case Scoped(q, v, restr, body):
                nv = take(v.name)
                env2 = {**env, v.name: nv}
                return Scoped(q, nv, go(restr, env2), go(body, env2))
            case _:
                raise LfError(f"canonical_names: unhandled {t!r}")

    return go(t, {})


def rename_apart(t: Term, taken: set[str]) -> Term:
    """Rename bound variables of t away from the given name set."""

    def go(t: Term, env: dict[str, Var], used: set[str]) -> tuple[Term, set[str]]:
        match t:
            case Var(name):
                return env.get(name, t), used
            case Pro(v):
                v2, used = go(v, env, used)
                return Pro(v2), used
            case Const() | TrueConst():
                return t, used
            case App(f, args):
                f2, used = go(f, env, used)
                out = []
                for a in args:
                    a2, used = go(a, env, used)
                    out.append(a2)
                return app(f2, *out), used
            case And(a, b):
                a2, used = go(a, env, used)
                b2, used = go(b, env, used)
                return And(a2, b2), used
            case Impl(a, b):
                a2, used = go(a, env, used)
                b2, used = go(b, env, used)
                return Impl(a2, b2), used
            case Lam(v, body):
                nv = Var(fresh_name(v.name, used)) if v.name in used else v
                body2, used2 = go(body, {**env, v.name: nv}, used | {nv.name})
                return Lam(nv, body2), used2
            case QTerm(q, v, restr):
                nv = Var(fresh_name(v.name, used)) if v.name in used else v
                restr2, used2 = go(restr, {**env, v.name: nv}, used | {nv.name})
                return QTerm(q, nv, restr2), used2
            case Scoped(q, v, restr, body):
                nv = Var(fresh_name(v.name, used)) if v.name in used else v
                env2 = {**env, v.name: nv}
                restr2, used2 = go(restr, env2, used | {nv.name})
                body2, used3 = go(body, env2, used2)
                return Scoped(q, nv, restr2, body2), used3
            case _:
                raise LfError(f"rename_apart: unhandled {t!r}")

    out, _ = go(t, {}, set(taken) | free_vars(t))
    return out


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def print_lf(t: Term) -> str:
    """Canonical text rendering; round-trips through parse_lf up to alpha."""
    return _print(canonical_names(t))


def _print(t: Term) -> str:
    match t:
        case TrueConst():
            return "true"
        case Var(name) | Const(name):
            return name
        case Pro(v):
            return f"pro({v.name})"
        case App(f, args):
            head = _print(f)
            if not isinstance(f, (Var, Const)):
                raise LfError(f"print_lf: non-atomic application head {f!r}")
            inner = ",".join(_print(a) for a in args)
            return f"{head}({inner})"
        case Lam(v, body):
            return f"lam({v.name},{_print(body)})"
        case QTerm(q, v, restr):
            return f"q({q},{v.name},{_print(restr)})"
        case Scoped(q, v, restr, body):
            return f"{q}({v.name},{_print(restr)},{_print(body)})"
        case And(a, b):
            return f"and({_print(a)},{_print(b)})"
        case Impl(a, b):
            return f"impl({_print(a)},{_print(b)})"
        case _:
            raise LfError(f"print_lf: unhandled {t!r}")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class _Parser:
    def __init__(self, text: str, free: set[str]):
        self.text = text
        self.pos = 0
        self.free = free

    def error(self, msg: str) -> LfSyntaxError:
        return LfSyntaxError(msg, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.error(f"expected '{ch}'")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            raise self.error("expected identifier")
        self.pos = m.end()
        return m.group(0)

    def term(self, bound: frozenset[str]) -> Term:
        name = self.ident()
        if name == "true":
            return TRUE
        if self.peek() != "(":
            return self.leaf(name, bound)
        self.expect("(")
        t = self.compound(name, bound)
        self.expect(")")
        return t

    def leaf(self, name: str, bound: frozenset[str]) -> Term:
        if name in bound or name in self.free:
            return Var(name)
        return Const(name)

    def compound(self, head: str, bound: frozenset[str]) -> Term:
        if head == "lam":
            v = Var(self.ident())
            self.expect(",")
            body = self.term(bound | {v.name})
            return Lam(v, body)
        if head == "q":
            quant = self.ident()
            if quant not in QUANT_NAMES:
                raise self.error(f"unknown quantifier '{quant}'")
            self.expect(",")
            v = Var(self.ident())
            self.expect(",")
            restr = self.term(bound | {v.name})
            return QTerm(quant, v, restr)
        if head == "pro":
            v = Var(self.ident())
            return Pro(v)
        if head in QUANT_NAMES:
            v = Var(self.ident())
            self.expect(",")
            inner = bound | {v.name}
            restr = self.term(inner)
            self.expect(",")
            body = self.term(inner)
            return Scoped(head, v, restr, body)
        if head == "and":
            a = self.term(bound)
            self.expect(",")
            b = self.term(bound)
            return And(a, b)
        if head == "impl":
            a = self.term(bound)
            self.expect(",")
            b = self.term(bound)
            return Impl(a, b)
        # plain application: head(args); head may itself be a bound variable
        args = [self.term(bound)]
        while self.peek() == ",":
            self.expect(",")
            args.append(self.term(bound))
        return App(self.leaf(head, bound), tuple(args))


def parse_lf(text: str, free: set[str] | None = None) -> Term:
    """Parse canonical LF text.

    Idents bound by an enclosing lam/q/quantifier node become variables;
    everything else is a constant, except names listed in `free`, which
    parse as deliberately free variables.
    """
    p = _Parser(text, free or set())
    t = p.term(frozenset())
    p.skip_ws()
    if p.pos != len(p.text):
        raise p.error("trailing input")
    return t


# ---------------------------------------------------------------------------
# Type checking
# ---------------------------------------------------------------------------

@dataclass
class Signature:
    """Mutable constant-type registry shared across checks."""

    consts: dict[str, SemType] = field(default_factory=dict)

    def bind(self, name: str, ty: SemType) -> None:
        prev = self.consts.get(name)
        if prev is not None and prev != ty:
            raise TypeClashError(f"constant '{name}' used at {ty} but previously {prev}")
        self.consts[name] = ty


def check_type(t: Term, expected: SemType, sig: Signature,
               env: dict[str, SemType] | None = None) -> None:
    """Check t against an expected type, recording constant signatures.

    Binder types flow downward, so no unification machinery is needed:
    a Lam must meet a function type, quantifier terms are entity-typed,
    and application heads get their type fixed from their arguments.
    """
    env = env or {}

    def check(t: Term, want: SemType, env: dict[str, SemType]) -> None:
        match t:
            case TrueConst():
                if want != T:
                    raise TypeClashError(f"true has type t, wanted {want}")
            case Var(name):
                got = env.get(name)
                if got is None:
                    raise TypeClashError(f"unbound variable '{name}'")
                if got != want:
                    raise TypeClashError(f"variable '{name}': {got} wanted {want}")
            case Const(name):
                sig.bind(name, want)
            case Pro(_):
                if want != E:
                    raise TypeClashError(f"pronoun placeholder has type e, wanted {want}")
            case Lam(v, body):
                if want.is_atom():
                    raise TypeClashError(f"lambda cannot have atomic type {want}")
                check(body, want.result, {**env, v.name: want.arg})
            case QTerm(_, v, restr):
                if want != E:
                    raise TypeClashError(f"quantifier term has type e, wanted {want}")
                check(restr, T, {**env, v.name: E})
            case Scoped(_, v, restr, body):
                if want != T:
                    raise TypeClashError(f"scoped formula has type t, wanted {want}")
                inner = {**env, v.name: E}
                check(restr, T, inner)
                check(body, T, inner)
            case And(a, b) | Impl(a, b):
                if want != T:
                    raise TypeClashError(f"connective has type t, wanted {want}")
                check(a, T, env)
                check(b, T, env)
            case App(f, args):
                # arguments first: they fix the head type
                arg_tys = [infer_arg(a, env) for a in args]
                head_ty = fn_chain(arg_tys, want)
                check(f, head_ty, env)
            case _:
                raise TypeClashError(f"cannot type {t!r}")

    def infer_arg(t: Term, env: dict[str, SemType]) -> SemType:
        match t:
            case Var(name):
                got = env.get(name)
                if got is None:
                    raise TypeClashError(f"unbound variable '{name}'")
                return got
            case Const(name):
                got = sig.consts.get(name)
                if got is None:
                    # default: entity-denoting constant
                    sig.bind(name, E)
                    return E
                return got
            case QTerm() | Pro():
                check(t, E, env)
                return E
            case TrueConst() | And(_, _) | Impl(_, _) | Scoped(_, _, _, _):
                check(t, T, env)
                return T
            case App(_, _):
                check(t, T, env)
                return T
            case Lam(_, _):
                raise TypeClashError("cannot infer a lambda argument's type bottom-up")
            case _:
                raise TypeClashError(f"cannot infer type of {t!r}")

    check(t, expected, env)
