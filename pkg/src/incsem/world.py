"""Finite first-order models: entities, relations, hard constraints.

World file format (line based, `#` comments):

    entity <id>
    fact <pred>(<id>{,<id>})
    constraint <name> : <LF-TEXT>

Worlds are total: tuples not listed as facts are false (closed world).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from incsem.lf import Term, parse_lf


class WorldError(Exception):
    pass


_FACT_RE = re.compile(r"^([a-zA-Z][a-zA-Z0-9_]*)\(([^)]*)\)$")


@dataclass
class WorldModel:
    name: str = "world"
    entities: list[str] = field(default_factory=list)
    # (pred name, arity) -> set of entity tuples
    predicates: dict[tuple[str, int], set[tuple[str, ...]]] = field(default_factory=dict)
    constraints: list[tuple[str, Term]] = field(default_factory=list)
    # optional constant -> entity map (used by finite-model enumeration)
    denotations: dict[str, str] = field(default_factory=dict)

    def has_entity(self, e: str) -> bool:
        return e in self._entity_set

    @property
    def _entity_set(self) -> set[str]:
        return set(self.entities)

    def known_preds(self) -> dict[str, int]:
        return {name: arity for (name, arity) in self.predicates}

    def holds(self, pred: str, args: tuple[str, ...]) -> bool:
        return args in self.predicates.get((pred, len(args)), set())

    def add_fact(self, pred: str, args: tuple[str, ...]) -> None:
        for a in args:
            if not self.has_entity(a):
                raise WorldError(f"fact {pred}{args} references undeclared entity '{a}'")
        key = (pred, len(args))
        other = [k for k in self.predicates if k[0] == pred and k[1] != len(args)]
        if other:
            raise WorldError(f"predicate '{pred}' used at conflicting arities")
        self.predicates.setdefault(key, set()).add(args)


def load_world(source: str, name: str = "world") -> WorldModel:
    world = WorldModel(name=name)
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            kind, rest = line.split(None, 1)
        except ValueError as e:
            raise WorldError(f"line {lineno}: bad line '{line}'") from e
        if kind == "entity":
            ent = rest.strip()
            if not re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", ent):
                raise WorldError(f"line {lineno}: bad entity id '{ent}'")
            if ent not in world.entities:
                world.entities.append(ent)
        elif kind == "fact":
            m = _FACT_RE.match(rest.strip())
            if not m:
                raise WorldError(f"line {lineno}: bad fact '{rest.strip()}'")
            pred = m.group(1)
            args = tuple(a.strip() for a in m.group(2).split(",") if a.strip())
            if not args:
                raise WorldError(f"line {lineno}: fact '{pred}' has no arguments")
            try:
                world.add_fact(pred, args)
            except WorldError as e:
                raise WorldError(f"line {lineno}: {e}") from e
        elif kind == "constraint":
            if ":" not in rest:
                raise WorldError(f"line {lineno}: expected 'constraint <name> : <LF>'")
            cname, lf_text = rest.split(":", 1)
            cname = cname.strip()
            try:
                formula = parse_lf(lf_text.strip())
            except Exception as e:
                raise WorldError(f"line {lineno}: unparsable constraint: {e}") from e
            world.constraints.append((cname, formula))
        else:
            raise WorldError(f"line {lineno}: unknown directive '{kind}'")
    return world


def load_world_file(path: str, name: str | None = None) -> WorldModel:
    with open(path, encoding="utf-8") as f:
        import os
        return load_world(f.read(), name or os.path.splitext(os.path.basename(path))[0])


def dump_world(world: WorldModel) -> str:
    """Inverse of load_world (reload of a saved model is identity)."""
    lines = [f"entity {e}" for e in world.entities]
    for (pred, _arity), tuples in sorted(world.predicates.items()):
        for tup in sorted(tuples):
            lines.append(f"fact {pred}({','.join(tup)})")
    from incsem.lf import print_lf
    for cname, formula in world.constraints:
        lines.append(f"constraint {cname} : {print_lf(formula)}")
    return "\n".join(lines) + "\n"
